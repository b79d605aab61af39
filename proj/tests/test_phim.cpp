#include <catch2/catch.hpp>

#include "conic/core/mappings.hpp"
#include "conic/core/simulate.hpp"
#include "conic/numerics/quadrature.hpp"
#include "conic/phim/analytics.hpp"
#include "conic/sde/engine.hpp"
#include "conic/stats.hpp"

using namespace conic;

namespace {
const sde::RngSpec kRng{5150};
}

TEST_CASE("phi_mean_std degenerate branches") {
    const phim::PhiMartingaleParams p(0.3, 0.4);
    const auto at0 = phim::phi_mean_std(p, 0.0);
    CHECK(at0.mean == Approx(p.x0).margin(1e-15));
    CHECK(at0.std == 0.0);
    const phim::PhiMartingaleParams frozen(0.3, 0.0);
    const auto later = phim::phi_mean_std(frozen, 7.0);
    CHECK(later.mean == Approx(frozen.x0).margin(1e-15));
    CHECK(later.std == 0.0);
    const phim::PhiMartingaleParams mid(0.5, 0.7);
    for (double t : {0.5, 2.0, 10.0}) CHECK(phim::phi_mean_std(mid, t).mean == 0.0);
}

TEST_CASE("phi params validation") {
    CHECK_THROWS_AS(phim::PhiMartingaleParams(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(phim::PhiMartingaleParams(1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(phim::PhiMartingaleParams(0.5, -0.1), std::domain_error);
}

TEST_CASE("phi_cdf symmetry, large-t limit, and degenerate step") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    for (double t : {0.25, 1.0, 10.0}) CHECK(phim::phi_cdf(p, t, 0.5) == Approx(0.5).margin(1e-12));
    // interior mass splits to (1 - y0) as t grows
    const phim::PhiMartingaleParams q(0.3, 0.5);
    for (double y : {0.1, 0.5, 0.9})
        CHECK(phim::phi_cdf(q, 200.0, y) == Approx(1.0 - 0.3).margin(1e-6));
    const phim::PhiMartingaleParams frozen(0.4, 0.0);
    CHECK(phim::phi_cdf(frozen, 3.0, 0.39) == 0.0);
    CHECK(phim::phi_cdf(frozen, 3.0, 0.41) == 1.0);
}

TEST_CASE("phi_cdf matches exactly sampled latent paths") {
    const phim::PhiMartingaleParams p(0.6, 0.5);
    const double t = 1.5;
    const auto latent = sde::sample_vasicek_exact(p.x0, p.eta, t, 20000, kRng);
    std::vector<double> mapped(latent.size());
    for (std::size_t i = 0; i < latent.size(); ++i) mapped[i] = num::norm_cdf(latent[i]);
    const double d =
        stats::ks_vs_cdf(std::move(mapped), [&](double y) { return phim::phi_cdf(p, t, y); });
    CHECK(d < stats::ks_critical_coefficient(0.001) / std::sqrt(20000.0));
}

TEST_CASE("phi_second_moment closed forms") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    CHECK(phim::phi_second_moment(p, 0.0) == Approx(0.25).margin(1e-12));
    CHECK(phim::phi_variance(p, 0.0) == Approx(0.0).margin(1e-12));
    // arcsine identity at y0 = 1/2: Phi2(0,0;rho) = 1/4 + asin(rho)/2pi
    const double rho = -std::expm1(-0.25);
    const double closed = 0.25 + std::asin(rho) / (2.0 * M_PI);
    CHECK(phim::phi_second_moment(p, 1.0) == Approx(closed).margin(1e-10));
    CHECK(phim::phi_second_moment(p, 1.0) == Approx(0.28550).margin(5e-6));
    // t -> infinity: Phi(x0) = y0, variance y0 (1 - y0)
    for (double y0 : {0.25, 0.5, 0.8}) {
        const phim::PhiMartingaleParams q(y0, 0.5);
        CHECK(phim::phi_second_moment(q, 200.0) == Approx(y0).margin(1e-6));
        CHECK(phim::phi_variance(q, 200.0) == Approx(y0 * (1.0 - y0)).margin(1e-6));
    }
}

TEST_CASE("phi_second_moment is nondecreasing in t") {
    const phim::PhiMartingaleParams p(0.35, 0.6);
    double prev = 0.0;
    for (double t = 0.0; t <= 20.0; t += 0.5) {
        const double m2 = phim::phi_second_moment(p, t);
        CHECK(m2 >= prev - 1e-12);
        prev = m2;
    }
}

TEST_CASE("phi variance matches Monte-Carlo at several horizons") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    for (double t : {0.5, 1.0, 5.0}) {
        const auto latent = sde::sample_vasicek_exact(p.x0, p.eta, t, 100000, kRng);
        std::vector<double> y(latent.size());
        for (std::size_t i = 0; i < latent.size(); ++i) y[i] = num::norm_cdf(latent[i]);
        const auto mv = stats::mean_var(y);
        const double m4 = stats::fourth_central_moment(y, mv.mean);
        CHECK(std::abs(mv.var - phim::phi_variance(p, t)) <= 4.0 * mv.std_error_of_var(m4));
    }
}

TEST_CASE("phi_increment_variance telescopes and decays") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    CHECK(phim::phi_increment_variance(p, 1.0, 0.0) == 0.0);
    CHECK(phim::phi_increment_variance(p, 0.0, 2.0) ==
          Approx(phim::phi_variance(p, 2.0)).margin(1e-12));
    double prev = phim::phi_increment_variance(p, 0.0, 1.0);
    for (double t = 1.0; t <= 12.0; t += 1.0) {
        const double v = phim::phi_increment_variance(p, t, 1.0);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= 0.0);
        prev = v;
    }
}

TEST_CASE("phi increment variance matches common-path sampling") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    const double t = 1.0, delta = 1.0;
    const std::size_t n = 100000;
    std::vector<double> inc(n);
    const double g = std::exp(0.5 * p.eta * p.eta * delta);
    const double sd = std::sqrt(std::expm1(p.eta * p.eta * delta));
    const auto xt = sde::sample_vasicek_exact(p.x0, p.eta, t, n, kRng);
    for (std::size_t i = 0; i < n; ++i) {
        const double xtd = xt[i] * g + sd * sde::normal_draw(kRng, i, 99);
        inc[i] = num::norm_cdf(xtd) - num::norm_cdf(xt[i]);
    }
    const auto mv = stats::mean_var(inc);
    const double m4 = stats::fourth_central_moment(inc, mv.mean);
    CHECK(std::abs(mv.var - phim::phi_increment_variance(p, t, delta)) <=
          4.0 * mv.std_error_of_var(m4));
}

TEST_CASE("phi_quantile round trips and the separating quantile") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    for (double t : {0.5, 3.0}) CHECK(phim::phi_quantile(p, t, 0.5) == Approx(0.5).margin(1e-12));
    for (double prob : {0.05, 0.25, 0.66, 0.95})
        CHECK(phim::phi_cdf(p, 2.0, phim::phi_quantile(p, 2.0, prob)) ==
              Approx(prob).margin(1e-9));
    // the (1 - y0) quantile converges to neither bound
    const phim::PhiMartingaleParams q(0.4, 0.5);
    const double sep = phim::phi_quantile(q, 200.0, 1.0 - q.y0);
    CHECK(sep > 0.05);
    CHECK(sep < 0.95);
    // while its neighbors collapse
    CHECK(phim::phi_quantile(q, 200.0, 1.0 - q.y0 - 0.05) < 1e-6);
    CHECK(phim::phi_quantile(q, 200.0, 1.0 - q.y0 + 0.05) > 1.0 - 1e-6);
}

TEST_CASE("phi_asymptotic_law and the mass split") {
    CHECK(phim::phi_asymptotic_law(phim::PhiMartingaleParams(0.75, 0.3)) == 0.75);
    const phim::PhiMartingaleParams p(0.5, 0.5);
    const double eps = 1e-3, t = 200.0;
    const double interior = phim::phi_cdf(p, t, 1.0 - eps) - phim::phi_cdf(p, t, eps);
    CHECK(1.0 - interior >= 0.999);
    CHECK(phim::phi_cdf(p, t, eps) == Approx(1.0 - p.y0).margin(1e-3));
    CHECK(1.0 - phim::phi_cdf(p, t, 1.0 - eps) == Approx(p.y0).margin(1e-3));
}

TEST_CASE("martingale property from the analytic CDF") {
    for (double y0 : {0.3, 0.5, 0.7}) {
        const phim::PhiMartingaleParams p(y0, 0.5);
        for (double t : {0.5, 2.0, 8.0}) {
            // E[Y] = int_0^1 (1 - F(y)) dy for Y in [0,1]
            const double mean = num::integrate_adaptive(
                [&](double y) { return 1.0 - phim::phi_cdf(p, t, y); }, 0.0, 1.0, 1e-11, 40);
            CHECK(mean == Approx(y0).margin(1e-8));
        }
    }
}

TEST_CASE("exp_martingale_stats quantiles and increment variance") {
    const double m0 = 1.0, eta = 0.5;
    // the median decays as e^{-eta^2 t/2} and is decreasing in t
    double prev = m0;
    for (double t = 0.25; t <= 8.0; t += 0.25) {
        const auto st = phim::exp_martingale_stats(m0, eta, 0.0, t, 0.5);
        CHECK(st.quantile == Approx(m0 * std::exp(-0.5 * eta * eta * t)).margin(1e-12));
        CHECK(st.quantile < prev);
        prev = st.quantile;
    }
    CHECK(phim::exp_martingale_stats(m0, eta, 2.0, 2.0, 0.3).increment_variance == 0.0);
    CHECK_THROWS_AS(phim::exp_martingale_stats(m0, eta, 3.0, 2.0, 0.3), std::domain_error);

    // Monte-Carlo check of Var[M_t - M_s] with exact lognormal sampling
    const double s = 1.0, t = 2.0;
    const std::size_t n = 100000;
    std::vector<double> inc(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w_s = std::sqrt(s) * sde::normal_draw(kRng, i, 0);
        const double w_t = w_s + std::sqrt(t - s) * sde::normal_draw(kRng, i, 1);
        const double ms = m0 * std::exp(-0.5 * eta * eta * s + eta * w_s);
        const double mt = m0 * std::exp(-0.5 * eta * eta * t + eta * w_t);
        inc[i] = mt - ms;
    }
    const auto mv = stats::mean_var(inc);
    const double m4 = stats::fourth_central_moment(inc, mv.mean);
    const double target = phim::exp_martingale_stats(m0, eta, s, t, 0.5).increment_variance;
    CHECK(std::abs(mv.var - target) <= 4.0 * mv.std_error_of_var(m4));
}

TEST_CASE("phi_cdf against mapped-simulation terminal values") {
    const phim::PhiMartingaleParams p(0.5, 0.5);
    const std::size_t n = 10000;
    const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 0.5; }, 0.5,
                                         sde::TimeGrid::uniform(1.0, 1000), n, kRng);
    const double d = stats::ks_vs_cdf(ps.terminal_values(),
                                      [&](double y) { return phim::phi_cdf(p, 1.0, y); });
    CHECK(d < stats::ks_critical_coefficient(0.001) / std::sqrt(static_cast<double>(n)));
}
