#include <catch2/catch.hpp>

#include "conic/numerics/quadrature.hpp"
#include "conic/stats.hpp"
#include "conic/yor/hartman_watson.hpp"
#include "conic/yor/verhulst.hpp"

using namespace conic;

namespace {
const sde::RngSpec kRng{321};
}

TEST_CASE("psi integrand vanishes at zero and the integral is finite") {
    CHECK(yor::psi_integrand(1.0, 1.0, 0.0) == 0.0);
    CHECK(yor::psi_integrand(2.0, 0.5, -1.0) == 0.0);
    const double v = yor::psi_integral(1.0, 1.0);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}

TEST_CASE("psi_integral is consistent under tolerance refinement") {
    const double coarse = yor::psi_integral(1.0, 1.0, 1e-8);
    const double fine = yor::psi_integral(1.0, 1.0, 1e-12);
    const double finer = yor::psi_integral(1.0, 1.0, 1e-14);
    CHECK(std::abs(coarse - fine) <= 1e-8);
    CHECK(std::abs(fine - finer) <= 1e-10);
    CHECK(coarse > 0.0);
}

TEST_CASE("psi_integral decreases in r once the first lobe dominates") {
    // pointwise e^{-r cosh y} domination shrinks every lobe, but because the
    // integrand oscillates the integral itself is only monotone once the
    // positive first lobe carries the value (larger r); at small r the
    // suppressed negative lobes can raise it.
    const double b = yor::psi_integral(2.0, 1.0, 1e-12);
    const double c = yor::psi_integral(4.0, 1.0, 1e-12);
    const double d = yor::psi_integral(8.0, 1.0, 1e-12);
    CHECK(b > c);
    CHECK(c > d);
    CHECK(d > 0.0);
    CHECK_THROWS_AS(yor::psi_integral(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(yor::psi_integral(1.0, 0.0), std::domain_error);
}

TEST_CASE("theta_density composes the quoted pieces at moderate arguments") {
    const double r = 1.0, u = 1.0;
    const double psi = yor::psi_integral(r, u, 1e-13);
    const double composed =
        r / std::sqrt(2.0 * u * M_PI * M_PI * M_PI) * std::exp(M_PI * M_PI / (2.0 * u)) * psi;
    CHECK(yor::theta_density(r, u) == Approx(composed).epsilon(1e-6));
}

TEST_CASE("theta_density positive on a parameter grid") {
    for (double r : {0.5, 1.0, 2.0})
        for (double u : {0.5, 1.0, 2.0}) CHECK(yor::theta_density(r, u) > 0.0);
}

TEST_CASE("theta high-precision route agrees with the double route") {
    for (double u : {0.55, 0.4, 0.3}) {
        for (double r : {0.5, 1.0, 3.0}) {
            const double via_double = yor::detail::log_psi(r, u);
            const auto via_big = yor::detail::log_psi_midpoint_big(r, u, 8, 30);
            REQUIRE(via_big.resolved);
            CHECK(via_double == Approx(via_big.log_psi).margin(1e-8));
        }
    }
}

TEST_CASE("theta laplace transform matches the modified bessel function") {
    const double r = 1.0;
    for (double lam : {1.0, 2.0}) {
        auto integrand = [&](double t) {
            return std::exp(-0.5 * lam * lam * t) * yor::theta_density(r, t);
        };
        const double val = num::integrate_adaptive(integrand, 0.02, 2.0, 1e-9, 24) +
                           num::integrate_adaptive(integrand, 2.0, 12.0, 1e-9, 24) +
                           num::integrate_adaptive(integrand, 12.0, 120.0, 1e-9, 24);
        CHECK(val == Approx(std::cyl_bessel_i(lam, r)).epsilon(2e-6));
    }
}

TEST_CASE("conditional kernel normalizes over its argument") {
    auto f = [](double z) { return yor::conditional_density_A(1.0, 0.0, z); };
    const double mass = num::integrate_adaptive(f, 1e-6, 80.0, 1e-8, 30);
    CHECK(mass == Approx(1.0).margin(1e-2));
    CHECK_THROWS_AS(yor::conditional_density_A(1.0, 0.0, -0.5), std::domain_error);
}

TEST_CASE("conditional kernel mean matches the bridge oracle") {
    // E[A_1 | W_1 = 0] = int_0^1 exp(2 s(1-s)) ds by the bridge representation
    auto g = [](double s) { return std::exp(2.0 * s * (1.0 - s)); };
    const double oracle = num::integrate_adaptive(g, 0.0, 1.0, 1e-12, 30);
    auto fm = [](double z) { return z * yor::conditional_density_A(1.0, 0.0, z); };
    const double mean = num::integrate_adaptive(fm, 1e-6, 120.0, 1e-8, 30);
    CHECK(mean == Approx(oracle).epsilon(2e-4));
}

TEST_CASE("conditional kernel mean matches conditioned Monte Carlo") {
    // simulate A_1 given |W_1| < 0.01 by brute force
    const std::size_t n_paths = 120000, n_steps = 400;
    const double dt = 1.0 / n_steps;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t p = 0; p < n_paths; ++p) {
        double w = 0.0, a = std::exp(0.0) * 0.0;
        double prev = 1.0;  // e^{2*0}
        for (std::size_t k = 0; k < n_steps; ++k) {
            w += std::sqrt(dt) * sde::normal_draw(kRng, p, k);
            const double cur = std::exp(2.0 * w);
            a += 0.5 * (prev + cur) * dt;
            prev = cur;
        }
        if (std::abs(w) < 0.01) {
            sum += a;
            ++hits;
        }
    }
    REQUIRE(hits > 300);
    const double mc_mean = sum / static_cast<double>(hits);
    auto fm = [](double z) { return z * yor::conditional_density_A(1.0, 0.0, z); };
    const double analytic = num::integrate_adaptive(fm, 1e-6, 120.0, 1e-8, 30);
    CHECK(analytic == Approx(mc_mean).epsilon(0.05));
}

TEST_CASE("verhulst density is nonnegative and refinement-stable") {
    const yor::VerhulstParams p(1.0, 0.3, 1.0);
    for (double z : {0.8, 1.0, 1.2}) {
        const double f = yor::verhulst_density(p, 0.25, z);
        CHECK(f >= 0.0);
        const double f2 = yor::verhulst_density(p, 0.25, z, 2);
        CHECK(f == Approx(f2).epsilon(1e-6));
    }
    CHECK_THROWS_AS(yor::verhulst_density(p, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(yor::verhulst_density(p, 0.25, -1.0), std::domain_error);
}

TEST_CASE("verhulst density tracks the oracle histogram") {
    const yor::VerhulstParams p(1.0, 0.3, 1.0);
    const auto mc = yor::mc_verhulst_oracle(p, 0.25, 150000, 200, kRng,
                                            stats::linspace(0.7, 1.4, 8));
    int agree = 0;
    for (std::size_t k = 0; k < 7; ++k) {
        const double fa = yor::verhulst_bin_average(p, 0.25, mc.histogram.edges[k],
                                                    mc.histogram.edges[k + 1]);
        if (std::abs(fa - mc.histogram.density(k)) <= 3.5 * mc.histogram.density_se(k)) ++agree;
    }
    CHECK(agree >= 6);
}

TEST_CASE("verhulst mode sits near x0 at small times (oracle histogram)") {
    const yor::VerhulstParams p(1.0, 0.3, 1.0);
    const auto mc = yor::mc_verhulst_oracle(p, 0.05, 200000, 100, kRng,
                                            stats::linspace(0.7, 1.3, 61));
    std::size_t best = 0;
    for (std::size_t k = 1; k < mc.histogram.counts.size(); ++k)
        if (mc.histogram.counts[k] > mc.histogram.counts[best]) best = k;
    const double mode = 0.5 * (mc.histogram.edges[best] + mc.histogram.edges[best + 1]);
    CHECK(std::abs(mode - p.x0) <= 0.1 * p.x0);
}

TEST_CASE("mc oracle: lognormal limit as lambda -> 0") {
    const yor::VerhulstParams p(1.0, 0.3, 1e-9);
    const double t = 0.5;
    const auto mc = yor::mc_verhulst_oracle(p, t, 20000, 200, kRng,
                                            stats::linspace(0.3, 3.0, 11), true);
    CHECK(mc.explosion_fraction == 0.0);
    const double d = stats::ks_vs_cdf(mc.survivors, [&](double x) {
        // Theta_t is lognormal with drift -eta^2 t/2 and variance eta^2 t
        return num::norm_cdf((std::log(x) + 0.5 * 0.09 * t) / (0.3 * std::sqrt(t)));
    });
    CHECK(d < stats::ks_critical_coefficient(0.001) / std::sqrt(20000.0));
}

TEST_CASE("mc oracle: explosion fraction is nondecreasing in the horizon") {
    const yor::VerhulstParams p(1.0, 1.2, 2.0);  // aggressive parameters explode often
    const auto short_run = yor::mc_verhulst_oracle(p, 1.0, 4000, 250, kRng,
                                                   stats::linspace(0.0, 10.0, 5));
    const auto long_run = yor::mc_verhulst_oracle(p, 3.0, 4000, 750, kRng,
                                                  stats::linspace(0.0, 10.0, 5));
    CHECK(short_run.explosion_fraction > 0.0);
    CHECK(long_run.explosion_fraction >= short_run.explosion_fraction);
}

TEST_CASE("mapped exponential martingale absorbs exactly the exploded paths") {
    const yor::VerhulstParams p(1.0, 1.2, 2.0);
    const double t = 2.0;
    const auto mc = yor::mc_verhulst_oracle(p, t, 4000, 500, kRng,
                                            stats::linspace(0.0, 50.0, 5), true);
    // Y = e^{-lambda X}: survivors keep Y > 0, exploded paths are absorbed at 0
    std::size_t absorbed = mc.n_paths - mc.survivors.size();
    CHECK(static_cast<double>(absorbed) / static_cast<double>(mc.n_paths) ==
          Approx(mc.explosion_fraction).margin(1e-12));
    for (double x : mc.survivors) CHECK(std::exp(-p.lambda * x) > 0.0);
}
