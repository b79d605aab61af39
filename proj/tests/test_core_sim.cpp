#include <catch2/catch.hpp>

#include "conic/core/mappings.hpp"
#include "conic/core/simulate.hpp"
#include "conic/stats.hpp"

using namespace conic;

namespace {
const sde::RngSpec kRng{9001};
}

TEST_CASE("latent_drift composes g^2/2 with the score") {
    auto g = [](double) { return 0.6; };
    auto mu_phi = core::latent_drift(core::mapping_phi(), g);
    CHECK(mu_phi(0.3, 1.7) == Approx(0.5 * 0.36 * 1.7).margin(1e-15));
    auto mu_logi = core::latent_drift(core::mapping_logistic(1.0), g);
    CHECK(mu_logi(0.0, 0.9) == Approx(0.5 * 0.36 * std::tanh(0.45)).margin(1e-12));
    auto mu_zero = core::latent_drift(core::mapping_phi(), [](double) { return 0.0; });
    CHECK(mu_zero(1.0, 2.0) == 0.0);
}

TEST_CASE("mapped_sigma recovers the driftless coefficients") {
    const double eta = 0.8;
    auto sig_logi = core::mapped_sigma(core::mapping_logistic(2.5),
                                       [&](double, double) { return eta; });
    for (double y = 0.02; y < 1.0; y += 0.07)
        CHECK(sig_logi(0.0, y) == Approx(eta * y * (1.0 - y)).margin(1e-10));

    auto sig_phi = core::mapped_sigma(core::mapping_phi(), [&](double, double) { return eta; });
    for (double y = 0.05; y < 1.0; y += 0.09)
        CHECK(sig_phi(0.0, y) ==
              Approx(eta * num::norm_pdf(num::norm_inv_cdf(y))).margin(1e-10));

    // decreasing exponential with eta(t,x) = eta x gives -eta y ln y
    auto sig_exp = core::mapped_sigma(core::mapping_exp_neg(1.0),
                                      [&](double, double x) { return eta * x; });
    for (double y = 0.05; y < 1.0; y += 0.09)
        CHECK(sig_exp(0.0, y) == Approx(-eta * y * std::log(y)).margin(1e-10));

    // endpoints vanish by convention
    CHECK(sig_logi(0.0, 0.0) == 0.0);
    CHECK(sig_logi(0.0, 1.0) == 0.0);
    CHECK(sig_phi(0.0, 1.0) == 0.0);
}

TEST_CASE("simulate_conic with zero volatility is constant") {
    const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 0.0; }, 0.4,
                                         sde::TimeGrid::uniform(1.0, 8), 4, kRng);
    for (double v : ps.values) CHECK(v == 0.4);
}

TEST_CASE("simulate_conic stays inside the image for any seed") {
    for (std::uint64_t seed : {1ull, 77ull, 31337ull}) {
        const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 0.8; }, 0.5,
                                             sde::TimeGrid::uniform(5.0, 50), 2000,
                                             sde::RngSpec{seed});
        for (double v : ps.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("simulate_conic terminal mean preserves the start value") {
    const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 0.8; }, 0.5,
                                         sde::TimeGrid::uniform(5.0, 100), 40000, kRng);
    const auto mv = stats::mean_var(ps.terminal_values());
    CHECK(std::abs(mv.mean - 0.5) <= 3.0 * mv.std_error_of_mean());
}

TEST_CASE("simulate_conic rejects starts outside the image interior") {
    CHECK_THROWS_AS(core::simulate_conic(core::mapping_phi(), [](double) { return 0.5; }, 1.0,
                                         sde::TimeGrid::uniform(1.0, 4), 1, kRng),
                    std::domain_error);
}

TEST_CASE("boundary absorption: a path that touches an endpoint stays put") {
    // aggressive volatility pushes Phi(X) onto 1.0 in double precision
    const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 2.0; }, 0.999,
                                         sde::TimeGrid::uniform(4.0, 200), 400, kRng);
    bool saw_absorption = false;
    for (std::size_t p = 0; p < ps.n_paths; ++p) {
        bool stuck = false;
        double level = 0.0;
        for (std::size_t k = 0; k < ps.grid.n_times(); ++k) {
            const double v = ps.at(p, k);
            if (stuck) {
                CHECK(v == level);
            } else if (v == 0.0 || v == 1.0) {
                stuck = true;
                level = v;
                saw_absorption = true;
            }
        }
    }
    CHECK(saw_absorption);
}

TEST_CASE("per-time sample envelopes widen with time") {
    const auto ps = core::simulate_conic(core::mapping_phi(), [](double) { return 0.8; }, 0.5,
                                         sde::TimeGrid::uniform(5.0, 20), 40000, kRng);
    double prev_min = 1.0, prev_max = 0.0;
    for (std::size_t k = 1; k < ps.grid.n_times(); ++k) {
        const auto column = ps.at_time(k);
        double mn = column[0], mx = column[0];
        for (double v : column) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        // sample envelopes, so allow statistical slack
        CHECK(mn <= prev_min + 1e-3);
        CHECK(mx >= prev_max - 1e-3);
        prev_min = std::min(prev_min, mn);
        prev_max = std::max(prev_max, mx);
    }
}

TEST_CASE("mapping consistency: logistic family is distribution-identical across c") {
    const std::size_t n = 20000;
    const sde::TimeGrid grid = sde::TimeGrid::uniform(1.0, 250);
    const auto a = core::simulate_conic(core::mapping_logistic(1.0), [](double) { return 0.5; },
                                        0.5, grid, n, sde::RngSpec{11});
    const auto b = core::simulate_conic(core::mapping_logistic(3.0), [](double) { return 0.5; },
                                        0.5, grid, n, sde::RngSpec{22});
    const double d = stats::ks_two_sample(a.terminal_values(), b.terminal_values());
    CHECK(d < stats::ks_two_sample_critical(0.001, n, n));
}

TEST_CASE("euler on the mapped coefficient agrees with the mapped latent simulation") {
    const std::size_t n = 20000;
    const sde::TimeGrid grid = sde::TimeGrid::uniform(1.0, 250);
    auto sig = core::mapped_sigma(core::mapping_logistic(1.0), [](double, double) { return 0.5; });
    const auto direct = sde::euler_driftless(sig, 0.5, grid, n, sde::RngSpec{33});
    const auto mapped = core::simulate_conic(core::mapping_logistic(1.0),
                                             [](double) { return 0.5; }, 0.5, grid, n,
                                             sde::RngSpec{44});
    const double d = stats::ks_two_sample(direct.terminal_values(), mapped.terminal_values());
    CHECK(d < stats::ks_two_sample_critical(0.001, n, n));
}

TEST_CASE("doleans_phi constants and martingale mean") {
    const auto frozen = core::doleans_phi([](double) { return 0.0; }, 0.3,
                                          sde::TimeGrid::uniform(1.0, 8), 3, kRng);
    for (double v : frozen.values) CHECK(v == Approx(num::norm_cdf(0.3)).margin(1e-15));

    const double eta = 0.5;
    auto decaying = [&](double t) { return eta * std::exp(-0.5 * eta * eta * t); };
    const auto ps = core::doleans_phi(decaying, num::norm_inv_cdf(0.6),
                                      sde::TimeGrid::uniform(30.0, 300), 40000, kRng);
    for (double v : ps.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const auto mv = stats::mean_var(ps.terminal_values());
    CHECK(std::abs(mv.mean - 0.6) <= 3.0 * mv.std_error_of_mean());
}

TEST_CASE("doleans_phi refuses grids that cross unit quadratic variation") {
    const double eta = 0.5;  // [Z]_t = eta^2 t reaches 1 at t = 4
    try {
        core::doleans_phi([&](double) { return eta; }, 0.0, sde::TimeGrid::uniform(8.0, 64), 1,
                          kRng);
        FAIL("expected a horizon error");
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("tau") != std::string::npos);
        CHECK(msg.find("4.0") != std::string::npos);
    }
    // constant volatility is fine strictly inside the horizon
    CHECK_NOTHROW(core::doleans_phi([&](double) { return eta; }, 0.0,
                                    sde::TimeGrid::uniform(3.9, 64), 1, kRng));
}

TEST_CASE("verify_driftless accepts the admissible families and flags a wrong drift") {
    std::vector<double> xs;
    for (double x = -3.0; x <= 3.0; x += 0.2) xs.push_back(x);
    auto g = [](double) { return 0.7; };

    CHECK(core::verify_driftless(core::mapping_phi(), g, xs) <= 1e-8);

    std::vector<double> xs_neg;
    for (double x = -6.0; x <= -0.2; x += 0.2) xs_neg.push_back(x);
    CHECK(core::verify_driftless(core::mapping_exp_neg(1.0), g, xs_neg) <= 1e-8);

    core::Mapping affine;
    affine.F = [](double x) { return 0.3 * x + 0.1; };
    affine.f = [](double) { return 0.3; };
    affine.psi = [](double) { return 0.0; };
    affine.inverse = [](double y) { return (y - 0.1) / 0.3; };
    affine.image = {-kInf, kInf};
    CHECK(core::verify_driftless(affine, g, xs) <= 1e-8);

    // negative control: zero drift leaves the residual g^2/2 |x| phi(x)
    const double res = core::verify_driftless(
        core::mapping_phi(), g, {1.0, -2.0},
        std::function<double(double, double)>([](double, double) { return 0.0; }));
    CHECK(res >= 0.5 * 0.49 * 1.0 * num::norm_pdf(1.0) * 0.99);
}
