#pragma once

// The runnable invariant suite behind `conic_cli verify`: martingale checks,
// distribution comparisons, driftless residuals, quadrature refinement and
// the density oracle, each reporting its measured statistic and tolerance.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conic/core/mappings.hpp"
#include "conic/core/ode_mapping.hpp"
#include "conic/core/simulate.hpp"
#include "conic/io.hpp"
#include "conic/credit/bivariate.hpp"
#include "conic/credit/conditional.hpp"
#include "conic/credit/surface.hpp"
#include "conic/numerics/quadrature.hpp"
#include "conic/phim/analytics.hpp"
#include "conic/stats.hpp"
#include "conic/yor/verhulst.hpp"

namespace conic::app {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240915;
    std::size_t paths = 20000;   // scale knob for the Monte-Carlo checks
    std::size_t steps = 500;
    bool include_density_oracle = true;
};

namespace detail {

inline CheckResult check_stat(const std::string& name, double measured, double tolerance,
                              bool pass, std::string detail = "") {
    return {name, pass, measured, tolerance, std::move(detail)};
}

inline CheckResult martingale_check(const std::string& name, const std::vector<double>& terminal,
                                    double target, double n_se = 4.0) {
    const auto mv = stats::mean_var(terminal);
    const double se = mv.std_error_of_mean();
    const double err = std::abs(mv.mean - target);
    return check_stat(name, err, n_se * se, err <= n_se * se,
                      "mean=" + io::fmt17(mv.mean) + " target=" + io::fmt17(target));
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const sde::RngSpec rng{opt.seed};

    // --- quadrature: normal moments through order 30, n=16 vs n=64 ---
    {
        const auto gh = num::gauss_hermite(16);
        double worst = 0.0;
        double fact = 1.0;  // (2k-1)!!
        for (int k = 1; 2 * k <= 30; ++k) {
            fact *= 2.0 * k - 1.0;
            double moment = 0.0;
            for (int i = 0; i < gh.order; ++i)
                moment += gh.weights[i] * std::pow(gh.nodes[i], 2 * k);
            worst = std::max(worst, std::abs(moment / fact - 1.0));
        }
        out.push_back(detail::check_stat("gauss_hermite_moments_rel", worst, 1e-9, worst <= 1e-9));

        const credit::SurvivalCurve fig3({{1, 0.05}, {3, 0.06}, {5, 0.08}, {7, 0.085}, {10, 0.065}});
        const credit::SurvivalSurfaceParams sp(fig3, 0.25);
        double worst_q = 0.0;
        for (double T : {2.0, 5.0, 9.0}) {
            const double a = credit::expected_conditional_survival(sp, 1.0, T, 16);
            const double b = credit::expected_conditional_survival(sp, 1.0, T, 64);
            worst_q = std::max(worst_q, std::abs(a - b));
        }
        out.push_back(
            detail::check_stat("conditional_quadrature_16_vs_64", worst_q, 1e-6, worst_q <= 1e-6));
    }

    // --- martingale suite + boundedness ---
    std::size_t out_of_range = 0;
    {
        const core::Mapping phi = core::mapping_phi();
        auto g = [](double) { return 0.8; };
        const auto ps = core::simulate_conic(phi, g, 0.5, sde::TimeGrid::uniform(5.0, 100),
                                             opt.paths, rng);
        for (double v : ps.values)
            if (v < 0.0 || v > 1.0) ++out_of_range;
        out.push_back(detail::martingale_check("martingale_phi_exact", ps.terminal_values(), 0.5));
    }
    {
        const core::Mapping logistic = core::mapping_logistic(1.0);
        auto sig = core::mapped_sigma(logistic, [](double, double) { return 0.5; });
        const auto ps = sde::euler_driftless(sig, 0.5, sde::TimeGrid::uniform(1.0, opt.steps),
                                             opt.paths, rng);
        for (double v : ps.values)
            if (v < 0.0 || v > 1.0) ++out_of_range;
        out.push_back(
            detail::martingale_check("martingale_logistic_euler", ps.terminal_values(), 0.5));
    }
    {
        const core::Mapping th = core::mapping_tanh_half();
        auto sig = core::mapped_sigma(th, [](double, double) { return 0.5; });
        const auto ps = sde::euler_driftless(sig, 0.2, sde::TimeGrid::uniform(1.0, opt.steps),
                                             opt.paths, rng);
        for (double v : ps.values)
            if (v < -1.0 || v > 1.0) ++out_of_range;
        out.push_back(detail::martingale_check("martingale_tanh_euler", ps.terminal_values(), 0.2));
    }
    {
        auto sig_t = [](double t) { return 0.5 * std::exp(-0.125 * t); };
        const auto ps =
            core::doleans_phi(sig_t, num::norm_inv_cdf(0.6), sde::TimeGrid::uniform(5.0, 100),
                              opt.paths, rng);
        for (double v : ps.values)
            if (v < 0.0 || v > 1.0) ++out_of_range;
        out.push_back(detail::martingale_check("martingale_doleans_phi", ps.terminal_values(), 0.6));
    }
    {
        const credit::SurvivalCurve flat8 = credit::SurvivalCurve::flat(0.08);
        const credit::SurvivalSurfaceParams sp(flat8, 0.15);
        const auto family = credit::simulate_surface(sp, {5.0}, sde::TimeGrid::uniform(5.0, 100),
                                                     opt.paths, rng);
        for (double v : family[0].values)
            if (v < 0.0 || v > 1.0) ++out_of_range;
        out.push_back(detail::martingale_check("martingale_surface_S5",
                                               family[0].terminal_values(),
                                               flat8.survival(5.0)));
    }
    const credit::BivariateParams biv(credit::SurvivalCurve::flat(0.08),
                                      credit::SurvivalCurve::flat(0.125), 0.15, 0.25, 0.8);
    {
        const auto paths = credit::simulate_bivariate(biv, 5.0, 5.0,
                                                      sde::TimeGrid::uniform(5.0, 100),
                                                      opt.paths, rng);
        for (double v : paths.G.values)
            if (v < 0.0 || v > 1.0) ++out_of_range;
        const double g0 = paths.G.at(0, 0);
        out.push_back(detail::martingale_check("martingale_bivariate_G", paths.G.terminal_values(),
                                               g0, 4.0));

        // negative control: r = rho must fail the drift-kill property; a wide
        // volatility gap makes the spurious drift plainly visible
        const credit::BivariateParams gap(credit::SurvivalCurve::flat(0.08),
                                          credit::SurvivalCurve::flat(0.125), 0.1, 0.5, 0.9);
        const auto bad = credit::simulate_bivariate(gap, 5.0, 5.0,
                                                    sde::TimeGrid::uniform(5.0, 100), opt.paths,
                                                    rng, gap.rho);
        const auto mv = stats::mean_var(bad.G.terminal_values());
        const double drift = std::abs(mv.mean - bad.G.at(0, 0));
        const double se = mv.std_error_of_mean();
        out.push_back(detail::check_stat("drift_kill_negative_control_flagged", drift, 3.0 * se,
                                         drift > 3.0 * se,
                                         "corrupted copula correlation must show drift"));
    }
    out.push_back(detail::check_stat("boundedness_zero_out_of_range",
                                     static_cast<double>(out_of_range), 0.0, out_of_range == 0));

    // --- scheme equivalence: Euler on the mapped SDE vs mapped latent ---
    {
        const core::Mapping logistic = core::mapping_logistic(1.0);
        auto sig = core::mapped_sigma(logistic, [](double, double) { return 0.5; });
        const std::size_t n = opt.paths / 2;
        const auto direct = sde::euler_driftless(sig, 0.5, sde::TimeGrid::uniform(1.0, opt.steps),
                                                 n, sde::RngSpec{opt.seed + 1});
        const auto mapped = core::simulate_conic(logistic, [](double) { return 0.5; }, 0.5,
                                                 sde::TimeGrid::uniform(1.0, opt.steps), n,
                                                 sde::RngSpec{opt.seed + 2});
        const double d = stats::ks_two_sample(direct.terminal_values(), mapped.terminal_values());
        const double crit = stats::ks_two_sample_critical(0.001, n, n);
        out.push_back(detail::check_stat("scheme_equivalence_ks", d, crit, d < crit));
    }

    // --- driftless residuals ---
    {
        std::vector<double> xs;
        for (double x = -3.0; x <= 3.0; x += 0.25) xs.push_back(x);
        auto g = [](double) { return 0.7; };
        const double r_phi = core::verify_driftless(core::mapping_phi(), g, xs);
        std::vector<double> xs_neg;
        for (double x = -6.0; x <= -0.5; x += 0.25) xs_neg.push_back(x);
        const double r_exp = core::verify_driftless(core::mapping_exp_neg(1.0), g, xs_neg);
        core::Mapping affine;
        affine.F = [](double x) { return x; };
        affine.f = [](double) { return 1.0; };
        affine.psi = [](double) { return 0.0; };
        affine.inverse = [](double y) { return y; };
        affine.image = {-kInf, kInf};
        const double r_aff = core::verify_driftless(affine, g, xs);
        const double worst = std::max({r_phi, r_exp, r_aff});
        out.push_back(detail::check_stat("driftless_residual_families", worst, 1e-8, worst <= 1e-8));

        const double r_bad = core::verify_driftless(
            core::mapping_phi(), g, {1.0, 2.0},
            std::function<double(double, double)>([](double, double) { return 0.0; }));
        const double floor = 0.5 * 0.7 * 0.7 * 1.0 * num::norm_pdf(1.0) * 0.9;
        out.push_back(detail::check_stat("driftless_negative_control", r_bad, floor,
                                         r_bad >= floor, "zero drift must leave a residual"));
    }

    // --- conditional-survival CDF vs sampled conditional survival ---
    {
        const credit::SurvivalCurve fig3({{1, 0.05}, {3, 0.06}, {5, 0.08}, {7, 0.085}, {10, 0.065}});
        const credit::SurvivalSurfaceParams sp(fig3, 0.25);
        const double t = 1.0, T = 5.0;
        std::vector<double> q(opt.paths);
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = credit::conditional_survival(sp, t, T,
                                                sde::normal_draw(sde::RngSpec{opt.seed + 3}, i, 0));
        const double d = stats::ks_vs_cdf(
            std::move(q), [&](double x) { return credit::q_cdf(sp, t, T, x); });
        const double tol = 2.2 / std::sqrt(static_cast<double>(opt.paths));
        out.push_back(detail::check_stat("q_cdf_vs_sampled_ks", d, tol, d < tol));
    }

    // --- azema SDE: euler tracks the exact factor path at strong order 1/2 ---
    {
        const credit::SurvivalSurfaceParams sp(credit::SurvivalCurve::flat(0.08), 0.15);
        const auto coarse = credit::azema_euler_vs_exact(sp, 5.0, 128, 256, rng);
        const auto fine = credit::azema_euler_vs_exact(sp, 5.0, 512, 256, rng);
        const double ratio = coarse.mean_sup_error / fine.mean_sup_error;
        out.push_back(detail::check_stat("azema_euler_refinement_ratio", ratio, 1.6, ratio >= 1.6,
                                         "sup error must shrink by >= 1.6 when dt is quartered"));
    }

    // --- density oracle (appendix law) ---
    if (opt.include_density_oracle) {
        auto f = [&](double zz) { return yor::conditional_density_A(1.0, 0.0, zz); };
        const double mass = num::integrate_adaptive(f, 1e-6, 80.0, 1e-8, 30);
        out.push_back(detail::check_stat("yor_kernel_normalization", std::abs(mass - 1.0), 1e-2,
                                         std::abs(mass - 1.0) <= 1e-2));

        const yor::VerhulstParams vp(1.0, 0.3, 1.0);
        const std::size_t n_mc = std::max<std::size_t>(opt.paths * 5, 50000);
        const auto mc = yor::mc_verhulst_oracle(vp, 0.25, n_mc, 200, sde::RngSpec{opt.seed + 4},
                                                stats::linspace(0.7, 1.4, 9));
        int agree = 0;
        for (std::size_t k = 0; k < 8; ++k) {
            const double fa = yor::verhulst_bin_average(vp, 0.25, mc.histogram.edges[k],
                                                        mc.histogram.edges[k + 1]);
            if (std::abs(fa - mc.histogram.density(k)) <= 3.5 * mc.histogram.density_se(k))
                ++agree;
        }
        out.push_back(detail::check_stat("verhulst_density_vs_oracle_bins",
                                         static_cast<double>(agree), 7.0, agree >= 7,
                                         "bins within 3.5 standard errors"));
    }

    return out;
}

}  // namespace conic::app
