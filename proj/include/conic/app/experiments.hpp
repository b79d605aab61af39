#pragma once

// The CLI experiments: each command reads its config section (or defaults),
// runs the corresponding simulation/analysis and writes CSV or JSON files
// under the output directory. All output is deterministic in (config, seed).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "conic/app/config.hpp"
#include "conic/app/verify.hpp"
#include "conic/core/mappings.hpp"
#include "conic/core/simulate.hpp"
#include "conic/credit/bivariate.hpp"
#include "conic/credit/conditional.hpp"
#include "conic/credit/surface.hpp"
#include "conic/io.hpp"
#include "conic/phim/analytics.hpp"
#include "conic/stats.hpp"
#include "conic/yor/verhulst.hpp"

namespace conic::app {

struct CliOptions {
    std::string config_path;       // empty: experiment defaults
    std::string out_dir = "out";
    std::string format = "csv";    // csv | json
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
};

namespace detail {

inline Params section_for(const CliOptions& opt, const std::string& name) {
    if (opt.config_path.empty()) return Params{};
    auto sections = load_config(opt.config_path);
    const auto it = sections.find(name);
    require_arg(it != sections.end(),
                "config: file has no [" + name + "] section");
    return Params(it->second);
}

inline std::string out_path(const CliOptions& opt, const std::string& file) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / file).string();
}

inline void write_paths(const CliOptions& opt, const std::string& stem,
                        const sde::PathSet& ps) {
    if (opt.format == "json")
        io::write_path_set_json_file(out_path(opt, stem + ".json"), ps);
    else
        io::write_path_set_csv_file(out_path(opt, stem + ".csv"), ps);
}

inline core::Mapping make_mapping(Params& p) {
    const std::string name = p.get_string("mapping", "phi");
    if (name == "phi") return core::mapping_phi();
    if (name == "logistic") return core::mapping_logistic(p.get_double("c", 1.0));
    if (name == "tanh") return core::mapping_tanh_half();
    if (name == "bimodal")
        return core::mapping_bimodal(p.get_double("bimodal_x0", 0.0),
                                     p.get_double("bimodal_mu", 3.0),
                                     p.get_double("bimodal_s", 1.0));
    throw std::invalid_argument("config: unknown mapping '" + name + "'");
}

inline void write_mapping_table(const CliOptions& opt, const core::Mapping& m,
                                const std::string& stem) {
    io::Table table;
    table.header = {"x", "F", "f", "psi"};
    const double lo = std::max(m.domain.lo, -8.0), hi = std::min(m.domain.hi, 8.0);
    for (double x = lo; x <= hi + 1e-12; x += (hi - lo) / 400.0)
        table.add_row({x, m.F(x), m.f(x), m.psi(x)});
    io::write_csv_file(out_path(opt, stem + ".csv"), table);
}

}  // namespace detail

// Sample paths of mapped martingales (or the Doleans-Phi map). With no
// config the four reference panels y0 in {0.5, 0.75} x eta in {0.2, 0.8}
// are emitted (10 paths each, T = 5).
inline int cmd_simulate(const CliOptions& opt) {
    Params p = detail::section_for(opt, "simulate");
    const std::uint64_t seed = opt.seed.value_or(p.get_u64("seed", 42));
    const std::size_t n_paths = opt.paths.value_or(p.get_size("paths", 10));
    const std::size_t n_steps = opt.steps.value_or(p.get_size("steps", 500));
    const double horizon = p.get_double("horizon", 5.0);
    const std::string method = p.get_string("method", "conic");
    const sde::TimeGrid grid = sde::TimeGrid::uniform(horizon, n_steps);

    if (opt.config_path.empty()) {
        // reference panels
        const core::Mapping phi = core::mapping_phi();
        for (double y0 : {0.5, 0.75}) {
            for (double eta : {0.2, 0.8}) {
                auto ps = core::simulate_conic(phi, [eta](double) { return eta; }, y0, grid,
                                               n_paths, sde::RngSpec{seed});
                char stem[64];
                std::snprintf(stem, sizeof(stem), "paths_phi_y0_%g_eta_%g", y0, eta);
                detail::write_paths(opt, stem, ps);
            }
        }
        p.consume();
        return 0;
    }

    const double y0 = p.get_double("y0", 0.5);
    const double eta = p.get_double("eta", 0.2);
    if (method == "doleans") {
        const std::string sigma_kind = p.get_string("sigma", "decaying");
        const double z0 = p.has("z0") ? p.require_double("z0") : num::norm_inv_cdf(y0);
        auto sigma = [eta, sigma_kind](double t) {
            return sigma_kind == "const" ? eta : eta * std::exp(-0.5 * eta * eta * t);
        };
        auto ps = core::doleans_phi(sigma, z0, grid, n_paths, sde::RngSpec{seed});
        detail::write_paths(opt, "paths_doleans", ps);
    } else if (method == "conic") {
        const core::Mapping m = detail::make_mapping(p);
        auto ps = core::simulate_conic(m, [eta](double) { return eta; }, y0, grid, n_paths,
                                       sde::RngSpec{seed});
        detail::write_paths(opt, "paths_conic", ps);
        if (p.get_bool("mapping_table", false)) detail::write_mapping_table(opt, m, "mapping");
    } else {
        throw std::invalid_argument("config: method must be conic or doleans");
    }
    p.consume();
    return 0;
}

// Quantile fans q(t, p), p in {5%,...,95%}, for the exponential martingale
// and the Phi-martingale; the (1 - y0) quantile is emitted as an extra
// marked column.
inline int cmd_quantiles(const CliOptions& opt) {
    Params p = detail::section_for(opt, "quantiles");
    const double eta = p.get_double("eta", 0.5);
    const double m0 = p.get_double("m0", 1.0);
    const double horizon = p.get_double("horizon", 10.0);
    const std::size_t n_steps = opt.steps.value_or(p.get_size("steps", 200));
    const std::vector<double> y0s = p.get_list("y0", {0.4, 0.5, 0.6});
    p.consume();

    std::vector<double> probs;
    for (int k = 1; k <= 19; ++k) probs.push_back(0.05 * k);

    {
        io::Table t;
        t.header = {"t"};
        for (double prob : probs) {
            char h[16];
            std::snprintf(h, sizeof(h), "p_%02d", static_cast<int>(std::lround(prob * 100)));
            t.header.push_back(h);
        }
        for (std::size_t k = 0; k <= n_steps; ++k) {
            const double time = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
            std::vector<double> row{time};
            for (double prob : probs)
                row.push_back(phim::exp_martingale_stats(m0, eta, 0.0, std::max(time, 1e-12), prob)
                                  .quantile);
            t.add_row(std::move(row));
        }
        io::write_csv_file(detail::out_path(opt, "quantiles_exponential.csv"), t);
    }

    for (double y0 : y0s) {
        const phim::PhiMartingaleParams params(y0, eta);
        io::Table t;
        t.header = {"t"};
        for (double prob : probs) {
            char h[16];
            std::snprintf(h, sizeof(h), "p_%02d", static_cast<int>(std::lround(prob * 100)));
            t.header.push_back(h);
        }
        t.header.push_back("q_one_minus_y0");  // the emphasized quantile
        for (std::size_t k = 0; k <= n_steps; ++k) {
            const double time = horizon * static_cast<double>(k) / static_cast<double>(n_steps);
            std::vector<double> row{time};
            for (double prob : probs) row.push_back(phim::phi_quantile(params, time, prob));
            row.push_back(phim::phi_quantile(params, time, 1.0 - y0));
            t.add_row(std::move(row));
        }
        char stem[64];
        std::snprintf(stem, sizeof(stem), "quantiles_phi_y0_%g.csv", y0);
        io::write_csv_file(detail::out_path(opt, stem), t);
    }
    return 0;
}

// Survival-probability experiments: terminal density histogram vs the
// analytic density, exact-vs-Euler running-survival paths, conditional
// survival curves on the quadrature nodes and the conditional CDF.
inline int cmd_credit(const CliOptions& opt) {
    Params p = detail::section_for(opt, "credit");
    const std::uint64_t seed = opt.seed.value_or(p.get_u64("seed", 42));
    const credit::SurvivalCurve fig3_curve(
        {{1, 0.05}, {3, 0.06}, {5, 0.08}, {7, 0.085}, {10, 0.065}});
    const credit::SurvivalCurve curve =
        p.has("curve_file") ? credit::load_survival_curve(p.get_string("curve_file", ""))
                            : p.get_curve("hazards", fig3_curve);
    const std::vector<double> etas = p.get_list("eta", {0.1, 0.25});
    const double t_obs = p.get_double("t", 1.0);
    const double maturity = p.get_double("maturity", 5.0);
    const double flat_eta = p.get_double("density_eta", 0.15);
    const double flat_h = p.get_double("density_hazard", 0.08);
    const std::size_t n_paths = opt.paths.value_or(p.get_size("paths", 10000));
    const std::size_t n_steps = opt.steps.value_or(p.get_size("steps", 100));
    p.consume();

    // terminal density of S_T(T') at T'=maturity under a flat curve: MC
    // histogram against the analytic density of Phi(m + eta Z)
    {
        const credit::SurvivalSurfaceParams sp(credit::SurvivalCurve::flat(flat_h), flat_eta);
        const auto family = credit::simulate_surface(
            sp, {maturity}, sde::TimeGrid::uniform(maturity, n_steps), n_paths,
            sde::RngSpec{seed});
        const auto terminal = family[0].terminal_values();
        auto edges = stats::linspace(0.0, 1.0, 61);
        const auto hist = stats::histogram(terminal, std::move(edges));
        const double m = sp.m(maturity, maturity);
        const double sv = std::sqrt(sp.v(maturity));
        io::Table t;
        t.header = {"s", "density_mc", "density_analytic", "bin_se"};
        for (std::size_t k = 0; k < hist.counts.size(); ++k) {
            const double mid = 0.5 * (hist.edges[k] + hist.edges[k + 1]);
            double analytic = 0.0;
            if (mid > 0.0 && mid < 1.0) {
                const double x = num::norm_inv_cdf(mid);
                analytic = num::norm_pdf((x - m) / sv) / (sv * num::norm_pdf(x));
            }
            t.add_row({mid, hist.density(k), analytic, hist.density_se(k)});
        }
        io::write_csv_file(detail::out_path(opt, "terminal_density.csv"), t);

        // exact vs Euler sample paths of the running survival process
        const std::size_t n_show = std::min<std::size_t>(n_paths, 10);
        const sde::TimeGrid grid = sde::TimeGrid::uniform(maturity, n_steps);
        io::Table cmp;
        cmp.header = {"t"};
        for (std::size_t j = 0; j < n_show; ++j) {
            cmp.header.push_back("exact_" + std::to_string(j));
            cmp.header.push_back("euler_" + std::to_string(j));
        }
        std::vector<std::vector<double>> rows(grid.n_times());
        for (std::size_t k = 0; k < grid.n_times(); ++k) rows[k] = {grid.times[k]};
        for (std::size_t j = 0; j < n_show; ++j) {
            double z = 0.0, s_euler = 1.0;
            for (std::size_t k = 0; k < grid.n_times(); ++k) {
                if (k > 0) {
                    const double dt = grid.dt(k - 1);
                    const double w = sde::normal_draw(sde::RngSpec{seed}, j, k - 1);
                    const auto coeff = credit::azema_coefficients(sp, grid.times[k - 1], s_euler);
                    s_euler += coeff.zeta * (sp.curve.survival(grid.times[k]) -
                                             sp.curve.survival(grid.times[k - 1])) +
                               coeff.diffusion * std::sqrt(dt) * w;
                    s_euler = std::clamp(s_euler, 1e-15, 1.0);
                    const credit::detail::FactorStep st(sp.eta, dt);
                    z = z * st.growth + st.sd * w;
                }
                const double s_exact =
                    k == 0 ? 1.0 : num::norm_cdf(sp.m(grid.times[k], grid.times[k]) + sp.eta * z);
                rows[k].push_back(s_exact);
                rows[k].push_back(s_euler);
            }
        }
        for (auto& row : rows) cmp.add_row(std::move(row));
        io::write_csv_file(detail::out_path(opt, "azema_exact_vs_euler.csv"), cmp);
    }

    // stochastic surface in long format plus a per-maturity summary
    {
        const credit::SurvivalSurfaceParams sp(curve, etas.front());
        const std::vector<double> maturities{2.0, 5.0, 7.0, 10.0};
        const sde::TimeGrid grid = sde::TimeGrid::uniform(t_obs, std::max<std::size_t>(n_steps / 5, 4));
        const std::size_t n_export = std::min<std::size_t>(n_paths, 50);
        const auto family = credit::simulate_surface(sp, maturities, grid, n_paths,
                                                     sde::RngSpec{seed + 1});
        io::Table surf;
        surf.header = {"t", "T", "path", "value"};
        for (std::size_t j = 0; j < maturities.size(); ++j)
            for (std::size_t path = 0; path < n_export; ++path)
                for (std::size_t k = 0; k < grid.n_times(); ++k)
                    surf.add_row({grid.times[k], maturities[j], static_cast<double>(path),
                                  family[j].at(path, k)});
        io::write_csv_file(detail::out_path(opt, "surface_paths.csv"), surf);

        io::Table summary;
        summary.header = {"T", "mean", "stderr", "analytic"};
        for (std::size_t j = 0; j < maturities.size(); ++j) {
            const auto mv = stats::mean_var(family[j].terminal_values());
            summary.add_row({maturities[j], mv.mean, mv.std_error_of_mean(),
                             curve.survival(maturities[j])});
        }
        io::write_csv_file(detail::out_path(opt, "surface_summary.csv"), summary);
    }

    // conditional survival curves Q(t,T;z_i) on the 16-node rule, plus the
    // initial curve, the deterministic ratio and the quadrature average
    for (double eta : etas) {
        const credit::SurvivalSurfaceParams sp(curve, eta);
        const auto rule = num::gauss_hermite(16);
        io::Table t;
        t.header = {"T", "S0", "ratio"};
        for (int i = 0; i < rule.order; ++i) t.header.push_back("Q_z" + std::to_string(i));
        t.header.push_back("expected_Q");
        for (double T = t_obs; T <= 10.0 + 1e-9; T += 0.125) {
            std::vector<double> row{T, curve.survival(T),
                                    curve.survival(T) / curve.survival(t_obs)};
            for (int i = 0; i < rule.order; ++i)
                row.push_back(credit::conditional_survival(sp, t_obs, T, rule.nodes[i]));
            row.push_back(credit::expected_conditional_survival(sp, t_obs, T, 16));
            t.add_row(std::move(row));
        }
        char stem[64];
        std::snprintf(stem, sizeof(stem), "conditional_survival_eta_%g.csv", eta);
        io::write_csv_file(detail::out_path(opt, stem), t);

        // conditional CDF tabulation
        io::Table qt;
        qt.header = {"x", "cdf"};
        for (int i = 1; i <= 99; ++i) {
            const double x = 0.01 * i;
            qt.add_row({x, credit::q_cdf(sp, t_obs, maturity, x)});
        }
        char stem2[64];
        std::snprintf(stem2, sizeof(stem2), "q_cdf_eta_%g.csv", eta);
        io::write_csv_file(detail::out_path(opt, stem2), qt);
    }
    return 0;
}

// Bivariate joint survival: running process G_t(t,t) and fixed-maturity
// martingale G_t(T,T) for several Brownian correlations, sharing the
// Brownian pairs across correlations, with sample-average and envelope data.
inline int cmd_bivariate(const CliOptions& opt) {
    Params p = detail::section_for(opt, "bivariate");
    const std::uint64_t seed = opt.seed.value_or(p.get_u64("seed", 42));
    const double h1 = p.get_double("hazard1", 0.08);
    const double h2 = p.get_double("hazard2", 0.125);
    const double eta1 = p.get_double("eta1", 0.15);
    const double eta2 = p.get_double("eta2", 0.25);
    const double T = p.get_double("maturity", 5.0);
    const double dt = p.get_double("dt", 0.05);
    const std::vector<double> rhos = p.get_list("rho", {-0.8, 0.0, 0.8});
    const std::size_t n_show = opt.paths.value_or(p.get_size("paths", 10));
    const std::size_t n_avg = p.get_size("avg_paths", 1000);
    p.consume();

    const sde::TimeGrid grid = sde::TimeGrid::uniform(T, static_cast<std::size_t>(T / dt));
    for (double rho : rhos) {
        const credit::BivariateParams biv(credit::SurvivalCurve::flat(h1),
                                          credit::SurvivalCurve::flat(h2), eta1, eta2, rho);
        // identical Brownian pairs across rho: the seed does not change
        const auto fixed = credit::simulate_bivariate(biv, T, T, grid, n_avg,
                                                      sde::RngSpec{seed});
        const auto running = credit::simulate_bivariate(biv, T, T, grid, n_avg,
                                                        sde::RngSpec{seed}, std::nullopt, true);

        char stem[64];
        std::snprintf(stem, sizeof(stem), "bivariate_rho_%g", rho);
        // first n_show paths of both processes
        io::Table t;
        t.header = {"t"};
        for (std::size_t j = 0; j < n_show; ++j) t.header.push_back("G_tt_" + std::to_string(j));
        for (std::size_t j = 0; j < n_show; ++j) t.header.push_back("G_TT_" + std::to_string(j));
        t.header.insert(t.header.end(), {"G_TT_mean", "G_TT_min", "G_TT_max"});
        for (std::size_t k = 0; k < grid.n_times(); ++k) {
            std::vector<double> row{grid.times[k]};
            for (std::size_t j = 0; j < n_show; ++j) row.push_back(running.G.at(j, k));
            for (std::size_t j = 0; j < n_show; ++j) row.push_back(fixed.G.at(j, k));
            const auto column = fixed.G.at_time(k);
            double mn = column[0], mx = column[0];
            for (double v : column) {
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            row.push_back(stats::mean(column));
            row.push_back(mn);
            row.push_back(mx);
            t.add_row(std::move(row));
        }
        io::write_csv_file(detail::out_path(opt, std::string(stem) + ".csv"), t);
    }
    return 0;
}

// Long-horizon collapse study: the Phi-mapping pushes all mass to the
// bounds; a bimodal mapping keeps part of it in the dip between the modes.
inline int cmd_collapse(const CliOptions& opt) {
    Params p = detail::section_for(opt, "collapse");
    const std::uint64_t seed = opt.seed.value_or(p.get_u64("seed", 42));
    const double eta = p.get_double("eta", 0.5);
    const double horizon = p.get_double("horizon", 200.0);
    const double eps = p.get_double("epsilon", 1e-3);
    const double y0 = p.get_double("y0", 0.5);
    const double bm_mu = p.get_double("bimodal_mu", 3.0);
    const double bm_s = p.get_double("bimodal_s", 1.0);
    const std::size_t n_paths = opt.paths.value_or(p.get_size("paths", 4000));
    const std::size_t n_steps = opt.steps.value_or(p.get_size("steps", 20000));
    p.consume();

    const sde::TimeGrid grid = sde::TimeGrid::uniform(horizon, n_steps);
    auto g = [eta](double) { return eta; };

    io::Table t;
    t.header = {"mapping", "mass_low", "mass_dip", "mass_high", "analytic_low", "analytic_high"};

    {
        const core::Mapping phi = core::mapping_phi();
        const auto ps = core::simulate_conic(phi, g, y0, grid, n_paths, sde::RngSpec{seed});
        const auto term = ps.terminal_values();
        double lo_mass = 0, hi_mass = 0;
        for (double v : term) {
            lo_mass += v < eps;
            hi_mass += v > 1.0 - eps;
        }
        const phim::PhiMartingaleParams params(y0, eta);
        t.add_row({0.0, lo_mass / static_cast<double>(n_paths), 0.0,
                   hi_mass / static_cast<double>(n_paths), phim::phi_cdf(params, horizon, eps),
                   1.0 - phim::phi_cdf(params, horizon, 1.0 - eps)});
    }
    {
        const core::Mapping bm = core::mapping_bimodal(0.0, bm_mu, bm_s);
        const double y0_bm = bm.F(0.0);  // 0.5 by symmetry
        const auto ps = core::simulate_conic(bm, g, y0_bm, grid, n_paths, sde::RngSpec{seed});
        const auto term = ps.terminal_values();
        const double dip_lo = bm.F(-bm_mu), dip_hi = bm.F(bm_mu);
        double lo_mass = 0, dip = 0, hi_mass = 0;
        for (double v : term) {
            lo_mass += v < eps;
            hi_mass += v > 1.0 - eps;
            dip += (v >= dip_lo && v <= dip_hi);
        }
        t.add_row({1.0, lo_mass / static_cast<double>(n_paths),
                   dip / static_cast<double>(n_paths), hi_mass / static_cast<double>(n_paths),
                   0.0, 0.0});
    }
    io::write_csv_file(detail::out_path(opt, "collapse_masses.csv"), t);
    return 0;
}

// Full invariant suite; writes a report and the density-oracle export.
inline int cmd_verify(const CliOptions& opt) {
    Params p = detail::section_for(opt, "verify");
    VerifyOptions vopt;
    vopt.seed = opt.seed.value_or(p.get_u64("seed", vopt.seed));
    vopt.paths = opt.paths.value_or(p.get_size("paths", vopt.paths));
    vopt.steps = opt.steps.value_or(p.get_size("steps", vopt.steps));
    vopt.include_density_oracle = p.get_bool("density_oracle", true);
    p.consume();

    const auto results = run_verification(vopt);
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": measured=" << io::fmt17(r.measured)
                  << " tolerance=" << io::fmt17(r.tolerance)
                  << (r.detail.empty() ? "" : " (" + r.detail + ")") << "\n";
    }
    std::cout << (all_pass ? "verification suite: all checks passed\n"
                           : "verification suite: FAILURES present\n");

    // density-oracle export: z, analytic, mc, bin se
    if (vopt.include_density_oracle) {
        const yor::VerhulstParams vp(1.0, 0.3, 1.0);
        const auto mc = yor::mc_verhulst_oracle(vp, 0.25, std::max<std::size_t>(vopt.paths * 5,
                                                                                50000),
                                                200, sde::RngSpec{vopt.seed + 4},
                                                stats::linspace(0.7, 1.4, 9));
        io::Table d;
        d.header = {"z", "f_analytic", "f_mc", "bin_se"};
        for (std::size_t k = 0; k < 8; ++k) {
            const double zc = 0.5 * (mc.histogram.edges[k] + mc.histogram.edges[k + 1]);
            d.add_row({zc, yor::verhulst_density(vp, 0.25, zc), mc.histogram.density(k),
                       mc.histogram.density_se(k)});
        }
        io::write_csv_file(detail::out_path(opt, "verhulst_density.csv"), d);
    }
    return all_pass ? 0 : 3;
}

}  // namespace conic::app
