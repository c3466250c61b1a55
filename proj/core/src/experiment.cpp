#include "wsl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsl/dtn.hpp"
#include "wsl/identities.hpp"
#include "wsl/io.hpp"
#include "wsl/resonance.hpp"
#include "wsl/waves.hpp"

namespace wsl::runner {

using nlohmann::json;

Kind kind_from_string(const std::string& s) {
    if (s == "check-geometry") return Kind::check_geometry;
    if (s == "sweep-resolvent") return Kind::sweep_resolvent;
    if (s == "scan-resonances") return Kind::scan_resonances;
    if (s == "verify-resfree") return Kind::verify_resfree;
    if (s == "propagate") return Kind::propagate;
    if (s == "verify-identities") return Kind::verify_identities;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::check_geometry: return "check-geometry";
        case Kind::sweep_resolvent: return "sweep-resolvent";
        case Kind::scan_resonances: return "scan-resonances";
        case Kind::verify_resfree: return "verify-resfree";
        case Kind::propagate: return "propagate";
        case Kind::verify_identities: return "verify-identities";
    }
    return "?";
}

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
    throw ConfigError("config error at " + path + ": " + what);
}

double need_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail_at(path + "/" + key, "missing required number");
    if (!j.at(key).is_number()) fail_at(path + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

double opt_number(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail_at(path + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

std::vector<double> opt_list(const json& j, const std::string& path, const char* key,
                             std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail_at(path + "/" + key, "expected numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    if (v.is_object()) {
        const double lo = need_number(v, path + "/" + key, "min");
        const double hi = need_number(v, path + "/" + key, "max");
        const int steps = static_cast<int>(need_number(v, path + "/" + key, "steps"));
        if (steps < 1 || !(hi >= lo)) fail_at(path + "/" + key, "bad range");
        std::vector<double> out;
        for (int i = 0; i <= steps; ++i) out.push_back(lo + (hi - lo) * i / steps);
        return out;
    }
    fail_at(path + "/" + key, "expected an array or {min,max,steps}");
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) {
            if (text[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    ExperimentConfig cfg;
    if (!j.contains("experiment")) fail_at("/experiment", "missing required string");
    cfg.kind = kind_from_string(j.at("experiment").get<std::string>());
    if (!j.contains("domain")) fail_at("/domain", "missing domain spec");
    json dj = j.at("domain");
    if (dj.is_object() && dj.contains("file")) {
        const std::string path = dj.at("file").get<std::string>();
        dj = json::parse(io::read_file(path));
    }
    try {
        cfg.domain = geom::domain_from_json(dj.dump());
    } catch (const std::exception& e) {
        fail_at("/domain", e.what());
    }
    cfg.domain_name = cfg.domain.name;

    cfg.h = opt_number(j, "", "h", cfg.h);
    cfg.L = opt_number(j, "", "L", cfg.L);
    cfg.delta = opt_number(j, "", "delta", cfg.delta);
    cfg.modes = static_cast<int>(opt_number(j, "", "modes", cfg.modes));
    cfg.seed = static_cast<unsigned>(opt_number(j, "", "seed", cfg.seed));
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (!(cfg.h > 0)) fail_at("/h", "must be positive");
    if (!(cfg.L > 0)) fail_at("/L", "must be positive");
    if (!(cfg.delta > 0)) fail_at("/delta", "must be positive");

    cfg.E_values = opt_list(j, "", "E", {});
    cfg.eps_values = opt_list(j, "", "eps", {});
    if (j.contains("expect_class")) cfg.expect_class = j.at("expect_class").get<std::string>();

    if (j.contains("scan")) {
        const auto& s = j.at("scan");
        cfg.scan_lo = need_number(s, "/scan", "emin");
        cfg.scan_hi = need_number(s, "/scan", "emax");
        cfg.scan_steps = static_cast<int>(need_number(s, "/scan", "steps"));
        cfg.scan_persistence = s.contains("persistence") ? s.at("persistence").get<bool>() : true;
        if (!(cfg.scan_hi > cfg.scan_lo) || cfg.scan_steps < 3) fail_at("/scan", "bad range");
    }
    if (j.contains("resfree")) {
        const auto& r = j.at("resfree");
        cfg.resfree_calibrate = opt_list(r, "/resfree", "calibrate", cfg.resfree_calibrate);
        cfg.resfree_verify = opt_list(r, "/resfree", "verify", cfg.resfree_verify);
        cfg.resfree_samples = static_cast<int>(opt_number(r, "/resfree", "samples", 20));
    }
    if (j.contains("wave")) {
        const auto& w = j.at("wave");
        cfg.T = opt_number(w, "/wave", "T", cfg.T);
        cfg.cfl = opt_number(w, "/wave", "cfl", cfg.cfl);
        cfg.sample_dt = opt_number(w, "/wave", "sample_dt", cfg.sample_dt);
        cfg.bump_x = opt_number(w, "/wave", "bump_x", cfg.bump_x);
        cfg.bump_y = opt_number(w, "/wave", "bump_y", cfg.bump_y);
        cfg.bump_r = opt_number(w, "/wave", "bump_r", cfg.bump_r);
        cfg.chi_x0 = opt_number(w, "/wave", "chi_x0", cfg.bump_x);
        cfg.chi_r_in = opt_number(w, "/wave", "chi_r_in", cfg.chi_r_in);
        cfg.chi_r_out = opt_number(w, "/wave", "chi_r_out", cfg.chi_r_out);
        if (w.contains("dump_final")) cfg.dump_final = w.at("dump_final").get<bool>();
        if (w.contains("window")) {
            const auto& win = w.at("window");
            cfg.fit_window = std::make_pair(win.at(0).get<double>(), win.at(1).get<double>());
        }
        if (w.contains("expect_exponent")) {
            const auto& ex = w.at("expect_exponent");
            cfg.expect_exponent = std::make_pair(ex.at(0).get<double>(), ex.at(1).get<double>());
        }
    }
    if (j.contains("identities")) {
        const auto& s = j.at("identities");
        cfg.ident_E = opt_number(s, "/identities", "E", cfg.ident_E);
        cfg.ident_eps = opt_number(s, "/identities", "eps", cfg.ident_eps);
        cfg.ident_R = opt_number(s, "/identities", "R", cfg.ident_R);
        cfg.poincare_trials = static_cast<int>(opt_number(s, "/identities", "trials", 200));
        cfg.poincare_deltas = opt_list(s, "/identities", "deltas", cfg.poincare_deltas);
        cfg.factor_min = opt_number(s, "/identities", "factor_min", cfg.factor_min);
    }

    // Canonicalize for hashing.
    cfg.canonical_json = j.dump(2);
    return cfg;
}

// ---------------------------------------------------------------------------

namespace {

struct RunContext {
    std::string dir;
    std::vector<std::string> files;

    void save(const std::string& name, const std::string& content) {
        io::write_file(dir + "/" + name, content);
        files.push_back(name);
    }
};

int run_check_geometry(const ExperimentConfig& cfg, RunContext& ctx, json& summary) {
    auto rep = geom::check_star_shaped_x(cfg.domain, 512);
    rep.theorem_class = geom::classify_theorem(cfg.domain);
    if (cfg.domain.flaring_hint_lo && cfg.domain.flaring_hint_hi) {
        try {
            rep.flaring_constant = geom::check_flaring(cfg.domain, *cfg.domain.flaring_hint_lo,
                                                       *cfg.domain.flaring_hint_hi, 512);
        } catch (const std::runtime_error&) {
        }
    }
    ctx.save("geometry_report.json", geom::geometry_report_to_json(rep));
    summary["sup_x_nu_x"] = rep.sup_x_nu_x;
    summary["theorem_class"] = geom::to_string(rep.theorem_class);
    summary["violations"] = rep.violating_points.size();
    if (cfg.expect_class && *cfg.expect_class != geom::to_string(rep.theorem_class)) {
        summary["expected_class"] = *cfg.expect_class;
        return 2;
    }
    return 0;
}

int run_sweep(const ExperimentConfig& cfg, RunContext& ctx, json& summary, int jobs) {
    if (cfg.E_values.empty() || cfg.eps_values.empty())
        throw ConfigError("sweep-resolvent requires E and eps lists");
    const auto grid = fd::build_grid(cfg.domain, cfg.h, cfg.L);
    const auto op = fd::assemble_laplacian(grid);
    const auto& Y = cfg.domain.end_plus.kind == geom::EndKind::cylindrical ? cfg.domain.end_plus.Y
                                                                           : cfg.domain.end_minus.Y;
    const auto basis = spectrum::modes(Y, cfg.modes);
    const bool one_ended = !cfg.domain.two_ended();
    const double x0 = one_ended ? 0.0 : cfg.domain.x0;
    dtn::NormEstimateOptions nopt;
    nopt.seed = cfg.seed;
    const auto sweep = dtn::sweep_bound(grid, op, basis, cfg.E_values, cfg.eps_values, cfg.delta,
                                        x0, one_ended, nopt, jobs);

    io::CsvWriter csv({"E", "eps", "delta", "norm_estimate", "iterations", "residual", "L", "h"});
    for (const auto& p : sweep.probes)
        csv.row({io::fmt(p.E), io::fmt(p.eps), io::fmt(p.delta), io::fmt(p.norm_estimate),
                 std::to_string(p.iterations), io::fmt(p.relative_residual), io::fmt(grid.L),
                 io::fmt(grid.h)});
    ctx.save("sweep.csv", csv.text());

    const auto cls = geom::classify_theorem(cfg.domain);
    json violations = json::array();
    if (cls == geom::TheoremClass::cig) {
        for (const auto& p : sweep.probes) {
            const double zabs = std::abs(std::complex<double>(p.E, p.eps));
            const double bound = 3.0 / cfg.delta * (1.0 + std::sqrt(zabs));
            if (p.norm_estimate > 1.07 * bound)
                violations.push_back({{"E", p.E}, {"eps", p.eps},
                                      {"estimate", p.norm_estimate}, {"bound", bound}});
        }
    }
    summary["fitted_slope"] = sweep.fitted_slope;
    summary["sup_over_eps"] = sweep.sup_over_eps;
    summary["divergence_flag_E"] = json::array();
    for (int ie : sweep.divergence_flags)
        summary["divergence_flag_E"].push_back(cfg.E_values[static_cast<std::size_t>(ie)]);
    summary["bound_violations"] = violations;
    summary["theorem_class"] = geom::to_string(cls);
    summary["l_margin_ok"] = grid.l_margin_ok;
    ctx.save("sweep_summary.json", summary.dump(2));
    return (!violations.empty() || !sweep.divergence_flags.empty()) ? 2 : 0;
}

int run_scan(const ExperimentConfig& cfg, RunContext& ctx, json& summary) {
    const auto& Y = cfg.domain.end_plus.kind == geom::EndKind::cylindrical ? cfg.domain.end_plus.Y
                                                                           : cfg.domain.end_minus.Y;
    const auto basis = spectrum::modes(Y, cfg.modes);
    resonance::ScanOptions sopt;
    sopt.sigma.seed = cfg.seed;
    sopt.check_persistence = cfg.scan_persistence;
    const auto scan = resonance::scan_real_axis(cfg.domain, basis, cfg.scan_lo, cfg.scan_hi,
                                                cfg.scan_steps, cfg.h, cfg.L, sopt);

    io::CsvWriter csv({"re_z", "im_z", "flipped_modes", "sigma_min"});
    for (std::size_t i = 0; i < scan.E.size(); ++i)
        csv.row({io::fmt(scan.E[i]), "0", "", io::fmt(scan.sigma_min[i])});
    ctx.save("scan.csv", csv.text());

    json dips = json::array();
    for (const auto& d : scan.dips)
        dips.push_back({{"E", d.E}, {"E_coarse", d.E_coarse}, {"depth", d.depth},
                        {"depth_coarse", d.depth_coarse}, {"background", d.background},
                        {"persistent", d.persistent}});
    summary["background_median"] = scan.background_median;
    summary["dips"] = dips;
    summary["skipped_ramification"] = scan.skipped;
    const auto cls = geom::classify_theorem(cfg.domain);
    summary["theorem_class"] = geom::to_string(cls);
    ctx.save("scan_dips.json", summary.dump(2));

    int persistent = 0;
    for (const auto& d : scan.dips) persistent += d.persistent ? 1 : 0;
    const bool expect_none = cls == geom::TheoremClass::cig || cls == geom::TheoremClass::hour ||
                             cls == geom::TheoremClass::flat;
    return (expect_none && persistent > 0) ? 2 : 0;
}

int run_resfree(const ExperimentConfig& cfg, RunContext& ctx, json& summary) {
    const auto& Y = cfg.domain.end_plus.kind == geom::EndKind::cylindrical ? cfg.domain.end_plus.Y
                                                                           : cfg.domain.end_minus.Y;
    const auto basis = spectrum::modes(Y, cfg.modes);
    dtn::NormEstimateOptions nopt;
    nopt.seed = cfg.seed;
    const auto cal = resonance::calibrate_resonance_free(cfg.domain, basis, cfg.resfree_calibrate,
                                                         cfg.h, cfg.L, cfg.resfree_samples, nopt);
    summary["c1"] = cal.c1;
    summary["c2"] = cal.c2;
    summary["pole_floor"] = cal.pole_floor;
    json verdicts = json::array();
    bool all_ok = true;
    for (double E : cfg.resfree_verify) {
        const auto rep = resonance::verify_resonance_free(cfg.domain, basis, E, cal, cfg.h, cfg.L,
                                                          cfg.resfree_samples, nopt);
        json v;
        v["E"] = E;
        v["ok"] = rep.ok;
        v["ball_radius"] = rep.ball_radius;
        v["samples"] = rep.samples.size();
        if (!rep.failure.empty()) v["failure"] = rep.failure;
        double min_sigma = 1e300, max_norm = 0;
        for (const auto& s : rep.samples) {
            min_sigma = std::min(min_sigma, s.sigma_min);
            max_norm = std::max(max_norm, s.norm_estimate);
        }
        v["min_sigma"] = min_sigma;
        v["max_norm"] = max_norm;
        verdicts.push_back(v);
        all_ok = all_ok && rep.ok;
    }
    summary["verify"] = verdicts;
    ctx.save("resfree.json", summary.dump(2));
    return all_ok ? 0 : 2;
}

int run_propagate(const ExperimentConfig& cfg, RunContext& ctx, json& summary) {
    const auto grid = fd::build_grid(cfg.domain, cfg.h, cfg.L);
    const auto op = fd::assemble_laplacian(grid);
    auto [f1, f2] = waves::initial_bump(grid, cfg.bump_x, cfg.bump_y, cfg.bump_r, 1);
    const auto chi = fd::weight_diag(grid, fd::WeightName::cutoff_chi, 1.0, cfg.chi_x0, false,
                                     {cfg.chi_r_in, cfg.chi_r_out});
    waves::PropagateOptions wopt;
    wopt.cfl = cfg.cfl;
    wopt.sample_dt = cfg.sample_dt;
    wopt.horizon = waves::reflection_horizon(grid, cfg.bump_r + std::abs(cfg.bump_x));
    waves::WaveState st{f1, f2, 0.0};
    const auto series = waves::propagate(grid, op, st, cfg.T, wopt, &chi.diag);

    io::CsvWriter csv({"t", "norm_m0", "norm_m1", "energy"});
    for (const auto& s : series.samples)
        csv.row({io::fmt(s.t), io::fmt(s.norm_m0), io::fmt(s.norm_m1), io::fmt(s.energy)});
    ctx.save("waves.csv", csv.text());

    ctx.save("grid_meta.json", fd::grid_meta_json(grid));
    io::write_bytes(ctx.dir + "/mask.bin", fd::grid_mask_bytes(grid));
    ctx.files.push_back("mask.bin");
    if (cfg.dump_final) {
        fd::CVector unap = series.final_state.u.cast<fd::Complex>();
        ctx.save("final_u.csv", fd::grid_function_csv(grid, unap));
    }
    summary["steps"] = series.steps;
    summary["dt"] = series.dt;
    const double e0 = series.samples.front().energy;
    double drift = 0.0;
    for (const auto& s : series.samples)
        drift = std::max(drift, std::abs(s.energy - e0) / std::max(std::abs(e0), 1e-300));
    summary["energy_drift"] = drift;

    int code = 0;
    if (cfg.fit_window) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : series.samples) pts.push_back({s.t, s.norm_m0});
        const auto fit = waves::fit_decay(pts, cfg.fit_window->first, cfg.fit_window->second, true);
        summary["exponent"] = fit.exponent;
        summary["fit_residual"] = fit.residual;
        summary["envelope_points"] = fit.points_used.size();
        if (cfg.expect_exponent &&
            (fit.exponent < cfg.expect_exponent->first || fit.exponent > cfg.expect_exponent->second))
            code = 2;
    }
    ctx.save("decay.json", summary.dump(2));
    return code;
}

fd::CVector cutoff_solution(const fd::Grid& grid, const fd::DiscreteOperator& op,
                            const spectrum::ModeBasis& basis, double E, double eps,
                            unsigned seed) {
    // Solver output damped near the truncation faces so the identity sums
    // see a decaying H^1_0-type field.
    riemann::SheetPoint p{{E, eps}, {}};
    dtn::ClosedSystem sys(grid, op, p, basis);
    if (!sys.factorize()) throw std::runtime_error("identity solve hit a singular system");
    std::mt19937_64 rng(seed);
    fd::CVector rhs = fd::CVector::Zero(grid.size());
    const double xc = grid.x_lo < 0 ? 0.0 : grid.R0 + 1.0;
    for (int n = 0; n < grid.size(); ++n) {
        const double dx = grid.x_of(n) - xc, dy = grid.y_of(n);
        const double r2 = dx * dx + dy * dy;
        if (r2 < 1.0) rhs[n] = std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    fd::CVector u = sys.solve(rhs);
    const double margin = 2.0;
    for (int n = 0; n < grid.size(); ++n) {
        const double x = grid.x_of(n);
        double t = 1.0;
        if (grid.face_plus.present) t = std::min(t, (grid.face_plus.x - margin - x) / margin + 1.0);
        if (grid.face_minus.present)
            t = std::min(t, (x - (grid.face_minus.x + margin)) / margin + 1.0);
        t = std::clamp(t, 0.0, 1.0);
        const double s = t * t * (3 - 2 * t); // C^1 taper
        u[n] *= s;
    }
    return u;
}

int run_identities(const ExperimentConfig& cfg, RunContext& ctx, json& summary) {
    const auto& Y = cfg.domain.end_plus.kind == geom::EndKind::cylindrical ? cfg.domain.end_plus.Y
                                                                           : cfg.domain.end_minus.Y;
    const auto basis = spectrum::modes(Y, cfg.modes);
    const bool one_ended = !cfg.domain.two_ended();

    json levels = json::array();
    std::map<std::string, std::array<double, 2>> residuals;
    for (int lvl = 0; lvl < 2; ++lvl) {
        const double h = lvl == 0 ? cfg.h : cfg.h / 2.0;
        const auto grid = fd::build_grid(cfg.domain, h, cfg.L);
        const auto op = fd::assemble_laplacian(grid);
        const auto u = cutoff_solution(grid, op, basis, cfg.ident_E, cfg.ident_eps, cfg.seed);

        const auto w = one_ended ? weights::basic_weight(cfg.delta)
                                 : weights::flaring_weight(cfg.delta, std::max(cfg.domain.x0, 1.0),
                                                           0.5);
        const auto mu = weights::bump_mu(-1.0 + (one_ended ? 2.0 : 0.0),
                                         3.0 + (one_ended ? 2.0 : 0.0));
        const auto rep_m = identities::morawetz_residual(grid, op, u, w, cfg.ident_E, cfg.ident_eps);
        const auto rep_e = identities::ibpe_residual(grid, op, u, mu, cfg.ident_E, cfg.ident_eps);
        const auto rep_y = identities::ibpy_residual(grid, op, u, cfg.ident_E, cfg.ident_eps,
                                                     identities::IbpyVariant::yj);
        const auto rep_a = identities::ibpy_residual(grid, op, u, cfg.ident_E, cfg.ident_eps,
                                                     identities::IbpyVariant::translation);
        const auto rep_x = identities::eigenvalue_identity_check(grid, op, u, cfg.ident_E,
                                                                 cfg.ident_eps, cfg.ident_R);
        json l;
        l["h"] = grid.h;
        auto put = [&](const char* name, const identities::IdentityReport& r) {
            l[name] = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual},
                       {"boundary_term", r.boundary_term}};
            residuals[name][static_cast<std::size_t>(lvl)] = r.residual;
        };
        put("morawetz", rep_m);
        put("ibpe", rep_e);
        put("ibpy", rep_y);
        put("translation", rep_a);
        put("xrint1", rep_x.real_part);
        put("xrint2", rep_x.imag_part);
        levels.push_back(l);
    }
    json factors;
    bool factors_ok = true;
    for (const auto& [name, r] : residuals) {
        const double f = r[1] > 0 ? r[0] / r[1] : std::numeric_limits<double>::infinity();
        factors[name] = f;
        if (!(f >= cfg.factor_min)) factors_ok = false;
    }
    summary["levels"] = levels;
    summary["refinement_factors"] = factors;
    summary["factor_min"] = cfg.factor_min;

    // Sampled multiplier weight, for plotting.
    {
        const auto w = one_ended ? weights::basic_weight(cfg.delta)
                                 : weights::flaring_weight(cfg.delta, std::max(cfg.domain.x0, 1.0),
                                                           0.5);
        io::CsvWriter csv({"x", "w", "w1", "w2", "w3"});
        const double xlo = one_ended ? 0.0 : -cfg.L;
        for (int i = 0; i <= 400; ++i) {
            const double x = xlo + (cfg.L - xlo) * i / 400.0;
            csv.row({io::fmt(x), io::fmt(w.w(x)), io::fmt(w.w1(x)), io::fmt(w.w2(x)),
                     io::fmt(w.w3(x))});
        }
        ctx.save("weight.csv", csv.text());
    }

    // Poincare trials on one-ended grids.
    bool poincare_ok = true;
    if (one_ended) {
        const auto grid = fd::build_grid(cfg.domain, cfg.h, cfg.L);
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> ux(grid.x_lo, grid.x_lo + grid.Mx * grid.h);
        std::uniform_real_distribution<double> uy(grid.y_lo, grid.y_lo + grid.My * grid.h);
        std::uniform_real_distribution<double> us(0.3, 1.5);
        std::normal_distribution<double> ga(0.0, 1.0);

        // Taper from the discrete distance-to-boundary (in cells).
        std::vector<int> dist(static_cast<std::size_t>(grid.size()), 1 << 20);
        bool changed = true;
        for (int n = 0; n < grid.size(); ++n) {
            const auto [i, k] = grid.nodes[static_cast<std::size_t>(n)];
            for (auto [di, dk] : std::initializer_list<std::pair<int, int>>{
                     {1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                if (!grid.interior(i + di, k + dk)) dist[static_cast<std::size_t>(n)] = 1;
        }
        while (changed) {
            changed = false;
            for (int n = 0; n < grid.size(); ++n) {
                const auto [i, k] = grid.nodes[static_cast<std::size_t>(n)];
                for (auto [di, dk] : std::initializer_list<std::pair<int, int>>{
                         {1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                    if (!grid.interior(i + di, k + dk)) continue;
                    const int m = grid.id(i + di, k + dk);
                    if (dist[static_cast<std::size_t>(m)] + 1 < dist[static_cast<std::size_t>(n)]) {
                        dist[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(m)] + 1;
                        changed = true;
                    }
                }
            }
        }
        json trials = json::array();
        for (double d : cfg.poincare_deltas) {
            double worst = 0.0;
            for (int trial = 0; trial < cfg.poincare_trials; ++trial) {
                fd::CVector u = fd::CVector::Zero(grid.size());
                struct Blob { double x, y, s, a; };
                std::vector<Blob> blobs;
                for (int b = 0; b < 10; ++b) blobs.push_back({ux(rng), uy(rng), us(rng), ga(rng)});
                for (int n = 0; n < grid.size(); ++n) {
                    const double x = grid.x_of(n), y = grid.y_of(n);
                    double v = 0.0;
                    for (const auto& bl : blobs) {
                        const double r2 =
                            ((x - bl.x) * (x - bl.x) + (y - bl.y) * (y - bl.y)) / (2 * bl.s * bl.s);
                        v += bl.a * std::exp(-r2);
                    }
                    const double t = std::min(1.0, dist[static_cast<std::size_t>(n)] / 6.0);
                    u[n] = v * t * t * (3 - 2 * t);
                }
                const auto rep = identities::poincare_check(grid, u, d);
                worst = std::max(worst, rep.ratio - rep.bound);
                if (rep.ratio > rep.bound + 0.05) poincare_ok = false;
            }
            trials.push_back({{"delta", d}, {"worst_margin", worst}});
        }
        summary["poincare"] = trials;
    }
    summary["poincare_ok"] = poincare_ok;
    ctx.save("identities.json", summary.dump(2));
    return (factors_ok && poincare_ok) ? 0 : 2;
}

} // namespace

RunOutcome run(const ExperimentConfig& cfg, int jobs, const std::optional<std::string>& out_override) {
    RunOutcome out;
    RunContext ctx;
    ctx.dir = out_override.value_or(cfg.out_dir);
    io::ensure_dir(ctx.dir);
    const std::string started = io::now_iso8601();
    const auto t0 = std::chrono::steady_clock::now();

    ctx.save("config.json", cfg.canonical_json);
    json summary;
    summary["kind"] = to_string(cfg.kind);
    summary["domain"] = cfg.domain_name;
    int code = 0;
    switch (cfg.kind) {
        case Kind::check_geometry: code = run_check_geometry(cfg, ctx, summary); break;
        case Kind::sweep_resolvent: code = run_sweep(cfg, ctx, summary, jobs); break;
        case Kind::scan_resonances: code = run_scan(cfg, ctx, summary); break;
        case Kind::verify_resfree: code = run_resfree(cfg, ctx, summary); break;
        case Kind::propagate: code = run_propagate(cfg, ctx, summary); break;
        case Kind::verify_identities: code = run_identities(cfg, ctx, summary); break;
    }
    summary["exit_code"] = code;
    ctx.save("run_summary.json", summary.dump(2));

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    io::write_file(ctx.dir + "/manifest.json",
                   io::manifest_json(cfg.canonical_json, started, elapsed, ctx.files));
    out.exit_code = code;
    out.files = ctx.files;
    out.summary = summary.dump(2);
    return out;
}

std::string report(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir)) throw std::runtime_error("report: no such directory: " + dir);
    json all = json::array();
    std::vector<fs::path> paths;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() == "run_summary.json")
            paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
        json s = json::parse(io::read_file(p.string()));
        s["path"] = p.parent_path().string();
        all.push_back(s);
    }
    if (all.empty()) throw std::runtime_error("report: no run summaries under " + dir);

    std::ostringstream table;
    table << "kind                 domain               exit  highlights\n";
    for (const auto& s : all) {
        std::ostringstream hl;
        if (s.contains("theorem_class")) hl << "class=" << s["theorem_class"].get<std::string>() << " ";
        if (s.contains("fitted_slope")) hl << "slope=" << s["fitted_slope"].get<double>() << " ";
        if (s.contains("exponent")) hl << "exponent=" << s["exponent"].get<double>() << " ";
        if (s.contains("dips")) hl << "dips=" << s["dips"].size() << " ";
        char line[256];
        std::snprintf(line, sizeof(line), "%-20s %-20s %-5d %s\n",
                      s["kind"].get<std::string>().c_str(), s["domain"].get<std::string>().c_str(),
                      s["exit_code"].get<int>(), hl.str().c_str());
        table << line;
    }
    json out;
    out["runs"] = all;
    out["table"] = table.str();
    return out.dump(2);
}

} // namespace wsl::runner
