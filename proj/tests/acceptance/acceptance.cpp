// Acceptance suite: one numbered check per inequality/identity family, each
// printing a single PASS/FAIL line. Run as `wsl_acceptance <n>` for one
// criterion or `wsl_acceptance all`.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "modal_oracle.hpp"
#include "wsl/dtn.hpp"
#include "wsl/experiment.hpp"
#include "wsl/geometry.hpp"
#include "wsl/identities.hpp"
#include "wsl/io.hpp"
#include "wsl/resonance.hpp"
#include "wsl/riemann.hpp"
#include "wsl/waves.hpp"
#include "wsl/weights.hpp"

using namespace wsl;
namespace nb = std::numbers;

namespace {

bool g_pass = true;

void verdict(int crit, bool ok, const std::string& what) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", crit, what.c_str());
    std::fflush(stdout);
    if (!ok) g_pass = false;
}

std::string fmt2(double v) { return io::fmt(v); }

spectrum::ModeBasis basis_of(const geom::WaveguideDomain& dom, int J) {
    return spectrum::modes(
        dom.end_plus.kind == geom::EndKind::cylindrical ? dom.end_plus.Y : dom.end_minus.Y, J);
}

// --------------------------------------------------------------- criterion 1
void criterion_1() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"half_strip", "cigar", "parabola", "hourglass"}) {
        const auto rep = geom::check_star_shaped_x(geom::gallery(name), 512);
        const bool good = rep.sup_x_nu_x <= 1e-10 && rep.violating_points.empty();
        ok = ok && good;
        detail += std::string(name) + " sup=" + fmt2(rep.sup_x_nu_x) + "; ";
    }
    const auto obs = geom::gallery("strip_minus_convex", R"({"a":0.5,"b":0.3,"tilt":0.6})");
    const auto rep = geom::check_star_shaped_x(obs, 512);
    const bool violates = rep.sup_x_nu_x > 1e-10 && !rep.violating_points.empty();
    ok = ok && violates;
    detail += "off-axis obstacle violations=" + std::to_string(rep.violating_points.size());
    verdict(1, ok, "star-shaped dichotomy: " + detail);
}

// --------------------------------------------------------------- criterion 2
void criterion_2() {
    const double h = nb::pi / 64, L = 40.0, delta = 1.0;
    const auto dom = geom::gallery("half_strip");
    const auto grid = fd::build_grid(dom, h, L);
    const auto op = fd::assemble_laplacian(grid);
    const auto basis = basis_of(dom, 24);
    const auto W = fd::weight_diag(grid, fd::WeightName::poly_minus, delta, 0.0, true);

    wsl_test::ModalOracleConfig ocfg;
    ocfg.h = grid.h;
    ocfg.L = L;
    ocfg.delta = delta;
    ocfg.half_line = true;
    ocfg.discrete_lambda = true;
    ocfg.n_transverse = grid.My - 1;

    bool ok = true;
    std::string detail;
    for (const std::complex<double> z :
         {std::complex<double>{1, 1}, {4, 0.5}, {25, 0.1}, {100, 0.01}}) {
        dtn::ClosedSystem sys(grid, op, riemann::SheetPoint{z, {}}, basis);
        const auto probe = dtn::estimate_weighted_norm(sys, W.diag, delta);
        const double bound = 3.0 / delta * (1.0 + std::sqrt(std::abs(z)));
        const double oracle = wsl_test::modal_weighted_norm(z, ocfg);
        const bool below = probe.norm_estimate <= 1.07 * bound;
        const bool matches = std::abs(probe.norm_estimate - oracle) <= 0.03 * oracle;
        ok = ok && below && matches;
        detail += "z=" + fmt2(z.real()) + "+" + fmt2(z.imag()) + "i est=" +
                  fmt2(probe.norm_estimate) + " oracle=" + fmt2(oracle) + " bound=" +
                  fmt2(bound) + "; ";
    }
    verdict(2, ok, "one-ended resolvent bound + modal cross-validation: " + detail);
}

// --------------------------------------------------------------- criterion 3
void criterion_3() {
    const std::vector<double> Es{25, 50, 100, 200, 400};
    const std::vector<double> eps{1.0, 0.3, 0.1, 0.03};
    bool ok = true;
    std::string detail;
    struct Case {
        const char* name;
        const char* params;
        double h, L;
    };
    for (const Case c : {Case{"hourglass", "{}", 0.03, 8.0},
                         Case{"strip_minus_convex", R"({"a":0.5,"b":0.5})", 0.03, 6.0}}) {
        const auto dom = geom::gallery(c.name, c.params);
        const auto grid = fd::build_grid(dom, c.h, c.L);
        const auto op = fd::assemble_laplacian(grid);
        const auto basis = basis_of(dom, 48);
        const auto res =
            dtn::sweep_bound(grid, op, basis, Es, eps, 1.0, dom.x0, false, {}, 4);
        const bool in_window = res.fitted_slope <= 0.6 && res.fitted_slope >= 0.2;
        ok = ok && in_window;
        detail += std::string(c.name) + " slope=" + fmt2(res.fitted_slope) + "; ";
    }
    verdict(3, ok,
            "high-energy sweep slope in [0.2, 0.6]: " + detail +
                (ok ? "" : "(measured sup_eps norms decay between thresholds at eps >= 0.03; "
                           "the E^{1/2} law is an upper bound, not an observed growth rate)"));
}

// --------------------------------------------------------------- criterion 4
void criterion_4() {
    resonance::ScanOptions opt;
    opt.sigma.tol = 3e-4;
    opt.sigma.max_iterations = 40;
    opt.check_persistence = true;

    // Product cylinder R x (0, pi): persistent dips at the thresholds.
    const auto strip =
        geom::gallery("product_cylinder", R"({"y0":0.0,"y1":3.141592653589793,"R0":0.5})");
    const auto scan = resonance::scan_real_axis(strip, basis_of(strip, 12), 1.1, 20.0, 1890,
                                                nb::pi / 96, 0.7, opt);
    bool ok = true;
    std::string detail = "product dips:";
    for (double thr : {4.0, 9.0, 16.0}) {
        double best = 1e9;
        bool persistent = false;
        for (const auto& d : scan.dips) {
            if (std::abs(d.E - thr) < std::abs(best - thr)) {
                best = d.E;
                persistent = d.persistent;
            }
        }
        const bool good = std::abs(best - thr) <= 1e-2 && persistent;
        ok = ok && good;
        detail += " " + fmt2(best) + (persistent ? "" : "(!)");
    }
    // Edge of the scan at the first threshold: the profile decays toward it.
    double first = scan.sigma_min.front();
    double at_14 = 1e9;
    for (std::size_t i = 0; i < scan.E.size(); ++i)
        if (std::abs(scan.E[i] - 1.4) < 5e-3) at_14 = scan.sigma_min[i];
    detail += " edge(1.1 vs 1.4)=" + fmt2(first) + "/" + fmt2(at_14);

    // Cigar and hourglass: no persistent dips.
    const auto cig = geom::gallery("cigar");
    const auto scan2 =
        resonance::scan_real_axis(cig, basis_of(cig, 12), 1.1, 20.0, 1890, 0.04, 1.7, opt);
    int pc = 0;
    for (const auto& d : scan2.dips) pc += d.persistent;
    const auto hour = geom::gallery("hourglass");
    const auto scan3 =
        resonance::scan_real_axis(hour, basis_of(hour, 12), 1.1, 20.0, 1890, 0.06, 2.5, opt);
    int ph = 0;
    for (const auto& d : scan3.dips) ph += d.persistent;
    ok = ok && pc == 0 && ph == 0;
    detail += "; cigar dips=" + std::to_string(pc) + " hourglass dips=" + std::to_string(ph);
    verdict(4, ok, "threshold-resonance dichotomy: " + detail);
}

// --------------------------------------------------------------- criterion 5
void criterion_5() {
    const auto dom = geom::gallery("hourglass");
    const auto basis = basis_of(dom, 40);
    const double h = 0.05, L = 6.0;
    const auto cal = resonance::calibrate_resonance_free(dom, basis, {30.0, 60.0}, h, L, 20);
    bool ok = true;
    std::string detail = "c1=" + fmt2(cal.c1) + " c2=" + fmt2(cal.c2) +
                         " floor=" + fmt2(cal.pole_floor) + ";";
    for (double E : {45.0, 90.0, 120.0}) {
        const auto rep = resonance::verify_resonance_free(dom, basis, E, cal, h, L, 20);
        bool flipped_present = false;
        for (const auto& s : rep.samples) flipped_present |= !s.point.flipped.empty();
        const bool good = rep.ok && rep.samples.size() >= 10 && flipped_present;
        ok = ok && good;
        detail += " E=" + fmt2(E) + (rep.ok ? " ok" : " FAIL(" + rep.failure + ")");
    }
    verdict(5, ok, "resonance-free metric balls: " + detail);
}

// --------------------------------------------------------------- criterion 6
void criterion_6() {
    bool ok = true;
    std::string detail;
    {
        const auto dom = geom::gallery("half_strip", R"({"x_rep":400.0})");
        const double L = 100.0 * nb::pi;
        const auto grid = fd::build_grid(dom, nb::pi / 100, L);
        const auto op = fd::assemble_laplacian(grid);
        auto [f1, f2] = waves::initial_bump(grid, 4.0, nb::pi / 2, 1.5);
        const auto chi =
            fd::weight_diag(grid, fd::WeightName::cutoff_chi, 0.0, 4.0, false, {4.0, 8.0});
        waves::PropagateOptions wopt;
        wopt.cfl = 0.6;
        wopt.sample_dt = 0.25;
        wopt.horizon = waves::reflection_horizon(grid, 4.0 + 1.5);
        const auto series =
            waves::propagate(grid, op, {f1, f2, 0.0}, 200.0, wopt, &chi.diag);
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : series.samples) pts.push_back({s.t, s.norm_m0});
        const auto fit = waves::fit_decay(pts, 20.0, 200.0, true);
        const bool good = fit.exponent >= -1.8 && fit.exponent <= -1.2;
        ok = ok && good;
        detail += "half_strip(" + std::to_string(grid.size()) +
                  " dof) exponent=" + fmt2(fit.exponent) + "; ";
    }
    {
        const auto dom = geom::gallery("cigar", R"({"x_rep":400.0})");
        const auto grid = fd::build_grid(dom, 2.0 / 64, 250.0);
        const auto op = fd::assemble_laplacian(grid);
        auto [f1, f2] = waves::initial_bump(grid, 4.0, 0.0, 0.8);
        const auto chi =
            fd::weight_diag(grid, fd::WeightName::cutoff_chi, 0.0, 4.0, false, {4.0, 8.0});
        waves::PropagateOptions wopt;
        wopt.cfl = 0.6;
        wopt.sample_dt = 0.25;
        wopt.horizon = waves::reflection_horizon(grid, 4.0 + 0.8);
        // The ball supports marginally trapped diameter orbits whose algebraic
        // leakage dominates early times; the t^{-1} law needs a later window.
        const auto series =
            waves::propagate(grid, op, {f1, f2, 0.0}, 400.0, wopt, &chi.diag);
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : series.samples) pts.push_back({s.t, s.norm_m0});
        const auto fit = waves::fit_decay(pts, 40.0, 400.0, true);
        const bool good = fit.exponent <= -1.0;
        ok = ok && good;
        detail += "cigar exponent=" + fmt2(fit.exponent);
    }
    verdict(6, ok, "local-energy decay rates: " + detail);
}

// --------------------------------------------------------------- criterion 7
void criterion_7() {
    bool ok = true;
    std::string detail;
    struct Case {
        const char* name;
        const char* params;
        double L;
        bool one_ended;
    };
    const auto cases = {
        Case{"half_strip", "{}", 24.0, true},
        Case{"full_strip", R"({"y0":0.0,"y1":3.141592653589793})", 12.0, false},
        Case{"product_cylinder",
             R"({"intervals":[[0.0,3.141592653589793],[4.71238898038469,7.853981633974483]]})",
             12.0, false},
    };
    const double E = 4.0, eps = 0.5, R = 4.0;
    for (const auto& c : cases) {
        const auto dom = geom::gallery(c.name, c.params);
        std::array<std::map<std::string, double>, 2> res;
        for (int lvl = 0; lvl < 2; ++lvl) {
            const double h = lvl == 0 ? nb::pi / 32 : nb::pi / 64;
            const auto grid = fd::build_grid(dom, h, c.L);
            const auto op = fd::assemble_laplacian(grid);
            const auto basis = basis_of(dom, 16);
            dtn::ClosedSystem sys(grid, op, riemann::SheetPoint{{E, eps}, {}}, basis);
            sys.factorize();
            fd::CVector rhs = fd::CVector::Zero(grid.size());
            const double xc = c.one_ended ? grid.R0 + 1.0 : 0.0;
            for (int n = 0; n < grid.size(); ++n) {
                const double dx = grid.x_of(n) - xc, dy = grid.y_of(n) - 1.9;
                const double r2 = (dx * dx + dy * dy) / 0.36;
                if (r2 < 1.0) rhs[n] = std::exp(1.0 - 1.0 / (1.0 - r2));
            }
            fd::CVector u = sys.solve(rhs);
            for (int n = 0; n < grid.size(); ++n) {
                const double x = grid.x_of(n);
                double t = 1.0;
                const double margin = 2.0;
                if (grid.face_plus.present)
                    t = std::min(t, std::max(0.0, (grid.face_plus.x - margin - x) / margin + 1.0));
                if (grid.face_minus.present)
                    t = std::min(t,
                                 std::max(0.0, (x - (grid.face_minus.x + margin)) / margin + 1.0));
                t = std::clamp(t, 0.0, 1.0);
                u[n] *= t * t * (3 - 2 * t);
            }
            const auto w = c.one_ended ? weights::basic_weight(1.0)
                                       : weights::flaring_weight(1.0, 1.0, 0.5);
            const auto mu = weights::bump_mu(xc - 2.0, xc + 2.0);
            res[static_cast<std::size_t>(lvl)]["morawetz"] =
                identities::morawetz_residual(grid, op, u, w, E, eps).residual;
            res[static_cast<std::size_t>(lvl)]["ibpe"] =
                identities::ibpe_residual(grid, op, u, mu, E, eps).residual;
            res[static_cast<std::size_t>(lvl)]["ibpy"] =
                identities::ibpy_residual(grid, op, u, E, eps, identities::IbpyVariant::yj)
                    .residual;
            res[static_cast<std::size_t>(lvl)]["ak"] =
                identities::ibpy_residual(grid, op, u, E, eps,
                                          identities::IbpyVariant::translation)
                    .residual;
            const auto tr = identities::eigenvalue_identity_check(grid, op, u, E, eps, R);
            res[static_cast<std::size_t>(lvl)]["xrint1"] = tr.real_part.residual;
            res[static_cast<std::size_t>(lvl)]["xrint2"] = tr.imag_part.residual;
        }
        double worst = 1e9;
        for (const auto& [k, v] : res[0]) {
            const double f = v / std::max(res[1].at(k), 1e-300);
            worst = std::min(worst, f);
            if (f < 1.5) detail += std::string(c.name) + ":" + k + "=" + fmt2(f) + "(!) ";
        }
        ok = ok && worst >= 1.5;
        detail += std::string(c.name) + " min-factor=" + fmt2(worst) + "; ";
    }

    // Poincare constant over randomized trials on the cigar grid.
    const auto cig = geom::gallery("cigar");
    const auto grid = fd::build_grid(cig, 2.0 / 32, 8.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> px(0.0, 8.0), py(-1.0, 1.0), ps(0.3, 1.2);
    std::normal_distribution<double> ga(0.0, 1.0);
    bool poincare_ok = true;
    double worst_margin = -1e9;
    for (double delta : {0.1, 0.5, 1.0}) {
        for (int trial = 0; trial < 1000; ++trial) {
            fd::CVector u = fd::CVector::Zero(grid.size());
            struct Blob {
                double x, y, sc, a;
            };
            std::vector<Blob> blobs;
            for (int b = 0; b < 8; ++b) blobs.push_back({px(rng), py(rng), ps(rng), ga(rng)});
            for (int n = 0; n < grid.size(); ++n) {
                const double x = grid.x_of(n), y = grid.y_of(n);
                double v = 0.0;
                for (const auto& bl : blobs)
                    v += bl.a * std::exp(-((x - bl.x) * (x - bl.x) + (y - bl.y) * (y - bl.y)) /
                                         (2 * bl.sc * bl.sc));
                const double dwall = std::min({std::abs(y - 1.0), std::abs(y + 1.0), x});
                u[n] = v * std::min(1.0, dwall / (4 * grid.h));
            }
            const auto rep = identities::poincare_check(grid, u, delta);
            worst_margin = std::max(worst_margin, rep.ratio - rep.bound);
            if (rep.ratio > rep.bound + 0.05) poincare_ok = false;
        }
    }
    ok = ok && poincare_ok;
    detail += "poincare worst margin=" + fmt2(worst_margin);
    verdict(7, ok, "identity suite refinement + poincare: " + detail);
}

// --------------------------------------------------------------- criterion 8
void criterion_8() {
    bool ok = true;
    std::string detail;
    {
        const double delta = 1.0;
        const auto W = weights::build_convex_weight(delta, {-2.0, -1.0, 0.0, 1.0, 2.0});
        auto g = [&](double x) { return delta * std::pow(1.0 + std::abs(x), -1.0 - delta); };
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = -6.0 + 12.0 * i / 1000.0;
            if (!(W.w_plus_prime(x) > 0.0) || !(W.w_minus_prime(x) > 0.0)) worst = 1e9;
            if (x < -2.0 || x > 2.0) {
                worst = std::max(worst, std::abs(W.w_plus(x) - W.w_minus(x)));
                worst = std::max(worst, std::abs(W.w_plus_prime(x) - g(x)));
            }
            if (std::abs(x - (-1.0)) < W.rho0 || std::abs(x - 1.0) < W.rho0) {
                worst = std::max(worst, std::abs(W.w_plus_prime(x) - g(x)));
                worst = std::max(worst, std::abs(W.w_minus_prime(x) - g(x)));
            }
        }
        worst = std::max(worst, std::abs(W.w_plus(1.0)));
        worst = std::max(worst, std::abs(W.w_minus(-1.0)));
        ok = ok && worst <= 1e-8;
        detail += "bullet deviation=" + fmt2(worst) + "; ";
    }
    {
        // Tilted-ellipse obstacle: w nu_x <= 0 on the obstacle boundary with
        // equality only near the top/bottom extremal points.
        const double a = 0.5, b = 0.3, tilt = 0.6;
        const auto dom =
            geom::gallery("strip_minus_convex", R"({"a":0.5,"b":0.3,"tilt":0.6})");
        const double ct = std::cos(tilt), st = std::sin(tilt);
        auto pt = [&](double th) {
            return geom::Vec2{ct * a * std::cos(th) - st * b * std::sin(th),
                              st * a * std::cos(th) + ct * b * std::sin(th)};
        };
        const double th_top = std::atan2(b * ct, a * st);
        const double th_right = std::atan2(-b * st, a * ct);
        const geom::Vec2 pM = pt(th_top), pm = pt(th_top + nb::pi);
        const geom::Vec2 pR = pt(th_right), pL = pt(th_right + nb::pi);
        const double x_minus = pL.x, x_plus = pR.x;
        const double x_m = pm.x, x_M = pM.x;
        const double r1 = std::min({x_plus - x_M, x_M - x_m, x_m - x_minus}) / 3.0;
        const auto W = weights::build_convex_weight(
            1.0, {x_minus + r1, x_m, 0.5 * (x_m + x_M), x_M, x_plus - r1});

        int obst_idx = -1;
        for (int s = 0; s < static_cast<int>(dom.segments.size()); ++s)
            if (dom.segments[static_cast<std::size_t>(s)].on_obstacle) obst_idx = s;
        auto wrap = [](double t) {
            while (t <= -nb::pi) t += 2 * nb::pi;
            while (t > nb::pi) t -= 2 * nb::pi;
            return t;
        };
        auto in_upper_arc = [&](double th) {
            const double rel = wrap(th - th_right);
            return rel > 0 && rel < nb::pi;
        };
        double worst_pos = -1e9, closest_eq = 1e9;
        bool sign_ok = true;
        for (int i = 0; i < 2000; ++i) {
            const double t = (i + 0.5) / 2000.0;
            const double th = 2 * nb::pi * t;
            const auto nu = geom::outward_normal(dom, obst_idx, t);
            const auto p = dom.segments[static_cast<std::size_t>(obst_idx)].position(t);
            const double w = in_upper_arc(th) ? W.w_plus(p.x) : W.w_minus(p.x);
            const double v = w * nu.x;
            worst_pos = std::max(worst_pos, v);
            const double d_apex =
                std::min(std::hypot(p.x - pM.x, p.y - pM.y), std::hypot(p.x - pm.x, p.y - pm.y));
            if (v > -1e-4 && d_apex > 0.15) sign_ok = false;
            if (std::abs(v) < 1e-6) closest_eq = std::min(closest_eq, d_apex);
        }
        ok = ok && worst_pos <= 1e-10 && sign_ok;
        detail += "ellipse w*nu_x sup=" + fmt2(worst_pos) + " eq-points within " +
                  fmt2(closest_eq) + " of apexes";
    }
    verdict(8, ok, "convex-obstacle weight construction: " + detail);
}

// --------------------------------------------------------------- criterion 9
void criterion_9() {
    namespace fs = std::filesystem;
    const std::string base = (fs::temp_directory_path() / "wsl_acceptance_det").string();
    fs::remove_all(base);
    const std::vector<std::string> configs = {
        R"({"experiment":"check-geometry","domain":{"type":"cigar"}})",
        R"({"experiment":"sweep-resolvent","domain":{"type":"half_strip"},"h":0.13089969389957471827,
            "L":10.0,"delta":1.0,"E":[2.0,4.0],"eps":[0.5,0.1],"seed":42})",
        R"({"experiment":"scan-resonances","domain":{"type":"product_cylinder",
            "params":{"y0":0.0,"y1":3.141592653589793,"R0":0.5}},
            "h":0.0654498469497874,"L":0.7,"scan":{"emin":3.5,"emax":4.3,"steps":40}})",
        R"({"experiment":"verify-resfree","domain":{"type":"cigar"},"h":0.0833333333333333,
            "L":3.0,"modes":16,"resfree":{"calibrate":[8.0],"verify":[11.0],"samples":8}})",
        R"({"experiment":"propagate","domain":{"type":"half_strip"},"h":0.19634954084936207,
            "L":20.0,"wave":{"T":10.0,"bump_x":4.0,"bump_y":1.5707963267948966,"bump_r":1.0}})",
        R"({"experiment":"verify-identities","domain":{"type":"half_strip"},
            "h":0.19634954084936207,"L":12.0,
            "identities":{"E":4.0,"eps":0.5,"R":4.0,"trials":50,"deltas":[1.0]}})",
    };
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto cfg = runner::parse_config(configs[i]);
        const std::string d1 = base + "/a" + std::to_string(i);
        const std::string d2 = base + "/b" + std::to_string(i);
        runner::run(cfg, 1, d1);
        runner::run(cfg, 2, d2);
        for (const auto& e : fs::directory_iterator(d1)) {
            const auto name = e.path().filename().string();
            if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
            const auto c1 = io::read_file(e.path().string());
            const auto c2 = io::read_file(d2 + "/" + name);
            if (c1 != c2) {
                ok = false;
                detail += name + " differs in " + runner::to_string(cfg.kind) + "; ";
            }
        }
    }
    if (ok) detail = "all CSV outputs byte-identical across reruns and worker counts";
    verdict(9, ok, "infrastructure determinism: " + detail);
}

} // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    auto want = [&](int n) { return which == "all" || which == std::to_string(n); };
    if (want(1)) criterion_1();
    if (want(2)) criterion_2();
    if (want(3)) criterion_3();
    if (want(4)) criterion_4();
    if (want(5)) criterion_5();
    if (want(6)) criterion_6();
    if (want(7)) criterion_7();
    if (want(8)) criterion_8();
    if (want(9)) criterion_9();
    return g_pass ? 0 : 1;
}
