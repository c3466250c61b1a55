#include "wsl/resonance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wsl::resonance {

using Complex = std::complex<double>;

SigmaMinResult min_singular_value(dtn::ClosedSystem& sys, SigmaMinOptions opt) {
    SigmaMinResult r;
    const int n = static_cast<int>(sys.matrix().rows());
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    fd::CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();

    // ||A|| by a short power iteration on A^H A.
    fd::CVector w = v;
    double a_norm = 0.0;
    for (int it = 0; it < 30; ++it) {
        fd::CVector Aw = sys.matrix() * w;
        a_norm = Aw.norm();
        w = sys.matrix().adjoint() * Aw;
        const double nw = w.norm();
        if (nw == 0) break;
        w /= nw;
    }
    r.matrix_norm = a_norm;

    if (!sys.factorize()) {
        r.pole_hit = true;
        r.sigma_min_abs = 0.0;
        r.sigma_min_rel = 0.0;
        return r;
    }
    double sigma = 0.0, prev = -1.0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        fd::CVector s = sys.solve_adjoint(v);
        fd::CVector y = sys.solve(s);
        const double ny = y.norm();
        if (!(ny > 0) || !std::isfinite(ny)) {
            r.pole_hit = true;
            break;
        }
        sigma = 1.0 / std::sqrt(ny); // ||v|| = 1
        v = y / ny;
        if (prev > 0 && std::abs(sigma - prev) <= opt.tol * sigma) {
            ++it;
            break;
        }
        prev = sigma;
    }
    r.iterations = it;
    r.sigma_min_abs = r.pole_hit ? 0.0 : sigma;
    r.sigma_min_rel = a_norm > 0 ? r.sigma_min_abs / a_norm : r.sigma_min_abs;
    return r;
}

namespace {

double median_of(std::vector<double> vals) {
    vals.erase(std::remove_if(vals.begin(), vals.end(),
                              [](double v) { return !std::isfinite(v); }),
               vals.end());
    if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

struct SigmaEvaluator {
    const geom::WaveguideDomain* dom;
    const spectrum::ModeBasis* basis;
    fd::Grid grid;
    fd::DiscreteOperator op;
    SigmaMinOptions opt;

    SigmaEvaluator(const geom::WaveguideDomain& d, const spectrum::ModeBasis& b, double h,
                   double L, SigmaMinOptions o)
        : dom(&d), basis(&b), grid(fd::build_grid(d, h, L)), op(fd::assemble_laplacian(grid)),
          opt(o) {}

    // sigma_min at E + i0; NaN when the closure is singular (ramification).
    double at_boundary(double E) const {
        try {
            dtn::ClosedSystem sys(grid, op, riemann::BoundaryPoint{E, +1}, *basis);
            return min_singular_value(sys, opt).sigma_min_rel;
        } catch (const std::runtime_error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }

    double at_sheet(const riemann::SheetPoint& p) const {
        try {
            dtn::ClosedSystem sys(grid, op, p, *basis);
            return min_singular_value(sys, opt).sigma_min_rel;
        } catch (const std::runtime_error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    }
};

// Golden-section minimization of f over [a, b].
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, int evals) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < evals; ++i) {
        if (!(fd < fc)) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

} // namespace

PoleScanResult scan_real_axis(const geom::WaveguideDomain& dom, const spectrum::ModeBasis& basis,
                              double E_lo, double E_hi, int steps, double h, double L,
                              ScanOptions opt) {
    if (!dom.has_cylindrical_end())
        throw std::invalid_argument("scan_real_axis: domain has no cylindrical end");
    if (steps < 3) throw std::invalid_argument("scan_real_axis: need at least 3 steps");
    PoleScanResult out;
    SigmaEvaluator eval(dom, basis, h, L, opt.sigma);
    const double dE = (E_hi - E_lo) / steps;
    for (int i = 0; i <= steps; ++i) {
        const double E = E_lo + i * dE;
        const double s = eval.at_boundary(E);
        out.E.push_back(E);
        out.sigma_min.push_back(s);
        if (!std::isfinite(s)) out.skipped.push_back(E);
    }
    out.background_median = median_of(out.sigma_min);

    // Local minima below the trigger level become refinement candidates.
    std::vector<int> candidates;
    for (int i = 1; i + 1 < static_cast<int>(out.sigma_min.size()); ++i) {
        const double s = out.sigma_min[static_cast<std::size_t>(i)];
        if (!std::isfinite(s)) continue;
        const double sl = out.sigma_min[static_cast<std::size_t>(i - 1)];
        const double sr = out.sigma_min[static_cast<std::size_t>(i + 1)];
        const bool local_min = (!std::isfinite(sl) || s <= sl) && (!std::isfinite(sr) || s <= sr);
        if (local_min && s < opt.dip_trigger * out.background_median) candidates.push_back(i);
    }
    // Merge neighbors, keep the deeper representative.
    std::vector<int> merged;
    for (int c : candidates) {
        if (!merged.empty() && c - merged.back() <= 2) {
            if (out.sigma_min[static_cast<std::size_t>(c)] <
                out.sigma_min[static_cast<std::size_t>(merged.back())])
                merged.back() = c;
        } else {
            merged.push_back(c);
        }
    }

    std::optional<SigmaEvaluator> fine;
    for (int c : merged) {
        const double Ec = out.E[static_cast<std::size_t>(c)];
        auto f = [&](double E) {
            const double s = eval.at_boundary(E);
            return std::isfinite(s) ? s : 1e300;
        };
        auto [E_ref, s_ref] = golden_min(f, Ec - 2 * dE, Ec + 2 * dE, opt.refine_evals);
        if (!(s_ref < opt.dip_keep * out.background_median)) continue;
        Dip dip;
        dip.E_coarse = E_ref;
        dip.depth_coarse = s_ref;
        dip.background = out.background_median;
        dip.E = E_ref;
        dip.depth = s_ref;
        if (opt.check_persistence) {
            if (!fine) fine.emplace(dom, basis, eval.grid.h / 2.0, L, opt.sigma);
            auto ff = [&](double E) {
                const double s = fine->at_boundary(E);
                return std::isfinite(s) ? s : 1e300;
            };
            // dips drift O(h^2) between grid levels; bracket generously
            auto [E_fine, s_fine] = golden_min(ff, E_ref - 10 * dE, E_ref + 10 * dE, opt.refine_evals);
            // Local off-dip background on the fine grid.
            const double bg_fine = ff(std::min(E_fine + 10 * dE, E_hi));
            dip.persistent = s_fine < opt.dip_keep * bg_fine;
            if (dip.persistent) {
                dip.E = E_fine;
                dip.depth = s_fine;
            }
        } else {
            dip.persistent = true;
        }
        out.dips.push_back(dip);
    }
    std::sort(out.dips.begin(), out.dips.end(), [](const Dip& p, const Dip& q) { return p.E < q.E; });
    return out;
}

PoleRefinement locate_pole(const geom::WaveguideDomain& dom, const spectrum::ModeBasis& basis,
                           riemann::SheetPoint seed, double h, double L, SigmaMinOptions opt) {
    SigmaEvaluator eval(dom, basis, h, L, opt);
    PoleRefinement out;
    int evals = 0;
    auto f = [&](double re, double im) {
        ++evals;
        riemann::SheetPoint p{Complex(re, im), seed.flipped};
        const double s = eval.at_sheet(p);
        if (!std::isfinite(s)) {
            out.hit_ramification = true;
            return 1e300;
        }
        return s;
    };
    // Nelder-Mead on (Re z, Im z).
    const double scale = 0.01 * (1.0 + std::abs(seed.z));
    std::array<std::array<double, 2>, 3> X = {{{seed.z.real(), seed.z.imag()},
                                               {seed.z.real() + scale, seed.z.imag()},
                                               {seed.z.real(), seed.z.imag() + scale}}};
    std::array<double, 3> F = {f(X[0][0], X[0][1]), f(X[1][0], X[1][1]), f(X[2][0], X[2][1])};
    for (int it = 0; it < 60; ++it) {
        std::array<int, 3> ord = {0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return F[a] < F[b]; });
        if (std::hypot(X[ord[0]][0] - X[ord[2]][0], X[ord[0]][1] - X[ord[2]][1]) <
            1e-4 * (1.0 + std::abs(seed.z)))
            break;
        const auto& xb = X[ord[0]];
        const auto& xs = X[ord[1]];
        auto& xw = X[ord[2]];
        const double cx = 0.5 * (xb[0] + xs[0]), cy = 0.5 * (xb[1] + xs[1]);
        const double rx = cx + (cx - xw[0]), ry = cy + (cy - xw[1]);
        const double fr = f(rx, ry);
        if (fr < F[ord[0]]) {
            const double ex = cx + 2 * (cx - xw[0]), ey = cy + 2 * (cy - xw[1]);
            const double fe = f(ex, ey);
            if (fe < fr) { xw = {ex, ey}; F[ord[2]] = fe; }
            else { xw = {rx, ry}; F[ord[2]] = fr; }
        } else if (fr < F[ord[1]]) {
            xw = {rx, ry};
            F[ord[2]] = fr;
        } else {
            const double kx = cx + 0.5 * (xw[0] - cx), ky = cy + 0.5 * (xw[1] - cy);
            const double fk = f(kx, ky);
            if (fk < F[ord[2]]) { xw = {kx, ky}; F[ord[2]] = fk; }
            else {
                for (int i : {ord[1], ord[2]}) {
                    X[i] = {xb[0] + 0.5 * (X[i][0] - xb[0]), xb[1] + 0.5 * (X[i][1] - xb[1])};
                    F[i] = f(X[i][0], X[i][1]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (F[i] < F[best]) best = i;
    out.location = riemann::SheetPoint{Complex(X[best][0], X[best][1]), seed.flipped};
    out.sigma_min = F[best];
    out.evaluations = evals;

    SigmaEvaluator fine(dom, basis, eval.grid.h / 2.0, L, opt);
    const double sf = fine.at_sheet(out.location);
    out.sigma_min_fine = std::isfinite(sf) ? sf : 0.0;
    out.deepens = out.sigma_min_fine < out.sigma_min / 3.0;
    out.washes_out = out.sigma_min_fine > 3.0 * out.sigma_min;
    return out;
}

namespace {

riemann::SheetPoint ball_point(double E, double rho, double theta, bool lower,
                               const spectrum::ModeBasis& basis) {
    riemann::SheetPoint p;
    if (!lower) {
        p.z = Complex(E + rho * std::cos(theta), rho * std::sin(theta));
    } else {
        p.z = Complex(E + rho * std::cos(theta), -rho * std::sin(theta));
        for (int j = 1; j <= basis.size(); ++j)
            if (basis.sigma_sq(j) < E) p.flipped.insert(j);
    }
    return p;
}

} // namespace

ResFreeReport verify_resonance_free(const geom::WaveguideDomain& dom,
                                    const spectrum::ModeBasis& basis, double E,
                                    const ResFreeCalibration& cal, double h, double L,
                                    int samples, dtn::NormEstimateOptions nopt) {
    ResFreeReport rep;
    rep.E = E;
    rep.c1 = cal.c1;
    rep.c2 = cal.c2;
    rep.pole_floor = cal.pole_floor;
    rep.ball_radius = cal.c1 / (1.0 + E);
    if (!(rep.ball_radius > 0) || samples <= 0) {
        rep.ok = true;
        rep.vacuous = true;
        return rep;
    }
    fd::Grid grid = fd::build_grid(dom, h, L);
    fd::DiscreteOperator op = fd::assemble_laplacian(grid);
    const fd::CutoffParams chi_par{grid.R0 + 0.5, std::min(grid.R0 + 2.0, grid.L - 1.0)};
    const fd::WeightVector chi =
        fd::weight_diag(grid, fd::WeightName::cutoff_chi, 1.0, 0.0, false, chi_par);
    const riemann::BoundaryPoint center{E, +1};

    const int per_side = std::max(1, samples / 4);
    std::vector<riemann::SheetPoint> pts;
    for (double frac : {0.45, 0.85}) {
        for (int side = 0; side < 2; ++side) {
            for (int k = 0; k < per_side; ++k) {
                const double theta =
                    std::numbers::pi * (k + 0.5) / per_side * 0.9 + 0.05 * std::numbers::pi;
                // Bisect the Euclidean radius so the metric distance lands
                // near frac * ball_radius.
                double lo = 0.0, hi = rep.ball_radius * rep.ball_radius;
                auto dist_at = [&](double rho) {
                    auto p = ball_point(E, rho, theta, side == 1, basis);
                    return riemann::metric_d(p, center, basis);
                };
                double hi_grow = hi;
                while (dist_at(hi_grow) < frac * rep.ball_radius && hi_grow < 10.0)
                    hi_grow *= 2.0;
                hi = hi_grow;
                for (int b = 0; b < 40; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    if (dist_at(mid) < frac * rep.ball_radius) lo = mid;
                    else hi = mid;
                }
                pts.push_back(ball_point(E, 0.5 * (lo + hi), theta, side == 1, basis));
            }
        }
    }

    rep.ok = true;
    for (const auto& p : pts) {
        ResFreeSample s;
        s.point = p;
        s.dist = riemann::metric_d(p, center, basis);
        if (s.dist >= rep.ball_radius * 1.0000001) continue; // safety: stay inside the ball
        dtn::ClosedSystem sys(grid, op, p, basis);
        auto sres = min_singular_value(sys, SigmaMinOptions{nopt.seed, 1e-6, 80});
        s.sigma_min = sres.sigma_min_rel;
        if (sres.pole_hit || (cal.pole_floor > 0 && s.sigma_min < cal.pole_floor)) {
            rep.ok = false;
            rep.failure = "pole indicator below floor inside the ball";
        }
        if (!sres.pole_hit) {
            auto probe = dtn::estimate_weighted_norm(sys, chi.diag, 0.0, nopt);
            s.norm_estimate = probe.norm_estimate;
            if (cal.c2 > 0 && s.norm_estimate > cal.c2 * std::sqrt(1.0 + E)) {
                rep.ok = false;
                rep.failure = "cutoff resolvent norm exceeds c2 (1+E)^{1/2}";
            }
        }
        rep.samples.push_back(std::move(s));
    }
    if (rep.samples.empty()) {
        rep.ok = false;
        rep.failure = "sample set empty (ball too small vs grid resolution)";
    }
    return rep;
}

ResFreeCalibration calibrate_resonance_free(const geom::WaveguideDomain& dom,
                                            const spectrum::ModeBasis& basis,
                                            const std::vector<double>& E_train, double h,
                                            double L, int samples,
                                            dtn::NormEstimateOptions nopt) {
    ResFreeCalibration cal;
    cal.c1 = 0.5;
    double min_sigma = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (double E : E_train) {
        ResFreeCalibration probe_cal{cal.c1, 0.0, 0.0};
        auto rep = verify_resonance_free(dom, basis, E, probe_cal, h, L, samples, nopt);
        for (const auto& s : rep.samples) {
            min_sigma = std::min(min_sigma, s.sigma_min);
            max_ratio = std::max(max_ratio, s.norm_estimate / std::sqrt(1.0 + E));
        }
        if (rep.samples.empty())
            throw std::runtime_error("calibrate_resonance_free: no usable samples at E = " +
                                     std::to_string(E));
    }
    cal.pole_floor = min_sigma / 20.0;
    cal.c2 = 2.0 * max_ratio;
    return cal;
}

} // namespace wsl::resonance
