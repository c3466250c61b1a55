#include "wsl/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wsl::dtn {

namespace {

Complex sqrt_upper(Complex w) {
    Complex s = std::sqrt(w);
    if (s.imag() < 0.0) s = -s;
    if (s.imag() == 0.0 && s.real() < 0.0) s = -s;
    return s;
}

// Branch of sqrt(z - lambda) for one transverse mode at a surface point.
// Flips are matched by sigma value: tau_j is a single function of z on the
// surface, so equal-sigma channels share one branch.
Complex mode_xi(const riemann::SurfacePoint& p, double lambda, double sigma,
                const std::vector<double>& flipped_sigmas) {
    bool flip = false;
    for (double s : flipped_sigmas)
        if (std::abs(s - sigma) <= 1e-9 * (1.0 + sigma)) flip = true;
    if (std::holds_alternative<riemann::BoundaryPoint>(p)) {
        const auto& bp = std::get<riemann::BoundaryPoint>(p);
        const double gap = bp.E - lambda;
        Complex xi = gap >= 0 ? Complex(bp.side * std::sqrt(gap), 0.0)
                              : Complex(0.0, std::sqrt(-gap));
        return flip ? -xi : xi;
    }
    const auto& sp = std::get<riemann::SheetPoint>(p);
    Complex xi = sqrt_upper(sp.z - lambda);
    return flip ? -xi : xi;
}

// Exact discrete outgoing multiplier: the root of the one-step recurrence
// with |g| < 1 on the upper branch. g(-xi) = 1/g(xi).
Complex outgoing_multiplier(Complex xi, double h) {
    const Complex t2 = h * h * xi * xi;
    if (t2.real() > 3.0)
        throw std::runtime_error("dtn: h too coarse for this energy (mode beyond the discrete band)");
    return 1.0 - 0.5 * t2 + Complex(0, 1) * h * xi * std::sqrt(1.0 - 0.25 * t2);
}

} // namespace

ClosedSystem::ClosedSystem(const fd::Grid& grid, const fd::DiscreteOperator& op,
                           const riemann::SurfacePoint& point, const spectrum::ModeBasis& basis)
    : grid_(&grid), point_(point) {
    const double h = grid.h;
    const Complex z = std::holds_alternative<riemann::SheetPoint>(point)
                          ? std::get<riemann::SheetPoint>(point).z
                          : Complex(std::get<riemann::BoundaryPoint>(point).E, 0.0);

    std::vector<double> flipped_sigmas;
    if (std::holds_alternative<riemann::SheetPoint>(point)) {
        for (int j : std::get<riemann::SheetPoint>(point).flipped) {
            if (j < 1 || j > basis.size())
                throw std::invalid_argument("dtn: flipped mode index beyond the mode basis");
            flipped_sigmas.push_back(basis.sigma(j));
        }
    }

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(op.A.nonZeros()) + 4096);
    for (int col = 0; col < op.A.outerSize(); ++col)
        for (fd::SparseReal::InnerIterator it(op.A, col); it; ++it)
            trip.emplace_back(it.row(), it.col(), Complex(it.value(), 0.0));
    for (int n = 0; n < grid.size(); ++n) trip.emplace_back(n, n, -z);

    auto close_face = [&](const fd::Face& face, std::vector<FaceBlockModes>& blocks,
                          int& retained_total) {
        if (!face.present) return;
        const double span = std::abs(face.x - (face.x > 0 ? grid.R0 : -grid.R0));
        const double decay_span = std::max(span, grid.h);
        for (const auto& blk : face.blocks) {
            const int n = static_cast<int>(blk.node_ids.size());
            FaceBlockModes fm;
            fm.Phi.resize(n, n);
            fm.lambda.resize(static_cast<std::size_t>(n));
            fm.sigma.resize(static_cast<std::size_t>(n));
            const double nrm = std::sqrt(2.0 / (n + 1));
            for (int k = 1; k <= n; ++k) {
                for (int m = 1; m <= n; ++m)
                    fm.Phi(m - 1, k - 1) = nrm * std::sin(k * std::numbers::pi * m / (n + 1));
                const double s = std::sin(0.5 * k * std::numbers::pi / (n + 1));
                fm.lambda[static_cast<std::size_t>(k - 1)] = 4.0 / (h * h) * s * s;
                fm.sigma[static_cast<std::size_t>(k - 1)] = k * std::numbers::pi / blk.width;
            }
            // Retain the prefix of modes whose evanescent decay over the end
            // is not already below solver noise; flipped modes are always
            // retained.
            std::vector<Complex> all_xi(static_cast<std::size_t>(n));
            int retained = 0;
            for (int k = 0; k < n; ++k) {
                const double sig = fm.sigma[static_cast<std::size_t>(k)];
                all_xi[static_cast<std::size_t>(k)] =
                    mode_xi(point_, fm.lambda[static_cast<std::size_t>(k)], sig, flipped_sigmas);
                bool flip_forced = false;
                for (double s : flipped_sigmas)
                    if (std::abs(s - sig) <= 1e-9 * (1.0 + s)) flip_forced = true;
                if (all_xi[static_cast<std::size_t>(k)].imag() * decay_span < 30.0 || flip_forced)
                    retained = k + 1;
            }
            for (int k = 0; k < retained; ++k) {
                const Complex xi = all_xi[static_cast<std::size_t>(k)];
                if (std::abs(xi) <= 1e-9 * std::sqrt(1.0 + std::abs(z)))
                    throw std::runtime_error("threshold point: closure singular");
                fm.xi.push_back(xi);
            }
            fm.retained = retained;
            retained_total += retained;

            if (retained > 0) {
                Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(retained, retained);
                for (int k = 0; k < retained; ++k)
                    D(k, k) = outgoing_multiplier(fm.xi[static_cast<std::size_t>(k)], h);
                const Eigen::MatrixXd Phi_r = fm.Phi.leftCols(retained);
                const Eigen::MatrixXcd B =
                    (Phi_r.cast<Complex>() * D * Phi_r.transpose().cast<Complex>()) / (h * h);
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        trip.emplace_back(blk.node_ids[static_cast<std::size_t>(p)],
                                          blk.node_ids[static_cast<std::size_t>(q)], -B(p, q));
            }
            blocks.push_back(std::move(fm));
        }
    };
    close_face(grid.face_plus, closure_.blocks_plus, closure_.retained_plus);
    close_face(grid.face_minus, closure_.blocks_minus, closure_.retained_minus);

    A_.resize(grid.size(), grid.size());
    A_.setFromTriplets(trip.begin(), trip.end());
}

bool ClosedSystem::factorize() {
    if (lu_state_ != LuState::pending) return lu_state_ == LuState::ok;
    lu_ = std::make_shared<Eigen::SparseLU<fd::SparseComplex>>();
    lu_->compute(A_);
    lu_state_ = lu_->info() == Eigen::Success ? LuState::ok : LuState::singular;
    return lu_state_ == LuState::ok;
}

fd::CVector ClosedSystem::solve(const fd::CVector& rhs) const {
    if (lu_state_ != LuState::ok)
        throw std::runtime_error("near-singular: possible resonance at this sheet point");
    return lu_->solve(rhs);
}

fd::CVector ClosedSystem::solve_adjoint(const fd::CVector& rhs) const {
    return solve(rhs.conjugate()).conjugate();
}

double ClosedSystem::relative_residual(const fd::CVector& x, const fd::CVector& rhs) const {
    const double nb = rhs.norm();
    if (nb == 0.0) return 0.0;
    return (A_ * x - rhs).norm() / nb;
}

ResolventProbe estimate_weighted_norm(ClosedSystem& sys, const fd::Vector& weight_diag,
                                      double delta, NormEstimateOptions opt) {
    if (!sys.factorize())
        throw std::runtime_error("near-singular: possible resonance at this sheet point");

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = static_cast<int>(weight_diag.size());
    fd::CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    v /= v.norm();

    double sigma = 0.0, sigma_prev = -1.0;
    double worst_residual = 0.0;
    int it = 0;
    const auto W = weight_diag.array();
    for (; it < opt.max_iterations; ++it) {
        fd::CVector b = (W * v.array()).matrix();
        fd::CVector u = sys.solve(b);
        worst_residual = std::max(worst_residual, sys.relative_residual(u, b));
        fd::CVector Mv = (W * u.array()).matrix();
        sigma = Mv.norm(); // ||M v|| with ||v|| = 1: a valid lower bound
        if (sigma == 0.0) break;
        fd::CVector b2 = (W * Mv.array()).matrix();
        fd::CVector u2 = sys.solve_adjoint(b2);
        v = (W * u2.array()).matrix();
        const double nv = v.norm();
        if (nv == 0.0) break;
        v /= nv;
        if (sigma_prev > 0 && std::abs(sigma - sigma_prev) <= opt.tol * sigma) {
            ++it;
            break;
        }
        sigma_prev = sigma;
    }
    ResolventProbe probe;
    probe.point = sys.point();
    probe.delta = delta;
    probe.norm_estimate = sigma;
    probe.iterations = it;
    probe.relative_residual = worst_residual;
    const Complex z = riemann::base_z(sys.point());
    probe.E = z.real();
    probe.eps = z.imag();
    return probe;
}

SweepResult sweep_bound(const fd::Grid& grid, const fd::DiscreteOperator& op,
                        const spectrum::ModeBasis& basis, const std::vector<double>& E_values,
                        const std::vector<double>& eps_values, double delta, double x0,
                        bool one_ended, NormEstimateOptions opt, int jobs) {
    SweepResult result;
    const fd::WeightVector W =
        fd::weight_diag(grid, fd::WeightName::poly_minus, delta, x0, one_ended);

    struct Task {
        double E, eps;
    };
    std::vector<Task> tasks;
    for (double E : E_values)
        for (double eps : eps_values) tasks.push_back({E, eps});
    std::vector<ResolventProbe> probes(tasks.size());

    auto run_task = [&](std::size_t t) {
        riemann::SheetPoint p{Complex(tasks[t].E, tasks[t].eps), {}};
        ClosedSystem sys(grid, op, p, basis);
        probes[t] = estimate_weighted_norm(sys, W.diag, delta, opt);
    };
    if (jobs <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::vector<std::future<void>> futs;
        std::size_t next = 0;
        while (next < tasks.size()) {
            futs.clear();
            for (int w = 0; w < jobs && next < tasks.size(); ++w, ++next)
                futs.push_back(std::async(std::launch::async, run_task, next));
            for (auto& f : futs) f.get();
        }
    }
    result.probes = std::move(probes);

    // sup over eps per E, then a log-log least squares fit of the growth.
    result.sup_over_eps.assign(E_values.size(), 0.0);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const std::size_t ie = t / eps_values.size();
        result.sup_over_eps[ie] = std::max(result.sup_over_eps[ie], result.probes[t].norm_estimate);
    }
    if (E_values.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto m = static_cast<double>(E_values.size());
        for (std::size_t i = 0; i < E_values.size(); ++i) {
            const double lx = std::log(E_values[i]);
            const double ly = std::log(std::max(result.sup_over_eps[i], 1e-300));
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        result.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        result.slope_valid = true;
    }

    // Divergence flag: the estimate keeps growing as eps decreases, the
    // limiting-absorption failure signature at embedded thresholds.
    if (eps_values.size() >= 2) {
        for (std::size_t ie = 0; ie < E_values.size(); ++ie) {
            double at_min_eps = 0, at_max_eps = 0;
            double eps_min = 1e300, eps_max = -1e300;
            for (std::size_t je = 0; je < eps_values.size(); ++je) {
                const auto& pr = result.probes[ie * eps_values.size() + je];
                if (eps_values[je] < eps_min) { eps_min = eps_values[je]; at_min_eps = pr.norm_estimate; }
                if (eps_values[je] > eps_max) { eps_max = eps_values[je]; at_max_eps = pr.norm_estimate; }
            }
            if (at_min_eps > 4.0 * std::max(at_max_eps, 1e-300))
                result.divergence_flags.push_back(static_cast<int>(ie));
        }
    }
    return result;
}

} // namespace wsl::dtn
