#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseLU>

#include "wsl/cross_section.hpp"
#include "wsl/grid.hpp"
#include "wsl/riemann.hpp"

namespace wsl::dtn {

using Complex = std::complex<double>;

/// Modal data of one truncation-face interval block: discrete transverse
/// eigenvectors (orthonormal under the plain dot product), their eigenvalues,
/// and the per-mode outgoing multipliers at the current surface point.
struct FaceBlockModes {
    Eigen::MatrixXd Phi;          // n x n, column k-1 = k-th sine vector
    std::vector<double> lambda;   // discrete eigenvalues (4/h^2) sin^2(k pi h / (2W))
    std::vector<double> sigma;    // continuum sqrt-eigenvalues k pi / W
    std::vector<Complex> xi;      // branch of sqrt(z - lambda_k), retained modes
    int retained = 0;             // modes kept in the closure (rest: Dirichlet ghost)
};

struct DtnClosure {
    std::vector<FaceBlockModes> blocks_minus, blocks_plus;
    int retained_minus = 0, retained_plus = 0;
};

/// Sparse closed system A(z) = -Laplace_h - z with the truncation-face ghost
/// columns eliminated through the exact discrete outgoing relation
/// ghost = Phi diag(g(xi)) Phi^T face, g(xi) = 1 - h^2 xi^2/2 + i h xi sqrt(1 - h^2 xi^2/4).
/// The matrix is complex symmetric.
class ClosedSystem {
  public:
    ClosedSystem(const fd::Grid& grid, const fd::DiscreteOperator& op,
                 const riemann::SurfacePoint& point, const spectrum::ModeBasis& basis);

    /// Factorizes on first use. Returns false when the matrix is numerically
    /// singular (a pole hit, reported instead of thrown).
    bool factorize();
    bool factorized() const { return lu_state_ == LuState::ok; }
    bool singular() const { return lu_state_ == LuState::singular; }

    /// Direct solve; refuses when the factorization failed.
    fd::CVector solve(const fd::CVector& rhs) const;
    /// Adjoint solve, using conj(solve(conj(b))) (the matrix is symmetric).
    fd::CVector solve_adjoint(const fd::CVector& rhs) const;
    double relative_residual(const fd::CVector& x, const fd::CVector& rhs) const;

    const fd::SparseComplex& matrix() const { return A_; }
    const DtnClosure& closure() const { return closure_; }
    const fd::Grid& grid() const { return *grid_; }
    const riemann::SurfacePoint& point() const { return point_; }

  private:
    const fd::Grid* grid_;
    riemann::SurfacePoint point_;
    fd::SparseComplex A_;
    DtnClosure closure_;
    enum class LuState { pending, ok, singular } lu_state_ = LuState::pending;
    std::shared_ptr<Eigen::SparseLU<fd::SparseComplex>> lu_;
};

struct ResolventProbe {
    riemann::SurfacePoint point;
    double delta = 0.0;
    double norm_estimate = 0.0;   // certified lower bound on ||W R(z) W||
    int iterations = 0;
    double relative_residual = 0.0;
    double E = 0.0, eps = 0.0;
};

struct NormEstimateOptions {
    unsigned seed = 42;
    double tol = 1e-4;
    int max_iterations = 300;
};

/// Power iteration on (W R W)^* (W R W); every application is one solve plus
/// one adjoint solve. Returns a certified lower bound on the top singular
/// value together with iteration and residual diagnostics.
ResolventProbe estimate_weighted_norm(ClosedSystem& sys, const fd::Vector& weight_diag,
                                      double delta, NormEstimateOptions opt = {});

struct SweepResult {
    std::vector<ResolventProbe> probes;
    double fitted_slope = 0.0;      // log-log slope of sup_eps estimate vs E
    bool slope_valid = false;
    std::vector<double> sup_over_eps; // per E value
    std::vector<int> divergence_flags; // indices into the E list
};

/// Sweeps z = E + i eps over the physical sheet with the
/// (1+|x-x0|)^{-(3+delta)/2} weights and fits the growth of the sup over eps.
SweepResult sweep_bound(const fd::Grid& grid, const fd::DiscreteOperator& op,
                        const spectrum::ModeBasis& basis, const std::vector<double>& E_values,
                        const std::vector<double>& eps_values, double delta, double x0,
                        bool one_ended, NormEstimateOptions opt = {}, int jobs = 1);

} // namespace wsl::dtn
