#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wsl/geometry.hpp"

namespace wsl::fd {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

/// One disjoint block of a truncation face: the interior grid nodes spanning
/// a single cross-section interval, ordered by y.
struct FaceInterval {
    std::vector<int> node_ids;
    double width = 0.0;   // interval width (b - a)
    double a = 0.0;       // interval left endpoint
};

struct Face {
    bool present = false;
    int column = -1;                    // interior column index i of the face
    double x = 0.0;                     // x-coordinate of that column
    std::vector<FaceInterval> blocks;   // one per cross-section interval
};

/// Uniform staircase grid on the truncated domain. Lattice points are
/// (x_lo + i*h, y_lo + k*h); interior unknowns carry dense indices.
struct Grid {
    double h = 0.0;
    double x_lo = 0.0, y_lo = 0.0;
    int Mx = 0, My = 0;             // cells per direction; lattice is (Mx+1)x(My+1)
    std::vector<int> node_id;       // (Mx+1)*(My+1), -1 = exterior
    std::vector<std::pair<int, int>> nodes; // node id -> (i, k)
    Face face_minus, face_plus;     // DtN truncation faces (cylindrical ends)
    double R0 = 0.0;
    double L = 0.0;
    bool l_margin_ok = true;        // L exceeds R0 + 5 cross-section diameters

    int size() const { return static_cast<int>(nodes.size()); }
    int id(int i, int k) const { return node_id[static_cast<std::size_t>(i) * (My + 1) + k]; }
    double x_of(int node) const { return x_lo + nodes[static_cast<std::size_t>(node)].first * h; }
    double y_of(int node) const { return y_lo + nodes[static_cast<std::size_t>(node)].second * h; }
    bool interior(int i, int k) const {
        return i >= 0 && i <= Mx && k >= 0 && k <= My && id(i, k) >= 0;
    }
};

/// Builds the staircase mask over [x range] x [y_lo, y_hi] with spacing h
/// snapped so the transverse walls land on lattice lines. Throws when h is
/// too coarse (fewer than 8 nodes across the narrowest end channel) or the
/// domain has an open (non-cylindrical) unbounded end.
Grid build_grid(const geom::WaveguideDomain& dom, double h, double L);

/// Sparse symmetric -Laplace_h (5-point stencil, Dirichlet outside the mask).
struct DiscreteOperator {
    SparseReal A;
    double h = 0.0;
};

DiscreteOperator assemble_laplacian(const Grid& grid);

enum class WeightName { poly_minus, poly_plus, morawetz_w, cutoff_chi };
WeightName weight_name_from_string(const std::string& s);

struct CutoffParams {
    double r_inner = 1.0; // chi == 1 for |x - x0| <= r_inner
    double r_outer = 2.0; // chi == 0 for |x - x0| >= r_outer
};

struct WeightVector {
    WeightName name;
    Vector diag;
};

/// Nodewise weight evaluation. poly weights use (1+|x-x0|)^{-+(3+delta)/2};
/// morawetz_w is the one-ended 1-(1+x)^{-delta} and requires x >= 0 on the
/// grid, as does `one_ended` for the poly weights (the single-end form).
WeightVector weight_diag(const Grid& grid, WeightName name, double delta, double x0,
                         bool one_ended = false, CutoffParams cutoff = {});

/// Discrete d/dx and d/dy: centered where both neighbors are interior,
/// one-sided at mask boundaries.
CVector discrete_derivative_x(const Grid& grid, const CVector& u);
CVector discrete_derivative_y(const Grid& grid, const CVector& u);

/// L2(Omega_h) inner product h^2 * sum(u conj(v)) and norm.
Complex inner(const Grid& grid, const CVector& u, const CVector& v);
double norm_l2(const Grid& grid, const CVector& u);

/// Grid metadata as JSON plus the flat row-major uint8 mask bytes.
std::string grid_meta_json(const Grid& grid);
std::vector<unsigned char> grid_mask_bytes(const Grid& grid);

/// Grid function as CSV rows (x, y, re, im).
std::string grid_function_csv(const Grid& grid, const CVector& u);

} // namespace wsl::fd
