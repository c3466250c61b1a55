#pragma once

#include <map>
#include <string>

#include "wsl/grid.hpp"
#include "wsl/weights.hpp"

namespace wsl::identities {

struct IdentityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double boundary_term = 0.0;
    double grid_h = 0.0;
    std::map<std::string, double> terms;
};

/// Multiplier identity with commutant w(x) d/dx:
/// <w'u',u'> = 1/4 <w'''u,u> + 1/2 Re<Pu,(wu)'> + 1/2 Re<wu',Pu>
///             + eps Im<wu',u> + 1/2 int_bdry w |d_nu u|^2 nu_x.
/// Pu is recomputed from the stencil; boundary integrals run over the
/// staircase edges with one-sided normal differences (truncation faces are
/// not part of the boundary).
IdentityReport morawetz_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                                 const fd::CVector& u, const weights::ScalarWeight& w, double E,
                                 double eps);

/// <mu'u',u'> + E <mu'u,u> = 2 Re<mu Pu,u'> - 2 eps Im<mu u,u'>
///                           + <mu' u_y,u_y> + int_bdry mu |d_nu u|^2 nu_x.
IdentityReport ibpe_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                             const fd::CVector& u, const weights::ScalarWeight& mu, double E,
                             double eps);

enum class IbpyVariant { yj, translation };

/// yj:  ||u_y||^2 = 1/2 Re<Pu, d_y(y u)> + 1/2 Re<y u_y, Pu>
///                  + eps Im<y u_y, u> + 1/2 int_bdry y |d_nu u|^2 nu_y.
/// translation: 0 = Re<Pu, u_y> + eps Im<u_y, u> + 1/2 int_bdry |d_nu u|^2 nu_y.
IdentityReport ibpy_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                             const fd::CVector& u, double E, double eps, IbpyVariant variant);

struct TruncatedIdentityReports {
    IdentityReport real_part; // ||u'||^2 identity with x = +-R face terms
    IdentityReport imag_part;
};

/// Both truncated identities over Omega_R = {|x| < R}, with the face
/// integrals over the grid columns nearest x = +-R.
TruncatedIdentityReports eigenvalue_identity_check(const fd::Grid& grid,
                                                   const fd::DiscreteOperator& op,
                                                   const fd::CVector& u, double E, double eps,
                                                   double R);

struct PoincareReport {
    double ratio = 0.0; // ||sqrt(w''') u|| / ||sqrt(w') u'||
    double bound = 0.0; // 2 sqrt(1+delta)/sqrt(2+delta)
    double lhs = 0.0, rhs = 0.0;
};

/// Weighted Poincare inequality for the one-ended weight; requires a grid
/// with x >= 0 (throws otherwise) and u vanishing on the mask boundary
/// (automatic for interior vectors).
PoincareReport poincare_check(const fd::Grid& grid, const fd::CVector& u, double delta);

/// w from the one-ended construction: 1 - (1+x)^{-delta} with derivatives.
weights::ScalarWeight build_weight_basic(double delta);

} // namespace wsl::identities
