#include "wsl/identities.hpp"

#include <cmath>
#include <stdexcept>

namespace wsl::identities {

using fd::Complex;
using fd::CVector;

namespace {

CVector apply_P(const fd::Grid& grid, const fd::DiscreteOperator& op, const CVector& u, double E,
                double eps) {
    (void)grid;
    const Eigen::VectorXd ur = u.real(), ui = u.imag();
    const Eigen::VectorXd Aur = op.A * ur, Aui = op.A * ui;
    CVector Pu(u.size());
    const Complex z(E, eps);
    for (int n = 0; n < u.size(); ++n) Pu[n] = Complex(Aur[n], Aui[n]) - z * u[n];
    return Pu;
}

// Visit every staircase boundary edge (interior node with an exterior
// 4-neighbor). DtN truncation faces are not part of the physical boundary.
// flux2 estimates |d_nu u|^2 at the edge: the Dirichlet one-sided difference
// across the edge plus the tangential grid derivative (u vanishes on the
// boundary, so grad u = nu d_nu u there and both components contribute on
// slanted staircase pieces).
template <class F>
void for_boundary_edges(const fd::Grid& g, const CVector& u, const CVector& ux,
                        const CVector& uy, F&& f) {
    const double ihh = 1.0 / (g.h * g.h);
    for (int n = 0; n < g.size(); ++n) {
        const auto [i, k] = g.nodes[static_cast<std::size_t>(n)];
        const double x = g.x_of(n), y = g.y_of(n);
        struct Dir { int di, dk; };
        for (const Dir d : {Dir{1, 0}, Dir{-1, 0}, Dir{0, 1}, Dir{0, -1}}) {
            if (g.interior(i + d.di, k + d.dk)) continue;
            if (d.di == 1 && g.face_plus.present && i + 1 == g.Mx) continue;
            if (d.di == -1 && g.face_minus.present && i - 1 == 0) continue;
            const double tang = d.di != 0 ? std::abs(uy[n]) : std::abs(ux[n]);
            const double flux2 = std::norm(u[n]) * ihh + tang * tang;
            f(n, x + 0.5 * d.di * g.h, y + 0.5 * d.dk * g.h, d.di, d.dk, flux2);
        }
    }
}

double re_inner(const fd::Grid& g, const CVector& a, const CVector& b) {
    return fd::inner(g, a, b).real();
}

double im_inner(const fd::Grid& g, const CVector& a, const CVector& b) {
    return fd::inner(g, a, b).imag();
}

CVector scale_by_x_profile(const fd::Grid& g, const CVector& u,
                           const std::function<double(double)>& f) {
    CVector out(u.size());
    for (int n = 0; n < u.size(); ++n) out[n] = f(g.x_of(n)) * u[n];
    return out;
}

} // namespace

IdentityReport morawetz_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                                 const CVector& u, const weights::ScalarWeight& w, double E,
                                 double eps) {
    if (!w.w3) throw std::invalid_argument("morawetz_residual: weight lacks a third derivative");
    IdentityReport rep;
    rep.grid_h = grid.h;
    const CVector Pu = apply_P(grid, op, u, E, eps);
    const CVector ux = fd::discrete_derivative_x(grid, u);
    const CVector uy_m = fd::discrete_derivative_y(grid, u);
    const CVector wu = scale_by_x_profile(grid, u, w.w);
    const CVector wux = fd::discrete_derivative_x(grid, wu);
    const CVector w_ux = scale_by_x_profile(grid, ux, w.w);

    double lhs = 0.0, w3term = 0.0;
    const double h2 = grid.h * grid.h;
    for (int n = 0; n < u.size(); ++n) {
        const double x = grid.x_of(n);
        lhs += w.w1(x) * std::norm(ux[n]) * h2;
        w3term += 0.25 * w.w3(x) * std::norm(u[n]) * h2;
    }
    const double p1 = 0.5 * re_inner(grid, Pu, wux);
    const double p2 = 0.5 * re_inner(grid, w_ux, Pu);
    const double eterm = eps * im_inner(grid, w_ux, u);

    double bterm = 0.0;
    for_boundary_edges(grid, u, ux, uy_m, [&](int, double xm, double, int di, int, double flux2) {
        if (di == 0) return;
        bterm += 0.5 * w.w(xm) * flux2 * grid.h * di;
    });

    rep.lhs = lhs;
    rep.boundary_term = bterm;
    rep.rhs = w3term + p1 + p2 + eterm + bterm;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    rep.terms = {{"w3", w3term}, {"p1", p1}, {"p2", p2}, {"eps", eterm}, {"boundary", bterm}};
    return rep;
}

IdentityReport ibpe_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                             const CVector& u, const weights::ScalarWeight& mu, double E,
                             double eps) {
    IdentityReport rep;
    rep.grid_h = grid.h;
    const CVector Pu = apply_P(grid, op, u, E, eps);
    const CVector ux = fd::discrete_derivative_x(grid, u);
    const CVector uy = fd::discrete_derivative_y(grid, u);

    double lhs = 0.0, yterm = 0.0;
    const double h2 = grid.h * grid.h;
    for (int n = 0; n < u.size(); ++n) {
        const double mu1 = mu.w1(grid.x_of(n));
        lhs += mu1 * (std::norm(ux[n]) + E * std::norm(u[n])) * h2;
        yterm += mu1 * std::norm(uy[n]) * h2;
    }
    const CVector mu_u = scale_by_x_profile(grid, u, mu.w);
    const CVector mu_Pu = scale_by_x_profile(grid, Pu, mu.w);
    const double p1 = 2.0 * re_inner(grid, mu_Pu, ux);
    const double eterm = -2.0 * eps * im_inner(grid, mu_u, ux);

    double bterm = 0.0;
    for_boundary_edges(grid, u, ux, uy, [&](int, double xm, double, int di, int, double flux2) {
        if (di == 0) return;
        bterm += mu.w(xm) * flux2 * grid.h * di;
    });

    rep.lhs = lhs;
    rep.boundary_term = bterm;
    rep.rhs = p1 + eterm + yterm + bterm;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    rep.terms = {{"p1", p1}, {"eps", eterm}, {"ytan", yterm}, {"boundary", bterm}};
    return rep;
}

IdentityReport ibpy_residual(const fd::Grid& grid, const fd::DiscreteOperator& op,
                             const CVector& u, double E, double eps, IbpyVariant variant) {
    IdentityReport rep;
    rep.grid_h = grid.h;
    const CVector Pu = apply_P(grid, op, u, E, eps);
    const CVector uy = fd::discrete_derivative_y(grid, u);
    const double h2 = grid.h * grid.h;

    const CVector ux = fd::discrete_derivative_x(grid, u);
    if (variant == IbpyVariant::translation) {
        const double p1 = re_inner(grid, Pu, uy);
        const double eterm = eps * im_inner(grid, uy, u);
        double bterm = 0.0;
        for_boundary_edges(grid, u, ux, uy, [&](int, double, double, int, int dk, double flux2) {
            if (dk == 0) return;
            bterm += 0.5 * flux2 * grid.h * dk;
        });
        rep.lhs = 0.0;
        rep.boundary_term = bterm;
        rep.rhs = p1 + eterm + bterm;
        rep.residual = std::abs(rep.rhs);
        rep.terms = {{"p1", p1}, {"eps", eterm}, {"boundary", bterm}};
        return rep;
    }

    // y u and d_y(y u)
    CVector yu(u.size());
    for (int n = 0; n < u.size(); ++n) yu[n] = grid.y_of(n) * u[n];
    const CVector dyu = fd::discrete_derivative_y(grid, yu);
    CVector y_uy(u.size());
    for (int n = 0; n < u.size(); ++n) y_uy[n] = grid.y_of(n) * uy[n];

    double lhs = 0.0;
    for (int n = 0; n < u.size(); ++n) lhs += std::norm(uy[n]) * h2;
    const double p1 = 0.5 * re_inner(grid, Pu, dyu);
    const double p2 = 0.5 * re_inner(grid, y_uy, Pu);
    const double eterm = eps * im_inner(grid, y_uy, u);
    double bterm = 0.0;
    for_boundary_edges(grid, u, ux, uy, [&](int, double, double ym, int, int dk, double flux2) {
        if (dk == 0) return;
        bterm += 0.5 * ym * flux2 * grid.h * dk;
    });
    rep.lhs = lhs;
    rep.boundary_term = bterm;
    rep.rhs = p1 + p2 + eterm + bterm;
    rep.residual = std::abs(rep.lhs - rep.rhs);
    rep.terms = {{"p1", p1}, {"p2", p2}, {"eps", eterm}, {"boundary", bterm}};
    return rep;
}

TruncatedIdentityReports eigenvalue_identity_check(const fd::Grid& grid,
                                                   const fd::DiscreteOperator& op,
                                                   const CVector& u, double E, double eps,
                                                   double R) {
    // Columns nearest x = +-R; the truncated region is strictly between them.
    const int i_plus = static_cast<int>(std::round((R - grid.x_lo) / grid.h));
    const int i_minus = grid.x_lo < 0 ? static_cast<int>(std::round((-R - grid.x_lo) / grid.h)) : -1;
    if (i_plus >= grid.Mx) throw std::invalid_argument("eigenvalue_identity_check: R beyond grid");

    const CVector Pu = apply_P(grid, op, u, E, eps);
    const CVector ux = fd::discrete_derivative_x(grid, u);
    const CVector uy = fd::discrete_derivative_y(grid, u);
    CVector xu(u.size()), x_ux(u.size());
    for (int n = 0; n < u.size(); ++n) {
        xu[n] = grid.x_of(n) * u[n];
        x_ux[n] = grid.x_of(n) * ux[n];
    }
    const CVector xux = fd::discrete_derivative_x(grid, xu);

    auto in_region = [&](int n) {
        const int i = grid.nodes[static_cast<std::size_t>(n)].first;
        return i < i_plus && (i_minus < 0 || i > i_minus);
    };

    const double h2 = grid.h * grid.h;
    double lhs = 0.0;
    Complex ip1 = 0.0, ip2 = 0.0, ip3 = 0.0;
    for (int n = 0; n < u.size(); ++n) {
        if (!in_region(n)) continue;
        lhs += std::norm(ux[n]) * h2;
        ip1 += h2 * Pu[n] * std::conj(xux[n]);   // <Pu, (xu)'>
        ip2 += h2 * x_ux[n] * std::conj(Pu[n]);  // <xu', Pu>
        ip3 += h2 * x_ux[n] * std::conj(u[n]);   // <xu', u>
    }

    double bterm = 0.0;
    for_boundary_edges(grid, u, ux, uy, [&](int n, double xm, double, int di, int, double flux2) {
        if (di == 0 || !in_region(n)) return;
        bterm += 0.5 * xm * flux2 * grid.h * di;
    });

    // Face terms at the x = +-R columns.
    double face_re = 0.0, face_im1 = 0.0, face_im2 = 0.0;
    for (const auto& [col, sgn] : std::initializer_list<std::pair<int, double>>{
             {i_plus, +1.0}, {i_minus, -1.0}}) {
        if (col < 0) continue;
        const double Rcol = std::abs(grid.x_lo + col * grid.h);
        for (int k = 1; k < grid.My; ++k) {
            if (!grid.interior(col, k)) continue;
            const int n = grid.id(col, k);
            const Complex upr = ux[n];
            face_re += grid.h * (sgn * (upr * std::conj(u[n])).real() +
                                 Rcol * (-std::norm(uy[n]) + E * std::norm(u[n]) + std::norm(upr)));
            face_im1 += grid.h * eps * Rcol * std::norm(u[n]);
            face_im2 += grid.h * sgn * (upr * std::conj(u[n])).imag();
        }
    }

    TruncatedIdentityReports out;
    out.real_part.grid_h = grid.h;
    out.real_part.lhs = lhs;
    out.real_part.boundary_term = bterm;
    out.real_part.rhs = 0.5 * ip1.real() + 0.5 * ip2.real() + eps * ip3.imag() + bterm +
                        0.5 * face_re;
    out.real_part.residual = std::abs(out.real_part.lhs - out.real_part.rhs);
    out.real_part.terms = {{"face", 0.5 * face_re}, {"boundary", bterm}};

    out.imag_part.grid_h = grid.h;
    out.imag_part.lhs = 0.0;
    out.imag_part.rhs = ip1.imag() + ip2.imag() - 2.0 * eps * ip3.real() + face_im1 + face_im2;
    out.imag_part.residual = std::abs(out.imag_part.rhs);
    out.imag_part.terms = {{"face_eps", face_im1}, {"face_flux", face_im2}};
    return out;
}

PoincareReport poincare_check(const fd::Grid& grid, const CVector& u, double delta) {
    if (grid.x_lo < -1e-12)
        throw std::invalid_argument("poincare_check: one-ended weight needs a grid with x >= 0");
    const auto w = build_weight_basic(delta);
    const CVector ux = fd::discrete_derivative_x(grid, u);
    double num = 0.0, den = 0.0;
    const double h2 = grid.h * grid.h;
    for (int n = 0; n < u.size(); ++n) {
        const double x = grid.x_of(n);
        num += w.w3(x) * std::norm(u[n]) * h2;
        den += w.w1(x) * std::norm(ux[n]) * h2;
    }
    PoincareReport rep;
    rep.lhs = std::sqrt(num);
    rep.rhs = std::sqrt(den);
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
    rep.bound = 2.0 * std::sqrt(1.0 + delta) / std::sqrt(2.0 + delta);
    return rep;
}

weights::ScalarWeight build_weight_basic(double delta) { return weights::basic_weight(delta); }

} // namespace wsl::identities
