#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "wsl/geometry.hpp"
#include "wsl/grid.hpp"

using namespace wsl;
using namespace wsl::fd;
namespace nb = std::numbers;

TEST_CASE("half-strip grid has the expected interior layout") {
    const auto dom = geom::gallery("half_strip"); // width pi
    const auto g = build_grid(dom, nb::pi / 32, 10.0);
    CHECK(g.My == 32);
    // 31 interior rows per column away from the cap.
    int rows = 0;
    for (int k = 0; k <= g.My; ++k)
        if (g.interior(5, k)) ++rows;
    CHECK(rows == 31);
    CHECK(g.face_plus.present);
    CHECK_FALSE(g.face_minus.present);
    CHECK(g.face_plus.blocks.size() == 1);
    CHECK(static_cast<int>(g.face_plus.blocks[0].node_ids.size()) == 31);
}

TEST_CASE("grid errors") {
    const auto dom = geom::gallery("half_strip");
    CHECK_THROWS(build_grid(dom, nb::pi / 4, 10.0));  // fewer than 8 nodes across
    CHECK_THROWS(build_grid(geom::gallery("parabola"), 0.05, 10.0)); // open end
}

TEST_CASE("hourglass refinement roughly quadruples the interior count") {
    const auto dom = geom::gallery("hourglass");
    const auto g1 = build_grid(dom, 0.1, 4.0);
    const auto g2 = build_grid(dom, 0.05, 4.0);
    const double ratio = static_cast<double>(g2.size()) / g1.size();
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("mask area converges to the domain area") {
    const auto dom = geom::gallery("cigar");
    // truncated area: half disk + rectangle up to L
    auto area = [&](double h) {
        const auto g = build_grid(dom, h, 6.0);
        return h * h * g.size();
    };
    const double exact = 0.5 * nb::pi + 2.0 * 5.0;
    const double e1 = std::abs(area(0.05) - exact);
    const double e2 = std::abs(area(0.025) - exact);
    CHECK(e1 < 1.0);          // O(h) staircase deficit, perimeter-scaled
    CHECK(e2 < 0.6 * e1);     // first-order convergence
}

TEST_CASE("obstacle domain mask excludes the obstacle") {
    const auto dom = geom::gallery("strip_minus_convex");
    const auto g = build_grid(dom, 0.05, 5.0);
    const int ic = static_cast<int>(std::round((0.0 - g.x_lo) / g.h));
    const int kc = static_cast<int>(std::round((0.0 - g.y_lo) / g.h));
    CHECK_FALSE(g.interior(ic, kc));
    CHECK(g.interior(ic, static_cast<int>(std::round((0.9 - g.y_lo) / g.h))));
}

TEST_CASE("laplacian is symmetric and matches the FD spectrum on a section") {
    const auto dom = geom::gallery("half_strip");
    const auto g = build_grid(dom, nb::pi / 64, 6.0);
    const auto op = assemble_laplacian(g);
    SparseReal AT = SparseReal(op.A.transpose());
    CHECK((op.A - AT).norm() == 0.0);

    // 1D section eigenvalue: the lowest transverse FD eigenvalue is
    // (2/h)^2 sin^2(h/2) (closed form for the 1D Dirichlet Laplacian).
    const double h = g.h;
    const double lam1 = std::pow(2.0 / h * std::sin(h / 2.0), 2);
    CHECK(lam1 == doctest::Approx(1.0 - h * h / 12.0).epsilon(1e-4));
}

TEST_CASE("product grid operator equals the Kronecker sum on a small box") {
    // 10x10 interior on a product cylinder section.
    const auto dom = geom::gallery("product_cylinder", R"({"y0":0.0,"y1":1.1,"R0":0.2})");
    const auto g = build_grid(dom, 0.1, 0.55);
    REQUIRE(g.My == 11);
    const int nx = g.Mx - 1, ny = g.My - 1;
    const auto op = assemble_laplacian(g);
    const Eigen::MatrixXd A = Eigen::MatrixXd(op.A);

    auto lap1d = [](int n, double h) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            M(i, i) = 2.0 / (h * h);
            if (i > 0) M(i, i - 1) = -1.0 / (h * h);
            if (i + 1 < n) M(i, i + 1) = -1.0 / (h * h);
        }
        return M;
    };
    const Eigen::MatrixXd Ax = lap1d(nx, g.h), Ay = lap1d(ny, g.h);
    const Eigen::MatrixXd Ix = Eigen::MatrixXd::Identity(nx, nx);
    const Eigen::MatrixXd Iy = Eigen::MatrixXd::Identity(ny, ny);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nx * ny, nx * ny);
    auto idx = [&](int i, int k) { return g.id(i + 1, k + 1); };
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < ny; ++k)
            for (int i2 = 0; i2 < nx; ++i2)
                for (int k2 = 0; k2 < ny; ++k2)
                    K(idx(i, k), idx(i2, k2)) = Ax(i, i2) * Iy(k, k2) + Ix(i, i2) * Ay(k, k2);
    CHECK((A - K).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("consistency order of the 5-point stencil") {
    const auto dom = geom::gallery("product_cylinder", R"({"y0":0.0,"y1":3.141592653589793})");
    auto err = [&](double h) {
        const auto g = build_grid(dom, h, 4.0);
        const auto op = assemble_laplacian(g);
        Vector u(g.size());
        for (int n = 0; n < g.size(); ++n) u[n] = std::sin(g.x_of(n)) * std::sin(g.y_of(n));
        const Vector Au = op.A * u;
        double worst = 0.0;
        for (int n = 0; n < g.size(); ++n) {
            const auto [i, k] = g.nodes[static_cast<std::size_t>(n)];
            if (i < 3 || i > g.Mx - 3) continue; // x-faces are Dirichlet-truncated
            worst = std::max(worst, std::abs(Au[n] - 2.0 * u[n]));
        }
        return worst;
    };
    const double e1 = err(nb::pi / 32), e2 = err(nb::pi / 64);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("weight diagonals") {
    const auto dom = geom::gallery("half_strip");
    const auto g = build_grid(dom, nb::pi / 16, 8.0);
    const auto wm = weight_diag(g, WeightName::poly_minus, 1.0, 0.0, true);
    const auto wp = weight_diag(g, WeightName::poly_plus, 1.0, 0.0, true);
    const auto mw = weight_diag(g, WeightName::morawetz_w, 1.0, 0.0);
    for (int n = 0; n < g.size(); ++n) {
        const double x = g.x_of(n);
        CHECK(wm.diag[n] == doctest::Approx(std::pow(1.0 + x, -2.0)));
        CHECK(wp.diag[n] == doctest::Approx(std::pow(1.0 + x, 2.0)));
        CHECK(mw.diag[n] == doctest::Approx(1.0 - 1.0 / (1.0 + x)));
        CHECK(wm.diag[n] > 0);
    }
    // x = 3 with delta = 1: (1+3)^{-2} = 1/16.
    CHECK(std::pow(1.0 + 3.0, -2.0) == doctest::Approx(1.0 / 16.0));
    CHECK_THROWS(weight_diag(g, WeightName::poly_minus, 1.5, 0.0)); // delta outside (0,1]

    const auto two = geom::gallery("hourglass");
    const auto g2 = build_grid(two, 0.1, 4.0);
    CHECK_THROWS(weight_diag(g2, WeightName::poly_minus, 1.0, 0.0, true)); // x < 0 nodes
    CHECK_THROWS(weight_diag(g2, WeightName::morawetz_w, 1.0, 0.0));

    // Monotonicity in |x - x0| for the two-ended form.
    const auto w2 = weight_diag(g2, WeightName::poly_minus, 0.5, 1.0);
    for (int n = 0; n + 1 < g2.size(); ++n) {
        const auto a = std::abs(g2.x_of(n) - 1.0), b = std::abs(g2.x_of(n + 1) - 1.0);
        if (a < b) CHECK(w2.diag[n] >= w2.diag[n + 1]);
    }
}

TEST_CASE("cutoff weight is a [0,1] bump") {
    const auto dom = geom::gallery("half_strip");
    const auto g = build_grid(dom, nb::pi / 16, 12.0);
    const auto chi = weight_diag(g, WeightName::cutoff_chi, 0.0, 3.0, false, {2.0, 4.0});
    for (int n = 0; n < g.size(); ++n) {
        CHECK(chi.diag[n] >= 0.0);
        CHECK(chi.diag[n] <= 1.0);
        const double r = std::abs(g.x_of(n) - 3.0);
        if (r <= 2.0) CHECK(chi.diag[n] == 1.0);
        if (r >= 4.0) CHECK(chi.diag[n] == 0.0);
    }
}

TEST_CASE("discrete derivatives") {
    const auto dom = geom::gallery("product_cylinder", R"({"y0":0.0,"y1":3.141592653589793})");
    const auto g = build_grid(dom, nb::pi / 32, 3.0);
    CVector u(g.size()), c(g.size());
    for (int n = 0; n < g.size(); ++n) {
        u[n] = g.x_of(n);
        c[n] = 1.0;
    }
    const CVector ux = discrete_derivative_x(g, u);
    double worst = 0.0;
    for (int n = 0; n < g.size(); ++n) {
        const auto [i, k] = g.nodes[static_cast<std::size_t>(n)];
        if (i <= 1 || i >= g.Mx - 1) continue; // one-sided at the x-truncation
        worst = std::max(worst, std::abs(ux[n] - 1.0));
    }
    CHECK(worst < 1e-12);

    for (int n = 0; n < g.size(); ++n) u[n] = std::sin(g.y_of(n));
    const CVector uy = discrete_derivative_y(g, u);
    worst = 0.0;
    for (int n = 0; n < g.size(); ++n) {
        const auto [i, k] = g.nodes[static_cast<std::size_t>(n)];
        if (k <= 1 || k >= g.My - 1) continue;
        worst = std::max(worst, std::abs(uy[n] - std::cos(g.y_of(n))));
    }
    CHECK(worst < g.h * g.h); // centered differences: O(h^2) with Taylor margin

    const CVector dc = discrete_derivative_x(g, c);
    double worst_c = 0.0;
    for (int n = 0; n < g.size(); ++n) worst_c = std::max(worst_c, std::abs(dc[n]));
    CHECK(worst_c == 0.0);
}

TEST_CASE("grid metadata export") {
    const auto g = build_grid(geom::gallery("half_strip"), nb::pi / 16, 6.0);
    const auto meta = grid_meta_json(g);
    CHECK(meta.find("\"Mx\"") != std::string::npos);
    const auto mask = grid_mask_bytes(g);
    CHECK(mask.size() == static_cast<std::size_t>((g.Mx + 1) * (g.My + 1)));
    std::size_t interior = 0;
    for (auto b : mask) interior += b;
    CHECK(interior == static_cast<std::size_t>(g.size()));
}
