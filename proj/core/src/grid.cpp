#include "wsl/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wsl::fd {

namespace {

bool is_lattice_aligned(double value, double origin, double h) {
    const double steps = (value - origin) / h;
    return std::abs(steps - std::round(steps)) < 1e-9 * std::max(1.0, std::abs(steps));
}

Face collect_face(const Grid& g, const spectrum::CrossSection& Y, int column) {
    Face f;
    f.present = true;
    f.column = column;
    f.x = g.x_lo + column * g.h;
    for (const auto& iv : Y.intervals) {
        FaceInterval block;
        block.width = iv.width();
        block.a = iv.a;
        const int k_lo = static_cast<int>(std::round((iv.a - g.y_lo) / g.h));
        const int k_hi = static_cast<int>(std::round((iv.b - g.y_lo) / g.h));
        for (int k = k_lo + 1; k < k_hi; ++k) {
            const int id = g.id(column, k);
            if (id < 0) throw std::logic_error("face node missing: end column does not match Y");
            block.node_ids.push_back(id);
        }
        if (block.node_ids.empty()) throw std::runtime_error("build_grid: empty face block");
        f.blocks.push_back(std::move(block));
    }
    return f;
}

} // namespace

Grid build_grid(const geom::WaveguideDomain& dom, double h, double L) {
    if (!(h > 0) || !(L > 0)) throw std::invalid_argument("build_grid: h and L must be positive");
    if (dom.end_minus.kind == geom::EndKind::open_unbounded ||
        dom.end_plus.kind == geom::EndKind::open_unbounded)
        throw std::invalid_argument("build_grid: domain has a non-cylindrical unbounded end");

    Grid g;
    g.R0 = dom.R0;
    g.L = L;

    // Snap h so the transverse extent is an integer number of cells, then
    // check every end-interval boundary lands on a lattice line.
    const double span_y = dom.y_hi - dom.y_lo;
    g.My = std::max(3, static_cast<int>(std::round(span_y / h)));
    g.h = span_y / g.My;
    g.y_lo = dom.y_lo;

    double narrowest = span_y;
    for (const auto* end : {&dom.end_minus, &dom.end_plus}) {
        if (end->kind != geom::EndKind::cylindrical) continue;
        for (const auto& iv : end->Y.intervals) {
            narrowest = std::min(narrowest, iv.width());
            if (!is_lattice_aligned(iv.a, g.y_lo, g.h) || !is_lattice_aligned(iv.b, g.y_lo, g.h))
                throw std::invalid_argument(
                    "build_grid: cross-section interval endpoints must align with the grid");
        }
    }
    if (narrowest / g.h - 1.0 < 8.0 - 1e-9)
        throw std::invalid_argument("build_grid: h too coarse, fewer than 8 nodes across the narrowest channel");

    const bool two_ended = dom.end_minus.kind == geom::EndKind::cylindrical;
    g.x_lo = two_ended ? -L : 0.0;
    const double x_hi = L;
    g.Mx = static_cast<int>(std::round((x_hi - g.x_lo) / g.h));
    if (g.Mx < 4) throw std::invalid_argument("build_grid: x extent too small for this h");

    double max_diam = 0.0;
    for (const auto* end : {&dom.end_minus, &dom.end_plus})
        if (end->kind == geom::EndKind::cylindrical)
            max_diam = std::max(max_diam, end->Y.diameter());
    g.l_margin_ok = L > dom.R0 + 5.0 * max_diam;

    g.node_id.assign(static_cast<std::size_t>(g.Mx + 1) * (g.My + 1), -1);
    for (int i = 1; i < g.Mx; ++i) {
        const double x = g.x_lo + i * g.h;
        for (int k = 1; k < g.My; ++k) {
            const double y = g.y_lo + k * g.h;
            bool in;
            if (x >= dom.R0 && dom.end_plus.kind == geom::EndKind::cylindrical)
                in = dom.end_plus.Y.contains(y);
            else if (x <= -dom.R0 && dom.end_minus.kind == geom::EndKind::cylindrical)
                in = dom.end_minus.Y.contains(y);
            else
                in = dom.inside({x, y});
            if (in) {
                g.node_id[static_cast<std::size_t>(i) * (g.My + 1) + k] =
                    static_cast<int>(g.nodes.size());
                g.nodes.emplace_back(i, k);
            }
        }
    }
    if (g.nodes.empty()) throw std::runtime_error("build_grid: empty interior");

    if (dom.end_plus.kind == geom::EndKind::cylindrical) {
        if (!(g.x_lo + (g.Mx - 1) * g.h >= dom.R0))
            throw std::invalid_argument("build_grid: L must place the truncation face beyond R0");
        g.face_plus = collect_face(g, dom.end_plus.Y, g.Mx - 1);
    }
    if (dom.end_minus.kind == geom::EndKind::cylindrical) {
        if (!(g.x_lo + g.h <= -dom.R0))
            throw std::invalid_argument("build_grid: L must place the truncation face beyond R0");
        g.face_minus = collect_face(g, dom.end_minus.Y, 1);
    }
    return g;
}

DiscreteOperator assemble_laplacian(const Grid& grid) {
    const double ihh = 1.0 / (grid.h * grid.h);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(grid.size()) * 5);
    for (int n = 0; n < grid.size(); ++n) {
        const auto [i, k] = grid.nodes[static_cast<std::size_t>(n)];
        trip.emplace_back(n, n, 4.0 * ihh);
        for (const auto& [di, dk] : std::initializer_list<std::pair<int, int>>{
                 {1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            const int m = grid.interior(i + di, k + dk) ? grid.id(i + di, k + dk) : -1;
            if (m >= 0) trip.emplace_back(n, m, -ihh);
        }
    }
    DiscreteOperator op;
    op.h = grid.h;
    op.A.resize(grid.size(), grid.size());
    op.A.setFromTriplets(trip.begin(), trip.end());
    return op;
}

WeightName weight_name_from_string(const std::string& s) {
    if (s == "poly_minus") return WeightName::poly_minus;
    if (s == "poly_plus") return WeightName::poly_plus;
    if (s == "morawetz_w") return WeightName::morawetz_w;
    if (s == "cutoff_chi") return WeightName::cutoff_chi;
    throw std::invalid_argument("unknown weight name '" + s + "'");
}

namespace {

double smooth_step(double t) {
    // C-infinity transition, 0 for t<=0, 1 for t>=1.
    auto gexp = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
    const double a = gexp(t), b = gexp(1.0 - t);
    return a / (a + b);
}

} // namespace

WeightVector weight_diag(const Grid& grid, WeightName name, double delta, double x0,
                         bool one_ended, CutoffParams cutoff) {
    if ((name == WeightName::poly_minus || name == WeightName::poly_plus) &&
        !(delta > 0 && delta <= 1.0))
        throw std::invalid_argument("weight_diag: poly weights require delta in (0, 1]");
    WeightVector w{name, Vector(grid.size())};
    const double expo = 0.5 * (3.0 + delta);
    for (int n = 0; n < grid.size(); ++n) {
        const double x = grid.x_of(n);
        switch (name) {
            case WeightName::poly_minus:
            case WeightName::poly_plus: {
                if (one_ended && x < -1e-12)
                    throw std::invalid_argument(
                        "weight_diag: one-ended poly weight on a node with x < 0");
                const double base = 1.0 + std::abs(x - x0);
                w.diag[n] = name == WeightName::poly_minus ? std::pow(base, -expo)
                                                           : std::pow(base, expo);
                break;
            }
            case WeightName::morawetz_w:
                if (x < -1e-12)
                    throw std::invalid_argument("weight_diag: morawetz_w needs x >= 0");
                w.diag[n] = 1.0 - std::pow(1.0 + x, -delta);
                break;
            case WeightName::cutoff_chi: {
                const double r = std::abs(x - x0);
                if (r <= cutoff.r_inner) w.diag[n] = 1.0;
                else if (r >= cutoff.r_outer) w.diag[n] = 0.0;
                else
                    w.diag[n] =
                        smooth_step((cutoff.r_outer - r) / (cutoff.r_outer - cutoff.r_inner));
                break;
            }
        }
    }
    return w;
}

namespace {

template <int DI, int DK>
CVector derivative(const Grid& grid, const CVector& u) {
    CVector d(grid.size());
    const double h = grid.h;
    for (int n = 0; n < grid.size(); ++n) {
        const auto [i, k] = grid.nodes[static_cast<std::size_t>(n)];
        const int fwd = grid.interior(i + DI, k + DK) ? grid.id(i + DI, k + DK) : -1;
        const int bwd = grid.interior(i - DI, k - DK) ? grid.id(i - DI, k - DK) : -1;
        if (fwd >= 0 && bwd >= 0) d[n] = (u[fwd] - u[bwd]) / (2.0 * h);
        else if (fwd >= 0) d[n] = (u[fwd] - u[n]) / h;
        else if (bwd >= 0) d[n] = (u[n] - u[bwd]) / h;
        else d[n] = 0.0;
    }
    return d;
}

} // namespace

CVector discrete_derivative_x(const Grid& grid, const CVector& u) {
    return derivative<1, 0>(grid, u);
}

CVector discrete_derivative_y(const Grid& grid, const CVector& u) {
    return derivative<0, 1>(grid, u);
}

Complex inner(const Grid& grid, const CVector& u, const CVector& v) {
    return grid.h * grid.h * v.dot(u); // Eigen's dot conjugates the first factor
}

double norm_l2(const Grid& grid, const CVector& u) {
    return grid.h * u.norm();
}

std::string grid_meta_json(const Grid& grid) {
    nlohmann::json j;
    j["h"] = grid.h;
    j["x_lo"] = grid.x_lo;
    j["y_lo"] = grid.y_lo;
    j["Mx"] = grid.Mx;
    j["My"] = grid.My;
    j["nodes"] = grid.size();
    j["R0"] = grid.R0;
    j["L"] = grid.L;
    j["mask_layout"] = "row-major over lattice (Mx+1) rows x (My+1) cols, 1 = interior";
    return j.dump(2);
}

std::string grid_function_csv(const Grid& grid, const CVector& u) {
    std::string out = "x,y,re,im\n";
    char buf[128];
    for (int n = 0; n < grid.size(); ++n) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", grid.x_of(n), grid.y_of(n),
                      u[n].real(), u[n].imag());
        out += buf;
    }
    return out;
}

std::vector<unsigned char> grid_mask_bytes(const Grid& grid) {
    std::vector<unsigned char> bytes(grid.node_id.size());
    for (std::size_t n = 0; n < grid.node_id.size(); ++n) bytes[n] = grid.node_id[n] >= 0 ? 1 : 0;
    return bytes;
}

} // namespace wsl::fd
