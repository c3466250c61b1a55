#include "wsl/waves.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wsl::waves {

std::pair<fd::Vector, fd::Vector> initial_bump(const fd::Grid& grid, double cx, double cy,
                                               double radius, int component) {
    if (!(radius > 0)) throw std::invalid_argument("initial_bump: radius must be positive");
    if (component != 1 && component != 2)
        throw std::invalid_argument("initial_bump: component must be 1 (u) or 2 (du/dt)");
    // The support ball must sit inside the truncated interior: every lattice
    // point of the ball (with one-cell margin) must be an interior node.
    const int i_lo = static_cast<int>(std::floor((cx - radius - grid.x_lo) / grid.h)) - 1;
    const int i_hi = static_cast<int>(std::ceil((cx + radius - grid.x_lo) / grid.h)) + 1;
    const int k_lo = static_cast<int>(std::floor((cy - radius - grid.y_lo) / grid.h)) - 1;
    const int k_hi = static_cast<int>(std::ceil((cy + radius - grid.y_lo) / grid.h)) + 1;
    fd::Vector bump = fd::Vector::Zero(grid.size());
    for (int i = i_lo; i <= i_hi; ++i) {
        for (int k = k_lo; k <= k_hi; ++k) {
            const double x = grid.x_lo + i * grid.h, y = grid.y_lo + k * grid.h;
            const double r2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (radius * radius);
            if (r2 >= 1.0) continue;
            if (!grid.interior(i, k))
                throw std::invalid_argument("initial_bump: support exits the domain interior");
            bump[grid.id(i, k)] = std::exp(1.0 - 1.0 / (1.0 - r2));
        }
    }
    fd::Vector zero = fd::Vector::Zero(grid.size());
    if (component == 1) return {bump, zero};
    return {zero, bump};
}

double reflection_horizon(const fd::Grid& grid, double support_radius) {
    return 2.0 * (grid.L - support_radius - grid.R0);
}

double local_norm(const fd::Grid& grid, const fd::Vector& u, const fd::Vector& chi, int m) {
    if (m != 0 && m != 1) throw std::invalid_argument("local_norm: m must be 0 or 1");
    fd::Vector cu = chi.cwiseProduct(u);
    const double l2 = grid.h * cu.norm();
    if (m == 0) return l2;
    const fd::CVector cuc = cu.cast<fd::Complex>();
    const double gx = fd::norm_l2(grid, fd::discrete_derivative_x(grid, cuc));
    const double gy = fd::norm_l2(grid, fd::discrete_derivative_y(grid, cuc));
    return std::sqrt(l2 * l2 + gx * gx + gy * gy);
}

namespace {

// Flat stencil kernel: neighbor ids with a zero sentinel at index n.
struct Kernel {
    std::vector<int> nbr; // 4 per node
    int n = 0;
    double ihh = 0.0;

    explicit Kernel(const fd::Grid& g) : n(g.size()), ihh(1.0 / (g.h * g.h)) {
        nbr.resize(static_cast<std::size_t>(n) * 4);
        for (int m = 0; m < n; ++m) {
            const auto [i, k] = g.nodes[static_cast<std::size_t>(m)];
            const int ids[4] = {g.interior(i + 1, k) ? g.id(i + 1, k) : n,
                                g.interior(i - 1, k) ? g.id(i - 1, k) : n,
                                g.interior(i, k + 1) ? g.id(i, k + 1) : n,
                                g.interior(i, k - 1) ? g.id(i, k - 1) : n};
            for (int d = 0; d < 4; ++d) nbr[static_cast<std::size_t>(m) * 4 + d] = ids[d];
        }
    }

    // out = (-Laplace_h) u  (u has a sentinel slot at index n holding 0)
    void apply(const double* u, double* out) const {
        for (int m = 0; m < n; ++m) {
            const std::size_t b = static_cast<std::size_t>(m) * 4;
            out[m] = ihh * (4.0 * u[m] - u[nbr[b]] - u[nbr[b + 1]] - u[nbr[b + 2]] - u[nbr[b + 3]]);
        }
    }
};

} // namespace

WaveSeries propagate(const fd::Grid& grid, const fd::DiscreteOperator& op, WaveState state,
                     double T, PropagateOptions opt, const fd::Vector* chi) {
    (void)op;
    const double cfl_max = 0.9 / std::sqrt(2.0);
    if (!(opt.cfl > 0) || opt.cfl > cfl_max + 1e-12)
        throw std::invalid_argument("propagate: cfl must lie in (0, 0.9/sqrt(2)]");
    if (opt.horizon && T > *opt.horizon + 1e-9)
        throw std::invalid_argument("propagate: T exceeds the reflection-free horizon");
    if (!(T > 0)) throw std::invalid_argument("propagate: T must be positive");

    const int n = grid.size();
    const double dt = opt.cfl * grid.h;
    const long steps = static_cast<long>(std::ceil(T / dt));
    const Kernel kern(grid);

    // Sentinel-padded buffers.
    std::vector<double> u_prev(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> u_cur(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> u_next(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> lap(static_cast<std::size_t>(n), 0.0);
    for (int m = 0; m < n; ++m) u_prev[static_cast<std::size_t>(m)] = state.u[m];

    // Second-order start: u^1 = u^0 + dt v^0 - dt^2/2 (A u^0).
    kern.apply(u_prev.data(), lap.data());
    for (int m = 0; m < n; ++m)
        u_cur[static_cast<std::size_t>(m)] =
            u_prev[static_cast<std::size_t>(m)] + dt * state.v[m] -
            0.5 * dt * dt * lap[static_cast<std::size_t>(m)];

    WaveSeries out;
    out.cfl = opt.cfl;
    out.dt = dt;
    out.steps = steps;
    const long sample_every = std::max<long>(1, static_cast<long>(std::round(opt.sample_dt / dt)));

    fd::Vector uvec(n);
    auto push_sample = [&](long step) {
        // Leapfrog-conserved energy of the (u^k, u^{k+1}) pair:
        // E = 1/2 ||(u^{k+1}-u^k)/dt||^2 + 1/2 <A u^{k+1}, u^k>.
        kern.apply(u_cur.data(), lap.data());
        double kin = 0.0, pot = 0.0;
        for (int m = 0; m < n; ++m) {
            const double du = (u_cur[static_cast<std::size_t>(m)] - u_prev[static_cast<std::size_t>(m)]) / dt;
            kin += du * du;
            pot += lap[static_cast<std::size_t>(m)] * u_prev[static_cast<std::size_t>(m)];
        }
        const double h2 = grid.h * grid.h;
        TimeSample s;
        s.t = step * dt;
        s.energy = 0.5 * h2 * (kin + pot);
        if (chi) {
            for (int m = 0; m < n; ++m) uvec[m] = u_cur[static_cast<std::size_t>(m)];
            s.norm_m0 = local_norm(grid, uvec, *chi, 0);
            s.norm_m1 = local_norm(grid, uvec, *chi, 1);
        }
        out.samples.push_back(s);
    };

    push_sample(1);
    for (long step = 1; step < steps; ++step) {
        kern.apply(u_cur.data(), lap.data());
        for (int m = 0; m < n; ++m) {
            const std::size_t mm = static_cast<std::size_t>(m);
            u_next[mm] = 2.0 * u_cur[mm] - u_prev[mm] - dt * dt * lap[mm];
        }
        std::swap(u_prev, u_cur);
        std::swap(u_cur, u_next);
        if ((step + 1) % sample_every == 0 || step + 1 == steps) push_sample(step + 1);
    }

    out.final_state.t = steps * dt;
    out.final_state.u.resize(n);
    out.final_state.v.resize(n);
    for (int m = 0; m < n; ++m) {
        out.final_state.u[m] = u_cur[static_cast<std::size_t>(m)];
        out.final_state.v[m] =
            (u_cur[static_cast<std::size_t>(m)] - u_prev[static_cast<std::size_t>(m)]) / dt;
    }
    return out;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t_min,
                   double t_max, bool envelope) {
    if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("fit_decay: bad window");
    const double floor_val = 100.0 * std::numeric_limits<double>::epsilon();

    std::vector<std::pair<double, double>> in_window;
    for (const auto& [t, v] : series)
        if (t >= t_min && t <= t_max && v > floor_val) in_window.push_back({t, v});

    DecayFit fit;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.envelope = envelope;
    if (envelope) {
        for (std::size_t i = 1; i + 1 < in_window.size(); ++i) {
            if (in_window[i].second >= in_window[i - 1].second &&
                in_window[i].second >= in_window[i + 1].second &&
                (in_window[i].second > in_window[i - 1].second ||
                 in_window[i].second > in_window[i + 1].second))
                fit.points_used.push_back(in_window[i]);
        }
        if (fit.points_used.size() < 5) {
            // Too few oscillation maxima; fall back to the full series.
            fit.points_used = in_window;
            fit.envelope = false;
        }
    } else {
        fit.points_used = in_window;
    }
    if (fit.points_used.size() < 5)
        throw std::runtime_error("fit_decay: window too short (fewer than 5 usable points)");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(fit.points_used.size());
    for (const auto& [t, v] : fit.points_used) {
        const double lx = std::log(t), ly = std::log(v);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - fit.exponent * sx) / m;
    double ss = 0.0;
    for (const auto& [t, v] : fit.points_used) {
        const double r = std::log(v) - (intercept + fit.exponent * std::log(t));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

} // namespace wsl::waves
