#include "wsl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace wsl::weights {

ScalarWeight constant_weight(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; },
            [](double) { return 0.0; }};
}

ScalarWeight basic_weight(double delta) {
    if (!(delta > 0 && delta <= 1.0))
        throw std::invalid_argument("basic_weight: delta in (0,1]");
    const double d = delta;
    return {
        [d](double x) { return 1.0 - std::pow(1.0 + x, -d); },
        [d](double x) { return d * std::pow(1.0 + x, -1.0 - d); },
        [d](double x) { return -d * (1.0 + d) * std::pow(1.0 + x, -2.0 - d); },
        [d](double x) { return d * (1.0 + d) * (2.0 + d) * std::pow(1.0 + x, -3.0 - d); },
    };
}

ScalarWeight flaring_weight(double delta, double x0, double r) {
    if (!(delta > 0)) throw std::invalid_argument("flaring_weight: delta > 0");
    if (!(r > 0 && r < x0)) throw std::invalid_argument("flaring_weight: need 0 < r < x0");
    const double d = delta;
    // Even quartic p(s) = a0 + a2 s^2 + a4 s^4 in s = x - x0 matching the
    // profile's value and first two derivatives at s = r.
    const double G = d * std::pow(1.0 + r, -1.0 - d);
    const double G1 = -d * (1.0 + d) * std::pow(1.0 + r, -2.0 - d);
    const double G2 = d * (1.0 + d) * (2.0 + d) * std::pow(1.0 + r, -3.0 - d);
    const double a4 = (G2 * r - G1) / (8.0 * r * r * r);
    const double a2 = (G2 - 12.0 * a4 * r * r) / 2.0;
    const double a0 = G - a2 * r * r - a4 * r * r * r * r;

    auto wp = [=](double x) {
        const double s = x - x0;
        if (std::abs(s) >= r) return d * std::pow(1.0 + std::abs(s), -1.0 - d);
        return a0 + a2 * s * s + a4 * s * s * s * s;
    };
    for (int i = 0; i <= 200; ++i)
        if (!(wp(x0 - r + 2.0 * r * i / 200.0) > 0))
            throw std::runtime_error("flaring_weight: interpolant lost positivity");

    auto wpp = [=](double x) {
        const double s = x - x0;
        if (std::abs(s) >= r) {
            const double sg = s >= 0 ? 1.0 : -1.0;
            return -sg * d * (1.0 + d) * std::pow(1.0 + std::abs(s), -2.0 - d);
        }
        return 2.0 * a2 * s + 4.0 * a4 * s * s * s;
    };
    auto wppp = [=](double x) {
        const double s = x - x0;
        if (std::abs(s) >= r) return d * (1.0 + d) * (2.0 + d) * std::pow(1.0 + std::abs(s), -3.0 - d);
        return 2.0 * a2 + 12.0 * a4 * s * s;
    };
    // Antiderivative of wp, continuous, anchored so w(0) = 0.
    auto F = [=](double x) {
        const double s = x - x0;
        auto poly_int = [=](double t) {
            return a0 * t + a2 * t * t * t / 3.0 + a4 * std::pow(t, 5) / 5.0;
        };
        if (s <= -r) return std::pow(1.0 - s, -d); // x < x0 - r
        const double at_left = std::pow(1.0 + r, -d);
        if (s < r) return at_left + poly_int(s) - poly_int(-r);
        const double at_right = at_left + poly_int(r) - poly_int(-r);
        return at_right + (std::pow(1.0 + r, -d) - std::pow(1.0 + s, -d));
    };
    const double F0 = F(0.0);
    return {[=](double x) { return F(x) - F0; }, wp, wpp, wppp};
}

ScalarWeight bump_mu(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("bump_mu: lo < hi");
    const double W = hi - lo, mid = 0.5 * (lo + hi);
    const double nrm = std::pow(0.5 * W, 6);
    auto b = [=](double x) {
        if (x <= lo || x >= hi) return 0.0;
        const double u = x - lo;
        return std::pow(u * (W - u), 3) / nrm;
    };
    auto b1 = [=](double x) {
        if (x <= lo || x >= hi) return 0.0;
        const double u = x - lo;
        return 3.0 * std::pow(u * (W - u), 2) * (W - 2.0 * u) / nrm;
    };
    auto B = [=](double x) {
        // integral of b from lo
        if (x <= lo) return 0.0;
        const double u = std::min(x, hi) - lo;
        // expand (u(W-u))^3 = W^3 u^3 - 3 W^2 u^4 + 3 W u^5 - u^6
        const double I = std::pow(W, 3) * std::pow(u, 4) / 4.0 - 3.0 * W * W * std::pow(u, 5) / 5.0 +
                         3.0 * W * std::pow(u, 6) / 6.0 - std::pow(u, 7) / 7.0;
        return I / nrm;
    };
    const double Bmid = B(mid);
    return {[=](double x) { return B(x) - Bmid; }, b, b1, [](double) { return 0.0; }};
}

// ---------------------------------------------------------------------------
// Piecewise profile machinery for the convex-obstacle weight

namespace {

double poly_eval(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k];
    return v;
}

double poly_deriv(const std::vector<double>& c, double u, int order) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
        double f = 1.0;
        for (int m = 0; m < order; ++m) f *= static_cast<double>(k - m);
        v = v * u + f * c[k];
    }
    return v;
}

std::vector<double> poly_antiderivative(const std::vector<double>& c) {
    std::vector<double> C(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) C[k + 1] = c[k] / static_cast<double>(k + 1);
    return C;
}

} // namespace

Piecewise::Piecewise(double delta, double x3, std::vector<Piece> pieces)
    : delta_(delta), x3_(x3), pieces_(std::move(pieces)) {
    cum_.assign(pieces_.size(), 0.0);
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
        const double xb = pieces_[i].lo;
        // continuity of the running antiderivative at piece boundaries
        cum_[i] = cum_[i - 1];
        const auto local = [&](const Piece& p, double x) {
            if (p.is_power) {
                const double s = x - x3_;
                return s >= 0 ? -std::pow(1.0 + s, -delta_) : std::pow(1.0 - s, -delta_);
            }
            return poly_eval(poly_antiderivative(p.c), x - p.lo);
        };
        cum_[i] += local(pieces_[i - 1], xb) - local(pieces_[i], xb);
    }
}

namespace {
std::size_t find_piece(const std::vector<Piecewise::Piece>& pieces, double x) {
    std::size_t i = 0;
    while (i + 1 < pieces.size() && x >= pieces[i + 1].lo) ++i;
    return i;
}
} // namespace

double Piecewise::value(double x) const {
    const auto& p = pieces_[find_piece(pieces_, x)];
    if (p.is_power) return delta_ * std::pow(1.0 + std::abs(x - x3_), -1.0 - delta_);
    return poly_eval(p.c, x - p.lo);
}

double Piecewise::derivative(double x) const {
    const auto& p = pieces_[find_piece(pieces_, x)];
    if (p.is_power) {
        const double s = x - x3_;
        const double sg = s >= 0 ? 1.0 : -1.0;
        return -sg * delta_ * (1.0 + delta_) * std::pow(1.0 + std::abs(s), -2.0 - delta_);
    }
    return poly_deriv(p.c, x - p.lo, 1);
}

double Piecewise::second_derivative(double x) const {
    const auto& p = pieces_[find_piece(pieces_, x)];
    if (p.is_power)
        return delta_ * (1.0 + delta_) * (2.0 + delta_) * std::pow(1.0 + std::abs(x - x3_), -3.0 - delta_);
    return poly_deriv(p.c, x - p.lo, 2);
}

double Piecewise::antiderivative(double x) const {
    const std::size_t i = find_piece(pieces_, x);
    const auto& p = pieces_[i];
    double local;
    if (p.is_power) {
        const double s = x - x3_;
        local = s >= 0 ? -std::pow(1.0 + s, -delta_) : std::pow(1.0 - s, -delta_);
    } else {
        local = poly_eval(poly_antiderivative(p.c), x - p.lo);
    }
    return cum_[i] + local;
}

double Piecewise::integral(double a, double x) const { return antiderivative(x) - antiderivative(a); }

namespace {

// Base profile value/derivatives of g(x) = delta (1+|x-x3|)^{-1-delta},
// evaluated with the sign of (x - x3) given explicitly so one-sided values
// at the kink are available.
struct BaseProfile {
    double delta, x3;
    double g(double x) const { return delta * std::pow(1.0 + std::abs(x - x3), -1.0 - delta); }
    double g1(double x) const {
        const double s = x - x3;
        const double sg = s >= 0 ? 1.0 : -1.0;
        return -sg * delta * (1.0 + delta) * std::pow(1.0 + std::abs(s), -2.0 - delta);
    }
    double g2(double x) const {
        return delta * (1.0 + delta) * (2.0 + delta) * std::pow(1.0 + std::abs(x - x3), -3.0 - delta);
    }
};

// Quintic Hermite on [lo, hi] matching (f, f', f'') at both ends, as
// coefficients in (x - lo).
std::vector<double> quintic_match(double lo, double hi, double f0, double d0, double dd0,
                                  double f1, double d1, double dd1) {
    const double W = hi - lo;
    std::vector<double> c(6, 0.0);
    c[0] = f0;
    c[1] = d0;
    c[2] = 0.5 * dd0;
    const double r0 = f1 - (c[0] + c[1] * W + c[2] * W * W);
    const double r1 = d1 - (c[1] + 2.0 * c[2] * W);
    const double r2 = dd1 - 2.0 * c[2];
    Eigen::Matrix3d A;
    A << std::pow(W, 3), std::pow(W, 4), std::pow(W, 5),
         3 * W * W, 4 * std::pow(W, 3), 5 * std::pow(W, 4),
         6 * W, 12 * W * W, 20 * std::pow(W, 3);
    const Eigen::Vector3d rhs(r0, r1, r2);
    const Eigen::Vector3d sol = A.fullPivLu().solve(rhs);
    c[3] = sol[0];
    c[4] = sol[1];
    c[5] = sol[2];
    return c;
}

// Bump ((x-lo)(hi-x))^3 / (W/2)^6 as coefficients in (x - lo): peak 1,
// vanishes to second order at both ends.
std::vector<double> bump_coeffs(double lo, double hi) {
    const double W = hi - lo;
    const double nrm = std::pow(0.5 * W, 6);
    return {0, 0, 0, std::pow(W, 3) / nrm, -3 * W * W / nrm, 3 * W / nrm, -1.0 / nrm};
}

double poly_integral_over(const std::vector<double>& c, double lo, double hi) {
    return poly_eval(poly_antiderivative(c), hi - lo);
}

} // namespace

double ConvexWeight::w_plus(double x) const { return wp_prime.integral(breakpoints[3], x); }
double ConvexWeight::w_minus(double x) const { return wm_prime.integral(breakpoints[1], x); }

ScalarWeight ConvexWeight::plus_weight() const {
    const Piecewise p = wp_prime;
    const double x4 = breakpoints[3];
    return {[p, x4](double x) { return p.integral(x4, x); },
            [p](double x) { return p.value(x); },
            [p](double x) { return p.derivative(x); },
            [p](double x) { return p.second_derivative(x); }};
}

ScalarWeight ConvexWeight::minus_weight() const {
    const Piecewise p = wm_prime;
    const double x2 = breakpoints[1];
    return {[p, x2](double x) { return p.integral(x2, x); },
            [p](double x) { return p.value(x); },
            [p](double x) { return p.derivative(x); },
            [p](double x) { return p.second_derivative(x); }};
}

ConvexWeight build_convex_weight(double delta, std::array<double, 5> xs) {
    for (int i = 0; i + 1 < 5; ++i)
        if (!(xs[static_cast<std::size_t>(i)] < xs[static_cast<std::size_t>(i + 1)]))
            throw std::invalid_argument("build_convex_weight: need x1 < x2 < x3 < x4 < x5");
    if (!(delta > 0)) throw std::invalid_argument("build_convex_weight: delta > 0");
    const double x1 = xs[0], x2 = xs[1], x3 = xs[2], x4 = xs[3], x5 = xs[4];
    double rho0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < 5; ++i)
        rho0 = std::min(rho0, (xs[static_cast<std::size_t>(i + 1)] - xs[static_cast<std::size_t>(i)]) / 3.0);

    const BaseProfile base{delta, x3};
    // Free-piece windows between the pinned base-profile regions.
    const double a1 = x1, b1 = x2 - rho0;
    const double a2 = x2 + rho0, b2 = x4 - rho0;
    const double a3 = x4 + rho0, b3 = x5;

    auto hermite = [&](double lo, double hi) {
        return quintic_match(lo, hi, base.g(lo), base.g1(lo), base.g2(lo), base.g(hi), base.g1(hi),
                             base.g2(hi));
    };
    const auto q1 = hermite(a1, b1), q2 = hermite(a2, b2), q3 = hermite(a3, b3);
    const auto bump1 = bump_coeffs(a1, b1), bump3 = bump_coeffs(a3, b3);

    // Base-profile integrals over the pinned regions.
    auto g_int = [&](double lo, double hi) {
        // integral of delta (1+|t-x3|)^{-1-delta}
        auto F = [&](double t) {
            const double s = t - x3;
            return s >= 0 ? -std::pow(1.0 + s, -delta) : std::pow(1.0 - s, -delta);
        };
        return F(hi) - F(lo);
    };

    // Condition A (w_minus(x1) = w_plus(x1)):
    //   int_{x1}^{x2} wm' = int_{x1}^{x4} wp'
    const double lhsA_fixed = poly_integral_over(q1, a1, b1) + g_int(b1, x2);
    const double rhsA = poly_integral_over(q1, a1, b1) + g_int(b1, a2) +
                        poly_integral_over(q2, a2, b2) + g_int(b2, x4);
    const double B1 = poly_integral_over(bump1, a1, b1);
    const double s_m1 = (rhsA - lhsA_fixed) / B1;

    // Condition B (w_minus(x5) = w_plus(x5)):
    //   int_{x2}^{x5} wm' = int_{x4}^{x5} wp'
    const double lhsB = g_int(x2, a2) + poly_integral_over(q2, a2, b2) + g_int(b2, a3) +
                        poly_integral_over(q3, a3, b3);
    const double rhsB_fixed = g_int(x4, a3) + poly_integral_over(q3, a3, b3);
    const double B3 = poly_integral_over(bump3, a3, b3);
    const double s_p3 = (lhsB - rhsB_fixed) / B3;

    auto add_scaled = [](std::vector<double> q, const std::vector<double>& b, double s) {
        q.resize(std::max(q.size(), b.size()), 0.0);
        for (std::size_t k = 0; k < b.size(); ++k) q[k] += s * b[k];
        return q;
    };
    const auto h_m1 = add_scaled(q1, bump1, s_m1);
    const auto h_p3 = add_scaled(q3, bump3, s_p3);

    auto make_pieces = [&](const std::vector<double>& h1c, const std::vector<double>& h2c,
                           const std::vector<double>& h3c) {
        std::vector<Piecewise::Piece> ps;
        ps.push_back({-std::numeric_limits<double>::infinity(), a1, true, {}});
        ps.push_back({a1, b1, false, h1c});
        ps.push_back({b1, a2, true, {}});
        ps.push_back({a2, b2, false, h2c});
        ps.push_back({b2, a3, true, {}});
        ps.push_back({a3, b3, false, h3c});
        ps.push_back({b3, std::numeric_limits<double>::infinity(), true, {}});
        return Piecewise(delta, x3, std::move(ps));
    };

    ConvexWeight W;
    W.breakpoints = xs;
    W.delta = delta;
    W.rho0 = rho0;
    W.wp_prime = make_pieces(q1, q2, h_p3);
    W.wm_prime = make_pieces(h_m1, q2, q3);

    // Positivity of both derivatives, sampled densely across the window.
    const double lo = x1 - 2.0, hi = x5 + 2.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = lo + (hi - lo) * i / 4000.0;
        if (!(W.wp_prime.value(x) > 0.0) || !(W.wm_prime.value(x) > 0.0))
            throw std::runtime_error(
                "build_convex_weight: infeasible positivity at x = " + std::to_string(x) +
                " (amplitudes " + std::to_string(s_m1) + ", " + std::to_string(s_p3) + ")");
    }
    return W;
}

std::string convex_weight_to_json(const ConvexWeight& w) {
    nlohmann::json j;
    j["breakpoints"] = w.breakpoints;
    j["delta"] = w.delta;
    j["rho0"] = w.rho0;
    return j.dump(2);
}

} // namespace wsl::weights
