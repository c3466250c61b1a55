#include <doctest.h>

#include <cmath>

#include "wsl/weights.hpp"

using namespace wsl::weights;
using doctest::Approx;

namespace {
double num_deriv(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2 * h);
}
} // namespace

TEST_CASE("basic weight values and derivatives") {
    const auto w = basic_weight(1.0);
    CHECK(w.w(0.0) == Approx(0.0));
    CHECK(w.w(1e9) == Approx(1.0));
    CHECK(w.w1(0.0) == Approx(1.0));
    CHECK(w.w3(0.0) == Approx(6.0)); // delta (1+delta)(2+delta) at x=0, delta=1
    for (double x : {0.0, 0.5, 2.0, 7.0}) {
        CHECK(w.w1(x) == Approx(num_deriv(w.w, x)).epsilon(1e-6));
        CHECK(w.w2(x) == Approx(num_deriv(w.w1, x)).epsilon(1e-6));
        CHECK(w.w3(x) == Approx(num_deriv(w.w2, x)).epsilon(1e-6));
    }
    const auto wd = basic_weight(0.4);
    CHECK(wd.w1(0.0) == Approx(0.4));
    CHECK_THROWS(basic_weight(0.0));
    CHECK_THROWS(basic_weight(1.5));
}

TEST_CASE("flaring weight: anchored at zero, positive slope, matched profile") {
    const double delta = 0.7, x0 = 1.0, r = 0.4;
    const auto w = flaring_weight(delta, x0, r);
    CHECK(w.w(0.0) == Approx(0.0));
    for (double x : {-6.0, -2.0, -0.3, 0.0, 0.4, 0.7, 1.0, 1.3, 1.5, 3.0, 8.0}) {
        CHECK(w.w1(x) > 0.0);
        CHECK(x * w.w(x) >= -1e-12); // x w(x) >= 0
        CHECK(w.w1(x) == Approx(num_deriv(w.w, x)).epsilon(1e-5));
        if (std::abs(x - x0) > r + 1e-3) {
            CHECK(w.w1(x) == Approx(delta * std::pow(1.0 + std::abs(x - x0), -1.0 - delta)));
        }
        CHECK(w.w2(x) == Approx(num_deriv(w.w1, x)).epsilon(1e-5));
        CHECK(w.w3(x) == Approx(num_deriv(w.w2, x)).epsilon(2e-4).scale(1.0));
    }
    CHECK_THROWS(flaring_weight(0.7, 0.2, 0.4)); // needs r < x0
}

TEST_CASE("bump mu derivative is compactly supported") {
    const auto mu = bump_mu(1.0, 3.0);
    CHECK(mu.w1(0.9) == 0.0);
    CHECK(mu.w1(3.1) == 0.0);
    CHECK(mu.w1(2.0) == Approx(1.0)); // peak normalized
    CHECK(mu.w(2.0) == Approx(0.0));  // anchored at the midpoint
    for (double x : {1.2, 1.7, 2.4, 2.9})
        CHECK(mu.w1(x) == Approx(num_deriv(mu.w, x)).epsilon(1e-6));
}

TEST_CASE("convex weight construction satisfies the four conditions") {
    const double delta = 1.0;
    const auto W = build_convex_weight(delta, {-2.0, -1.0, 0.0, 1.0, 2.0});
    const double x1 = -2, x2 = -1, x3 = 0, x4 = 1, x5 = 2;
    auto g = [&](double x) { return delta * std::pow(1.0 + std::abs(x - x3), -1.0 - delta); };

    // Condition: w_+(x4) = 0 and w_-(x2) = 0.
    CHECK(W.w_plus(x4) == Approx(0.0).scale(1.0));
    CHECK(W.w_minus(x2) == Approx(0.0).scale(1.0));

    // Condition: positivity of both derivatives (sampled).
    for (int i = 0; i <= 1000; ++i) {
        const double x = -5.0 + 10.0 * i / 1000.0;
        CHECK(W.w_plus_prime(x) > 0.0);
        CHECK(W.w_minus_prime(x) > 0.0);
    }

    // Condition: outside (x1, x5) both weights agree and have the profile slope.
    for (double x : {-4.0, -2.5, 2.5, 4.0, 9.0}) {
        CHECK(W.w_plus(x) == Approx(W.w_minus(x)).epsilon(1e-10).scale(1.0));
        CHECK(W.w_plus_prime(x) == Approx(g(x)));
        CHECK(W.w_minus_prime(x) == Approx(g(x)));
    }

    // Condition: profile slope on neighborhoods of x2 and x4 (radius rho0).
    for (double s : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        const double xa = x2 + s * W.rho0, xb = x4 + s * W.rho0;
        CHECK(W.w_plus_prime(xa) == Approx(g(xa)));
        CHECK(W.w_minus_prime(xa) == Approx(g(xa)));
        CHECK(W.w_plus_prime(xb) == Approx(g(xb)));
        CHECK(W.w_minus_prime(xb) == Approx(g(xb)));
    }

    // Derivative consistency of the assembled scalar weights.
    const auto wp = W.plus_weight();
    for (double x : {-3.0, -1.2, -0.4, 0.3, 1.4, 2.7}) {
        const double dh = 1e-6;
        CHECK(wp.w1(x) == Approx((wp.w(x + dh) - wp.w(x - dh)) / (2 * dh)).epsilon(1e-4));
        CHECK(wp.w2(x) == Approx((wp.w1(x + dh) - wp.w1(x - dh)) / (2 * dh)).epsilon(1e-4));
    }
}

TEST_CASE("convex weight with asymmetric breakpoints") {
    const auto W = build_convex_weight(0.5, {-1.5, -0.7, 0.4, 1.9, 3.0});
    CHECK(W.w_plus(1.9) == Approx(0.0).scale(1.0));
    CHECK(W.w_minus(-0.7) == Approx(0.0).scale(1.0));
    for (double x : {-3.0, 4.0})
        CHECK(W.w_plus(x) == Approx(W.w_minus(x)).epsilon(1e-9).scale(1.0));
    // Monotone increasing through the zero.
    CHECK(W.w_plus(1.0) < 0.0);
    CHECK(W.w_plus(2.5) > 0.0);
    CHECK(W.w_minus(-1.0) < 0.0);
    CHECK(W.w_minus(0.0) > 0.0);
    CHECK_THROWS(build_convex_weight(0.5, {0.0, -1.0, 1.0, 2.0, 3.0}));
}
