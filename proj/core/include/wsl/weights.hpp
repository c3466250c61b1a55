#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace wsl::weights {

/// Scalar multiplier weight with derivatives up to third order.
struct ScalarWeight {
    std::function<double(double)> w;
    std::function<double(double)> w1;
    std::function<double(double)> w2;
    std::function<double(double)> w3;
};

ScalarWeight constant_weight(double c);

/// w(x) = 1 - (1+x)^{-delta} on x >= 0, delta in (0,1].
ScalarWeight basic_weight(double delta);

/// Flaring-interval weight: w' equals delta (1+|x-x0|)^{-1-delta} away from
/// [x0-r, x0+r], is a positive even quartic interpolant inside, and w is
/// anchored so w(0) = 0 (hence x w(x) >= 0 and w' > 0 everywhere).
/// Requires 0 < r < x0.
ScalarWeight flaring_weight(double delta, double x0, double r);

/// C^1 multiplier whose derivative is a smooth bump supported on [lo, hi],
/// with mu = 0 at the midpoint. Used by the ibpe-style identity checks.
ScalarWeight bump_mu(double lo, double hi);

/// Piecewise scalar function used for the convex-obstacle weight derivative:
/// power-profile pieces delta (1+|x-x3|)^{-1-delta} interleaved with
/// polynomial interpolants, with closed-form derivatives and antiderivative.
class Piecewise {
  public:
    struct Piece {
        double lo, hi;            // hi = +inf for the last piece
        bool is_power = true;     // base profile piece
        std::vector<double> c;    // poly coefficients in (x - lo) when !is_power
    };

    Piecewise() = default;
    Piecewise(double delta, double x3, std::vector<Piece> pieces);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    /// integral of value over [a, x]
    double integral(double a, double x) const;

    const std::vector<Piece>& pieces() const { return pieces_; }

  private:
    double antiderivative(double x) const;
    double delta_ = 0.0, x3_ = 0.0;
    std::vector<Piece> pieces_;
    std::vector<double> cum_; // antiderivative offsets making it continuous
};

/// The two preliminary weights of the convex-obstacle construction.
/// w_plus vanishes at x4 and is adapted to the upper region; w_minus
/// vanishes at x2 (lower region); they agree outside (x1, x5) where both
/// derivatives equal delta (1+|x-x3|)^{-1-delta}.
struct ConvexWeight {
    std::array<double, 5> breakpoints; // x1 < x2 < x3 < x4 < x5
    double delta = 0.0;
    double rho0 = 0.0;
    Piecewise wp_prime, wm_prime;

    double w_plus(double x) const;
    double w_minus(double x) const;
    double w_plus_prime(double x) const { return wp_prime.value(x); }
    double w_minus_prime(double x) const { return wm_prime.value(x); }

    ScalarWeight plus_weight() const;
    ScalarWeight minus_weight() const;
};

/// Builds the piecewise weight pair: polynomial interpolants match the base
/// profile to second order at every junction, and one free bump amplitude
/// per side is solved (linearly) so the two integral-matching conditions
/// hold exactly. Throws if positivity of w' cannot be maintained.
ConvexWeight build_convex_weight(double delta, std::array<double, 5> breakpoints);

std::string convex_weight_to_json(const ConvexWeight& w);

} // namespace wsl::weights
