#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wsl/grid.hpp"

namespace wsl::waves {

struct WaveState {
    fd::Vector u;
    fd::Vector v; // du/dt
    double t = 0.0;
};

/// Smooth compactly supported bump (mollifier profile, peak 1) with zero
/// velocity; component = 2 puts the bump into the velocity instead.
/// Throws when the support ball exits the domain interior.
std::pair<fd::Vector, fd::Vector> initial_bump(const fd::Grid& grid, double cx, double cy,
                                               double radius, int component = 1);

struct TimeSample {
    double t = 0.0;
    double norm_m0 = 0.0; // ||chi u||
    double norm_m1 = 0.0; // ||chi u||_{H^1}
    double energy = 0.0;  // conserved discrete energy of the leapfrog pair
};

struct WaveSeries {
    std::vector<TimeSample> samples;
    WaveState final_state;
    double cfl = 0.0;
    double dt = 0.0;
    long steps = 0;
};

/// Maximal time before truncation-face reflections can re-enter the cutoff
/// region: 2 (L - support_radius - R0), finite propagation speed 1.
double reflection_horizon(const fd::Grid& grid, double support_radius);

struct PropagateOptions {
    double cfl = 0.6;              // dt = cfl * h, must stay <= 0.9/sqrt(2)
    double sample_dt = 0.5;        // cadence of norm/energy samples
    std::optional<double> horizon; // error when T exceeds this
};

/// Leapfrog evolution of the Dirichlet wave equation on the truncated grid.
/// chi (optional diagonal cutoff) feeds the sampled local norms.
WaveSeries propagate(const fd::Grid& grid, const fd::DiscreteOperator& op, WaveState state,
                     double T, PropagateOptions opt = {},
                     const fd::Vector* chi = nullptr);

/// Discrete L2 (m=0) or L2+gradient (m=1) norm of chi*u.
double local_norm(const fd::Grid& grid, const fd::Vector& u, const fd::Vector& chi, int m);

struct DecayFit {
    double exponent = 0.0;
    double t_min = 0.0, t_max = 0.0;
    double residual = 0.0;
    bool envelope = false;
    std::vector<std::pair<double, double>> points_used;
};

/// Least-squares slope of log norm vs log t over the window; with
/// envelope = true only local maxima of the series enter the fit (the decay
/// amplitudes carry oscillatory factors).
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t_min,
                   double t_max, bool envelope = true);

} // namespace wsl::waves
