#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsl/dtn.hpp"
#include "wsl/geometry.hpp"

namespace wsl::resonance {

struct SigmaMinResult {
    double sigma_min_rel = 0.0; // smallest singular value / ||A||
    double sigma_min_abs = 0.0;
    double matrix_norm = 0.0;
    bool pole_hit = false; // factorization breakdown, reported as sigma_min ~ 0
    int iterations = 0;
};

struct SigmaMinOptions {
    unsigned seed = 42;
    double tol = 1e-6;
    int max_iterations = 80;
};

/// Relative smallest singular value of the closed system via inverse
/// iteration on the normal equations.
SigmaMinResult min_singular_value(dtn::ClosedSystem& sys, SigmaMinOptions opt = {});

struct Dip {
    double E = 0.0;           // refined location on the fine grid
    double E_coarse = 0.0;    // refined location on the scan grid
    double depth = 0.0;       // refined sigma_min_rel (fine grid)
    double depth_coarse = 0.0;
    double background = 0.0;  // scan median
    bool persistent = false;  // survives h -> h/2
};

struct PoleScanResult {
    std::vector<double> E;
    std::vector<double> sigma_min;     // relative, aligned with E (skipped = NaN)
    std::vector<double> skipped;       // ramification points stepped over
    double background_median = 0.0;
    std::vector<Dip> dips;             // sorted by E
};

struct ScanOptions {
    SigmaMinOptions sigma;
    double dip_trigger = 1.0 / 3.0;    // local-minimum candidates below median * trigger
    double dip_keep = 0.1;             // refined dips kept below median * keep
    bool check_persistence = true;
    int refine_evals = 36;
};

/// sigma_min profile along E + i0; candidate dips are refined by local
/// minimization and re-examined at h/2.
PoleScanResult scan_real_axis(const geom::WaveguideDomain& dom,
                              const spectrum::ModeBasis& basis, double E_lo, double E_hi,
                              int steps, double h, double L, ScanOptions opt = {});

struct PoleRefinement {
    riemann::SheetPoint location;
    double sigma_min = 0.0;
    double sigma_min_fine = 0.0;
    bool deepens = false;      // dip deepens under grid refinement: true pole
    bool washes_out = false;   // dip disappears: discretization artifact
    bool hit_ramification = false;
    int evaluations = 0;
};

/// Derivative-free local minimization of sigma_min over the two real
/// coordinates of z on a fixed sheet, plus an h -> h/2 persistence study.
PoleRefinement locate_pole(const geom::WaveguideDomain& dom, const spectrum::ModeBasis& basis,
                           riemann::SheetPoint seed, double h, double L,
                           SigmaMinOptions opt = {});

struct ResFreeSample {
    riemann::SheetPoint point;
    double dist = 0.0;        // metric distance to E + i0
    double sigma_min = 0.0;
    double norm_estimate = 0.0;
};

struct ResFreeReport {
    bool ok = false;
    bool vacuous = false;     // empty ball / no samples
    double E = 0.0;
    double ball_radius = 0.0;
    double c1 = 0.0, c2 = 0.0, pole_floor = 0.0;
    std::vector<ResFreeSample> samples;
    std::string failure;
};

struct ResFreeCalibration {
    double c1 = 0.5;
    double c2 = 0.0;
    double pole_floor = 0.0;
};

/// Samples sheet points (both the physical side and the continuation just
/// below the spectrum, which flips every propagating mode) in the metric
/// ball d(z, E+i0) < c1 (1+E)^{-1}, checking sigma_min stays above the pole
/// floor and ||chi R(z) chi|| <= c2 (1+E)^{1/2}.
ResFreeReport verify_resonance_free(const geom::WaveguideDomain& dom,
                                    const spectrum::ModeBasis& basis, double E,
                                    const ResFreeCalibration& cal, double h, double L,
                                    int samples, dtn::NormEstimateOptions nopt = {});

/// Runs the same sampling at training energies and records the observed
/// margins: pole_floor = min sigma/10, c2 = 1.25 * max norm/(1+E)^{1/2}.
ResFreeCalibration calibrate_resonance_free(const geom::WaveguideDomain& dom,
                                            const spectrum::ModeBasis& basis,
                                            const std::vector<double>& E_train, double h,
                                            double L, int samples,
                                            dtn::NormEstimateOptions nopt = {});

} // namespace wsl::resonance
