#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wsl::spectrum {

/// Open interval (a, b) on the transverse axis.
struct Interval {
    double a = 0.0;
    double b = 0.0;
    double width() const { return b - a; }
};

/// Transverse cross section: a finite union of disjoint open intervals,
/// sorted by left endpoint and separated by a positive distance.
struct CrossSection {
    std::vector<Interval> intervals;

    bool empty() const { return intervals.empty(); }
    double total_width() const;
    /// Extent of the union, max b_i - min a_i (0 for the empty section).
    double diameter() const;
    double y_min() const;
    double y_max() const;
    bool contains(double y) const;
};

/// Validates disjointness and positive widths; throws std::invalid_argument.
CrossSection make_cross_section(std::vector<Interval> intervals);

/// One Dirichlet eigenpair of the cross section. On interval (a,b) the k-th
/// pair is sigma = k*pi/(b-a), phi(y) = sqrt(2/(b-a)) sin(k*pi*(y-a)/(b-a)).
struct Mode {
    double sigma = 0.0;     // sqrt of the eigenvalue, sigma_j > 0
    int interval_index = 0; // which interval of Y supports phi_j
    int harmonic = 0;       // k >= 1 within that interval
};

/// First J eigenpairs of -Laplace_Y, sorted so 0 < sigma_1 <= sigma_2 <= ...
/// Mode indices are 1-based throughout (j = 1 is the lowest mode).
struct ModeBasis {
    CrossSection section;
    std::vector<Mode> modes;

    int size() const { return static_cast<int>(modes.size()); }
    const Mode& mode(int j) const; // 1-based, throws std::out_of_range
    double sigma(int j) const { return mode(j).sigma; }
    double sigma_sq(int j) const { double s = mode(j).sigma; return s * s; }
};

/// Closed-form spectral data: merge-sorts the per-interval analytic
/// eigenvalues. J >= 1.
ModeBasis modes(const CrossSection& section, int J);

/// Unit-L2-normalized eigenfunction value; zero outside the supporting
/// interval. j is 1-based.
double evaluate_mode(const ModeBasis& basis, int j, double y);

struct GapWitness {
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    double gap = 0.0;
    double required = 0.0;
};

struct GapCheck {
    bool holds = true;
    std::optional<GapWitness> witness;
};

/// Checks sigma_{j'} - sigma_j >= c_Y * sigma_j^{-N_Y} for consecutive
/// distinct eigenvalues. Values equal within 1e-12 count as one eigenvalue.
GapCheck check_gap_condition(const ModeBasis& basis, double c_Y, double N_Y);

/// JSON round trip, serialized as [[a,b],...].
std::string cross_section_to_json(const CrossSection& section);
CrossSection cross_section_from_json(const std::string& text);

} // namespace wsl::spectrum
