#pragma once

#include <complex>
#include <set>
#include <string>
#include <variant>

#include "wsl/cross_section.hpp"

namespace wsl::riemann {

using Complex = std::complex<double>;

/// A point of the Riemann surface on which every tau_j(z) = (z - sigma_j^2)^{1/2}
/// is single valued, encoded as a base point z plus the finite set of modes
/// whose square-root branch is the lower one. Mode indices are 1-based.
struct SheetPoint {
    Complex z;
    std::set<int> flipped;
};

/// Boundary-of-physical-region point E +- i0 with E above the bottom of the
/// continuous spectrum.
struct BoundaryPoint {
    double E = 0.0;
    int side = +1; // +1 for E + i0, -1 for E - i0
};

using SurfacePoint = std::variant<SheetPoint, BoundaryPoint>;

struct TauResult {
    Complex value;
    bool at_ramification = false; // z hit sigma_j^2 exactly
};

/// Branch function of mode j at the given point: the square root of
/// z - sigma_j^2 with positive imaginary part, negated for flipped modes.
/// At E +- i0 the propagating branch is real with sign +-, the evanescent
/// one lies in i R_+.
TauResult tau(const SurfacePoint& p, int j, const spectrum::ModeBasis& basis);

/// d(z, z') = sup_j |tau_j(z) - tau_j(z')|, evaluated over finitely many j
/// with a certified tail bound |z - z'| / (2 sqrt(sigma_j^2 - max |z|)).
/// Throws when a flipped index lies outside the (extendable) mode basis.
double metric_d(const SurfacePoint& p, const SurfacePoint& q,
                const spectrum::ModeBasis& basis);

/// True iff the flip set is empty and z is off the continuous spectrum ray
/// [sigma_1^2, infinity), i.e. Im tau_j(z) > 0 for all j.
bool is_physical(const SheetPoint& p, const spectrum::ModeBasis& basis);

Complex base_z(const SurfacePoint& p);

std::string sheet_point_to_json(const SheetPoint& p);
SheetPoint sheet_point_from_json(const std::string& text);

} // namespace wsl::riemann
