#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wsl/cross_section.hpp"

namespace wsl::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
inline Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
inline Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
double norm(Vec2 p);

enum class Regularity { smooth, piecewise_linear };

/// One parametric boundary piece, t in [0,1]. The tangent must be nonzero
/// away from endpoint corners.
struct BoundarySegment {
    std::function<Vec2(double)> position;
    std::function<Vec2(double)> velocity;
    Regularity regularity = Regularity::smooth;
    bool on_obstacle = false; // part of an interior obstacle loop
    std::string label;
};

BoundarySegment line_segment(Vec2 from, Vec2 to, std::string label = {});
/// Circular arc, angles in radians, counterclockwise when th1 > th0.
BoundarySegment arc_segment(Vec2 center, double radius, double th0, double th1,
                            std::string label = {});
/// Graph segment y = f(x) (axis='x') or x = f(y) (axis='y') over [t0, t1],
/// with f and f' supplied as closures.
BoundarySegment graph_segment(char axis, std::function<double(double)> f,
                              std::function<double(double)> df, double t0, double t1,
                              std::string label = {});

enum class EndKind { none, cylindrical, open_unbounded };

/// One of the two ends x -> +-infinity. A cylindrical end is an exact
/// half-line product with cross section Y; an open_unbounded end marks
/// geometry-only domains (no product structure, solvers reject them).
struct EndSpec {
    EndKind kind = EndKind::none;
    spectrum::CrossSection Y;
};

enum class TheoremClass { cig, hour, flat, convexobs, none };
std::string to_string(TheoremClass c);

struct WaveguideDomain {
    std::string name;
    std::vector<BoundarySegment> segments;
    std::function<bool(Vec2)> inside;
    double R0 = 1.0;          // product structure holds for |x| >= R0
    EndSpec end_minus, end_plus;
    double x0 = 0.0;          // axis offset used by the flaring-interval weights
    double x_rep = 20.0;      // boundary walls are represented up to |x| = x_rep
    double y_lo = -1.0, y_hi = 1.0; // transverse bounding box of the domain
    bool positive_x = false;  // x > 0 throughout Omega (one-ended class)
    std::optional<double> strip_halfwidth; // set when Omega = strip minus obstacle
    std::optional<double> flaring_hint_lo, flaring_hint_hi; // candidate interval

    bool has_cylindrical_end() const {
        return end_minus.kind == EndKind::cylindrical || end_plus.kind == EndKind::cylindrical;
    }
    bool two_ended() const {
        return end_minus.kind == EndKind::cylindrical && end_plus.kind == EndKind::cylindrical;
    }
};

struct GeometryReport {
    double sup_x_nu_x = 0.0;
    std::vector<Vec2> violating_points;
    std::optional<double> flaring_constant;
    TheoremClass theorem_class = TheoremClass::none;
};

/// Outward unit normal of segment `seg_index` at parameter t, oriented by
/// probing inside() on both sides. Throws on a degenerate tangent.
Vec2 outward_normal(const WaveguideDomain& dom, int seg_index, double t);

/// Samples x*nu_x over the boundary and reports the sup and all samples
/// exceeding the sign tolerance (1e-10). Corner neighborhoods of parameter
/// size 1e-6 are excluded.
GeometryReport check_star_shaped_x(const WaveguideDomain& dom, int samples_per_segment);

/// Largest C_I >= 0 with x*nu_x <= -C_I on the sampled boundary inside the
/// open slab I x R; absent when sup x*nu_x >= 0 there. Throws "empty flaring
/// set" when I meets no boundary.
std::optional<double> check_flaring(const WaveguideDomain& dom, double I_lo, double I_hi,
                                    int samples);

TheoremClass classify_theorem(const WaveguideDomain& dom);

/// Named example domains. Parameters are given as JSON, e.g.
/// {"width": 3.141...} for half_strip. Unknown names and invalid parameter
/// combinations throw.
WaveguideDomain gallery(const std::string& name, const std::string& params_json = "{}");

/// Domain specs as JSON documents: {"type": "<gallery name>", "params": {...}}
/// or {"type": "custom", "segments": [...], "ends": {...}}.
WaveguideDomain domain_from_json(const std::string& text);

std::string geometry_report_to_json(const GeometryReport& report);

} // namespace wsl::geom
