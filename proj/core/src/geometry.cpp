#include "wsl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wsl::geom {

using nlohmann::json;

namespace {
constexpr double kSignTol = 1e-10;     // tolerance on x*nu_x sign tests
constexpr double kCornerSkip = 1e-6;   // parameter neighborhood excluded at corners
constexpr double kFlareMargin = 1e-3;  // x*nu_x must clear this to count as flaring
} // namespace

double norm(Vec2 p) { return std::hypot(p.x, p.y); }

BoundarySegment line_segment(Vec2 from, Vec2 to, std::string label) {
    BoundarySegment s;
    s.position = [=](double t) { return Vec2{from.x + t * (to.x - from.x), from.y + t * (to.y - from.y)}; };
    s.velocity = [=](double) { return Vec2{to.x - from.x, to.y - from.y}; };
    s.regularity = Regularity::piecewise_linear;
    s.label = std::move(label);
    return s;
}

BoundarySegment arc_segment(Vec2 center, double radius, double th0, double th1, std::string label) {
    BoundarySegment s;
    const double dth = th1 - th0;
    s.position = [=](double t) {
        const double th = th0 + t * dth;
        return Vec2{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
    };
    s.velocity = [=](double t) {
        const double th = th0 + t * dth;
        return Vec2{-radius * dth * std::sin(th), radius * dth * std::cos(th)};
    };
    s.label = std::move(label);
    return s;
}

BoundarySegment graph_segment(char axis, std::function<double(double)> f,
                              std::function<double(double)> df, double t0, double t1,
                              std::string label) {
    BoundarySegment s;
    const double dt = t1 - t0;
    if (axis == 'x') {
        s.position = [=](double t) { const double x = t0 + t * dt; return Vec2{x, f(x)}; };
        s.velocity = [=](double t) { const double x = t0 + t * dt; return Vec2{dt, dt * df(x)}; };
    } else if (axis == 'y') {
        s.position = [=](double t) { const double y = t0 + t * dt; return Vec2{f(y), y}; };
        s.velocity = [=](double t) { const double y = t0 + t * dt; return Vec2{dt * df(y), dt}; };
    } else {
        throw std::invalid_argument("graph_segment: axis must be 'x' or 'y'");
    }
    s.label = std::move(label);
    return s;
}

std::string to_string(TheoremClass c) {
    switch (c) {
        case TheoremClass::cig: return "cig";
        case TheoremClass::hour: return "hour";
        case TheoremClass::flat: return "flat";
        case TheoremClass::convexobs: return "convexobs";
        case TheoremClass::none: return "none";
    }
    return "none";
}

Vec2 outward_normal(const WaveguideDomain& dom, int seg_index, double t) {
    if (seg_index < 0 || seg_index >= static_cast<int>(dom.segments.size()))
        throw std::out_of_range("outward_normal: segment index");
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("outward_normal: t outside [0,1]");
    const auto& seg = dom.segments[static_cast<std::size_t>(seg_index)];
    const Vec2 v = seg.velocity(t);
    const double speed = norm(v);
    if (!(speed > 1e-14)) throw std::runtime_error("non-Lipschitz parametrization point");
    Vec2 n{v.y / speed, -v.x / speed};
    const Vec2 p = seg.position(t);
    // Larger offsets cover inside tests with limited resolution (polylined
    // custom domains).
    for (double eps : {1e-6, 1e-7, 1e-5, 1e-4, 1e-3}) {
        const bool plus_in = dom.inside(p + eps * n);
        const bool minus_in = dom.inside(p - eps * n);
        if (!plus_in && minus_in) return n;
        if (plus_in && !minus_in) return Vec2{-n.x, -n.y};
    }
    throw std::runtime_error("outward_normal: could not orient normal against inside test");
}

namespace {

struct BoundarySample {
    Vec2 p;
    Vec2 nu;
    int segment;
    double t;
};

std::vector<BoundarySample> sample_boundary(const WaveguideDomain& dom, int per_segment) {
    std::vector<BoundarySample> out;
    out.reserve(dom.segments.size() * static_cast<std::size_t>(per_segment));
    for (int s = 0; s < static_cast<int>(dom.segments.size()); ++s) {
        for (int i = 0; i < per_segment; ++i) {
            const double t = kCornerSkip + (1.0 - 2.0 * kCornerSkip) * i / (per_segment - 1);
            out.push_back({dom.segments[static_cast<std::size_t>(s)].position(t),
                           outward_normal(dom, s, t), s, t});
        }
    }
    return out;
}

} // namespace

GeometryReport check_star_shaped_x(const WaveguideDomain& dom, int samples_per_segment) {
    if (samples_per_segment < 2)
        throw std::invalid_argument("check_star_shaped_x: samples_per_segment >= 2");
    GeometryReport report;
    report.sup_x_nu_x = -std::numeric_limits<double>::infinity();
    for (const auto& s : sample_boundary(dom, samples_per_segment)) {
        const double v = s.p.x * s.nu.x;
        report.sup_x_nu_x = std::max(report.sup_x_nu_x, v);
        if (v > kSignTol) report.violating_points.push_back(s.p);
    }
    // The straight walls of a cylindrical end continue past the represented
    // segments with nu = (0, +-1), contributing x*nu_x = 0 exactly.
    if (dom.has_cylindrical_end()) report.sup_x_nu_x = std::max(report.sup_x_nu_x, 0.0);
    return report;
}

std::optional<double> check_flaring(const WaveguideDomain& dom, double I_lo, double I_hi,
                                    int samples) {
    if (!(I_lo < I_hi)) throw std::invalid_argument("check_flaring: empty interval");
    double worst = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& s : sample_boundary(dom, samples)) {
        if (s.p.x <= I_lo || s.p.x >= I_hi) continue;
        found = true;
        worst = std::max(worst, s.p.x * s.nu.x);
    }
    if (!found) throw std::runtime_error("empty flaring set");
    if (worst > -kSignTol) return std::nullopt;
    return -worst;
}

namespace {

bool sampled_positive_x(const WaveguideDomain& dom) {
    // x > 0 throughout Omega, probed on a coarse bounding-box lattice.
    // Slightly irrational offsets keep the probes off boundary curves.
    const double xlo = -dom.x_rep, xhi = dom.x_rep;
    for (int i = 0; i <= 211; ++i)
        for (int j = 0; j <= 61; ++j) {
            const Vec2 p{xlo + (xhi - xlo) * i / 211.0,
                         dom.y_lo + (dom.y_hi - dom.y_lo) * j / 61.0};
            if (p.x < -1e-9 && dom.inside(p)) return false;
        }
    return true;
}

int count_components_at(const WaveguideDomain& dom, double x) {
    int runs = 0;
    bool prev = false;
    const int n = 4096;
    for (int j = 0; j <= n; ++j) {
        const bool in = dom.inside({x, dom.y_lo + (dom.y_hi - dom.y_lo) * j / n});
        if (in && !prev) ++runs;
        prev = in;
    }
    return runs;
}

struct BinProfile {
    std::vector<int> status; // 0 empty, 1 flaring-only, 2 horizontal-only, 3 mixed/bad
    std::vector<std::vector<double>> horiz_levels;
    double lo, hi, width;
};

BinProfile bin_boundary(const WaveguideDomain& dom, int nbins) {
    BinProfile prof;
    prof.lo = -dom.x_rep;
    prof.hi = dom.x_rep;
    prof.width = (prof.hi - prof.lo) / nbins;
    prof.status.assign(static_cast<std::size_t>(nbins), 0);
    prof.horiz_levels.assign(static_cast<std::size_t>(nbins), {});
    for (const auto& s : sample_boundary(dom, 512)) {
        if (s.p.x <= prof.lo || s.p.x >= prof.hi) continue;
        const auto b = static_cast<std::size_t>((s.p.x - prof.lo) / prof.width);
        if (b >= prof.status.size()) continue;
        const bool flaring = s.p.x * s.nu.x <= -kFlareMargin;
        const bool horizontal = std::abs(s.nu.x) <= 1e-9;
        int cls = flaring ? 1 : (horizontal ? 2 : 3);
        if (cls == 2) prof.horiz_levels[b].push_back(s.p.y);
        if (prof.status[b] == 0) prof.status[b] = cls;
        else if (prof.status[b] != cls) prof.status[b] = (cls == 3 || prof.status[b] == 3) ? 3 : 4;
        // 4 = flaring+horizontal mix, acceptable for the partial (flat) search
    }
    return prof;
}

std::optional<std::pair<double, double>> find_full_flaring_interval(const WaveguideDomain& dom) {
    if (dom.flaring_hint_lo && dom.flaring_hint_hi) {
        try {
            auto c = check_flaring(dom, *dom.flaring_hint_lo, *dom.flaring_hint_hi, 512);
            if (c && *c > kFlareMargin) return std::make_pair(*dom.flaring_hint_lo, *dom.flaring_hint_hi);
        } catch (const std::runtime_error&) {
        }
    }
    const auto prof = bin_boundary(dom, 200);
    int best_len = 0, best_start = -1;
    int run_start = -1, run_len = 0, run_sampled = 0;
    for (int b = 0; b <= static_cast<int>(prof.status.size()); ++b) {
        const bool ok = b < static_cast<int>(prof.status.size()) &&
                        (prof.status[static_cast<std::size_t>(b)] == 1 ||
                         prof.status[static_cast<std::size_t>(b)] == 0);
        if (ok) {
            if (run_start < 0) { run_start = b; run_len = 0; run_sampled = 0; }
            ++run_len;
            if (prof.status[static_cast<std::size_t>(b)] == 1) ++run_sampled;
        } else {
            if (run_start >= 0 && run_sampled >= 2 && run_len > best_len) {
                best_len = run_len;
                best_start = run_start;
            }
            run_start = -1;
        }
    }
    if (best_start < 0) return std::nullopt;
    const double lo = prof.lo + best_start * prof.width;
    const double hi = lo + best_len * prof.width;
    auto c = check_flaring(dom, lo, hi, 512);
    if (c && *c > kFlareMargin) return std::make_pair(lo, hi);
    return std::nullopt;
}

// Partial-flaring search: an interval where every boundary sample either
// flares or lies on a horizontal wall, with at most one wall level per
// connected component of the slab section.
bool has_partial_flaring_interval(const WaveguideDomain& dom) {
    const auto prof = bin_boundary(dom, 200);
    auto levels_components_ok = [&](int start, int len) {
        const double lo = prof.lo + start * prof.width;
        const double hi = lo + len * prof.width;
        std::vector<double> levels;
        for (int b = start; b < start + len; ++b)
            for (double y : prof.horiz_levels[static_cast<std::size_t>(b)]) levels.push_back(y);
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end(),
                                 [](double p, double q) { return std::abs(p - q) < 1e-8; }),
                     levels.end());
        const int K = count_components_at(dom, 0.5 * (lo + hi));
        return static_cast<int>(levels.size()) <= K;
    };
    auto check_run = [&](int start, int len) {
        // Count flaring bins and their span inside the run.
        int flares = 0, first_flare = -1, last_flare = -1;
        for (int b = start; b < start + len; ++b) {
            const int st = prof.status[static_cast<std::size_t>(b)];
            if (st == 1 || st == 4) {
                ++flares;
                if (first_flare < 0) first_flare = b;
                last_flare = b;
            }
        }
        if (flares < 2) return false;
        if (levels_components_ok(start, len)) return true;
        // The maximal run may drag in extra wall levels; retry on the exact
        // flaring span and on a one-bin enlargement of it.
        if (levels_components_ok(first_flare, last_flare - first_flare + 1)) return true;
        const int s2 = std::max(start, first_flare - 1);
        const int l2 = std::min(start + len, last_flare + 2) - s2;
        return levels_components_ok(s2, l2);
    };
    int run_start = -1, run_len = 0;
    for (int b = 0; b <= static_cast<int>(prof.status.size()); ++b) {
        const int st = b < static_cast<int>(prof.status.size())
                           ? prof.status[static_cast<std::size_t>(b)] : 3;
        const bool ok = st == 0 || st == 1 || st == 2 || st == 4;
        if (ok) {
            if (run_start < 0) { run_start = b; run_len = 0; }
            ++run_len;
        } else {
            if (run_start >= 0 && check_run(run_start, run_len)) return true;
            run_start = -1;
        }
    }
    return false;
}

bool is_strip_minus_convex(const WaveguideDomain& dom) {
    if (!dom.strip_halfwidth || !dom.two_ended()) return false;
    // Collect the obstacle loop as a polyline and test strict convexity.
    std::vector<Vec2> loop;
    for (int s = 0; s < static_cast<int>(dom.segments.size()); ++s) {
        const auto& seg = dom.segments[static_cast<std::size_t>(s)];
        if (!seg.on_obstacle) continue;
        for (int i = 0; i < 256; ++i) loop.push_back(seg.position(i / 256.0));
    }
    if (loop.size() < 8) return false;
    double min_cross = std::numeric_limits<double>::infinity();
    double max_cross = -std::numeric_limits<double>::infinity();
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = loop[i], b = loop[(i + 1) % n], c = loop[(i + 2) % n];
        const double cr = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        min_cross = std::min(min_cross, cr);
        max_cross = std::max(max_cross, cr);
    }
    if (min_cross * max_cross <= 0.0) return false; // turning direction changes: not convex
    // Strictly inside the strip.
    const double H = *dom.strip_halfwidth;
    for (const auto& p : loop)
        if (std::abs(p.y) >= H - 1e-9) return false;
    return true;
}

} // namespace

TheoremClass classify_theorem(const WaveguideDomain& dom) {
    const auto rep = check_star_shaped_x(dom, 256);
    const bool star = rep.sup_x_nu_x <= kSignTol;
    if (star && dom.positive_x && sampled_positive_x(dom)) return TheoremClass::cig;
    if (star && find_full_flaring_interval(dom)) return TheoremClass::hour;
    if (is_strip_minus_convex(dom)) return TheoremClass::convexobs;
    if (star && has_partial_flaring_interval(dom)) return TheoremClass::flat;
    return TheoremClass::none;
}

// ---------------------------------------------------------------------------
// Gallery

namespace {

double param(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

WaveguideDomain make_half_strip(const json& p) {
    const double w = param(p, "width", std::numbers::pi);
    if (!(w > 0)) throw std::invalid_argument("half_strip: width must be positive");
    WaveguideDomain d;
    d.name = "half_strip";
    d.x_rep = param(p, "x_rep", 20.0);
    d.segments.push_back(line_segment({0, 0}, {0, w}, "cap"));
    d.segments.push_back(line_segment({0, 0}, {d.x_rep, 0}, "wall_bottom"));
    d.segments.push_back(line_segment({0, w}, {d.x_rep, w}, "wall_top"));
    d.inside = [w](Vec2 q) { return q.x > 0 && q.y > 0 && q.y < w; };
    d.R0 = 1.0;
    d.end_plus = {EndKind::cylindrical, spectrum::make_cross_section({{0, w}})};
    d.y_lo = 0;
    d.y_hi = w;
    d.positive_x = true;
    return d;
}

WaveguideDomain make_product_cylinder(const json& p) {
    std::vector<spectrum::Interval> ivs;
    if (p.contains("intervals"))
        for (const auto& e : p.at("intervals"))
            ivs.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    else
        ivs.push_back({param(p, "y0", -1.0), param(p, "y1", 1.0)});
    auto Y = spectrum::make_cross_section(ivs);
    WaveguideDomain d;
    d.name = "product_cylinder";
    d.x_rep = param(p, "x_rep", 20.0);
    for (const auto& iv : Y.intervals) {
        d.segments.push_back(line_segment({-d.x_rep, iv.a}, {d.x_rep, iv.a}, "wall"));
        d.segments.push_back(line_segment({-d.x_rep, iv.b}, {d.x_rep, iv.b}, "wall"));
    }
    d.inside = [Y](Vec2 q) { return Y.contains(q.y); };
    d.R0 = param(p, "R0", 1.0);
    d.end_minus = {EndKind::cylindrical, Y};
    d.end_plus = {EndKind::cylindrical, Y};
    d.y_lo = Y.y_min();
    d.y_hi = Y.y_max();
    return d;
}

WaveguideDomain make_cigar(const json& p) {
    const double r = param(p, "radius", 1.0);
    if (!(r > 0)) throw std::invalid_argument("cigar: radius must be positive");
    WaveguideDomain d;
    d.name = "cigar";
    d.x_rep = param(p, "x_rep", 20.0);
    d.segments.push_back(arc_segment({r, 0}, r, std::numbers::pi / 2, 3 * std::numbers::pi / 2, "ball"));
    d.segments.push_back(line_segment({r, r}, {d.x_rep, r}, "wall_top"));
    d.segments.push_back(line_segment({r, -r}, {d.x_rep, -r}, "wall_bottom"));
    d.inside = [r](Vec2 q) {
        const double dx = q.x - r;
        return (dx * dx + q.y * q.y < r * r) || (q.x > r && std::abs(q.y) < r);
    };
    d.R0 = r;
    d.end_plus = {EndKind::cylindrical, spectrum::make_cross_section({{-r, r}})};
    d.y_lo = -r;
    d.y_hi = r;
    d.positive_x = true;
    return d;
}

WaveguideDomain make_parabola(const json& p) {
    const double ymax = param(p, "ymax", 4.0);
    WaveguideDomain d;
    d.name = "parabola";
    d.x_rep = ymax * ymax;
    d.segments.push_back(graph_segment(
        'y', [](double y) { return y * y; }, [](double y) { return 2 * y; }, -ymax, ymax,
        "parabola"));
    d.inside = [](Vec2 q) { return q.x > q.y * q.y; };
    d.R0 = 1.0;
    d.end_plus = {EndKind::open_unbounded, {}};
    d.y_lo = -ymax;
    d.y_hi = ymax;
    d.positive_x = true;
    return d;
}

// |y| < f(x) with f(x) = neck + quad*x^2 for |x| <= a, tapered to a constant
// over [a, 2a] keeping f Lipschitz-differentiable and x f'(x) >= 0.
WaveguideDomain make_hourglass(const json& p) {
    const double neck = param(p, "neck", 1.0);
    const double quad = param(p, "quad", 1.0);
    const double a = param(p, "a", 1.0);
    if (!(neck > 0) || !(quad > 0) || !(a > 0))
        throw std::invalid_argument("hourglass: neck, quad, a must be positive");
    auto f = [=](double x) {
        const double ax = std::abs(x);
        if (ax <= a) return neck + quad * ax * ax;
        if (ax >= 2 * a) return neck + 2 * quad * a * a;
        return neck + quad * a * a + 2 * quad * (2 * a * ax - 0.5 * ax * ax - 1.5 * a * a);
    };
    auto df = [=](double x) {
        const double ax = std::abs(x);
        const double s = x >= 0 ? 1.0 : -1.0;
        if (ax <= a) return s * 2 * quad * ax;
        if (ax >= 2 * a) return 0.0;
        return s * 2 * quad * (2 * a - ax);
    };
    const double fe = neck + 2 * quad * a * a;
    WaveguideDomain d;
    d.name = "hourglass";
    d.x_rep = param(p, "x_rep", std::max(20.0, 4 * a));
    d.segments.push_back(graph_segment('x', f, df, -2 * a, 2 * a, "flare_top"));
    d.segments.push_back(
        graph_segment('x', [=](double x) { return -f(x); }, [=](double x) { return -df(x); },
                      -2 * a, 2 * a, "flare_bottom"));
    for (double s : {1.0, -1.0}) {
        d.segments.push_back(line_segment({2 * a, s * fe}, {d.x_rep, s * fe}, "wall"));
        d.segments.push_back(line_segment({-2 * a, s * fe}, {-d.x_rep, s * fe}, "wall"));
    }
    d.inside = [f](Vec2 q) { return std::abs(q.y) < f(q.x); };
    d.R0 = 2 * a;
    auto Y = spectrum::make_cross_section({{-fe, fe}});
    d.end_minus = {EndKind::cylindrical, Y};
    d.end_plus = {EndKind::cylindrical, Y};
    d.y_lo = -fe;
    d.y_hi = fe;
    d.flaring_hint_lo = 0.5 * a;
    d.flaring_hint_hi = 1.5 * a;
    d.x0 = a; // midpoint of the flaring interval
    return d;
}

WaveguideDomain make_strip_minus_convex(const json& p) {
    const double H = param(p, "halfwidth", 1.0);
    const double a = param(p, "a", 0.5);
    const double b = param(p, "b", 0.3);
    const double cx = param(p, "cx", 0.0);
    const double cy = param(p, "cy", 0.0);
    const double tilt = param(p, "tilt", 0.0);
    if (!(H > 0) || !(a > 0) || !(b > 0))
        throw std::invalid_argument("strip_minus_convex: halfwidth, a, b must be positive");
    const double ct = std::cos(tilt), st = std::sin(tilt);
    const double y_extent = std::sqrt(a * a * st * st + b * b * ct * ct);
    if (cy + y_extent >= H - 1e-9 || cy - y_extent <= -H + 1e-9)
        throw std::invalid_argument("strip_minus_convex: obstacle not strictly inside the strip");
    const double x_extent = std::sqrt(a * a * ct * ct + b * b * st * st);

    WaveguideDomain d;
    d.name = "strip_minus_convex";
    d.x_rep = param(p, "x_rep", 20.0);
    d.segments.push_back(line_segment({-d.x_rep, H}, {d.x_rep, H}, "wall_top"));
    d.segments.push_back(line_segment({-d.x_rep, -H}, {d.x_rep, -H}, "wall_bottom"));
    BoundarySegment obst;
    obst.position = [=](double t) {
        const double th = 2 * std::numbers::pi * t;
        const double u = a * std::cos(th), v = b * std::sin(th);
        return Vec2{cx + ct * u - st * v, cy + st * u + ct * v};
    };
    obst.velocity = [=](double t) {
        const double th = 2 * std::numbers::pi * t;
        const double du = -a * std::sin(th) * 2 * std::numbers::pi;
        const double dv = b * std::cos(th) * 2 * std::numbers::pi;
        return Vec2{ct * du - st * dv, st * du + ct * dv};
    };
    obst.on_obstacle = true;
    obst.label = "obstacle";
    d.segments.push_back(std::move(obst));
    auto in_obstacle = [=](Vec2 q) {
        const double rx = q.x - cx, ry = q.y - cy;
        const double u = ct * rx + st * ry, v = -st * rx + ct * ry;
        return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
    };
    d.inside = [=](Vec2 q) { return std::abs(q.y) < H && !in_obstacle(q); };
    d.R0 = std::abs(cx) + x_extent + 0.5;
    auto Y = spectrum::make_cross_section({{-H, H}});
    d.end_minus = {EndKind::cylindrical, Y};
    d.end_plus = {EndKind::cylindrical, Y};
    d.y_lo = -H;
    d.y_hi = H;
    d.strip_halfwidth = H;
    return d;
}

} // namespace

WaveguideDomain gallery(const std::string& name, const std::string& params_json) {
    const json p = params_json.empty() ? json::object() : json::parse(params_json);
    WaveguideDomain d;
    if (name == "half_strip") d = make_half_strip(p);
    else if (name == "full_strip") d = make_product_cylinder(p);
    else if (name == "product_cylinder") d = make_product_cylinder(p);
    else if (name == "cigar") d = make_cigar(p);
    else if (name == "parabola") d = make_parabola(p);
    else if (name == "hourglass") d = make_hourglass(p);
    else if (name == "strip_minus_convex") d = make_strip_minus_convex(p);
    else throw std::invalid_argument("gallery: unknown domain name '" + name + "'");
    d.name = name;
    return d;
}

// ---------------------------------------------------------------------------
// Custom domains from JSON

namespace {

BoundarySegment segment_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    BoundarySegment s;
    if (kind == "line") {
        const auto& f = j.at("from");
        const auto& t = j.at("to");
        s = line_segment({f.at(0), f.at(1)}, {t.at(0), t.at(1)});
    } else if (kind == "arc") {
        const auto& c = j.at("center");
        s = arc_segment({c.at(0), c.at(1)}, j.at("radius"), j.at("theta0"), j.at("theta1"));
    } else if (kind == "graph") {
        std::vector<double> coeffs = j.at("poly").get<std::vector<double>>();
        const char axis = j.at("axis").get<std::string>().at(0);
        auto f = [coeffs](double t) {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) v = v * t + coeffs[k];
            return v;
        };
        auto df = [coeffs](double t) {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;) v = v * t + k * coeffs[k];
            return v;
        };
        s = graph_segment(axis, f, df, j.at("range").at(0), j.at("range").at(1));
    } else {
        throw std::invalid_argument("custom segment: unknown kind '" + kind + "'");
    }
    if (j.contains("obstacle")) s.on_obstacle = j.at("obstacle").get<bool>();
    return s;
}

EndSpec end_from_json(const json& j) {
    EndSpec e;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") e.kind = EndKind::none;
    else if (kind == "open") e.kind = EndKind::open_unbounded;
    else if (kind == "cylindrical") {
        e.kind = EndKind::cylindrical;
        std::vector<spectrum::Interval> ivs;
        for (const auto& iv : j.at("Y")) ivs.push_back({iv.at(0), iv.at(1)});
        e.Y = spectrum::make_cross_section(std::move(ivs));
    } else {
        throw std::invalid_argument("custom end: unknown kind '" + kind + "'");
    }
    return e;
}

WaveguideDomain custom_from_json(const json& j) {
    WaveguideDomain d;
    d.name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
    for (const auto& js : j.at("segments")) d.segments.push_back(segment_from_json(js));
    if (j.contains("ends")) {
        const auto& e = j.at("ends");
        if (e.contains("minus")) d.end_minus = end_from_json(e.at("minus"));
        if (e.contains("plus")) d.end_plus = end_from_json(e.at("plus"));
    }
    d.R0 = j.contains("R0") ? j.at("R0").get<double>() : 1.0;
    d.x_rep = j.contains("x_rep") ? j.at("x_rep").get<double>() : 20.0;
    if (j.contains("y_range")) {
        d.y_lo = j.at("y_range").at(0);
        d.y_hi = j.at("y_range").at(1);
    }
    if (j.contains("x0")) d.x0 = j.at("x0").get<double>();

    // Even-odd inside test from polylined segments; beyond R0 a cylindrical
    // end overrides with the exact product structure. The polyline is fine
    // enough that curved boundaries are resolved to ~1e-7.
    struct Polyline {
        std::vector<Vec2> pts;
        double y_min, y_max;
    };
    auto polys = std::make_shared<std::vector<Polyline>>();
    for (const auto& seg : d.segments) {
        Polyline pl;
        pl.y_min = 1e300;
        pl.y_max = -1e300;
        for (int i = 0; i <= 4096; ++i) {
            const Vec2 p = seg.position(i / 4096.0);
            pl.y_min = std::min(pl.y_min, p.y);
            pl.y_max = std::max(pl.y_max, p.y);
            pl.pts.push_back(p);
        }
        polys->push_back(std::move(pl));
    }
    const EndSpec em = d.end_minus, ep = d.end_plus;
    const double R0 = d.R0;
    d.inside = [polys, em, ep, R0](Vec2 q) {
        if (q.x <= -R0) {
            if (em.kind == EndKind::cylindrical) return em.Y.contains(q.y);
            if (em.kind == EndKind::none) return false;
        }
        if (q.x >= R0) {
            if (ep.kind == EndKind::cylindrical) return ep.Y.contains(q.y);
            if (ep.kind == EndKind::none) return false;
        }
        // Ray cast in +x up to the R0 face, then account for the end there.
        int crossings = 0;
        for (const auto& pl : *polys) {
            if (q.y <= pl.y_min || q.y > pl.y_max) continue;
            for (std::size_t i = 0; i + 1 < pl.pts.size(); ++i) {
                const Vec2 a = pl.pts[i], b = pl.pts[i + 1];
                if ((a.y > q.y) == (b.y > q.y)) continue;
                const double xc = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (xc > q.x && xc < R0 + 1e-12) ++crossings;
            }
        }
        const bool in_at_face = ep.kind == EndKind::cylindrical && ep.Y.contains(q.y);
        return (crossings % 2 == 1) != in_at_face;
    };
    d.positive_x = sampled_positive_x(d);
    if (j.contains("strip_halfwidth")) d.strip_halfwidth = j.at("strip_halfwidth").get<double>();
    return d;
}

} // namespace

WaveguideDomain domain_from_json(const std::string& text) {
    const json j = json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    if (type == "custom") return custom_from_json(j);
    return gallery(type, j.contains("params") ? j.at("params").dump() : "{}");
}

std::string geometry_report_to_json(const GeometryReport& report) {
    json j;
    j["sup_x_nu_x"] = report.sup_x_nu_x;
    j["violating_points"] = json::array();
    for (const auto& p : report.violating_points) j["violating_points"].push_back({p.x, p.y});
    if (report.flaring_constant) j["flaring_constant"] = *report.flaring_constant;
    else j["flaring_constant"] = nullptr;
    j["theorem_class"] = to_string(report.theorem_class);
    return j.dump(2);
}

} // namespace wsl::geom
