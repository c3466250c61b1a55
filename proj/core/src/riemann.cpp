#include "wsl/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wsl::riemann {

namespace {

constexpr double kRamificationTol = 1e-13;

// Square root with Im >= 0; on the cut (w real positive) takes the limit
// from Im w > 0, i.e. the positive real root.
Complex sqrt_upper(Complex w) {
    Complex s = std::sqrt(w);
    if (s.imag() < 0.0) s = -s;
    if (s.imag() == 0.0 && s.real() < 0.0) s = -s;
    return s;
}

int max_flip(const std::set<int>& flips) { return flips.empty() ? 0 : *flips.rbegin(); }

} // namespace

Complex base_z(const SurfacePoint& p) {
    if (std::holds_alternative<SheetPoint>(p)) return std::get<SheetPoint>(p).z;
    return Complex(std::get<BoundaryPoint>(p).E, 0.0);
}

TauResult tau(const SurfacePoint& p, int j, const spectrum::ModeBasis& basis) {
    const double s2 = basis.sigma_sq(j);
    if (std::holds_alternative<BoundaryPoint>(p)) {
        const auto& bp = std::get<BoundaryPoint>(p);
        const double gap = bp.E - s2;
        if (std::abs(gap) <= kRamificationTol * std::max(1.0, bp.E))
            return {Complex(0.0, 0.0), true};
        if (gap > 0) return {Complex(bp.side * std::sqrt(gap), 0.0), false};
        return {Complex(0.0, std::sqrt(-gap)), false};
    }
    const auto& sp = std::get<SheetPoint>(p);
    const Complex w = sp.z - s2;
    if (std::abs(w) <= kRamificationTol * std::max(1.0, std::abs(sp.z)))
        return {Complex(0.0, 0.0), true};
    Complex t = sqrt_upper(w);
    if (sp.flipped.count(j)) t = -t;
    return {t, false};
}

namespace {

const std::set<int>& flips_of(const SurfacePoint& p) {
    static const std::set<int> none;
    if (std::holds_alternative<SheetPoint>(p)) return std::get<SheetPoint>(p).flipped;
    return none;
}

// For BoundaryPoint E - i0, the propagating branches carry the opposite sign,
// matching the limit of flipping every mode with sigma_j^2 < E. tau() already
// encodes that through `side`.

} // namespace

double metric_d(const SurfacePoint& p, const SurfacePoint& q,
                const spectrum::ModeBasis& basis_in) {
    const double M = std::max(std::abs(base_z(p)), std::abs(base_z(q)));
    const double dz = std::abs(base_z(p) - base_z(q));
    const int need_flips = std::max(max_flip(flips_of(p)), max_flip(flips_of(q)));

    // Work on a basis large enough to certify the tail; extend on demand
    // using the closed-form cross-section spectrum.
    spectrum::ModeBasis basis = basis_in;
    auto ensure = [&](int J) {
        if (basis.size() < J) basis = spectrum::modes(basis.section, J);
    };
    ensure(std::max(8, need_flips + 1));
    if (need_flips > basis.size())
        throw std::invalid_argument("metric_d: flipped mode index beyond available basis");

    double best = 0.0;
    auto term = [&](int jj) {
        const auto tp = tau(p, jj, basis);
        const auto tq = tau(q, jj, basis);
        return std::abs(tp.value - tq.value);
    };
    // Explicit evaluation until the tail bound applies and falls below the
    // running max. Beyond the flip range both branches are the upper one, so
    // |tau_j(z) - tau_j(z')| = |z - z'| / |tau_j(z) + tau_j(z')| and
    // Im tau_j >= sqrt(sigma_j^2 - M) makes the bound monotone decreasing.
    for (int j = 1;; ++j) {
        ensure(j + 1);
        best = std::max(best, term(j));
        const double s2_next = basis.sigma_sq(j + 1);
        if (j >= need_flips && s2_next >= 2.0 * M + 1.0) {
            const double bound = dz / (2.0 * std::sqrt(s2_next - M));
            if (bound <= best) break;
        }
        if (j > 200000) throw std::runtime_error("metric_d: tail certification did not converge");
    }
    return best;
}

bool is_physical(const SheetPoint& p, const spectrum::ModeBasis& basis) {
    if (!p.flipped.empty()) return false;
    if (p.z.imag() != 0.0) return true;
    return p.z.real() < basis.sigma_sq(1);
}

std::string sheet_point_to_json(const SheetPoint& p) {
    nlohmann::json j;
    j["re"] = p.z.real();
    j["im"] = p.z.imag();
    j["flipped"] = p.flipped;
    return j.dump();
}

SheetPoint sheet_point_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SheetPoint p;
    p.z = Complex(j.at("re").get<double>(), j.at("im").get<double>());
    for (const auto& f : j.at("flipped")) p.flipped.insert(f.get<int>());
    return p;
}

} // namespace wsl::riemann
