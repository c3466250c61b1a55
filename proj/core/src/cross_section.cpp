#include "wsl/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wsl::spectrum {

namespace {
constexpr double kMultiplicityTol = 1e-12;
}

double CrossSection::total_width() const {
    double w = 0.0;
    for (const auto& iv : intervals) w += iv.width();
    return w;
}

double CrossSection::diameter() const {
    if (intervals.empty()) return 0.0;
    return intervals.back().b - intervals.front().a;
}

double CrossSection::y_min() const {
    if (intervals.empty()) throw std::logic_error("empty cross section");
    return intervals.front().a;
}

double CrossSection::y_max() const {
    if (intervals.empty()) throw std::logic_error("empty cross section");
    return intervals.back().b;
}

bool CrossSection::contains(double y) const {
    for (const auto& iv : intervals)
        if (y > iv.a && y < iv.b) return true;
    return false;
}

CrossSection make_cross_section(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& p, const Interval& q) { return p.a < q.a; });
    for (const auto& iv : intervals)
        if (!(iv.width() > 0.0))
            throw std::invalid_argument("cross section interval has nonpositive width");
    for (std::size_t i = 1; i < intervals.size(); ++i)
        if (!(intervals[i].a > intervals[i - 1].b))
            throw std::invalid_argument("cross section intervals must be disjoint with positive separation");
    return CrossSection{std::move(intervals)};
}

const Mode& ModeBasis::mode(int j) const {
    if (j < 1 || j > size()) throw std::out_of_range("mode index out of range");
    return modes[static_cast<std::size_t>(j - 1)];
}

ModeBasis modes(const CrossSection& section, int J) {
    if (J < 1) throw std::invalid_argument("modes: J must be >= 1");
    if (section.empty()) throw std::invalid_argument("modes: empty cross section");
    std::vector<Mode> all;
    all.reserve(static_cast<std::size_t>(J) * section.intervals.size());
    for (std::size_t i = 0; i < section.intervals.size(); ++i) {
        const double w = section.intervals[i].width();
        for (int k = 1; k <= J; ++k)
            all.push_back(Mode{k * std::numbers::pi / w, static_cast<int>(i), k});
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Mode& p, const Mode& q) { return p.sigma < q.sigma; });
    all.resize(static_cast<std::size_t>(J));
    return ModeBasis{section, std::move(all)};
}

double evaluate_mode(const ModeBasis& basis, int j, double y) {
    const Mode& m = basis.mode(j);
    const Interval& iv = basis.section.intervals[static_cast<std::size_t>(m.interval_index)];
    if (y <= iv.a || y >= iv.b) return 0.0;
    const double w = iv.width();
    return std::sqrt(2.0 / w) * std::sin(m.harmonic * std::numbers::pi * (y - iv.a) / w);
}

GapCheck check_gap_condition(const ModeBasis& basis, double c_Y, double N_Y) {
    if (basis.size() < 2) throw std::invalid_argument("gap check needs at least two modes");
    std::vector<double> distinct;
    for (const auto& m : basis.modes) {
        if (distinct.empty() || m.sigma - distinct.back() > kMultiplicityTol)
            distinct.push_back(m.sigma);
    }
    GapCheck result;
    for (std::size_t i = 1; i < distinct.size(); ++i) {
        const double gap = distinct[i] - distinct[i - 1];
        const double required = c_Y * std::pow(distinct[i - 1], -N_Y);
        if (gap < required) {
            result.holds = false;
            result.witness = GapWitness{distinct[i - 1], distinct[i], gap, required};
            return result;
        }
    }
    return result;
}

std::string cross_section_to_json(const CrossSection& section) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& iv : section.intervals) j.push_back({iv.a, iv.b});
    return j.dump();
}

CrossSection cross_section_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Interval> ivs;
    for (const auto& e : j) ivs.push_back(Interval{e.at(0).get<double>(), e.at(1).get<double>()});
    return make_cross_section(std::move(ivs));
}

} // namespace wsl::spectrum
