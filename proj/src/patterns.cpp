#include "pado/patterns.hpp"

#include <algorithm>
#include <cmath>

namespace pado {

std::int64_t round_up_units(double a, double delta) {
    if (!(delta > 0)) throw ValidationError("delta must be > 0");
    return static_cast<std::int64_t>(std::ceil(a / delta));
}

std::int32_t PatternRegistry::register_pattern(const Pattern& p) {
    auto it = index_.find(p);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::int32_t>(patterns_.size());
    patterns_.push_back(p);
    index_.emplace(p, id);
    return id;
}

std::int32_t PatternRegistry::find(const Pattern& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

std::int64_t PatternRegistry::cap(std::int32_t k, std::int64_t g) {
    std::int64_t m = static_cast<std::int64_t>(k - 1) * (2 * g + 1);
    if (m < 2) return 8;
    // m^3 with saturation; caps beyond 2^62 are never reached anyway.
    long double c = static_cast<long double>(m) * m * m;
    if (c > 4e18L) return std::int64_t(4e18);
    return std::max<std::int64_t>(static_cast<std::int64_t>(c), 8);
}

std::int32_t PatternRegistry::closest(const std::vector<std::int32_t>& q_units) const {
    if (patterns_.empty()) throw ValidationError("closest_pattern on empty registry");
    std::int32_t best = 0;
    std::int64_t best_d = -1;
    for (std::int32_t id = 0; id < size(); ++id) {
        const auto& u = patterns_[id].units;
        if (u.size() != q_units.size())
            throw ValidationError("pattern length mismatch in closest_pattern");
        std::int64_t d = 0;
        for (std::size_t i = 0; i < u.size(); ++i)
            d = std::max<std::int64_t>(d, std::llabs(static_cast<std::int64_t>(u[i]) -
                                                     q_units[i]));
        if (best_d < 0 || d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

Pattern make_pattern(const std::vector<double>& dists, double delta) {
    Pattern p;
    p.units.reserve(dists.size() > 0 ? dists.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < dists.size(); ++i) {
        if (dists[i] == kInf || dists[i + 1] == kInf)
            throw ValidationError("unreachable portal in pattern");
        p.units.push_back(
            static_cast<std::int32_t>(round_up_units(dists[i + 1] - dists[i], delta)));
    }
    return p;
}

std::int64_t first_units_of(const std::vector<double>& dists, double delta) {
    if (dists.empty() || dists[0] == kInf)
        throw ValidationError("unreachable first portal in encoding");
    return round_up_units(dists[0], delta);
}

Encoding make_encoding(const std::vector<double>& dists, double delta,
                       PatternRegistry& reg) {
    Encoding e;
    e.first_units = first_units_of(dists, delta);
    e.pattern_id = reg.register_pattern(make_pattern(dists, delta));
    return e;
}

std::vector<std::int64_t> decode_units(std::int64_t first_units, const Pattern& p) {
    std::vector<std::int64_t> out(p.units.size() + 1);
    out[0] = first_units;
    for (std::size_t i = 0; i < p.units.size(); ++i) out[i + 1] = out[i] + p.units[i];
    return out;
}

std::vector<double> decode(std::int64_t first_units, const Pattern& p, double delta) {
    auto u = decode_units(first_units, p);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = static_cast<double>(u[i]) * delta;
    return out;
}

std::int64_t encoding_distance_units(const std::vector<std::int64_t>& a,
                                     const std::vector<std::int64_t>& b) {
    if (a.size() != b.size() || a.empty())
        throw ValidationError("encoding length mismatch");
    std::int64_t best = a[0] + b[0];
    for (std::size_t i = 1; i < a.size(); ++i) best = std::min(best, a[i] + b[i]);
    return best;
}

std::int64_t pattern_vertex_distance_units(const std::vector<std::int64_t>& v_decoded,
                                           const Pattern& p) {
    if (v_decoded.size() != p.units.size() + 1)
        throw ValidationError("pattern/vertex length mismatch");
    std::int64_t best = v_decoded[0];
    std::int64_t prefix = 0;
    for (std::size_t i = 1; i < v_decoded.size(); ++i) {
        prefix += p.units[i - 1];
        best = std::min(best, v_decoded[i] + prefix);
    }
    return best;
}

InducedPattern induce_pattern(const std::vector<std::vector<std::int64_t>>& target_decoded,
                              const Pattern& p) {
    InducedPattern out;
    if (target_decoded.empty()) throw ValidationError("empty target sequence");
    std::vector<std::int64_t> d(target_decoded.size());
    for (std::size_t i = 0; i < target_decoded.size(); ++i)
        d[i] = pattern_vertex_distance_units(target_decoded[i], p);
    out.first_units = d[0];
    out.pattern.units.reserve(d.size() - 1);
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
        out.pattern.units.push_back(static_cast<std::int32_t>(d[i + 1] - d[i]));
    return out;
}

}  // namespace pado
