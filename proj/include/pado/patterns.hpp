#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pado/plane_graph.hpp"

namespace pado {

/// ceil(a/delta): the index of the closest multiple of delta that is >= a.
/// units*delta lands in [a, a+delta).
std::int64_t round_up_units(double a, double delta);

/// Consecutive portal-distance differences in units of delta, entries
/// i = round_up(d(u, sigma_{i+1}) - d(u, sigma_i)). Keys are exact integers;
/// no floating point enters any table key.
struct Pattern {
    std::vector<std::int32_t> units;  // length k-1

    bool operator<(const Pattern& o) const { return units < o.units; }
    bool operator==(const Pattern& o) const { return units == o.units; }
};

/// first = round_up(d(u, sigma_1)) in units, plus a pattern id. Decoding by
/// prefix sums recovers distances to every portal within [d, d + i*delta].
struct Encoding {
    std::int64_t first_units = 0;
    std::int32_t pattern_id = -1;

    bool operator<(const Encoding& o) const {
        if (first_units != o.first_units) return first_units < o.first_units;
        return pattern_id < o.pattern_id;
    }
    bool operator==(const Encoding& o) const {
        return first_units == o.first_units && pattern_id == o.pattern_id;
    }
};

/// Deduplicated patterns with dense ids in insertion order.
class PatternRegistry {
  public:
    std::int32_t register_pattern(const Pattern& p);
    std::int32_t find(const Pattern& p) const;  // -1 if absent
    const Pattern& pattern(std::int32_t id) const { return patterns_[id]; }
    std::int32_t size() const { return static_cast<std::int32_t>(patterns_.size()); }
    const std::vector<Pattern>& patterns() const { return patterns_; }

    /// Counting cap from the bounded-shatter argument: with m = (k-1)(2g+1)
    /// distance indices the number of distinct patterns is at most
    /// max(m^3, 8).
    static std::int64_t cap(std::int32_t k, std::int64_t g);

    /// Pattern id minimizing the l-inf distance to q (in units); ties go to
    /// the smallest id. Throws on an empty registry.
    std::int32_t closest(const std::vector<std::int32_t>& q_units) const;

  private:
    std::vector<Pattern> patterns_;
    std::map<Pattern, std::int32_t> index_;
};

/// Encoding from precomputed distances d(u, sigma_i), i = 0..k-1.
Encoding make_encoding(const std::vector<double>& dists, double delta,
                       PatternRegistry& reg);
Pattern make_pattern(const std::vector<double>& dists, double delta);
std::int64_t first_units_of(const std::vector<double>& dists, double delta);

/// Prefix-sum decode, in units: out[i] = first + sum units[0..i-1].
std::vector<std::int64_t> decode_units(std::int64_t first_units, const Pattern& p);
std::vector<double> decode(std::int64_t first_units, const Pattern& p, double delta);

/// min_i (a[i] + b[i]) over two decoded vectors (units).
std::int64_t encoding_distance_units(const std::vector<std::int64_t>& a,
                                     const std::vector<std::int64_t>& b);

/// min_i (v_decoded[i] + prefix(p)[i]), the distance from a pattern to a
/// vertex given the vertex's decoded vector (units).
std::int64_t pattern_vertex_distance_units(const std::vector<std::int64_t>& v_decoded,
                                           const Pattern& p);

/// Pattern induced on a target sequence: entry i is the pattern-vertex
/// distance to target portal i+1 minus the one to target portal i, all in
/// units. Also reports the distance to the first target portal.
struct InducedPattern {
    std::int64_t first_units = 0;  // distance from the pattern to target sigma_1
    Pattern pattern;               // length = target k - 1
};
InducedPattern induce_pattern(const std::vector<std::vector<std::int64_t>>& target_decoded,
                              const Pattern& p);

}  // namespace pado
