#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pado/plane_graph.hpp"

namespace pado {

enum class Family { Grid, DelaunayLike, Path, Cycle };
enum class WeightLaw { Unit, Uniform, ExpInt };

/// Deterministic instance description: identical specs produce byte-identical
/// PGRF output.
struct GenSpec {
    Family family = Family::Grid;
    std::int32_t rows = 4;     // grid
    std::int32_t cols = 4;     // grid
    std::int32_t count = 0;    // delaunay_like / path / cycle vertex count
    WeightLaw law = WeightLaw::Unit;
    double lo = 1.0;
    double hi = 1.0;
    std::uint64_t seed = 1;
};

Family family_from_string(const std::string& s);
WeightLaw weight_law_from_string(const std::string& s);

PlaneGraph generate(const GenSpec& spec);

struct QueryPair {
    VertexId u;
    VertexId v;
};

enum class PairLaw { Uniform, PerScale };

/// Deterministic query pairs with u != v. PerScale buckets pairs by
/// floor(log2 d) so every distance scale gets exercised.
std::vector<QueryPair> sample_pairs(const PlaneGraph& g, std::int32_t count,
                                    std::uint64_t seed, PairLaw law);

void write_pairs(const std::vector<QueryPair>& pairs, std::ostream& out);
std::vector<QueryPair> read_pairs(std::istream& in);

}  // namespace pado
