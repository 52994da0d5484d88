#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "pado/decomposition.hpp"
#include "pado/patterns.hpp"
#include "pado/plane_graph.hpp"

namespace pado {

/// Per-region tables over the region's parental portal sequence.
/// t21: marked vertex -> its encoding. registry: the region's patterns with
/// dense ids. dplus/t22: encodings reachable by queries (stored encodings
/// plus composites redirected through the leaf/ancestor tables), with dense
/// ids used as T3 keys.
struct NodeTables {
    std::map<VertexId, Encoding> t21;
    PatternRegistry registry;
    std::vector<Encoding> dplus;
    std::map<Encoding, std::int32_t> t22;
    std::vector<std::int64_t> firsts;  // occurring first coordinates, ascending

    std::int32_t encoding_id(const Encoding& e) const {
        auto it = t22.find(e);
        return it == t22.end() ? -1 : it->second;
    }
};

/// T3 at an internal node: encoding-id pair (child one, child two) -> the
/// through-separator distance in units of delta.
struct T3Table {
    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> entries;
};

/// Step 4(1) tables for one (leaf, ancestor) pair. `composed` is false when
/// the ancestor's portals are not separated from the leaf by the leaf's
/// parental cycle (then queries use the ancestor's stored encoding directly).
struct LeafAncestorTables {
    bool composed = false;
    std::vector<std::int64_t> t41a_dist;      // leaf pattern id -> units
    std::vector<std::int32_t> t41a_induced;   // leaf pattern id -> induced id
    PatternRegistry induced;
    std::vector<std::int32_t> t41b;           // induced id -> closest id in ancestor registry
};

/// Leaf exact structure: the contracted filled graph with an all-pairs table.
/// Every edge weight is at least the true distance between the vertices it
/// represents, so table lookups never undershoot global distances.
struct LeafExact {
    MiniGraph rprime;                 // labels: global vertex id, -1 for Steiner
    std::vector<std::int32_t> vmap;   // global vertex -> local id (-1 absent)
    std::vector<double> apsp;         // row-major nv*nv
    std::int32_t nv = 0;

    double dist(std::int32_t a, std::int32_t b) const {
        return apsp[static_cast<std::size_t>(a) * nv + b];
    }
};

struct AdditiveConfig {
    double eps = 0.25;
    std::int32_t c = 3;
    std::int32_t levels = 1;
    FillMode filling = FillMode::Exact;
    std::int32_t lambda_override = -1;  // > 0 replaces the lambda formula
};

struct SpaceReport {
    std::int64_t t21 = 0, t22 = 0, t3 = 0, t41a = 0, t41b = 0;
    std::int64_t leaf_tables = 0, portals = 0, tree = 0, patterns = 0;

    std::int64_t total() const {
        return t21 + t22 + t3 + t41a + t41b + leaf_tables + portals + tree + patterns;
    }
};

class AdditiveOracle {
  public:
    /// Runs the full pipeline: long-edge subdivision at tau = eps*dhat,
    /// triangulation, the recursive decomposition with portals, the pattern
    /// and lookup tables, leaf exact structures, and (levels > 1) nested
    /// oracles over the leaf contracted graphs.
    static AdditiveOracle build(const PlaneGraph& input, const AdditiveConfig& cfg);

    /// Approximate distance: d_G(u,v) <= answer <= d_G(u,v) + bound().
    double query(VertexId u, VertexId v) const;

    /// Encoding id of u in D+ of `ancestor_child` (a non-root node on u's
    /// leaf-to-root path).
    std::int32_t query_encoding_id(VertexId u, std::int32_t ancestor_child) const;

    double bound() const { return bound_; }
    double dhat() const { return dhat_; }
    double delta() const { return delta_; }
    double tau() const { return tau_; }
    double eps() const { return cfg_.eps; }
    const DecompositionTree& decomposition() const { return tree_; }
    const PlaneGraph& graph() const { return g_; }
    const NodeTables& tables(std::int32_t node) const { return node_tables_[node]; }
    const T3Table& t3(std::int32_t node) const { return t3_[node]; }
    const std::map<std::pair<std::int32_t, std::int32_t>, LeafAncestorTables>& t41()
        const { return t41_; }
    const LeafExact* leaf_exact(std::int32_t node) const;
    double node_slack(std::int32_t node) const { return slack_[node]; }
    const AdditiveOracle* sub_oracle(std::int32_t leaf) const;
    std::int32_t levels() const { return cfg_.levels; }
    bool queryable(VertexId v) const;

    SpaceReport space_report() const;

    void serialize(std::ostream& out) const;
    static AdditiveOracle deserialize(std::istream& in);

    /// Registry-size caps, decode bands, composition bounds, T3 recompute,
    /// through-separator bands: throws AuditError with a description on any
    /// violation; returns per-region CSV rows via `csv` when non-null.
    void audit_patterns(std::ostream* csv) const;

  private:
    friend struct AdditiveBuilder;

    void build_hierarchy_levels();
    /// Embedded contracted filled graph of a leaf: the leaf's subgraph plus
    /// hole minors glued into the embedding. Returns false when the gluing
    /// cannot be validated, in which case the leaf keeps its exact table.
    bool embedded_rprime(std::int32_t leaf, PlaneGraph& out,
                         std::vector<std::int32_t>& vmap) const;

    AdditiveConfig cfg_;
    PlaneGraph g_;
    DecompositionTree tree_;
    std::vector<NodeTables> node_tables_;
    std::vector<T3Table> t3_;
    std::map<std::pair<std::int32_t, std::int32_t>, LeafAncestorTables> t41_;
    std::map<std::int32_t, LeafExact> leaf_exact_;
    std::map<std::int32_t, std::unique_ptr<AdditiveOracle>> sub_;  // per leaf node
    std::map<std::int32_t, std::vector<std::int32_t>> sub_vmap_;   // global -> sub local
    std::vector<double> slack_;
    double bound_ = 0.0;
    double dhat_ = 0.0;
    double delta_ = 1.0;
    double tau_ = 1.0;
    bool degenerate_ = false;             // tiny input: apsp only
    std::vector<double> degenerate_apsp_;
};

}  // namespace pado
