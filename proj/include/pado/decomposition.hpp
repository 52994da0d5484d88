#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pado/patterns.hpp"
#include "pado/plane_graph.hpp"
#include "pado/separator.hpp"

namespace pado {

/// Lightweight weighted graph used for region views and minors. Labels carry
/// the host vertex id (or -1 for Steiner vertices of approximate fillings).
struct MiniGraph {
    struct Arc {
        std::int32_t to;
        EdgeId id;
        double w;
    };
    std::vector<std::int64_t> label;
    std::vector<std::vector<Arc>> adj;
    std::int32_t edge_count = 0;

    std::int32_t n() const { return static_cast<std::int32_t>(label.size()); }
    std::int32_t add_vertex(std::int64_t lab) {
        label.push_back(lab);
        adj.emplace_back();
        return n() - 1;
    }
    EdgeId add_edge(std::int32_t a, std::int32_t b, double w) {
        EdgeId id = edge_count++;
        adj[a].push_back({b, id, w});
        adj[b].push_back({a, id, w});
        return id;
    }

    std::vector<double> sssp_dist(std::int32_t src) const;
    /// Distances plus a deterministic parent tree (lexicographic smallest
    /// predecessor among exact ties).
    void sssp(std::int32_t src, std::vector<double>& dist,
              std::vector<std::int32_t>& parent, std::vector<EdgeId>& parent_edge) const;
};

struct Hole {
    std::vector<FaceId> faces;       // complement face component
    std::vector<VertexId> boundary;  // region vertices on the hole boundary, ascending
    VertexId rep = -1;               // weight carrier for hole balancing
    bool parental = false;
};

/// A node of the recursive decomposition: a subgraph-with-holes of the
/// triangulated input. Masks are over the global graph. The filled graph R+
/// is the full closed side of the parental cycle.
struct Region {
    std::int32_t id = -1;
    std::int32_t parent = -1;
    std::int32_t child1 = -1;
    std::int32_t child2 = -1;
    std::int8_t side = 0;  // side of the parent's separator (1 or 2); 0 at root

    std::vector<std::uint8_t> verts;   // vertex in R
    std::vector<std::uint8_t> edges;   // edge in R
    std::vector<std::uint8_t> faces;   // face in R
    std::vector<VertexId> marked;      // ascending
    std::vector<Hole> holes;

    // Closed own side of the parental cycle (R+); empty at the root.
    std::vector<std::uint8_t> plus_v;
    std::vector<std::uint8_t> plus_e;
    std::vector<std::uint8_t> strict_v;  // strictly inside own side

    bool is_leaf() const { return child1 < 0; }
};

/// Separator data stored at each internal node: the cycle splitting it and
/// the portal sequence both children share as their parental boundary.
struct SplitData {
    SeparatorCycle cycle;
    PortalSequence portals;
};

/// Constant-time lowest common ancestor via euler tour + sparse table.
class LcaIndex {
  public:
    void build(const std::vector<std::int32_t>& parent, std::int32_t root);
    std::int32_t lca(std::int32_t a, std::int32_t b) const;
    std::int32_t depth(std::int32_t v) const { return depth_[v]; }

  private:
    std::vector<std::int32_t> first_, depth_;
    std::vector<std::vector<std::int32_t>> table_;  // sparse min over euler tour
    std::vector<std::int32_t> euler_;
};

enum class FillMode { Exact, DensePortal };

struct DecompositionParams {
    double eps = 0.25;
    std::int32_t lambda = 16;
    FillMode filling = FillMode::Exact;
    double dhat = 0.0;       // diameter bound 2*ecc(root)
    double tau = 0.0;        // portal spacing on separator cycles
    double dense_spacing = 0.0;  // dense portal spacing for approximate filling
};

std::int32_t default_lambda(std::int32_t n, double eps, std::int32_t c);

class DecompositionTree {
  public:
    std::vector<Region> nodes;
    std::vector<SplitData> splits;  // indexed by node id; empty portals at leaves
    std::int32_t root = 0;
    LcaIndex lca_index;
    std::vector<std::int32_t> leaf_of;  // vertex -> leaf where it is marked, -1 otherwise
    std::vector<std::int32_t> depth;
    DecompositionParams params;

    std::int32_t node_count() const { return static_cast<std::int32_t>(nodes.size()); }
    std::int32_t lca(std::int32_t a, std::int32_t b) const;
    bool is_ancestor(std::int32_t anc, std::int32_t node) const;
    std::int32_t max_depth() const;
    std::vector<std::int32_t> leaves() const;
};

/// Recursive shortest-path-separator decomposition with at most five holes
/// per region and marked-set balancing; see build_additive for the full
/// pipeline that prepares g and tree.
DecompositionTree build_decomposition(const PlaneGraph& g, const SsspResult& tree,
                                      const DecompositionParams& params);

// ── Distance-preserving minors ──────────────────────────────────────

struct DistMinor {
    MiniGraph graph;                           // labels = host vertex ids
    std::vector<std::int32_t> terminals;       // host-local terminal ids
    std::vector<std::int32_t> terminal_local;  // minor-local id per terminal
};

/// Union of deterministic pairwise shortest paths between the terminals,
/// with non-terminal degree-2 chains dissolved. Terminal distances in the
/// minor equal host distances exactly.
DistMinor distance_preserving_minor(const MiniGraph& host,
                                    const std::vector<std::int32_t>& terminals);

DistMinor distance_preserving_minor(const PlaneGraph& host,
                                    const std::vector<VertexId>& terminals,
                                    const std::vector<std::uint8_t>* vmask = nullptr,
                                    const std::vector<std::uint8_t>* emask = nullptr);

// ── Region views ────────────────────────────────────────────────────

/// A concrete graph to run shortest paths on, with a map from global vertex
/// ids to local ids. Steiner vertices (dense filling) carry label -1.
struct RegionView {
    MiniGraph g;
    std::vector<std::int32_t> local_of;  // size n(global), -1 when absent

    std::int32_t local(VertexId v) const { return local_of[v]; }
};

/// R+ of a region: exact mode masks the global graph to the closed own side
/// of the parental cycle; dense mode takes the region's own edges plus a
/// distance-preserving minor of dense portals per non-parental hole.
RegionView make_plus_view(const PlaneGraph& g, const DecompositionTree& t,
                          std::int32_t node);

/// R^out for a leaf/ancestor pair: the ancestor's R+ minus the strict
/// interior of the leaf's parental cycle.
RegionView make_rout_view(const PlaneGraph& g, const DecompositionTree& t,
                          std::int32_t leaf, std::int32_t ancestor);

/// Dense portals of every hole of `node` (used by fill audits and leaf
/// contraction): step-one cycle portals on the hole boundary, supplemented
/// greedily so every boundary vertex is within `spacing` of some portal.
std::vector<VertexId> hole_portals(const PlaneGraph& g, const DecompositionTree& t,
                                   std::int32_t node, const Hole& hole, double spacing);

}  // namespace pado
