#pragma once

#include <cstdint>
#include <vector>

#include "pado/plane_graph.hpp"

namespace pado {

/// A fundamental cycle of the shortest-path tree T: two root paths plus one
/// closing edge. The reduced cycle (paths cut at their last common vertex,
/// the peak) is a simple Jordan curve; some shortest path between any two
/// vertices it separates crosses it at most once.
struct SeparatorCycle {
    EdgeId closing_edge = -1;
    VertexId peak = -1;                     // last common vertex of the two root paths
    std::vector<VertexId> path1;            // root .. closing_edge.u
    std::vector<VertexId> path2;            // root .. closing_edge.v
    std::vector<VertexId> cycle_order;      // peak..u along path1, then v..peak side
    std::vector<std::uint8_t> vertex_side;  // 0 on cycle, 1 side one, 2 side two
    std::vector<std::uint8_t> face_side;    // 1 or 2 per face
    std::vector<std::uint8_t> cycle_edge;   // per edge, 1 if on the reduced cycle
    std::vector<VertexId> inside;           // strictly side one, ascending
    std::vector<VertexId> outside;          // strictly side two, ascending
};

struct CycleCandidate {
    EdgeId closing = -1;
    double w_in = 0.0;
    double w_out = 0.0;
    double w_cycle = 0.0;
    std::int32_t cycle_len = 0;
    bool metric_closing = true;

    double max_side() const { return w_in > w_out ? w_in : w_out; }
};

/// sigma: portal vertices in order along the reduced cycle. gaps[i] is the
/// cycle distance from portals[i] to portals[i+1] (wrapping at the end);
/// jump_index marks the pair joined by a closing edge that was exempt from
/// subdivision (fill edges and metric edges longer than the diameter bound).
struct PortalSequence {
    std::vector<VertexId> portals;
    double tau = 0.0;
    std::vector<double> gaps;
    std::int32_t jump_index = -1;
    std::int32_t cycle_ref = -1;

    std::int32_t k() const { return static_cast<std::int32_t>(portals.size()); }
};

/// Per-(graph, tree) machinery shared by every region split: the dual tree
/// over non-tree edges with subtree face intervals, used to price candidate
/// cycles without sweeping the whole graph per candidate.
class SeparatorContext {
  public:
    SeparatorContext(const PlaneGraph& g, const SsspResult& tree);

    /// Balance statistics for every admissible candidate closing edge.
    /// weights: per-vertex weight function (zero outside the region of
    /// interest); edge_filter: restricts candidates when given.
    std::vector<CycleCandidate> candidates(
        const std::vector<double>& weights,
        const std::vector<std::uint8_t>* edge_filter) const;

    std::vector<VertexId> cycle_vertices(EdgeId closing) const;

    /// Full cycle with side labels from a dual sweep of the embedding.
    SeparatorCycle make_cycle(EdgeId closing) const;

    const PlaneGraph& graph() const { return g_; }
    const SsspResult& tree() const { return tree_; }

  private:
    const PlaneGraph& g_;
    const SsspResult& tree_;
    std::vector<std::uint8_t> is_tree_edge_;
    std::vector<FaceId> rep_face_;        // lowest incident face per vertex
    std::vector<FaceId> dual_parent_;     // dual tree rooted at face 0
    std::vector<EdgeId> dual_parent_edge_;
    std::vector<std::int32_t> tin_, tout_;  // subtree intervals in the dual tree
    std::vector<FaceId> dfs_order_;
};

/// One-shot balanced separator: the candidate with both strict sides at most
/// 2/3 of the total weight, smallest cycle first, ties by closing edge id.
/// Falls back to the best balance if no candidate meets 2/3.
/// Throws if the graph has no candidate at all (<= 3 vertices).
SeparatorCycle fundamental_cycle_separator(const PlaneGraph& g, const SsspResult& tree,
                                           const std::vector<double>& weights);

/// Greedy portal placement: the peak and both closing-edge endpoints are
/// always portals; walking each path from the peak, a vertex becomes a
/// portal when its distance from the previous portal exceeds tau.
PortalSequence place_portals(const PlaneGraph& g, const SeparatorCycle& cycle, double tau);

/// True if every cycle vertex in the arc [portals[i], portals[i+1]) is within
/// cycle distance tau of portals[i].
bool check_tau_cover(const PlaneGraph& g, const SeparatorCycle& cycle,
                     const PortalSequence& seq);

}  // namespace pado
