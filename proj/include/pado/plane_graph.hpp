#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "pado/util.hpp"

namespace pado {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using FaceId = std::int32_t;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
    VertexId u = -1;
    VertexId v = -1;
    double w = 0.0;
    bool metric = true;  // false marks triangulation fill edges

    VertexId other(VertexId x) const { return x == u ? v : u; }
    bool has(VertexId x) const { return x == u || x == v; }
};

/// Shortest-path tree from one source. dist[v] = +inf for unreachable v.
/// Parents are the lexicographically smallest predecessor among exact ties,
/// so identical inputs always give identical trees.
struct SsspResult {
    VertexId source = -1;
    std::vector<double> dist;
    std::vector<VertexId> parent;      // -1 at source / unreachable
    std::vector<EdgeId> parent_edge;   // -1 likewise
    std::vector<std::int32_t> depth;   // hop count along the tree, -1 unreachable
};

// Undirected weighted planar graph with a combinatorial embedding.
// rotation[v] lists incident edge ids in counter-clockwise order; faces are
// derived by tracing darts. Immutable after finalize(); SSSP and other
// queries take no shared mutable state.
class PlaneGraph {
  public:
    PlaneGraph() = default;

    VertexId add_vertex(bool queryable = true);
    EdgeId add_edge(VertexId u, VertexId v, double w, bool metric = true);
    void set_rotation(VertexId v, std::vector<EdgeId> order);

    /// Builds dart tables and the face list; throws ValidationError if the
    /// rotation system is inconsistent, the graph is disconnected, or the
    /// Euler check V - E + F = 2 fails.
    void finalize();

    static PlaneGraph load(const std::string& path);
    static PlaneGraph parse(std::istream& in);
    void save_pgrf(std::ostream& out) const;

    std::int32_t n() const { return static_cast<std::int32_t>(rotation_.size()); }
    std::int32_t m() const { return static_cast<std::int32_t>(edges_.size()); }
    std::int32_t f() const { return static_cast<std::int32_t>(faces_.size()); }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<EdgeId>& rotation(VertexId v) const { return rotation_[v]; }
    bool queryable(VertexId v) const { return queryable_[v]; }
    std::int32_t queryable_count() const;
    double metric_weight_sum() const;

    // Darts: dart d = 2*e + s travels edge e; tail(2e) = u, head(2e) = v.
    VertexId dart_tail(std::int32_t d) const;
    VertexId dart_head(std::int32_t d) const;
    std::int32_t dart_reverse(std::int32_t d) const { return d ^ 1; }
    /// Next dart of the same face walk (enter head(d), leave along the
    /// clockwise-next edge in the rotation).
    std::int32_t dart_next_in_face(std::int32_t d) const;

    // faces_[f] = dart cycle of face f; face_of_[d] = face containing dart d.
    const std::vector<std::vector<std::int32_t>>& faces() const { return faces_; }
    FaceId face_of_dart(std::int32_t d) const { return face_of_[d]; }
    FaceId face_left_of(EdgeId e) const { return face_of_[2 * e]; }
    FaceId face_right_of(EdgeId e) const { return face_of_[2 * e + 1]; }
    std::vector<VertexId> face_vertices(FaceId f) const;

    bool has_edge(VertexId u, VertexId v) const;
    EdgeId find_edge(VertexId u, VertexId v) const;  // -1 if absent

    /// Fan triangulation from the lowest-id vertex of each face. Fill edges
    /// carry weight metric_weight_sum()+1 and metric=false, so they never
    /// lie on a shortest path; all original distances are unchanged.
    PlaneGraph triangulated() const;

    /// Splits every metric edge with threshold < w <= skip_above into
    /// ceil(w/threshold) equal pieces via new non-queryable degree-2
    /// vertices. origin_edge: for each vertex of the result, the original
    /// edge that spawned it (-1 for original vertices).
    PlaneGraph subdivided(double threshold, double skip_above,
                          std::vector<EdgeId>* origin_edge = nullptr) const;

    /// Dijkstra from `source`, optionally restricted to vertices with
    /// vmask[v] != 0 and edges with emask[e] != 0.
    SsspResult sssp(VertexId source,
                    const std::vector<std::uint8_t>* vmask = nullptr,
                    const std::vector<std::uint8_t>* emask = nullptr) const;

    /// Distance between two vertices (early-exit Dijkstra).
    double distance(VertexId s, VertexId t) const;

    /// Contracts every listed edge (self-loops dropped, parallel edges
    /// reduced to the minimum weight), keeping the embedding via rotation
    /// splicing. rep_out[v] = surviving vertex for each original vertex.
    PlaneGraph contracted(const std::vector<std::uint8_t>& contract_edge,
                          std::vector<VertexId>* rep_out) const;

    /// Induced subgraph on the given vertices (sorted unique ids). Rotation
    /// order inherited. local_of[v] = local id or -1.
    PlaneGraph induced(const std::vector<VertexId>& verts,
                       std::vector<VertexId>* local_of = nullptr) const;

    std::int32_t max_face_size() const;

  private:
    void trace_faces();
    void check_rotations() const;
    void check_connected() const;

    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> rotation_;
    std::vector<std::uint8_t> queryable_;
    // rot_pos_[2e] = index of e in rotation_[u], rot_pos_[2e+1] in rotation_[v]
    std::vector<std::int32_t> rot_pos_;
    std::vector<std::vector<std::int32_t>> faces_;
    std::vector<FaceId> face_of_;
};

}  // namespace pado
