#include "pado/plane_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

namespace pado {

VertexId PlaneGraph::add_vertex(bool queryable) {
    rotation_.emplace_back();
    queryable_.push_back(queryable ? 1 : 0);
    return n() - 1;
}

EdgeId PlaneGraph::add_edge(VertexId u, VertexId v, double w, bool metric) {
    if (u < 0 || v < 0 || u >= n() || v >= n())
        throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("self-loops not supported");
    if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("edge weight must be finite and >= 0");
    edges_.push_back(Edge{u, v, w, metric});
    return m() - 1;
}

void PlaneGraph::set_rotation(VertexId v, std::vector<EdgeId> order) {
    rotation_[v] = std::move(order);
}

VertexId PlaneGraph::dart_tail(std::int32_t d) const {
    const Edge& e = edges_[d >> 1];
    return (d & 1) ? e.v : e.u;
}

VertexId PlaneGraph::dart_head(std::int32_t d) const {
    const Edge& e = edges_[d >> 1];
    return (d & 1) ? e.u : e.v;
}

std::int32_t PlaneGraph::dart_next_in_face(std::int32_t d) const {
    VertexId h = dart_head(d);
    EdgeId e = d >> 1;
    std::int32_t pos = (dart_head(2 * e) == h) ? rot_pos_[2 * e + 1] : rot_pos_[2 * e];
    const auto& rot = rotation_[h];
    std::int32_t deg = static_cast<std::int32_t>(rot.size());
    EdgeId next = rot[(pos - 1 + deg) % deg];
    return 2 * next + (edges_[next].u == h ? 0 : 1);
}

void PlaneGraph::check_rotations() const {
    std::vector<std::int32_t> seen_u(m(), 0), seen_v(m(), 0);
    for (VertexId v = 0; v < n(); ++v) {
        for (EdgeId e : rotation_[v]) {
            if (e < 0 || e >= m()) throw ValidationError("rotation references unknown edge");
            if (!edges_[e].has(v))
                throw ValidationError("rotation lists edge not incident to vertex");
            if (edges_[e].u == v)
                ++seen_u[e];
            else
                ++seen_v[e];
        }
    }
    for (EdgeId e = 0; e < m(); ++e)
        if (seen_u[e] != 1 || seen_v[e] != 1)
            throw ValidationError("edge must appear exactly once in each endpoint rotation");
}

void PlaneGraph::check_connected() const {
    if (n() == 0) throw ValidationError("empty graph");
    std::vector<std::uint8_t> vis(n(), 0);
    std::queue<VertexId> q;
    q.push(0);
    vis[0] = 1;
    std::int32_t cnt = 1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop();
        for (EdgeId e : rotation_[v]) {
            VertexId w = edges_[e].other(v);
            if (!vis[w]) {
                vis[w] = 1;
                ++cnt;
                q.push(w);
            }
        }
    }
    if (cnt != n()) throw ValidationError("graph is disconnected");
}

void PlaneGraph::trace_faces() {
    rot_pos_.assign(2 * static_cast<std::size_t>(m()), -1);
    for (VertexId v = 0; v < n(); ++v) {
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(rotation_[v].size()); ++i) {
            EdgeId e = rotation_[v][i];
            if (edges_[e].u == v && rot_pos_[2 * e] < 0)
                rot_pos_[2 * e] = i;
            else
                rot_pos_[2 * e + 1] = i;
        }
    }
    faces_.clear();
    face_of_.assign(2 * static_cast<std::size_t>(m()), -1);
    for (std::int32_t d0 = 0; d0 < 2 * m(); ++d0) {
        if (face_of_[d0] >= 0) continue;
        FaceId f = static_cast<FaceId>(faces_.size());
        std::vector<std::int32_t> walk;
        std::int32_t d = d0;
        do {
            face_of_[d] = f;
            walk.push_back(d);
            d = dart_next_in_face(d);
            if (walk.size() > 2 * static_cast<std::size_t>(m()) + 2)
                throw ValidationError("face trace does not close");
        } while (d != d0);
        faces_.push_back(std::move(walk));
    }
}

void PlaneGraph::finalize() {
    check_rotations();
    check_connected();
    trace_faces();
    // Euler check on the (connected) graph.
    if (n() - m() + f() != 2)
        throw ValidationError("Euler check failed: V-E+F = " +
                              std::to_string(n() - m() + f()));
}

std::vector<VertexId> PlaneGraph::face_vertices(FaceId f) const {
    std::vector<VertexId> vs;
    vs.reserve(faces_[f].size());
    for (std::int32_t d : faces_[f]) vs.push_back(dart_tail(d));
    return vs;
}

bool PlaneGraph::has_edge(VertexId u, VertexId v) const { return find_edge(u, v) >= 0; }

EdgeId PlaneGraph::find_edge(VertexId u, VertexId v) const {
    const VertexId a = rotation_[u].size() <= rotation_[v].size() ? u : v;
    const VertexId b = (a == u) ? v : u;
    for (EdgeId e : rotation_[a])
        if (edges_[e].other(a) == b) return e;
    return -1;
}

std::int32_t PlaneGraph::queryable_count() const {
    std::int32_t c = 0;
    for (auto q : queryable_) c += q;
    return c;
}

double PlaneGraph::metric_weight_sum() const {
    double s = 0.0;
    for (const Edge& e : edges_)
        if (e.metric) s += e.w;
    return s;
}

std::int32_t PlaneGraph::max_face_size() const {
    std::size_t mx = 0;
    for (const auto& f : faces_) mx = std::max(mx, f.size());
    return static_cast<std::int32_t>(mx);
}

// ── PGRF text format ────────────────────────────────────────────────

PlaneGraph PlaneGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return parse(in);
}

PlaneGraph PlaneGraph::parse(std::istream& in) {
    PlaneGraph g;
    std::string line;
    std::int64_t nv = -1, ne = -1;
    std::int64_t edges_read = 0;
    std::vector<std::uint8_t> rot_seen;
    std::int64_t rots_read = 0;
    while (std::getline(in, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "pgrf") {
            if (nv >= 0) throw ValidationError("duplicate pgrf header");
            if (!(ls >> nv >> ne) || nv <= 0 || ne < 0)
                throw ValidationError("malformed pgrf header");
            for (std::int64_t i = 0; i < nv; ++i) g.add_vertex();
            rot_seen.assign(nv, 0);
        } else if (tok == "e") {
            if (nv < 0) throw ValidationError("edge before header");
            std::int64_t u, v;
            double w;
            if (!(ls >> u >> v >> w)) throw ValidationError("malformed edge line");
            if (u < 0 || u >= nv || v < 0 || v >= nv)
                throw ValidationError("edge endpoint out of range");
            g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
            ++edges_read;
        } else if (tok == "rot") {
            if (nv < 0) throw ValidationError("rot before header");
            std::int64_t v;
            if (!(ls >> v) || v < 0 || v >= nv) throw ValidationError("malformed rot line");
            if (rot_seen[v]) throw ValidationError("duplicate rot line");
            rot_seen[v] = 1;
            ++rots_read;
            std::vector<EdgeId> order;
            std::int64_t e;
            while (ls >> e) order.push_back(static_cast<EdgeId>(e));
            g.set_rotation(static_cast<VertexId>(v), std::move(order));
        } else {
            throw ValidationError("unknown PGRF directive: " + tok);
        }
    }
    if (nv < 0) throw ValidationError("missing pgrf header");
    if (edges_read != ne) throw ValidationError("edge count mismatch");
    if (rots_read != nv) throw ValidationError("rotation line missing for some vertex");
    g.finalize();
    return g;
}

void PlaneGraph::save_pgrf(std::ostream& out) const {
    out << "pgrf " << n() << " " << m() << "\n";
    out << std::setprecision(17);
    for (const Edge& e : edges_) out << "e " << e.u << " " << e.v << " " << e.w << "\n";
    for (VertexId v = 0; v < n(); ++v) {
        out << "rot " << v;
        for (EdgeId e : rotation_[v]) out << " " << e;
        out << "\n";
    }
}

// ── Triangulation ───────────────────────────────────────────────────

namespace {

// Inserts `chord` into rot immediately before the occurrence of `before`.
void insert_before(std::vector<EdgeId>& rot, EdgeId before, EdgeId chord) {
    auto it = std::find(rot.begin(), rot.end(), before);
    rot.insert(it, chord);
}

}  // namespace

PlaneGraph PlaneGraph::triangulated() const {
    PlaneGraph g = *this;
    const double w_big = metric_weight_sum() + 1.0;

    // Walks captured up front; chord insertions only touch corners of the
    // face being processed, so later walks stay valid.
    std::vector<std::vector<std::int32_t>> walks = faces_;

    for (auto& walk : walks) {
        while (walk.size() > 3) {
            const std::int32_t L = static_cast<std::int32_t>(walk.size());
            // Fan anchor: first corner at the lowest-id vertex of the walk.
            std::int32_t anchor = 0;
            for (std::int32_t i = 1; i < L; ++i)
                if (g.dart_head(walk[i]) < g.dart_head(walk[anchor])) anchor = i;
            std::int32_t pick = -1;
            for (std::int32_t off = 0; off < L && pick < 0; ++off) {
                std::int32_t i = (anchor + off) % L;
                VertexId x = g.dart_head(walk[i]);
                VertexId y = g.dart_head(walk[(i + 2) % L]);
                if (x != y && !g.has_edge(x, y)) pick = i;
            }
            if (pick < 0) break;  // degenerate face (fewer than 3 distinct vertices)

            const std::int32_t i = pick;
            const std::int32_t j = (i + 2) % L;
            const VertexId x = g.dart_head(walk[i]);
            const VertexId y = g.dart_head(walk[j]);
            EdgeId c = g.add_edge(x, y, w_big, /*metric=*/false);
            insert_before(g.rotation_[x], walk[i] >> 1, c);
            insert_before(g.rotation_[y], walk[j] >> 1, c);

            const std::int32_t dart_xy = 2 * c + (g.edges_[c].u == x ? 0 : 1);
            const std::int32_t dart_yx = dart_xy ^ 1;
            // Remaining walk: ... walk[i], chord x->y, walk[j+1], ...
            std::vector<std::int32_t> rest;
            rest.reserve(L - 1);
            for (std::int32_t t = (j + 1) % L; t != (i + 1) % L; t = (t + 1) % L)
                rest.push_back(walk[t]);
            rest.push_back(dart_xy);
            (void)dart_yx;  // the split-off triangle needs no further work
            walk = std::move(rest);
        }
    }
    g.finalize();
    return g;
}

// ── Long-edge subdivision ───────────────────────────────────────────

PlaneGraph PlaneGraph::subdivided(double threshold, double skip_above,
                                  std::vector<EdgeId>* origin_edge) const {
    if (!(threshold > 0.0)) throw ValidationError("subdivision threshold must be > 0");
    PlaneGraph g;
    for (VertexId v = 0; v < n(); ++v) g.add_vertex(queryable_[v]);
    if (origin_edge) origin_edge->assign(n(), -1);

    // For each original edge: id of the piece incident to u / to v.
    std::vector<EdgeId> at_u(m()), at_v(m());
    for (EdgeId e = 0; e < m(); ++e) {
        const Edge& ed = edges_[e];
        bool split = ed.metric && ed.w > threshold && ed.w <= skip_above;
        if (!split) {
            EdgeId ne = g.add_edge(ed.u, ed.v, ed.w, ed.metric);
            at_u[e] = at_v[e] = ne;
            continue;
        }
        auto pieces = static_cast<std::int32_t>(std::ceil(ed.w / threshold));
        double pw = ed.w / pieces;
        VertexId prev = ed.u;
        EdgeId first = -1, last = -1;
        for (std::int32_t i = 0; i < pieces; ++i) {
            VertexId nxt;
            if (i + 1 == pieces) {
                nxt = ed.v;
            } else {
                nxt = g.add_vertex(/*queryable=*/false);
                if (origin_edge) origin_edge->push_back(e);
            }
            EdgeId pe = g.add_edge(prev, nxt, pw, true);
            if (i == 0) first = pe;
            last = pe;
            if (i > 0) g.set_rotation(prev, {static_cast<EdgeId>(pe - 1), pe});
            prev = nxt;
        }
        at_u[e] = first;
        at_v[e] = last;
    }
    for (VertexId v = 0; v < n(); ++v) {
        std::vector<EdgeId> order;
        order.reserve(rotation_[v].size());
        for (EdgeId e : rotation_[v]) order.push_back(edges_[e].u == v ? at_u[e] : at_v[e]);
        g.set_rotation(v, std::move(order));
    }
    g.finalize();
    return g;
}

// ── Shortest paths ──────────────────────────────────────────────────

SsspResult PlaneGraph::sssp(VertexId source, const std::vector<std::uint8_t>* vmask,
                            const std::vector<std::uint8_t>* emask) const {
    if (source < 0 || source >= n()) throw ValidationError("sssp source out of range");
    if (vmask && !(*vmask)[source]) throw ValidationError("sssp source outside restriction");
    SsspResult r;
    r.source = source;
    r.dist.assign(n(), kInf);
    r.parent.assign(n(), -1);
    r.parent_edge.assign(n(), -1);
    r.depth.assign(n(), -1);

    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    r.dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != r.dist[v]) continue;
        for (EdgeId e : rotation_[v]) {
            if (emask && !(*emask)[e]) continue;
            VertexId w = edges_[e].other(v);
            if (vmask && !(*vmask)[w]) continue;
            double nd = d + edges_[e].w;
            if (nd < r.dist[w]) {
                r.dist[w] = nd;
                r.parent[w] = v;
                r.parent_edge[w] = e;
                pq.push({nd, w});
            }
        }
    }
    // Deterministic tree: lexicographically smallest predecessor among exact
    // ties, restricted to (dist, id)-smaller vertices so parent chains are
    // acyclic even with zero-weight edges.
    for (VertexId v = 0; v < n(); ++v) {
        if (v == source || r.dist[v] == kInf) continue;
        for (EdgeId e : rotation_[v]) {
            if (emask && !(*emask)[e]) continue;
            VertexId u = edges_[e].other(v);
            if (vmask && !(*vmask)[u]) continue;
            if (r.dist[u] == kInf) continue;
            bool smaller = r.dist[u] < r.dist[v] || (r.dist[u] == r.dist[v] && u < v);
            if (smaller && r.dist[u] + edges_[e].w == r.dist[v] && u < r.parent[v]) {
                r.parent[v] = u;
                r.parent_edge[v] = e;
            }
        }
    }
    // Depths by iterative resolution.
    r.depth[source] = 0;
    for (VertexId v = 0; v < n(); ++v) {
        if (r.depth[v] >= 0 || r.dist[v] == kInf) continue;
        std::vector<VertexId> chain;
        VertexId x = v;
        while (r.depth[x] < 0) {
            chain.push_back(x);
            x = r.parent[x];
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it)
            r.depth[*it] = r.depth[r.parent[*it]] + 1;
    }
    return r;
}

double PlaneGraph::distance(VertexId s, VertexId t) const {
    if (s == t) return 0.0;
    std::vector<double> dist(n(), kInf);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        if (v == t) return d;
        for (EdgeId e : rotation_[v]) {
            VertexId w = edges_[e].other(v);
            double nd = d + edges_[e].w;
            if (nd < dist[w]) {
                dist[w] = nd;
                pq.push({nd, w});
            }
        }
    }
    return kInf;
}

// ── Contraction (embedding-preserving) ─────────────────────────────

PlaneGraph PlaneGraph::contracted(const std::vector<std::uint8_t>& contract_edge,
                                  std::vector<VertexId>* rep_out) const {
    // Mutable copies.
    std::vector<Edge> eds = edges_;
    std::vector<std::vector<EdgeId>> rot = rotation_;
    std::vector<std::uint8_t> dead(m(), 0);
    std::vector<VertexId> alias(n());
    for (VertexId v = 0; v < n(); ++v) alias[v] = v;

    for (EdgeId e = 0; e < m(); ++e) {
        if (!contract_edge[e] || dead[e]) continue;
        VertexId u = eds[e].u, v = eds[e].v;
        if (u == v) {  // became a self-loop through earlier merges
            dead[e] = 1;
            auto& r = rot[u];
            r.erase(std::remove(r.begin(), r.end(), e), r.end());
            continue;
        }
        VertexId a = std::min(u, v), b = std::max(u, v);
        // Splice b's rotation into a's at the slot of e.
        auto& ra = rot[a];
        auto& rb = rot[b];
        auto pa = static_cast<std::int32_t>(std::find(ra.begin(), ra.end(), e) - ra.begin());
        auto pb = static_cast<std::int32_t>(std::find(rb.begin(), rb.end(), e) - rb.begin());
        std::vector<EdgeId> merged;
        merged.reserve(ra.size() + rb.size() - 2);
        for (std::int32_t i = 1; i < static_cast<std::int32_t>(ra.size()); ++i)
            merged.push_back(ra[(pa + i) % ra.size()]);
        for (std::int32_t i = 1; i < static_cast<std::int32_t>(rb.size()); ++i)
            merged.push_back(rb[(pb + i) % rb.size()]);
        for (EdgeId f2 : rb) {
            if (f2 == e) continue;
            if (eds[f2].u == b) eds[f2].u = a;
            if (eds[f2].v == b) eds[f2].v = a;
        }
        rot[a] = std::move(merged);
        rot[b].clear();
        dead[e] = 1;
        alias[b] = a;
        // Drop self-loops created by the merge.
        auto& r = rot[a];
        for (std::int32_t i = static_cast<std::int32_t>(r.size()) - 1; i >= 0; --i) {
            EdgeId f2 = r[i];
            if (!dead[f2] && eds[f2].u == eds[f2].v) {
                dead[f2] = 1;
                r.erase(std::remove(r.begin(), r.end(), f2), r.end());
                i = static_cast<std::int32_t>(r.size());
            }
        }
    }
    // Resolve alias chains.
    for (VertexId v = 0; v < n(); ++v) {
        VertexId x = v;
        while (alias[x] != x) x = alias[x];
        alias[v] = x;
    }
    // Parallel-edge reduction: keep the minimum weight copy (ties: lowest id).
    std::map<std::pair<VertexId, VertexId>, EdgeId> best;
    for (EdgeId e = 0; e < m(); ++e) {
        if (dead[e] || contract_edge[e]) continue;
        std::pair<VertexId, VertexId> key{std::min(eds[e].u, eds[e].v),
                                          std::max(eds[e].u, eds[e].v)};
        auto it = best.find(key);
        if (it == best.end()) {
            best[key] = e;
        } else if (eds[e].w < eds[it->second].w) {
            dead[it->second] = 1;
            it->second = e;
        } else {
            dead[e] = 1;
        }
    }
    // Compact.
    PlaneGraph g;
    std::vector<VertexId> new_id(n(), -1);
    for (VertexId v = 0; v < n(); ++v) {
        if (alias[v] != v) continue;
        bool q = false;
        for (VertexId w = 0; w < n(); ++w)
            if (alias[w] == v && queryable_[w]) q = true;
        new_id[v] = g.add_vertex(q);
    }
    std::vector<EdgeId> new_edge(m(), -1);
    for (EdgeId e = 0; e < m(); ++e) {
        if (dead[e] || contract_edge[e]) continue;
        new_edge[e] = g.add_edge(new_id[eds[e].u], new_id[eds[e].v], eds[e].w, eds[e].metric);
    }
    for (VertexId v = 0; v < n(); ++v) {
        if (alias[v] != v) continue;
        std::vector<EdgeId> order;
        for (EdgeId e : rot[v])
            if (!dead[e] && new_edge[e] >= 0) order.push_back(new_edge[e]);
        g.set_rotation(new_id[v], std::move(order));
    }
    g.finalize();
    if (rep_out) {
        rep_out->assign(n(), -1);
        for (VertexId v = 0; v < n(); ++v) (*rep_out)[v] = new_id[alias[v]];
    }
    return g;
}

PlaneGraph PlaneGraph::induced(const std::vector<VertexId>& verts,
                               std::vector<VertexId>* local_of) const {
    std::vector<VertexId> loc(n(), -1);
    PlaneGraph g;
    for (VertexId v : verts) loc[v] = g.add_vertex(queryable_[v]);
    std::vector<EdgeId> new_edge(m(), -1);
    for (EdgeId e = 0; e < m(); ++e)
        if (loc[edges_[e].u] >= 0 && loc[edges_[e].v] >= 0)
            new_edge[e] = g.add_edge(loc[edges_[e].u], loc[edges_[e].v], edges_[e].w,
                                     edges_[e].metric);
    for (VertexId v : verts) {
        std::vector<EdgeId> order;
        for (EdgeId e : rotation_[v])
            if (new_edge[e] >= 0) order.push_back(new_edge[e]);
        g.set_rotation(loc[v], std::move(order));
    }
    g.finalize();
    if (local_of) *local_of = std::move(loc);
    return g;
}

}  // namespace pado
