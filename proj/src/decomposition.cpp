#include "pado/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace pado {

// ── MiniGraph ───────────────────────────────────────────────────────

std::vector<double> MiniGraph::sssp_dist(std::int32_t src) const {
    std::vector<double> dist(n(), kInf);
    using Item = std::pair<double, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        for (const Arc& a : adj[v]) {
            double nd = d + a.w;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                pq.push({nd, a.to});
            }
        }
    }
    return dist;
}

void MiniGraph::sssp(std::int32_t src, std::vector<double>& dist,
                     std::vector<std::int32_t>& parent,
                     std::vector<EdgeId>& parent_edge) const {
    dist.assign(n(), kInf);
    parent.assign(n(), -1);
    parent_edge.assign(n(), -1);
    using Item = std::pair<double, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        for (const Arc& a : adj[v]) {
            double nd = d + a.w;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                parent[a.to] = v;
                parent_edge[a.to] = a.id;
                pq.push({nd, a.to});
            }
        }
    }
    for (std::int32_t v = 0; v < n(); ++v) {
        if (v == src || dist[v] == kInf) continue;
        for (const Arc& a : adj[v]) {
            std::int32_t u = a.to;
            if (dist[u] == kInf) continue;
            bool smaller = dist[u] < dist[v] || (dist[u] == dist[v] && u < v);
            if (smaller && dist[u] + a.w == dist[v] && u < parent[v]) {
                parent[v] = u;
                parent_edge[v] = a.id;
            }
        }
    }
}

// ── LCA index ───────────────────────────────────────────────────────

void LcaIndex::build(const std::vector<std::int32_t>& parent, std::int32_t root) {
    const auto n = static_cast<std::int32_t>(parent.size());
    std::vector<std::vector<std::int32_t>> kids(n);
    for (std::int32_t v = 0; v < n; ++v)
        if (v != root && parent[v] >= 0) kids[parent[v]].push_back(v);
    depth_.assign(n, 0);
    first_.assign(n, -1);
    euler_.clear();
    euler_.reserve(2 * n);
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [v, idx] = stack.back();
        if (idx == 0) {
            first_[v] = static_cast<std::int32_t>(euler_.size());
            euler_.push_back(v);
        }
        if (idx == kids[v].size()) {
            stack.pop_back();
            if (!stack.empty()) euler_.push_back(stack.back().first);
            continue;
        }
        std::int32_t c = kids[v][idx++];
        depth_[c] = depth_[v] + 1;
        stack.push_back({c, 0});
    }
    const auto e = static_cast<std::int32_t>(euler_.size());
    std::int32_t levels = 1;
    while ((1 << levels) <= e) ++levels;
    table_.assign(levels, std::vector<std::int32_t>(e));
    table_[0] = euler_;
    for (std::int32_t l = 1; l < levels; ++l)
        for (std::int32_t i = 0; i + (1 << l) <= e; ++i) {
            std::int32_t a = table_[l - 1][i], b = table_[l - 1][i + (1 << (l - 1))];
            table_[l][i] = depth_[a] <= depth_[b] ? a : b;
        }
}

std::int32_t LcaIndex::lca(std::int32_t a, std::int32_t b) const {
    if (a < 0 || b < 0 || a >= static_cast<std::int32_t>(first_.size()) ||
        b >= static_cast<std::int32_t>(first_.size()))
        throw ValidationError("lca: node id out of range");
    std::int32_t i = first_[a], j = first_[b];
    if (i > j) std::swap(i, j);
    std::int32_t len = j - i + 1, l = 0;
    while ((2 << l) <= len) ++l;
    std::int32_t x = table_[l][i], y = table_[l][j - (1 << l) + 1];
    return depth_[x] <= depth_[y] ? x : y;
}

// ── DecompositionTree helpers ───────────────────────────────────────

std::int32_t default_lambda(std::int32_t n, double eps, std::int32_t c) {
    double v = std::log2(std::max(2, n)) / std::pow(eps, c);
    if (v > 1e9) return std::max<std::int32_t>(16, n + 1);
    return std::max<std::int32_t>(static_cast<std::int32_t>(std::ceil(v)), 16);
}

std::int32_t DecompositionTree::lca(std::int32_t a, std::int32_t b) const {
    return lca_index.lca(a, b);
}

bool DecompositionTree::is_ancestor(std::int32_t anc, std::int32_t node) const {
    return lca_index.lca(anc, node) == anc;
}

std::int32_t DecompositionTree::max_depth() const {
    std::int32_t d = 0;
    for (std::int32_t v : depth) d = std::max(d, v);
    return d;
}

std::vector<std::int32_t> DecompositionTree::leaves() const {
    std::vector<std::int32_t> out;
    for (const Region& r : nodes)
        if (r.is_leaf()) out.push_back(r.id);
    return out;
}

// ── Region construction ─────────────────────────────────────────────

namespace {

std::vector<Hole> compute_holes(const PlaneGraph& g, const Region& r, FaceId parental_seed) {
    std::vector<Hole> holes;
    std::vector<std::int32_t> comp(g.f(), -1);
    for (FaceId f0 = 0; f0 < g.f(); ++f0) {
        if (r.faces[f0] || comp[f0] >= 0) continue;
        auto hid = static_cast<std::int32_t>(holes.size());
        Hole h;
        std::queue<FaceId> q;
        comp[f0] = hid;
        q.push(f0);
        while (!q.empty()) {
            FaceId f = q.front();
            q.pop();
            h.faces.push_back(f);
            for (std::int32_t d : g.faces()[f]) {
                EdgeId e = d >> 1;
                if (r.edges[e]) continue;
                FaceId nf = g.face_of_dart(d ^ 1);
                if (!r.faces[nf] && comp[nf] < 0) {
                    comp[nf] = hid;
                    q.push(nf);
                }
            }
        }
        holes.push_back(std::move(h));
    }
    for (Hole& h : holes) {
        std::vector<std::uint8_t> seen(g.n(), 0);
        for (FaceId f : h.faces)
            for (std::int32_t d : g.faces()[f]) {
                VertexId v = g.dart_tail(d);
                if (r.verts[v] && !seen[v]) {
                    seen[v] = 1;
                    h.boundary.push_back(v);
                }
            }
        std::sort(h.boundary.begin(), h.boundary.end());
        h.rep = h.boundary.empty() ? -1 : h.boundary.front();
    }
    if (parental_seed >= 0 && comp[parental_seed] >= 0)
        holes[comp[parental_seed]].parental = true;
    return holes;
}

struct SplitDraft {
    Region c1, c2;
    PortalSequence portals;
};

// Builds both children of `parent` for the cycle, including marked
// distribution and holes, without touching the tree.
SplitDraft draft_split(const PlaneGraph& g, const Region& parent,
                       const SeparatorCycle& sc) {
    SplitDraft d;
    for (int s = 1; s <= 2; ++s) {
        Region& c = (s == 1) ? d.c1 : d.c2;
        c.side = static_cast<std::int8_t>(s);
        c.faces.assign(g.f(), 0);
        c.edges.assign(g.m(), 0);
        c.verts.assign(g.n(), 0);
        for (FaceId f = 0; f < g.f(); ++f)
            c.faces[f] = parent.faces[f] && sc.face_side[f] == s;
        for (EdgeId e = 0; e < g.m(); ++e) {
            c.edges[e] = sc.cycle_edge[e] ||
                         (parent.edges[e] && sc.face_side[g.face_left_of(e)] == s);
            if (c.edges[e]) {
                c.verts[g.edge(e).u] = 1;
                c.verts[g.edge(e).v] = 1;
            }
        }
        c.plus_v.assign(g.n(), 0);
        c.strict_v.assign(g.n(), 0);
        c.plus_e.assign(g.m(), 0);
        for (VertexId v = 0; v < g.n(); ++v) {
            c.plus_v[v] = sc.vertex_side[v] == s || sc.vertex_side[v] == 0;
            c.strict_v[v] = sc.vertex_side[v] == s;
        }
        for (EdgeId e = 0; e < g.m(); ++e)
            c.plus_e[e] = sc.cycle_edge[e] ||
                          sc.face_side[g.face_left_of(e)] == s;
    }
    // Marked split: strict sides keep theirs; marked vertices on the
    // separator alternate along the cycle order, first to child one.
    std::vector<std::uint8_t> is_marked(g.n(), 0);
    for (VertexId v : parent.marked) is_marked[v] = 1;
    for (VertexId v : parent.marked) {
        if (sc.vertex_side[v] == 1)
            d.c1.marked.push_back(v);
        else if (sc.vertex_side[v] == 2)
            d.c2.marked.push_back(v);
    }
    bool to_first = true;
    for (VertexId v : sc.cycle_order) {
        if (!is_marked[v]) continue;
        (to_first ? d.c1.marked : d.c2.marked).push_back(v);
        to_first = !to_first;
    }
    std::sort(d.c1.marked.begin(), d.c1.marked.end());
    std::sort(d.c2.marked.begin(), d.c2.marked.end());

    EdgeId ce = sc.closing_edge;
    FaceId fl = g.face_left_of(ce), fr = g.face_right_of(ce);
    d.c1.holes = compute_holes(g, d.c1, sc.face_side[fl] == 1 ? fr : fl);
    d.c2.holes = compute_holes(g, d.c2, sc.face_side[fl] == 2 ? fr : fl);
    return d;
}

}  // namespace

DecompositionTree build_decomposition(const PlaneGraph& g, const SsspResult& tree,
                                      const DecompositionParams& params) {
    if (params.lambda < 8) throw ValidationError("lambda must be >= 8");
    DecompositionTree t;
    t.params = params;

    SeparatorContext ctx(g, tree);

    Region root;
    root.id = 0;
    root.faces.assign(g.f(), 1);
    root.edges.assign(g.m(), 1);
    root.verts.assign(g.n(), 1);
    for (VertexId v = 0; v < g.n(); ++v)
        if (g.queryable(v)) root.marked.push_back(v);
    t.nodes.push_back(std::move(root));
    t.splits.emplace_back();

    std::vector<std::int32_t> todo{0};
    while (!todo.empty()) {
        std::int32_t id = todo.back();
        todo.pop_back();
        Region& r = t.nodes[id];
        std::int32_t nverts = 0;
        for (auto b : r.verts) nverts += b;
        if (static_cast<std::int32_t>(r.marked.size()) <= params.lambda || nverts <= 3)
            continue;

        const bool hole_mode = r.holes.size() >= 5;
        std::vector<double> weights(g.n(), 0.0);
        double total = 0.0;
        if (hole_mode) {
            for (const Hole& h : r.holes)
                if (h.rep >= 0) {
                    weights[h.rep] += 1.0;
                    total += 1.0;
                }
        } else {
            for (VertexId v : r.marked) weights[v] = 1.0;
            total = static_cast<double>(r.marked.size());
        }

        std::vector<std::uint8_t> filter(g.m(), 0);
        for (EdgeId e = 0; e < g.m(); ++e) filter[e] = r.edges[e];
        auto cands = ctx.candidates(weights, &filter);
        if (cands.empty()) continue;

        const double cap = 2.0 * total / 3.0 + 1e-12;
        std::sort(cands.begin(), cands.end(),
                  [&](const CycleCandidate& a, const CycleCandidate& b) {
                      bool ba = a.max_side() <= cap, bb = b.max_side() <= cap;
                      if (ba != bb) return ba;
                      if (a.metric_closing != b.metric_closing) return a.metric_closing;
                      if (a.cycle_len != b.cycle_len) return a.cycle_len < b.cycle_len;
                      return a.closing < b.closing;
                  });

        const auto m_total = static_cast<std::int32_t>(r.marked.size());
        const std::int32_t hole_cap = hole_mode ? 4 : 5;
        const std::int32_t try_cap = 64;

        std::int32_t best = -1;
        SplitDraft chosen;
        SeparatorCycle chosen_cycle;
        std::int64_t best_score = -1;
        const auto tries =
            std::min<std::int32_t>(try_cap, static_cast<std::int32_t>(cands.size()));
        for (std::int32_t ci = 0; ci < tries; ++ci) {
            const auto& cand = cands[ci];
            SeparatorCycle sc = ctx.make_cycle(cand.closing);
            SplitDraft dr = draft_split(g, r, sc);
            auto m1 = static_cast<std::int32_t>(dr.c1.marked.size());
            auto m2 = static_cast<std::int32_t>(dr.c2.marked.size());
            if (m1 >= m_total || m2 >= m_total) continue;  // no progress
            auto h1 = static_cast<std::int32_t>(dr.c1.holes.size());
            auto h2 = static_cast<std::int32_t>(dr.c2.holes.size());
            bool balanced = cand.max_side() <= cap;
            bool holes_ok = h1 <= hole_cap && h2 <= hole_cap;
            if (balanced && holes_ok) {
                dr.portals = place_portals(g, sc, params.tau);
                if (!hole_mode) {
                    auto bound = static_cast<std::int32_t>(std::ceil(2.0 * m_total / 3.0)) +
                                 dr.portals.k();
                    if (m1 > bound || m2 > bound) continue;
                }
                best = cand.closing;
                chosen = std::move(dr);
                chosen_cycle = std::move(sc);
                break;
            }
            // Fallback scoring: fewer excess holes, then smaller max child.
            std::int64_t score = static_cast<std::int64_t>(std::max(h1, h2)) * 1000000 +
                                 std::max(m1, m2);
            if (best_score < 0 || score < best_score) {
                best_score = score;
                best = cand.closing;
                dr.portals = place_portals(g, sc, params.tau);
                chosen = std::move(dr);
                chosen_cycle = std::move(sc);
            }
        }
        if (best < 0) continue;  // nothing usable: region stays a leaf

        auto id1 = static_cast<std::int32_t>(t.nodes.size());
        auto id2 = id1 + 1;
        chosen.c1.id = id1;
        chosen.c2.id = id2;
        chosen.c1.parent = chosen.c2.parent = id;
        t.nodes[id].child1 = id1;
        t.nodes[id].child2 = id2;
        t.splits[id].cycle = std::move(chosen_cycle);
        t.splits[id].portals = std::move(chosen.portals);
        t.splits[id].portals.cycle_ref = id;
        t.nodes.push_back(std::move(chosen.c1));
        t.nodes.push_back(std::move(chosen.c2));
        t.splits.emplace_back();
        t.splits.emplace_back();
        todo.push_back(id1);
        todo.push_back(id2);
    }

    std::vector<std::int32_t> parent(t.nodes.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) parent[i] = t.nodes[i].parent;
    t.lca_index.build(parent, 0);
    t.depth.assign(t.nodes.size(), 0);
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        t.depth[i] = t.lca_index.depth(static_cast<std::int32_t>(i));

    t.leaf_of.assign(g.n(), -1);
    for (const Region& r : t.nodes)
        if (r.is_leaf())
            for (VertexId v : r.marked) t.leaf_of[v] = r.id;
    return t;
}

// ── Distance-preserving minors ──────────────────────────────────────

DistMinor distance_preserving_minor(const MiniGraph& host,
                                    const std::vector<std::int32_t>& terminals) {
    if (terminals.empty()) throw ValidationError("minor needs terminals");
    const auto k = static_cast<std::int32_t>(terminals.size());
    std::vector<std::uint8_t> used_edge(host.edge_count, 0);
    std::vector<std::vector<std::int32_t>> par(k);
    std::vector<std::vector<EdgeId>> par_e(k);
    std::vector<double> dist;
    for (std::int32_t i = 0; i < k; ++i) host.sssp(terminals[i], dist, par[i], par_e[i]);
    for (std::int32_t i = 0; i < k; ++i)
        for (std::int32_t j = i + 1; j < k; ++j) {
            std::int32_t v = terminals[j];
            while (v != terminals[i]) {
                if (par[i][v] < 0) throw ValidationError("terminals not connected in host");
                used_edge[par_e[i][v]] = 1;
                v = par[i][v];
            }
        }

    // Collect the union subgraph as a mutable edge soup.
    struct MEdge {
        std::int32_t a, b;
        double w;
        bool alive = true;
    };
    std::vector<MEdge> medges;
    std::vector<std::vector<std::int32_t>> inc(host.n());
    std::vector<std::uint8_t> in_union(host.n(), 0);
    std::vector<std::uint8_t> is_term(host.n(), 0);
    for (std::int32_t v : terminals) {
        is_term[v] = 1;
        in_union[v] = 1;
    }
    std::vector<std::uint8_t> added(host.edge_count, 0);
    for (std::int32_t v = 0; v < host.n(); ++v)
        for (const auto& a : host.adj[v]) {
            if (!used_edge[a.id] || added[a.id]) continue;
            added[a.id] = 1;
            auto ei = static_cast<std::int32_t>(medges.size());
            medges.push_back({v, a.to, a.w, true});
            inc[v].push_back(ei);
            inc[a.to].push_back(ei);
            in_union[v] = in_union[a.to] = 1;
        }

    auto degree = [&](std::int32_t v) {
        std::int32_t d = 0;
        for (std::int32_t ei : inc[v])
            if (medges[ei].alive) ++d;
        return d;
    };
    std::queue<std::int32_t> q;
    for (std::int32_t v = 0; v < host.n(); ++v)
        if (in_union[v] && !is_term[v] && degree(v) <= 2) q.push(v);
    while (!q.empty()) {
        std::int32_t v = q.front();
        q.pop();
        if (is_term[v] || !in_union[v]) continue;
        std::vector<std::int32_t> live;
        for (std::int32_t ei : inc[v])
            if (medges[ei].alive) live.push_back(ei);
        if (live.size() > 2) continue;
        if (live.empty()) {
            in_union[v] = 0;
            continue;
        }
        if (live.size() == 1) {
            medges[live[0]].alive = false;
            std::int32_t o = medges[live[0]].a == v ? medges[live[0]].b : medges[live[0]].a;
            in_union[v] = 0;
            if (!is_term[o]) q.push(o);
            continue;
        }
        std::int32_t x = medges[live[0]].a == v ? medges[live[0]].b : medges[live[0]].a;
        std::int32_t y = medges[live[1]].a == v ? medges[live[1]].b : medges[live[1]].a;
        double w = medges[live[0]].w + medges[live[1]].w;
        medges[live[0]].alive = false;
        medges[live[1]].alive = false;
        in_union[v] = 0;
        if (x == y) {
            // pinched cycle collapses
            if (!is_term[x]) q.push(x);
            continue;
        }
        auto ei = static_cast<std::int32_t>(medges.size());
        medges.push_back({x, y, w, true});
        inc[x].push_back(ei);
        inc[y].push_back(ei);
        if (!is_term[x] && degree(x) <= 2) q.push(x);
        if (!is_term[y] && degree(y) <= 2) q.push(y);
    }
    // Parallel reduction, then one more dissolution sweep for any degree-2
    // vertices it created.
    for (int round = 0; round < 2; ++round) {
        std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> bestp;
        for (std::int32_t ei = 0; ei < static_cast<std::int32_t>(medges.size()); ++ei) {
            if (!medges[ei].alive) continue;
            std::pair<std::int32_t, std::int32_t> key{std::min(medges[ei].a, medges[ei].b),
                                                      std::max(medges[ei].a, medges[ei].b)};
            auto it = bestp.find(key);
            if (it == bestp.end())
                bestp[key] = ei;
            else if (medges[ei].w < medges[it->second].w) {
                medges[it->second].alive = false;
                it->second = ei;
            } else {
                medges[ei].alive = false;
            }
        }
        for (std::int32_t v = 0; v < host.n(); ++v)
            if (in_union[v] && !is_term[v] && degree(v) <= 2) q.push(v);
        while (!q.empty()) {
            std::int32_t v = q.front();
            q.pop();
            if (is_term[v] || !in_union[v]) continue;
            std::vector<std::int32_t> live;
            for (std::int32_t ei : inc[v])
                if (medges[ei].alive) live.push_back(ei);
            if (live.size() != 2) continue;
            std::int32_t x = medges[live[0]].a == v ? medges[live[0]].b : medges[live[0]].a;
            std::int32_t y = medges[live[1]].a == v ? medges[live[1]].b : medges[live[1]].a;
            if (x == y) continue;
            medges[live[0]].alive = false;
            medges[live[1]].alive = false;
            in_union[v] = 0;
            auto ei = static_cast<std::int32_t>(medges.size());
            medges.push_back({x, y, medges[live[0]].w + medges[live[1]].w, true});
            inc[x].push_back(ei);
            inc[y].push_back(ei);
        }
    }

    DistMinor out;
    out.terminals = terminals;
    std::vector<std::int32_t> local(host.n(), -1);
    for (std::int32_t v : terminals)
        if (local[v] < 0) local[v] = out.graph.add_vertex(host.label[v]);
    for (const MEdge& e : medges) {
        if (!e.alive) continue;
        for (std::int32_t v : {e.a, e.b})
            if (local[v] < 0) local[v] = out.graph.add_vertex(host.label[v]);
        out.graph.add_edge(local[e.a], local[e.b], e.w);
    }
    out.terminal_local.reserve(terminals.size());
    for (std::int32_t v : terminals) out.terminal_local.push_back(local[v]);
    return out;
}

DistMinor distance_preserving_minor(const PlaneGraph& host,
                                    const std::vector<VertexId>& terminals,
                                    const std::vector<std::uint8_t>* vmask,
                                    const std::vector<std::uint8_t>* emask) {
    MiniGraph mg;
    std::vector<std::int32_t> local(host.n(), -1);
    for (VertexId v = 0; v < host.n(); ++v)
        if (!vmask || (*vmask)[v]) local[v] = mg.add_vertex(v);
    for (EdgeId e = 0; e < host.m(); ++e) {
        if (emask && !(*emask)[e]) continue;
        const Edge& ed = host.edge(e);
        if (local[ed.u] >= 0 && local[ed.v] >= 0) mg.add_edge(local[ed.u], local[ed.v], ed.w);
    }
    std::vector<std::int32_t> tl;
    tl.reserve(terminals.size());
    for (VertexId v : terminals) {
        if (local[v] < 0) throw ValidationError("terminal outside host mask");
        tl.push_back(local[v]);
    }
    return distance_preserving_minor(mg, tl);
}

// ── Region views ────────────────────────────────────────────────────

namespace {

RegionView masked_view(const PlaneGraph& g, const std::vector<std::uint8_t>* vmask,
                       const std::vector<std::uint8_t>* emask) {
    RegionView rv;
    rv.local_of.assign(g.n(), -1);
    for (VertexId v = 0; v < g.n(); ++v)
        if (!vmask || (*vmask)[v]) rv.local_of[v] = rv.g.add_vertex(v);
    for (EdgeId e = 0; e < g.m(); ++e) {
        if (emask && !(*emask)[e]) continue;
        const Edge& ed = g.edge(e);
        if (rv.local_of[ed.u] >= 0 && rv.local_of[ed.v] >= 0)
            rv.g.add_edge(rv.local_of[ed.u], rv.local_of[ed.v], ed.w);
    }
    return rv;
}

// Adds the given minor to the view, sharing terminal vertices by global id.
void add_minor(RegionView& rv, const DistMinor& mm) {
    std::vector<std::int32_t> map(mm.graph.n(), -1);
    for (std::int32_t v = 0; v < mm.graph.n(); ++v) {
        auto gid = static_cast<VertexId>(mm.graph.label[v]);
        if (gid >= 0 && rv.local_of[gid] >= 0)
            map[v] = rv.local_of[gid];
        else
            map[v] = rv.g.add_vertex(-1);
        if (gid >= 0 && rv.local_of[gid] < 0) rv.local_of[gid] = map[v];
    }
    std::vector<std::uint8_t> seen(mm.graph.edge_count, 0);
    for (std::int32_t v = 0; v < mm.graph.n(); ++v)
        for (const auto& a : mm.graph.adj[v]) {
            if (seen[a.id]) continue;
            seen[a.id] = 1;
            rv.g.add_edge(map[v], map[a.to], a.w);
        }
}

// Host mask for a hole: everything inside plus the boundary.
void hole_masks(const PlaneGraph& g, const Hole& h, std::vector<std::uint8_t>& vmask,
                std::vector<std::uint8_t>& emask) {
    vmask.assign(g.n(), 0);
    emask.assign(g.m(), 0);
    std::vector<std::uint8_t> hf(g.f(), 0);
    for (FaceId f : h.faces) hf[f] = 1;
    for (EdgeId e = 0; e < g.m(); ++e)
        if (hf[g.face_left_of(e)] || hf[g.face_right_of(e)]) {
            emask[e] = 1;
            vmask[g.edge(e).u] = 1;
            vmask[g.edge(e).v] = 1;
        }
}

}  // namespace

std::vector<VertexId> hole_portals(const PlaneGraph& g, const DecompositionTree& t,
                                   std::int32_t node, const Hole& hole, double spacing) {
    std::vector<std::uint8_t> chosen(g.n(), 0);
    std::vector<std::uint8_t> on_boundary(g.n(), 0);
    for (VertexId v : hole.boundary) on_boundary[v] = 1;
    std::vector<VertexId> out;
    // Step-one portals of ancestor separators that lie on this boundary.
    for (std::int32_t a = t.nodes[node].parent; a >= 0; a = t.nodes[a].parent)
        for (VertexId p : t.splits[a].portals.portals)
            if (on_boundary[p] && !chosen[p]) {
                chosen[p] = 1;
                out.push_back(p);
            }
    // Greedy supplement measured inside the region graph: every boundary
    // vertex ends up within `spacing` of some portal.
    RegionView region = masked_view(g, &t.nodes[node].verts, &t.nodes[node].edges);
    auto covered = [&]() {
        std::vector<double> dist(region.g.n(), kInf);
        using Item = std::pair<double, std::int32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        for (VertexId p : out) {
            std::int32_t lp = region.local(p);
            dist[lp] = 0.0;
            pq.push({0.0, lp});
        }
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d != dist[v]) continue;
            if (d > spacing) continue;
            for (const auto& a : region.g.adj[v]) {
                double nd = d + a.w;
                if (nd < dist[a.to]) {
                    dist[a.to] = nd;
                    pq.push({nd, a.to});
                }
            }
        }
        return dist;
    };
    for (;;) {
        auto dist = out.empty() ? std::vector<double>(region.g.n(), kInf) : covered();
        VertexId pick = -1;
        for (VertexId v : hole.boundary)
            if (dist[region.local(v)] > spacing) {
                pick = v;
                break;
            }
        if (pick < 0) break;
        chosen[pick] = 1;
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

RegionView make_plus_view(const PlaneGraph& g, const DecompositionTree& t,
                          std::int32_t node) {
    const Region& r = t.nodes[node];
    if (node == t.root) return masked_view(g, nullptr, nullptr);
    if (t.params.filling == FillMode::Exact)
        return masked_view(g, &r.plus_v, &r.plus_e);

    // Dense: the region's own edges plus a distance-preserving minor of
    // dense portals per non-parental hole, hosted on the exact hole graph.
    RegionView rv = masked_view(g, &r.verts, &r.edges);
    for (const Hole& h : r.holes) {
        if (h.parental) continue;
        auto portals = hole_portals(g, t, node, h, t.params.dense_spacing);
        if (portals.size() < 2) continue;
        std::vector<std::uint8_t> vmask, emask;
        hole_masks(g, h, vmask, emask);
        add_minor(rv, distance_preserving_minor(g, portals, &vmask, &emask));
    }
    return rv;
}

RegionView make_rout_view(const PlaneGraph& g, const DecompositionTree& t,
                          std::int32_t leaf, std::int32_t ancestor) {
    if (ancestor == t.root || !t.is_ancestor(ancestor, leaf) || ancestor == leaf)
        throw ValidationError("make_rout_view: bad leaf/ancestor pair");
    const Region& lr = t.nodes[leaf];
    const SeparatorCycle& lc = t.splits[lr.parent].cycle;
    const std::int8_t ls = lr.side;

    if (t.params.filling == FillMode::Exact) {
        const Region& ar = t.nodes[ancestor];
        std::vector<std::uint8_t> vmask(g.n(), 0), emask(g.m(), 0);
        for (VertexId v = 0; v < g.n(); ++v)
            vmask[v] = ar.plus_v[v] && lc.vertex_side[v] != ls;
        for (EdgeId e = 0; e < g.m(); ++e)
            emask[e] = ar.plus_e[e] &&
                       (lc.cycle_edge[e] || lc.face_side[g.face_left_of(e)] != ls);
        return masked_view(g, &vmask, &emask);
    }

    // Dense: ancestor region edges outside the leaf's side, plus minors of
    // the ancestor's non-parental holes that lie fully outside that side.
    const Region& ar = t.nodes[ancestor];
    std::vector<std::uint8_t> vmask(g.n(), 0), emask(g.m(), 0);
    for (VertexId v = 0; v < g.n(); ++v) vmask[v] = ar.verts[v] && lc.vertex_side[v] != ls;
    for (EdgeId e = 0; e < g.m(); ++e)
        emask[e] = ar.edges[e] &&
                   (lc.cycle_edge[e] || lc.face_side[g.face_left_of(e)] != ls);
    RegionView rv = masked_view(g, &vmask, &emask);
    for (const Hole& h : ar.holes) {
        if (h.parental) continue;
        bool outside = true;
        for (FaceId f : h.faces)
            if (lc.face_side[f] == ls) {
                outside = false;
                break;
            }
        if (!outside) continue;
        auto portals = hole_portals(g, t, ancestor, h, t.params.dense_spacing);
        if (portals.size() < 2) continue;
        std::vector<std::uint8_t> hv, he;
        hole_masks(g, h, hv, he);
        add_minor(rv, distance_preserving_minor(g, portals, &hv, &he));
    }
    return rv;
}

}  // namespace pado
