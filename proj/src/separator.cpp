#include "pado/separator.hpp"

#include <algorithm>
#include <queue>

namespace pado {

SeparatorContext::SeparatorContext(const PlaneGraph& g, const SsspResult& tree)
    : g_(g), tree_(tree) {
    const std::int32_t n = g.n(), m = g.m(), f = g.f();
    is_tree_edge_.assign(m, 0);
    for (VertexId v = 0; v < n; ++v)
        if (tree.parent_edge[v] >= 0) is_tree_edge_[tree.parent_edge[v]] = 1;

    rep_face_.assign(n, -1);
    for (FaceId fc = 0; fc < f; ++fc)
        for (std::int32_t d : g.faces()[fc]) {
            VertexId v = g.dart_tail(d);
            if (rep_face_[v] < 0) rep_face_[v] = fc;
        }

    // Dual tree over non-tree edges (they connect all faces acyclically).
    std::vector<std::vector<std::pair<FaceId, EdgeId>>> adj(f);
    for (EdgeId e = 0; e < m; ++e) {
        if (is_tree_edge_[e]) continue;
        FaceId a = g.face_left_of(e), b = g.face_right_of(e);
        adj[a].push_back({b, e});
        adj[b].push_back({a, e});
    }
    dual_parent_.assign(f, -1);
    dual_parent_edge_.assign(f, -1);
    tin_.assign(f, -1);
    tout_.assign(f, -1);
    dfs_order_.clear();
    dfs_order_.reserve(f);
    std::vector<std::pair<FaceId, std::size_t>> stack;
    std::int32_t clock = 0;
    dual_parent_[0] = 0;
    stack.push_back({0, 0});
    tin_[0] = clock++;
    dfs_order_.push_back(0);
    while (!stack.empty()) {
        auto& [fc, idx] = stack.back();
        if (idx == adj[fc].size()) {
            tout_[fc] = clock++;
            stack.pop_back();
            continue;
        }
        auto [nf, ne] = adj[fc][idx++];
        if (dual_parent_[nf] >= 0) continue;
        dual_parent_[nf] = fc;
        dual_parent_edge_[nf] = ne;
        tin_[nf] = clock++;
        dfs_order_.push_back(nf);
        stack.push_back({nf, 0});
    }
    for (FaceId fc = 0; fc < f; ++fc)
        if (tin_[fc] < 0)
            throw ValidationError("dual of non-tree edges is not spanning (graph not embedded-connected)");
}

std::vector<VertexId> SeparatorContext::cycle_vertices(EdgeId closing) const {
    VertexId x = g_.edge(closing).u, y = g_.edge(closing).v;
    std::vector<VertexId> px{x}, py{y};
    while (tree_.depth[x] > tree_.depth[y]) px.push_back(x = tree_.parent[x]);
    while (tree_.depth[y] > tree_.depth[x]) py.push_back(y = tree_.parent[y]);
    while (x != y) {
        px.push_back(x = tree_.parent[x]);
        py.push_back(y = tree_.parent[y]);
    }
    // px ends at the peak; py ends just below it on the other side.
    py.pop_back();
    std::vector<VertexId> cyc(px.rbegin(), px.rend());  // peak .. u
    cyc.insert(cyc.end(), py.begin(), py.end());        // v .. (below peak)
    return cyc;
}

std::vector<CycleCandidate> SeparatorContext::candidates(
    const std::vector<double>& weights, const std::vector<std::uint8_t>* edge_filter) const {
    const std::int32_t m = g_.m(), f = g_.f();
    // Weight of each dual subtree, vertices charged to their rep face.
    std::vector<double> face_w(f, 0.0);
    double total = 0.0;
    for (VertexId v = 0; v < g_.n(); ++v) {
        face_w[rep_face_[v]] += weights[v];
        total += weights[v];
    }
    std::vector<double> sub(f, 0.0);
    for (auto it = dfs_order_.rbegin(); it != dfs_order_.rend(); ++it) {
        FaceId fc = *it;
        sub[fc] += face_w[fc];
        if (fc != 0) sub[dual_parent_[fc]] += sub[fc];
    }

    std::vector<CycleCandidate> out;
    for (EdgeId e = 0; e < m; ++e) {
        if (is_tree_edge_[e]) continue;
        if (edge_filter && !(*edge_filter)[e]) continue;
        FaceId a = g_.face_left_of(e), b = g_.face_right_of(e);
        FaceId child = (dual_parent_edge_[a] == e) ? a : b;
        if (dual_parent_edge_[child] != e) continue;  // parallel dual path: not a tree edge
        auto cyc = cycle_vertices(e);
        CycleCandidate c;
        c.closing = e;
        c.cycle_len = static_cast<std::int32_t>(cyc.size());
        c.metric_closing = g_.edge(e).metric;
        double w_cyc = 0.0, w_cyc_in = 0.0;
        for (VertexId v : cyc) {
            w_cyc += weights[v];
            FaceId rf = rep_face_[v];
            if (tin_[child] <= tin_[rf] && tout_[rf] <= tout_[child]) w_cyc_in += weights[v];
        }
        c.w_cycle = w_cyc;
        c.w_in = sub[child] - w_cyc_in;
        c.w_out = total - c.w_in - w_cyc;
        out.push_back(c);
    }
    return out;
}

SeparatorCycle SeparatorContext::make_cycle(EdgeId closing) const {
    const std::int32_t n = g_.n(), m = g_.m(), f = g_.f();
    SeparatorCycle sc;
    sc.closing_edge = closing;
    VertexId u = g_.edge(closing).u, v = g_.edge(closing).v;
    sc.cycle_order = cycle_vertices(closing);
    sc.peak = sc.cycle_order.front();
    for (VertexId x = u;; x = tree_.parent[x]) {
        sc.path1.push_back(x);
        if (x == tree_.source) break;
    }
    std::reverse(sc.path1.begin(), sc.path1.end());
    for (VertexId x = v;; x = tree_.parent[x]) {
        sc.path2.push_back(x);
        if (x == tree_.source) break;
    }
    std::reverse(sc.path2.begin(), sc.path2.end());

    sc.cycle_edge.assign(m, 0);
    sc.cycle_edge[closing] = 1;
    sc.vertex_side.assign(n, 3);
    for (std::size_t i = 0; i < sc.cycle_order.size(); ++i) {
        VertexId x = sc.cycle_order[i];
        sc.vertex_side[x] = 0;
        if (x != sc.peak) sc.cycle_edge[tree_.parent_edge[x]] = 1;
    }
    // Dual sweep blocked at cycle edges: exactly the two Jordan sides.
    sc.face_side.assign(f, 0);
    std::queue<FaceId> q;
    FaceId seed = g_.face_left_of(closing);
    sc.face_side[seed] = 1;
    q.push(seed);
    while (!q.empty()) {
        FaceId fc = q.front();
        q.pop();
        for (std::int32_t d : g_.faces()[fc]) {
            EdgeId e = d >> 1;
            if (sc.cycle_edge[e]) continue;
            FaceId nf = g_.face_of_dart(d ^ 1);
            if (!sc.face_side[nf]) {
                sc.face_side[nf] = 1;
                q.push(nf);
            }
        }
    }
    for (FaceId fc = 0; fc < f; ++fc)
        if (!sc.face_side[fc]) sc.face_side[fc] = 2;
    for (VertexId x = 0; x < n; ++x) {
        if (sc.vertex_side[x] == 0) continue;
        FaceId rf = rep_face_[x];
        sc.vertex_side[x] = sc.face_side[rf];
        if (sc.vertex_side[x] == 1)
            sc.inside.push_back(x);
        else
            sc.outside.push_back(x);
    }
    return sc;
}

SeparatorCycle fundamental_cycle_separator(const PlaneGraph& g, const SsspResult& tree,
                                           const std::vector<double>& weights) {
    if (g.n() <= 3) throw ValidationError("graph too small to separate");
    SeparatorContext ctx(g, tree);
    auto cands = ctx.candidates(weights, nullptr);
    if (cands.empty()) throw ValidationError("no fundamental cycle candidates");
    double total = 0.0;
    for (double w : weights) total += w;
    const double cap = 2.0 * total / 3.0;
    std::sort(cands.begin(), cands.end(), [&](const CycleCandidate& a, const CycleCandidate& b) {
        bool ba = a.max_side() <= cap + 1e-12, bb = b.max_side() <= cap + 1e-12;
        if (ba != bb) return ba;
        if (ba) {
            if (a.cycle_len != b.cycle_len) return a.cycle_len < b.cycle_len;
            return a.closing < b.closing;
        }
        if (a.max_side() != b.max_side()) return a.max_side() < b.max_side();
        return a.closing < b.closing;
    });
    return ctx.make_cycle(cands.front().closing);
}

PortalSequence place_portals(const PlaneGraph& g, const SeparatorCycle& cycle, double tau) {
    if (!(tau > 0)) throw ValidationError("tau must be > 0");
    PortalSequence seq;
    seq.tau = tau;
    const std::vector<VertexId>& ord = cycle.cycle_order;
    const std::size_t L = ord.size();
    const VertexId u = g.edge(cycle.closing_edge).u;
    std::size_t u_pos = 0;
    while (ord[u_pos] != u) ++u_pos;

    // Edge of cycle step i-1 -> i; i == L wraps back to the peak.
    auto arc_edge = [&](std::size_t i) -> EdgeId {
        if (i == u_pos + 1) return cycle.closing_edge;
        return g.find_edge(ord[(i - 1) % L], ord[i % L]);
    };

    // Greedy along path one: peak .. u. Peak and u are mandatory.
    std::vector<VertexId> por1{ord[0]};
    double cum = 0.0;
    for (std::size_t i = 1; i <= u_pos; ++i) {
        cum += g.edge(arc_edge(i)).w;
        if (cum > tau && i < u_pos) {
            por1.push_back(ord[i]);
            cum = 0.0;
        }
    }
    if (u_pos > 0) por1.push_back(u);

    // Greedy along path two, walking from the peak down to v. v mandatory.
    std::vector<VertexId> por2;  // nearest-to-peak first
    cum = 0.0;
    for (std::size_t i = L - 1; i > u_pos; --i) {
        cum += g.edge(arc_edge(i + 1)).w;
        if (cum > tau && i > u_pos + 1) {
            por2.push_back(ord[i]);
            cum = 0.0;
        }
    }
    if (L > u_pos + 1) por2.push_back(ord[u_pos + 1]);  // v

    seq.portals = por1;
    seq.jump_index = static_cast<std::int32_t>(por1.size()) - 1;
    for (auto it = por2.rbegin(); it != por2.rend(); ++it) seq.portals.push_back(*it);

    // Cumulative arc length and per-pair gaps (last gap wraps to the peak).
    std::vector<double> arc(L + 1, 0.0);
    for (std::size_t i = 1; i <= L; ++i) arc[i] = arc[i - 1] + g.edge(arc_edge(i)).w;
    std::vector<std::size_t> pos_of(seq.portals.size());
    std::size_t ci = 0;
    for (std::size_t i = 0; i < seq.portals.size(); ++i) {
        while (ord[ci] != seq.portals[i]) ++ci;
        pos_of[i] = ci;
    }
    seq.gaps.resize(seq.portals.size());
    for (std::size_t i = 0; i < seq.portals.size(); ++i) {
        std::size_t b = (i + 1 < seq.portals.size()) ? pos_of[i + 1] : L;
        seq.gaps[i] = arc[b] - arc[pos_of[i]];
    }
    return seq;
}

bool check_tau_cover(const PlaneGraph& g, const SeparatorCycle& cycle,
                     const PortalSequence& seq) {
    const std::vector<VertexId>& ord = cycle.cycle_order;
    const std::size_t L = ord.size();
    const VertexId u = g.edge(cycle.closing_edge).u;
    std::size_t u_pos = 0;
    while (ord[u_pos] != u) ++u_pos;
    auto arc_edge = [&](std::size_t i) -> EdgeId {
        if (i == u_pos + 1) return cycle.closing_edge;
        return g.find_edge(ord[(i - 1) % L], ord[i % L]);
    };
    std::vector<double> arc(L + 1, 0.0);
    for (std::size_t i = 1; i <= L; ++i) arc[i] = arc[i - 1] + g.edge(arc_edge(i)).w;
    std::vector<std::size_t> pos_of(seq.portals.size());
    std::size_t ci = 0;
    for (std::size_t i = 0; i < seq.portals.size(); ++i) {
        while (ord[ci] != seq.portals[i]) ++ci;
        pos_of[i] = ci;
    }
    // Every vertex strictly inside an arc must be within tau (along the
    // cycle) of one of the arc's endpoint portals.
    for (std::size_t i = 0; i < seq.portals.size(); ++i) {
        std::size_t a = pos_of[i];
        std::size_t b = (i + 1 < seq.portals.size()) ? pos_of[i + 1] : L;
        for (std::size_t j = a + 1; j < b; ++j) {
            double to_open = arc[j] - arc[a];
            double to_close = arc[b] - arc[j];
            if (std::min(to_open, to_close) > seq.tau + 1e-9) return false;
        }
    }
    return true;
}

}  // namespace pado
