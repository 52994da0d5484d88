#include "pado/additive_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "pado/verify.hpp"

namespace pado {

namespace {

// Largest power of two <= x (x in (0,1]): keeps delta an exact binary
// fraction of dhat so unit arithmetic never drifts between runs.
double pow2_floor(double x) {
    return std::ldexp(1.0, static_cast<int>(std::floor(std::log2(x))));
}

VertexId first_queryable(const PlaneGraph& g) {
    for (VertexId v = 0; v < g.n(); ++v)
        if (g.queryable(v)) return v;
    throw ValidationError("no queryable vertices");
}

}  // namespace

struct AdditiveBuilder {
    AdditiveOracle& o;
    const AdditiveConfig& cfg;
    std::vector<std::vector<std::int32_t>> desc_leaves;  // per node

    explicit AdditiveBuilder(AdditiveOracle& oracle, const AdditiveConfig& c)
        : o(oracle), cfg(c) {}

    void collect_desc_leaves() {
        const auto n = o.tree_.node_count();
        desc_leaves.assign(n, {});
        // children have larger ids than parents, so a reverse sweep suffices
        for (std::int32_t id = n - 1; id >= 0; --id) {
            const Region& r = o.tree_.nodes[id];
            if (r.is_leaf()) {
                desc_leaves[id].push_back(id);
            } else {
                for (std::int32_t c : {r.child1, r.child2})
                    desc_leaves[id].insert(desc_leaves[id].end(), desc_leaves[c].begin(),
                                           desc_leaves[c].end());
                std::sort(desc_leaves[id].begin(), desc_leaves[id].end());
            }
        }
    }

    void build_node_tables() {
        const auto n = o.tree_.node_count();
        o.node_tables_.assign(n, {});
        for (std::int32_t id = 1; id < n; ++id) {
            const Region& r = o.tree_.nodes[id];
            const PortalSequence& seq = o.tree_.splits[r.parent].portals;
            RegionView rv = make_plus_view(o.g_, o.tree_, id);
            const std::int32_t k = seq.k();
            std::vector<std::vector<double>> pd(k);
            for (std::int32_t i = 0; i < k; ++i) {
                std::int32_t lp = rv.local(seq.portals[i]);
                if (lp < 0) throw AuditError("portal missing from filled region view");
                pd[i] = rv.g.sssp_dist(lp);
            }
            NodeTables& nt = o.node_tables_[id];
            std::vector<double> dists(k);
            for (VertexId u : r.marked) {
                std::int32_t lu = rv.local(u);
                for (std::int32_t i = 0; i < k; ++i) dists[i] = pd[i][lu];
                nt.t21.emplace(u, make_encoding(dists, o.delta_, nt.registry));
            }
        }
    }

    void build_t41() {
        for (std::int32_t leaf : o.tree_.leaves()) {
            if (leaf == o.tree_.root) continue;
            const std::int8_t ls = o.tree_.nodes[leaf].side;
            const SeparatorCycle& lc = o.tree_.splits[o.tree_.nodes[leaf].parent].cycle;
            const PortalSequence& lseq = o.tree_.splits[o.tree_.nodes[leaf].parent].portals;
            for (std::int32_t anc = o.tree_.nodes[leaf].parent; anc > 0;
                 anc = o.tree_.nodes[anc].parent) {
                LeafAncestorTables lat;
                const PortalSequence& aseq =
                    o.tree_.splits[o.tree_.nodes[anc].parent].portals;
                bool separated = true;
                for (VertexId p : aseq.portals)
                    if (lc.vertex_side[p] == ls) separated = false;
                if (separated) {
                    RegionView rv = make_rout_view(o.g_, o.tree_, leaf, anc);
                    const std::int32_t kp = lseq.k();
                    std::vector<std::vector<double>> pd(kp);
                    bool reachable = true;
                    for (std::int32_t j = 0; j < kp && reachable; ++j) {
                        std::int32_t lp = rv.local(lseq.portals[j]);
                        if (lp < 0) {
                            reachable = false;
                            break;
                        }
                        pd[j] = rv.g.sssp_dist(lp);
                    }
                    std::vector<std::vector<std::int64_t>> target_decoded;
                    if (reachable) {
                        for (VertexId sa : aseq.portals) {
                            std::int32_t la = rv.local(sa);
                            if (la < 0) {
                                reachable = false;
                                break;
                            }
                            std::vector<double> dists(kp);
                            for (std::int32_t j = 0; j < kp; ++j) {
                                dists[j] = pd[j][la];
                                if (dists[j] == kInf) reachable = false;
                            }
                            if (!reachable) break;
                            Pattern pat = make_pattern(dists, o.delta_);
                            target_decoded.push_back(
                                decode_units(first_units_of(dists, o.delta_), pat));
                        }
                    }
                    if (reachable) {
                        lat.composed = true;
                        const PatternRegistry& lreg = o.node_tables_[leaf].registry;
                        for (std::int32_t pid = 0; pid < lreg.size(); ++pid) {
                            InducedPattern ip =
                                induce_pattern(target_decoded, lreg.pattern(pid));
                            lat.t41a_dist.push_back(ip.first_units);
                            lat.t41a_induced.push_back(lat.induced.register_pattern(ip.pattern));
                        }
                        const PatternRegistry& areg = o.node_tables_[anc].registry;
                        for (std::int32_t iid = 0; iid < lat.induced.size(); ++iid)
                            lat.t41b.push_back(areg.closest(lat.induced.pattern(iid).units));
                    }
                }
                o.t41_[{leaf, anc}] = std::move(lat);
            }
        }
    }

    void add_dplus(NodeTables& nt, const Encoding& e) {
        if (nt.t22.count(e)) return;
        auto id = static_cast<std::int32_t>(nt.dplus.size());
        nt.dplus.push_back(e);
        nt.t22.emplace(e, id);
    }

    void build_dplus() {
        const auto n = o.tree_.node_count();
        for (std::int32_t id = 1; id < n; ++id) {
            NodeTables& nt = o.node_tables_[id];
            for (const auto& kv : nt.t21) add_dplus(nt, kv.second);
            for (std::int32_t leaf : desc_leaves[id]) {
                if (leaf == id) continue;
                auto it = o.t41_.find({leaf, id});
                if (it == o.t41_.end() || !it->second.composed) continue;
                const LeafAncestorTables& lat = it->second;
                for (const auto& kv : o.node_tables_[leaf].t21) {
                    const Encoding& le = kv.second;
                    Encoding comp{le.first_units + lat.t41a_dist[le.pattern_id],
                                  lat.t41b[lat.t41a_induced[le.pattern_id]]};
                    add_dplus(nt, comp);
                }
            }
            std::vector<std::int64_t> fs;
            for (const Encoding& e : nt.dplus) fs.push_back(e.first_units);
            std::sort(fs.begin(), fs.end());
            fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
            nt.firsts = std::move(fs);
        }
    }

    void build_t3() {
        const auto n = o.tree_.node_count();
        o.t3_.assign(n, {});
        for (std::int32_t id = 0; id < n; ++id) {
            const Region& r = o.tree_.nodes[id];
            if (r.is_leaf()) continue;
            const NodeTables& n1 = o.node_tables_[r.child1];
            const NodeTables& n2 = o.node_tables_[r.child2];
            auto dec = [this](const NodeTables& nt) {
                std::vector<std::vector<std::int64_t>> out;
                out.reserve(nt.dplus.size());
                for (const Encoding& e : nt.dplus)
                    out.push_back(decode_units(e.first_units,
                                               nt.registry.pattern(e.pattern_id)));
                return out;
            };
            auto d1 = dec(n1), d2 = dec(n2);
            T3Table& t3 = o.t3_[id];
            for (std::size_t i = 0; i < d1.size(); ++i)
                for (std::size_t j = 0; j < d2.size(); ++j)
                    t3.entries[{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)}] =
                        encoding_distance_units(d1[i], d2[j]);
        }
    }

    // Leaf contracted filled graph: kept vertices are the leaf's marked set,
    // every hole portal, and interior path vertices; unmarked non-portal hole
    // boundary vertices contract to their nearest portal. Edges incident to a
    // portal class are raised to the exact global distance between their
    // representatives, so no table entry undershoots d_G.
    void build_leaf_exact(std::int32_t leaf) {
        const Region& r = o.tree_.nodes[leaf];
        RegionView region = masked_region_view(leaf);

        std::vector<std::vector<VertexId>> per_hole_portals;
        std::vector<std::uint8_t> is_portal(o.g_.n(), 0), on_boundary(o.g_.n(), 0);
        for (const Hole& h : r.holes) {
            per_hole_portals.push_back(hole_portals(o.g_, o.tree_, leaf, h, o.tau_));
            for (VertexId p : per_hole_portals.back()) is_portal[p] = 1;
            for (VertexId v : h.boundary) on_boundary[v] = 1;
        }
        std::vector<std::uint8_t> is_marked(o.g_.n(), 0);
        for (VertexId v : r.marked) is_marked[v] = 1;

        // Nearest-portal assignment by multi-source search in the region.
        std::vector<double> ndist(region.g.n(), kInf);
        std::vector<VertexId> nportal(region.g.n(), -1);
        {
            using Item = std::pair<std::pair<double, VertexId>, std::int32_t>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
            for (VertexId p = 0; p < o.g_.n(); ++p)
                if (is_portal[p] && region.local(p) >= 0) {
                    ndist[region.local(p)] = 0.0;
                    nportal[region.local(p)] = p;
                    pq.push({{0.0, p}, region.local(p)});
                }
            while (!pq.empty()) {
                auto [key, v] = pq.top();
                pq.pop();
                if (key.first != ndist[v] || key.second != nportal[v]) continue;
                for (const auto& a : region.g.adj[v]) {
                    double nd = key.first + a.w;
                    if (nd < ndist[a.to] ||
                        (nd == ndist[a.to] && key.second < nportal[a.to])) {
                        ndist[a.to] = nd;
                        nportal[a.to] = key.second;
                        pq.push({{nd, key.second}, a.to});
                    }
                }
            }
        }

        LeafExact le;
        le.vmap.assign(o.g_.n(), -1);
        std::vector<VertexId> rep(region.g.n(), -1);  // global representative
        for (std::int32_t lv = 0; lv < region.g.n(); ++lv) {
            auto gv = static_cast<VertexId>(region.g.label[lv]);
            bool contract = on_boundary[gv] && !is_marked[gv] && !is_portal[gv] &&
                            nportal[lv] >= 0;
            rep[lv] = contract ? nportal[lv] : gv;
        }
        auto local_of = [&](VertexId gv) {
            if (le.vmap[gv] < 0) le.vmap[gv] = le.rprime.add_vertex(gv);
            return le.vmap[gv];
        };
        // Quotient edges, parallel-minimum.
        std::map<std::pair<VertexId, VertexId>, double> qe;
        for (std::int32_t lv = 0; lv < region.g.n(); ++lv)
            for (const auto& a : region.g.adj[lv]) {
                if (a.to < lv) continue;
                VertexId x = rep[lv], y = rep[a.to];
                if (x == y) continue;
                auto key = std::minmax(x, y);
                auto it = qe.find({key.first, key.second});
                if (it == qe.end() || a.w < it->second) qe[{key.first, key.second}] = a.w;
            }
        // Raise portal-incident weights to exact global distances.
        std::map<VertexId, std::vector<double>> portal_dist;
        for (VertexId p = 0; p < o.g_.n(); ++p)
            if (is_portal[p]) portal_dist.emplace(p, o.g_.sssp(p).dist);
        for (auto& kv : qe) {
            VertexId x = kv.first.first, y = kv.first.second;
            if (is_portal[x]) kv.second = std::max(kv.second, portal_dist.at(x)[y]);
            if (is_portal[y]) kv.second = std::max(kv.second, portal_dist.at(y)[x]);
        }
        for (const auto& kv : qe)
            le.rprime.add_edge(local_of(kv.first.first), local_of(kv.first.second),
                               kv.second);
        // Fill each hole with the distance-preserving minor of its portals.
        for (std::size_t hi = 0; hi < r.holes.size(); ++hi) {
            const auto& portals = per_hole_portals[hi];
            if (portals.size() < 2) continue;
            std::vector<std::uint8_t> hv, he;
            hole_masks_of(r.holes[hi], hv, he);
            DistMinor mm = distance_preserving_minor(o.g_, portals, &hv, &he);
            std::vector<std::int32_t> map(mm.graph.n(), -1);
            for (std::int32_t v = 0; v < mm.graph.n(); ++v) {
                auto gid = static_cast<VertexId>(mm.graph.label[v]);
                map[v] = (gid >= 0 && is_portal[gid]) ? local_of(gid)
                                                      : le.rprime.add_vertex(-1);
            }
            std::vector<std::uint8_t> seen(mm.graph.edge_count, 0);
            for (std::int32_t v = 0; v < mm.graph.n(); ++v)
                for (const auto& a : mm.graph.adj[v]) {
                    if (seen[a.id]) continue;
                    seen[a.id] = 1;
                    le.rprime.add_edge(map[v], map[a.to], a.w);
                }
        }
        le.nv = le.rprime.n();
        le.apsp.assign(static_cast<std::size_t>(le.nv) * le.nv, kInf);
        for (std::int32_t v = 0; v < le.nv; ++v) {
            auto d = le.rprime.sssp_dist(v);
            for (std::int32_t w = 0; w < le.nv; ++w)
                le.apsp[static_cast<std::size_t>(v) * le.nv + w] = d[w];
        }
        o.leaf_exact_.emplace(leaf, std::move(le));
    }

    RegionView masked_region_view(std::int32_t node) const {
        const Region& r = o.tree_.nodes[node];
        RegionView rv;
        rv.local_of.assign(o.g_.n(), -1);
        for (VertexId v = 0; v < o.g_.n(); ++v)
            if (r.verts[v]) rv.local_of[v] = rv.g.add_vertex(v);
        for (EdgeId e = 0; e < o.g_.m(); ++e) {
            if (!r.edges[e]) continue;
            const Edge& ed = o.g_.edge(e);
            rv.g.add_edge(rv.local_of[ed.u], rv.local_of[ed.v], ed.w);
        }
        return rv;
    }

    void hole_masks_of(const Hole& h, std::vector<std::uint8_t>& vmask,
                       std::vector<std::uint8_t>& emask) const {
        vmask.assign(o.g_.n(), 0);
        emask.assign(o.g_.m(), 0);
        std::vector<std::uint8_t> hf(o.g_.f(), 0);
        for (FaceId f : h.faces) hf[f] = 1;
        for (EdgeId e = 0; e < o.g_.m(); ++e)
            if (hf[o.g_.face_left_of(e)] || hf[o.g_.face_right_of(e)]) {
                emask[e] = 1;
                vmask[o.g_.edge(e).u] = 1;
                vmask[o.g_.edge(e).v] = 1;
            }
    }

    void build_slack_and_bound() {
        const auto n = o.tree_.node_count();
        o.slack_.assign(n, 0.0);
        double bmax = 0.0;
        for (std::int32_t id = 0; id < n; ++id) {
            const Region& r = o.tree_.nodes[id];
            if (r.is_leaf()) {
                double leaf_term = (id == o.tree_.root && r.holes.empty())
                                       ? 2.0 * cfg.eps * o.dhat_
                                       : 12.0 * cfg.eps * o.dhat_;
                auto it = o.sub_.find(id);
                if (it != o.sub_.end()) leaf_term += it->second->bound();
                bmax = std::max(bmax, leaf_term);
            } else {
                double k = o.tree_.splits[id].portals.k();
                o.slack_[id] = (4.0 * k * k - 2.0 * k) * o.delta_ + 2.0 * o.tau_;
                bmax = std::max(bmax, 2.0 * o.slack_[id]);
            }
        }
        if (cfg.filling == FillMode::DensePortal) bmax += cfg.eps * o.dhat_;
        o.bound_ = bmax;
    }
};

AdditiveOracle AdditiveOracle::build(const PlaneGraph& input, const AdditiveConfig& cfg) {
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ValidationError("eps must be in (0,1)");
    if (cfg.levels < 1) throw ValidationError("levels must be >= 1");
    AdditiveOracle o;
    o.cfg_ = cfg;

    VertexId root = first_queryable(input);
    auto sp0 = input.sssp(root);
    double ecc = 0.0;
    for (VertexId v = 0; v < input.n(); ++v)
        if (input.queryable(v)) {
            if (sp0.dist[v] == kInf) throw ValidationError("queryable vertices disconnected");
            ecc = std::max(ecc, sp0.dist[v]);
        }
    o.dhat_ = 2.0 * ecc;
    if (o.dhat_ <= 0.0) {
        o.degenerate_ = true;
        o.g_ = input;
        const auto n = input.n();
        o.degenerate_apsp_.assign(static_cast<std::size_t>(n) * n, 0.0);
        for (VertexId v = 0; v < n; ++v) {
            auto d = input.sssp(v).dist;
            for (VertexId w = 0; w < n; ++w)
                o.degenerate_apsp_[static_cast<std::size_t>(v) * n + w] = d[w];
        }
        o.bound_ = 0.0;
        return o;
    }
    o.tau_ = cfg.eps * o.dhat_;
    o.delta_ = o.dhat_ * pow2_floor(cfg.eps * cfg.eps * cfg.eps);

    o.g_ = input.subdivided(o.tau_, o.dhat_).triangulated();
    SsspResult tree = o.g_.sssp(root);

    DecompositionParams dp;
    dp.eps = cfg.eps;
    dp.lambda = cfg.lambda_override > 0
                    ? cfg.lambda_override
                    : default_lambda(o.g_.queryable_count(), cfg.eps, cfg.c);
    dp.filling = cfg.filling;
    dp.dhat = o.dhat_;
    dp.tau = o.tau_;
    const double depth_cap =
        2.0 * std::ceil(std::log2(std::max(2, o.g_.n()))) + 8.0;
    dp.dense_spacing = cfg.eps * o.dhat_ / (2.0 * depth_cap);
    o.tree_ = build_decomposition(o.g_, tree, dp);

    AdditiveBuilder b(o, cfg);
    b.collect_desc_leaves();
    b.build_node_tables();
    b.build_t41();
    b.build_dplus();
    b.build_t3();
    for (std::int32_t leaf : o.tree_.leaves()) b.build_leaf_exact(leaf);
    if (cfg.levels > 1) o.build_hierarchy_levels();
    b.build_slack_and_bound();
    return o;
}

const LeafExact* AdditiveOracle::leaf_exact(std::int32_t node) const {
    auto it = leaf_exact_.find(node);
    return it == leaf_exact_.end() ? nullptr : &it->second;
}

const AdditiveOracle* AdditiveOracle::sub_oracle(std::int32_t leaf) const {
    auto it = sub_.find(leaf);
    return it == sub_.end() ? nullptr : it->second.get();
}

bool AdditiveOracle::queryable(VertexId v) const {
    return v >= 0 && v < g_.n() && g_.queryable(v);
}

std::int32_t AdditiveOracle::query_encoding_id(VertexId u, std::int32_t ancestor_child) const {
    if (!queryable(u)) throw ValidationError("vertex not queryable");
    std::int32_t leaf = tree_.leaf_of[u];
    if (leaf < 0 || !tree_.is_ancestor(ancestor_child, leaf) || ancestor_child == tree_.root)
        throw ValidationError("node is not on the vertex's leaf-to-root path");
    const NodeTables& at = node_tables_[ancestor_child];
    if (leaf != ancestor_child) {
        auto it = t41_.find({leaf, ancestor_child});
        if (it != t41_.end() && it->second.composed) {
            const LeafAncestorTables& lat = it->second;
            const Encoding& le = node_tables_[leaf].t21.at(u);
            Encoding comp{le.first_units + lat.t41a_dist[le.pattern_id],
                          lat.t41b[lat.t41a_induced[le.pattern_id]]};
            std::int32_t id = at.encoding_id(comp);
            if (id >= 0) return id;
            throw AuditError("composite encoding missing from D+");
        }
    }
    std::int32_t id = at.encoding_id(at.t21.at(u));
    if (id < 0) throw AuditError("stored encoding missing from D+");
    return id;
}

double AdditiveOracle::query(VertexId u, VertexId v) const {
    if (!queryable(u) || !queryable(v)) throw ValidationError("vertex not queryable");
    if (degenerate_) return degenerate_apsp_[static_cast<std::size_t>(u) * g_.n() + v];
    std::int32_t lu = tree_.leaf_of[u], lv = tree_.leaf_of[v];
    if (lu < 0 || lv < 0) throw ValidationError("vertex not marked in any leaf");
    if (lu == lv) {
        auto sit = sub_.find(lu);
        if (sit != sub_.end()) {
            const auto& vm = sub_vmap_.at(lu);
            return sit->second->query(vm[u], vm[v]) + 2.0 * cfg_.eps * dhat_;
        }
        const LeafExact& le = leaf_exact_.at(lu);
        return le.dist(le.vmap[u], le.vmap[v]) + 2.0 * cfg_.eps * dhat_;
    }
    std::int32_t a = tree_.lca(lu, lv);
    std::int32_t c1 = tree_.nodes[a].child1, c2 = tree_.nodes[a].child2;
    std::int32_t cu = tree_.is_ancestor(c1, lu) ? c1 : c2;
    std::int32_t cv = (cu == c1) ? c2 : c1;
    std::int32_t idu = query_encoding_id(u, cu);
    std::int32_t idv = query_encoding_id(v, cv);
    auto key = (cu == c1) ? std::pair{idu, idv} : std::pair{idv, idu};
    auto it = t3_[a].entries.find(key);
    if (it == t3_[a].entries.end()) throw AuditError("missing T3 entry");
    return static_cast<double>(it->second) * delta_ + slack_[a];
}

SpaceReport AdditiveOracle::space_report() const {
    SpaceReport s;
    for (const NodeTables& nt : node_tables_) {
        s.t21 += 3 * static_cast<std::int64_t>(nt.t21.size());
        s.t22 += 3 * static_cast<std::int64_t>(nt.dplus.size());
        s.patterns += static_cast<std::int64_t>(nt.registry.size()) *
                      (nt.registry.size() ? nt.registry.pattern(0).units.size() : 0);
        s.t22 += static_cast<std::int64_t>(nt.firsts.size());
    }
    for (const T3Table& t : t3_) s.t3 += 3 * static_cast<std::int64_t>(t.entries.size());
    for (const auto& kv : t41_) {
        const LeafAncestorTables& lat = kv.second;
        s.t41a += 3 * static_cast<std::int64_t>(lat.t41a_dist.size());
        s.t41b += 2 * static_cast<std::int64_t>(lat.t41b.size());
        s.patterns += static_cast<std::int64_t>(lat.induced.size()) *
                      (lat.induced.size() ? lat.induced.pattern(0).units.size() : 0);
    }
    for (const auto& kv : leaf_exact_) {
        s.leaf_tables += static_cast<std::int64_t>(kv.second.nv) * kv.second.nv;
        s.leaf_tables += 2 * kv.second.nv;
    }
    for (const SplitData& sp : tree_.splits)
        s.portals += 2 * static_cast<std::int64_t>(sp.portals.portals.size());
    s.tree += 8 * static_cast<std::int64_t>(tree_.nodes.size());
    s.tree += static_cast<std::int64_t>(tree_.leaf_of.size());
    for (const auto& kv : sub_) {
        SpaceReport ss = kv.second->space_report();
        s.t21 += ss.t21;
        s.t22 += ss.t22;
        s.t3 += ss.t3;
        s.t41a += ss.t41a;
        s.t41b += ss.t41b;
        s.leaf_tables += ss.leaf_tables;
        s.portals += ss.portals;
        s.tree += ss.tree;
        s.patterns += ss.patterns;
    }
    return s;
}

// ── Hierarchy levels ─────────────────────────────────────────────────

namespace {

// An embedded minor edge: a dissolved chain of global edges. end_a / end_b
// are the chain's first global edges seen from each endpoint; they anchor the
// chain's slot in the endpoint's rotation.
struct ChainEdge {
    VertexId a, b;
    double w;
    EdgeId end_a, end_b;
    std::int32_t hole;
    bool alive = true;
};

}  // namespace

bool AdditiveOracle::embedded_rprime(std::int32_t leaf, PlaneGraph& out,
                                     std::vector<std::int32_t>& vmap) const {
    const Region& r = tree_.nodes[leaf];
    std::vector<std::uint8_t> is_marked(g_.n(), 0);
    for (VertexId v : r.marked) is_marked[v] = 1;

    // Per-hole chain soups from unions of canonical shortest paths between
    // the hole's portals, dissolved at non-terminal degree-2 vertices.
    std::vector<ChainEdge> chains;
    for (std::size_t hi = 0; hi < r.holes.size(); ++hi) {
        const Hole& h = r.holes[hi];
        auto portals = hole_portals(g_, tree_, leaf, h, tau_);
        if (portals.size() < 2) continue;
        std::vector<std::uint8_t> hv(g_.n(), 0), he(g_.m(), 0);
        {
            std::vector<std::uint8_t> hf(g_.f(), 0);
            for (FaceId f : h.faces) hf[f] = 1;
            for (EdgeId e = 0; e < g_.m(); ++e)
                if (hf[g_.face_left_of(e)] || hf[g_.face_right_of(e)]) {
                    he[e] = 1;
                    hv[g_.edge(e).u] = 1;
                    hv[g_.edge(e).v] = 1;
                }
        }
        std::vector<std::uint8_t> used(g_.m(), 0);
        std::vector<SsspResult> sps;
        sps.reserve(portals.size());
        for (VertexId p : portals) sps.push_back(g_.sssp(p, &hv, &he));
        for (std::size_t i = 0; i < portals.size(); ++i)
            for (std::size_t j = i + 1; j < portals.size(); ++j) {
                VertexId v = portals[j];
                if (sps[i].dist[v] == kInf) return false;
                while (v != portals[i]) {
                    used[sps[i].parent_edge[v]] = 1;
                    v = sps[i].parent[v];
                }
            }
        std::vector<std::uint8_t> is_term(g_.n(), 0);
        for (VertexId p : portals) is_term[p] = 1;
        std::vector<ChainEdge> soup;
        std::map<VertexId, std::vector<std::int32_t>> inc;
        for (EdgeId e = 0; e < g_.m(); ++e) {
            if (!used[e]) continue;
            auto ci = static_cast<std::int32_t>(soup.size());
            soup.push_back({g_.edge(e).u, g_.edge(e).v, g_.edge(e).w, e, e,
                            static_cast<std::int32_t>(hi), true});
            inc[g_.edge(e).u].push_back(ci);
            inc[g_.edge(e).v].push_back(ci);
        }
        auto live_at = [&](VertexId v) {
            std::vector<std::int32_t> out_live;
            for (std::int32_t ci : inc[v])
                if (soup[ci].alive) out_live.push_back(ci);
            return out_live;
        };
        std::queue<VertexId> q;
        for (const auto& kv : inc)
            if (!is_term[kv.first]) q.push(kv.first);
        while (!q.empty()) {
            VertexId v = q.front();
            q.pop();
            if (is_term[v]) continue;
            auto live = live_at(v);
            if (live.size() == 1) {
                soup[live[0]].alive = false;
                VertexId o2 = soup[live[0]].a == v ? soup[live[0]].b : soup[live[0]].a;
                if (!is_term[o2]) q.push(o2);
                continue;
            }
            if (live.size() != 2) continue;
            ChainEdge& c1 = soup[live[0]];
            ChainEdge& c2 = soup[live[1]];
            VertexId x = c1.a == v ? c1.b : c1.a;
            VertexId y = c2.a == v ? c2.b : c2.a;
            EdgeId ex = c1.a == v ? c1.end_b : c1.end_a;
            EdgeId ey = c2.a == v ? c2.end_b : c2.end_a;
            double w = c1.w + c2.w;
            c1.alive = c2.alive = false;
            if (x == y) {
                if (!is_term[x]) q.push(x);
                continue;
            }
            auto ci = static_cast<std::int32_t>(soup.size());
            soup.push_back({x, y, w, ex, ey, static_cast<std::int32_t>(hi), true});
            inc[x].push_back(ci);
            inc[y].push_back(ci);
            if (!is_term[x]) q.push(x);
            if (!is_term[y]) q.push(y);
        }
        for (const ChainEdge& c : soup)
            if (c.alive) chains.push_back(c);
    }

    // Hole face lookup for the conflicted-slot rule.
    std::vector<std::int32_t> hole_of_face(g_.f(), -1);
    for (std::size_t hi = 0; hi < r.holes.size(); ++hi)
        for (FaceId f : r.holes[hi].faces) hole_of_face[f] = static_cast<std::int32_t>(hi);

    // chain slot anchors: (vertex, global end edge) -> chain index
    std::map<std::pair<VertexId, EdgeId>, std::vector<std::int32_t>> anchor;
    for (std::size_t ci = 0; ci < chains.size(); ++ci) {
        anchor[{chains[ci].a, chains[ci].end_a}].push_back(static_cast<std::int32_t>(ci));
        anchor[{chains[ci].b, chains[ci].end_b}].push_back(static_cast<std::int32_t>(ci));
    }

    for (int flip = 0; flip < 2; ++flip) {
        PlaneGraph cand;
        std::vector<std::int32_t> lmap(g_.n(), -1);
        auto local = [&](VertexId gv) {
            if (lmap[gv] < 0)
                lmap[gv] = cand.add_vertex(is_marked[gv] && g_.queryable(gv));
            return lmap[gv];
        };
        // vertices in ascending global id for determinism
        for (VertexId v = 0; v < g_.n(); ++v) {
            bool present = r.verts[v];
            if (!present)
                for (const ChainEdge& c : chains)
                    if (c.a == v || c.b == v) present = true;
            if (present) local(v);
        }
        std::vector<EdgeId> emap(g_.m(), -1);
        for (EdgeId e = 0; e < g_.m(); ++e)
            if (r.edges[e])
                emap[e] = cand.add_edge(local(g_.edge(e).u), local(g_.edge(e).v),
                                        g_.edge(e).w, g_.edge(e).metric);
        std::vector<EdgeId> cmap(chains.size(), -1);
        for (std::size_t ci = 0; ci < chains.size(); ++ci)
            cmap[ci] = cand.add_edge(local(chains[ci].a), local(chains[ci].b),
                                     chains[ci].w, true);

        for (VertexId v = 0; v < g_.n(); ++v) {
            if (lmap[v] < 0) continue;
            std::vector<EdgeId> rot;
            for (EdgeId e : g_.rotation(v)) {
                std::vector<EdgeId> before, after;
                auto it = anchor.find({v, e});
                if (it != anchor.end()) {
                    for (std::int32_t ci : it->second) {
                        // dart with tail v along e: its face is the sector
                        // counter-clockwise after e.
                        std::int32_t d = 2 * e + (g_.edge(e).u == v ? 0 : 1);
                        bool ccw_side = hole_of_face[g_.face_of_dart(d)] == chains[ci].hole;
                        if (flip) ccw_side = !ccw_side;
                        (ccw_side ? after : before).push_back(cmap[ci]);
                    }
                }
                for (EdgeId b2 : before) rot.push_back(b2);
                if (emap[e] >= 0) rot.push_back(emap[e]);
                for (EdgeId a2 : after) rot.push_back(a2);
                if (emap[e] < 0 && it != anchor.end() && before.empty() && after.empty())
                    return false;  // anchored chain on an absent edge slot
            }
            cand.set_rotation(local(v), std::move(rot));
        }
        try {
            cand.finalize();
        } catch (const ValidationError&) {
            continue;
        }
        out = std::move(cand);
        vmap = std::move(lmap);
        return true;
    }
    return false;
}

void AdditiveOracle::build_hierarchy_levels() {
    for (std::int32_t leaf : tree_.leaves()) {
        std::int32_t mq = 0;
        for (VertexId v : tree_.nodes[leaf].marked)
            if (g_.queryable(v)) ++mq;
        if (mq < 2) continue;
        PlaneGraph sub_g;
        std::vector<std::int32_t> vmap;
        if (!embedded_rprime(leaf, sub_g, vmap)) continue;
        AdditiveConfig scfg = cfg_;
        scfg.levels = cfg_.levels - 1;
        scfg.lambda_override = -1;
        try {
            auto sub = std::make_unique<AdditiveOracle>(AdditiveOracle::build(sub_g, scfg));
            sub_vmap_[leaf] = std::move(vmap);
            sub_[leaf] = std::move(sub);
        } catch (const ValidationError&) {
            // leaf keeps its exact table
        }
    }
}

// ── Serialization ───────────────────────────────────────────────────

namespace {

void w_u64(std::ostream& o, std::uint64_t x) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    o.write(b, 8);
}
void w_i64(std::ostream& o, std::int64_t x) { w_u64(o, static_cast<std::uint64_t>(x)); }
void w_i32(std::ostream& o, std::int32_t x) { w_i64(o, x); }
void w_dbl(std::ostream& o, double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, 8);
    w_u64(o, b);
}
std::uint64_t r_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw ValidationError("truncated oracle blob");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}
std::int64_t r_i64(std::istream& in) { return static_cast<std::int64_t>(r_u64(in)); }
std::int32_t r_i32(std::istream& in) { return static_cast<std::int32_t>(r_i64(in)); }
double r_dbl(std::istream& in) {
    std::uint64_t b = r_u64(in);
    double x;
    std::memcpy(&x, &b, 8);
    return x;
}

void w_graph(std::ostream& o, const PlaneGraph& g) {
    w_i32(o, g.n());
    for (VertexId v = 0; v < g.n(); ++v) w_i32(o, g.queryable(v) ? 1 : 0);
    w_i32(o, g.m());
    for (EdgeId e = 0; e < g.m(); ++e) {
        w_i32(o, g.edge(e).u);
        w_i32(o, g.edge(e).v);
        w_dbl(o, g.edge(e).w);
        w_i32(o, g.edge(e).metric ? 1 : 0);
    }
    for (VertexId v = 0; v < g.n(); ++v) {
        w_i32(o, static_cast<std::int32_t>(g.rotation(v).size()));
        for (EdgeId e : g.rotation(v)) w_i32(o, e);
    }
}

PlaneGraph r_graph(std::istream& in) {
    PlaneGraph g;
    std::int32_t n = r_i32(in);
    std::vector<std::int32_t> qf(n);
    for (std::int32_t v = 0; v < n; ++v) qf[v] = r_i32(in);
    for (std::int32_t v = 0; v < n; ++v) g.add_vertex(qf[v] != 0);
    std::int32_t m = r_i32(in);
    for (std::int32_t e = 0; e < m; ++e) {
        std::int32_t u = r_i32(in), v = r_i32(in);
        double w = r_dbl(in);
        bool metric = r_i32(in) != 0;
        g.add_edge(u, v, w, metric);
    }
    for (std::int32_t v = 0; v < n; ++v) {
        std::int32_t deg = r_i32(in);
        std::vector<EdgeId> rot(deg);
        for (std::int32_t i = 0; i < deg; ++i) rot[i] = r_i32(in);
        g.set_rotation(v, std::move(rot));
    }
    g.finalize();
    return g;
}

void w_registry(std::ostream& o, const PatternRegistry& reg) {
    w_i32(o, reg.size());
    for (std::int32_t i = 0; i < reg.size(); ++i) {
        const auto& u = reg.pattern(i).units;
        w_i32(o, static_cast<std::int32_t>(u.size()));
        for (std::int32_t x : u) w_i32(o, x);
    }
}

PatternRegistry r_registry(std::istream& in) {
    PatternRegistry reg;
    std::int32_t count = r_i32(in);
    for (std::int32_t i = 0; i < count; ++i) {
        Pattern p;
        std::int32_t len = r_i32(in);
        p.units.resize(len);
        for (std::int32_t j = 0; j < len; ++j) p.units[j] = r_i32(in);
        reg.register_pattern(p);
    }
    return reg;
}

constexpr std::uint64_t kMagic = 0x5041444f30303031ULL;  // "PADO0001"

}  // namespace

void AdditiveOracle::serialize(std::ostream& out) const {
    w_u64(out, kMagic);
    w_dbl(out, cfg_.eps);
    w_i32(out, cfg_.c);
    w_i32(out, cfg_.levels);
    w_i32(out, cfg_.filling == FillMode::DensePortal ? 1 : 0);
    w_i32(out, cfg_.lambda_override);
    w_i32(out, degenerate_ ? 1 : 0);
    if (degenerate_) {
        w_graph(out, g_);
        w_i64(out, static_cast<std::int64_t>(degenerate_apsp_.size()));
        for (double d : degenerate_apsp_) w_dbl(out, d);
        w_dbl(out, bound_);
        return;
    }
    w_dbl(out, dhat_);
    w_dbl(out, delta_);
    w_dbl(out, tau_);
    w_dbl(out, bound_);
    w_graph(out, g_);
    // tree skeleton
    w_i32(out, tree_.node_count());
    for (const Region& r : tree_.nodes) {
        w_i32(out, r.parent);
        w_i32(out, r.child1);
        w_i32(out, r.child2);
        w_i32(out, r.side);
        w_i32(out, static_cast<std::int32_t>(r.marked.size()));
        for (VertexId v : r.marked) w_i32(out, v);
    }
    for (std::int32_t v = 0; v < g_.n(); ++v) w_i32(out, tree_.leaf_of[v]);
    for (const SplitData& sp : tree_.splits) {
        w_i32(out, sp.portals.k());
        for (VertexId p : sp.portals.portals) w_i32(out, p);
        w_dbl(out, sp.portals.tau);
        w_i32(out, sp.portals.jump_index);
        for (double gp : sp.portals.gaps) w_dbl(out, gp);
    }
    for (double s : slack_) w_dbl(out, s);
    // node tables
    for (const NodeTables& nt : node_tables_) {
        w_i32(out, static_cast<std::int32_t>(nt.t21.size()));
        for (const auto& kv : nt.t21) {
            w_i32(out, kv.first);
            w_i64(out, kv.second.first_units);
            w_i32(out, kv.second.pattern_id);
        }
        w_registry(out, nt.registry);
        w_i32(out, static_cast<std::int32_t>(nt.dplus.size()));
        for (const Encoding& e : nt.dplus) {
            w_i64(out, e.first_units);
            w_i32(out, e.pattern_id);
        }
        w_i32(out, static_cast<std::int32_t>(nt.firsts.size()));
        for (std::int64_t f : nt.firsts) w_i64(out, f);
    }
    for (const T3Table& t : t3_) {
        w_i64(out, static_cast<std::int64_t>(t.entries.size()));
        for (const auto& kv : t.entries) {
            w_i32(out, kv.first.first);
            w_i32(out, kv.first.second);
            w_i64(out, kv.second);
        }
    }
    w_i64(out, static_cast<std::int64_t>(t41_.size()));
    for (const auto& kv : t41_) {
        w_i32(out, kv.first.first);
        w_i32(out, kv.first.second);
        const LeafAncestorTables& lat = kv.second;
        w_i32(out, lat.composed ? 1 : 0);
        if (!lat.composed) continue;
        w_i32(out, static_cast<std::int32_t>(lat.t41a_dist.size()));
        for (std::size_t i = 0; i < lat.t41a_dist.size(); ++i) {
            w_i64(out, lat.t41a_dist[i]);
            w_i32(out, lat.t41a_induced[i]);
        }
        w_registry(out, lat.induced);
        w_i32(out, static_cast<std::int32_t>(lat.t41b.size()));
        for (std::int32_t x : lat.t41b) w_i32(out, x);
    }
    w_i64(out, static_cast<std::int64_t>(leaf_exact_.size()));
    for (const auto& kv : leaf_exact_) {
        w_i32(out, kv.first);
        const LeafExact& le = kv.second;
        w_i32(out, le.nv);
        for (std::int32_t v = 0; v < le.nv; ++v)
            w_i64(out, le.rprime.label[v]);
        for (double d : le.apsp) w_dbl(out, d);
    }
    w_i64(out, static_cast<std::int64_t>(sub_.size()));
    for (const auto& kv : sub_) {
        w_i32(out, kv.first);
        const auto& vm = sub_vmap_.at(kv.first);
        w_i64(out, static_cast<std::int64_t>(vm.size()));
        for (std::int32_t x : vm) w_i32(out, x);
        kv.second->serialize(out);
    }
}

AdditiveOracle AdditiveOracle::deserialize(std::istream& in) {
    if (r_u64(in) != kMagic) throw ValidationError("bad oracle blob magic");
    AdditiveOracle o;
    o.cfg_.eps = r_dbl(in);
    o.cfg_.c = r_i32(in);
    o.cfg_.levels = r_i32(in);
    o.cfg_.filling = r_i32(in) ? FillMode::DensePortal : FillMode::Exact;
    o.cfg_.lambda_override = r_i32(in);
    o.degenerate_ = r_i32(in) != 0;
    if (o.degenerate_) {
        o.g_ = r_graph(in);
        auto sz = static_cast<std::size_t>(r_i64(in));
        o.degenerate_apsp_.resize(sz);
        for (auto& d : o.degenerate_apsp_) d = r_dbl(in);
        o.bound_ = r_dbl(in);
        return o;
    }
    o.dhat_ = r_dbl(in);
    o.delta_ = r_dbl(in);
    o.tau_ = r_dbl(in);
    o.bound_ = r_dbl(in);
    o.g_ = r_graph(in);
    std::int32_t nodes = r_i32(in);
    o.tree_.nodes.resize(nodes);
    o.tree_.splits.resize(nodes);
    std::vector<std::int32_t> parent(nodes);
    for (std::int32_t i = 0; i < nodes; ++i) {
        Region& r = o.tree_.nodes[i];
        r.id = i;
        r.parent = r_i32(in);
        r.child1 = r_i32(in);
        r.child2 = r_i32(in);
        r.side = static_cast<std::int8_t>(r_i32(in));
        std::int32_t mk = r_i32(in);
        r.marked.resize(mk);
        for (std::int32_t j = 0; j < mk; ++j) r.marked[j] = r_i32(in);
        parent[i] = r.parent;
    }
    o.tree_.leaf_of.resize(o.g_.n());
    for (std::int32_t v = 0; v < o.g_.n(); ++v) o.tree_.leaf_of[v] = r_i32(in);
    for (std::int32_t i = 0; i < nodes; ++i) {
        PortalSequence& ps = o.tree_.splits[i].portals;
        std::int32_t k = r_i32(in);
        ps.portals.resize(k);
        for (std::int32_t j = 0; j < k; ++j) ps.portals[j] = r_i32(in);
        ps.tau = r_dbl(in);
        ps.jump_index = r_i32(in);
        ps.gaps.resize(k);
        for (std::int32_t j = 0; j < k; ++j) ps.gaps[j] = r_dbl(in);
        ps.cycle_ref = i;
    }
    o.slack_.resize(nodes);
    for (std::int32_t i = 0; i < nodes; ++i) o.slack_[i] = r_dbl(in);
    o.tree_.lca_index.build(parent, 0);
    o.tree_.depth.resize(nodes);
    for (std::int32_t i = 0; i < nodes; ++i) o.tree_.depth[i] = o.tree_.lca_index.depth(i);
    o.tree_.root = 0;
    o.node_tables_.resize(nodes);
    for (std::int32_t i = 0; i < nodes; ++i) {
        NodeTables& nt = o.node_tables_[i];
        std::int32_t t21n = r_i32(in);
        for (std::int32_t j = 0; j < t21n; ++j) {
            VertexId v = r_i32(in);
            Encoding e;
            e.first_units = r_i64(in);
            e.pattern_id = r_i32(in);
            nt.t21.emplace(v, e);
        }
        nt.registry = r_registry(in);
        std::int32_t dn = r_i32(in);
        for (std::int32_t j = 0; j < dn; ++j) {
            Encoding e;
            e.first_units = r_i64(in);
            e.pattern_id = r_i32(in);
            nt.dplus.push_back(e);
            nt.t22.emplace(e, j);
        }
        std::int32_t fn = r_i32(in);
        nt.firsts.resize(fn);
        for (std::int32_t j = 0; j < fn; ++j) nt.firsts[j] = r_i64(in);
    }
    o.t3_.resize(nodes);
    for (std::int32_t i = 0; i < nodes; ++i) {
        auto cnt = r_i64(in);
        for (std::int64_t j = 0; j < cnt; ++j) {
            std::int32_t a = r_i32(in), b2 = r_i32(in);
            o.t3_[i].entries[{a, b2}] = r_i64(in);
        }
    }
    auto t41n = r_i64(in);
    for (std::int64_t i = 0; i < t41n; ++i) {
        std::int32_t leaf = r_i32(in), anc = r_i32(in);
        LeafAncestorTables lat;
        lat.composed = r_i32(in) != 0;
        if (lat.composed) {
            std::int32_t an = r_i32(in);
            lat.t41a_dist.resize(an);
            lat.t41a_induced.resize(an);
            for (std::int32_t j = 0; j < an; ++j) {
                lat.t41a_dist[j] = r_i64(in);
                lat.t41a_induced[j] = r_i32(in);
            }
            lat.induced = r_registry(in);
            std::int32_t bn = r_i32(in);
            lat.t41b.resize(bn);
            for (std::int32_t j = 0; j < bn; ++j) lat.t41b[j] = r_i32(in);
        }
        o.t41_.emplace(std::make_pair(leaf, anc), std::move(lat));
    }
    auto len = r_i64(in);
    for (std::int64_t i = 0; i < len; ++i) {
        std::int32_t node = r_i32(in);
        LeafExact le;
        le.nv = r_i32(in);
        le.vmap.assign(o.g_.n(), -1);
        for (std::int32_t v = 0; v < le.nv; ++v) {
            std::int64_t lab = r_i64(in);
            le.rprime.add_vertex(lab);
            if (lab >= 0) le.vmap[lab] = v;
        }
        le.apsp.resize(static_cast<std::size_t>(le.nv) * le.nv);
        for (auto& d : le.apsp) d = r_dbl(in);
        o.leaf_exact_.emplace(node, std::move(le));
    }
    auto subn = r_i64(in);
    for (std::int64_t i = 0; i < subn; ++i) {
        std::int32_t leaf = r_i32(in);
        auto vn = r_i64(in);
        std::vector<std::int32_t> vm(vn);
        for (auto& x : vm) x = r_i32(in);
        o.sub_vmap_[leaf] = std::move(vm);
        o.sub_[leaf] = std::make_unique<AdditiveOracle>(deserialize(in));
    }
    return o;
}

// ── Pattern audits ───────────────────────────────────────────────────

void AdditiveOracle::audit_patterns(std::ostream* csv) const {
    if (degenerate_) return;
    if (tree_.nodes[0].verts.empty())
        throw ValidationError("pattern audit requires a freshly built oracle");
    if (csv) *csv << "region,k,g_cap,registry,cap,dplus,firsts,max_first\n";
    const std::int64_t g_formula =
        static_cast<std::int64_t>(std::ceil((tau_ + tau_) / delta_));
    const std::int64_t first_cap =
        static_cast<std::int64_t>(std::ceil(2.0 * dhat_ / delta_));

    for (std::int32_t id = 1; id < tree_.node_count(); ++id) {
        const Region& r = tree_.nodes[id];
        const PortalSequence& seq = tree_.splits[r.parent].portals;
        const NodeTables& nt = node_tables_[id];
        const std::int32_t k = seq.k();

        std::int64_t cap = PatternRegistry::cap(k, g_formula);
        if (nt.registry.size() > cap)
            throw AuditError("registry cap exceeded at region " + std::to_string(id));
        // Per-coordinate unit caps: formula cap except across an
        // unsubdivided closing edge.
        for (std::int32_t pid = 0; pid < nt.registry.size(); ++pid) {
            const auto& units = nt.registry.pattern(pid).units;
            for (std::size_t i = 0; i < units.size(); ++i) {
                std::int64_t gi =
                    static_cast<std::int64_t>(std::ceil(seq.gaps[i] / delta_)) + 1;
                if (std::llabs(units[i]) > gi)
                    throw AuditError("pattern unit exceeds arc cap at region " +
                                     std::to_string(id));
            }
        }
        std::int64_t max_first = 0;
        for (const auto& kv : nt.t21) {
            max_first = std::max(max_first, kv.second.first_units);
            if (kv.second.first_units < 0 || kv.second.first_units > first_cap + 1)
                throw AuditError("first coordinate out of range at region " +
                                 std::to_string(id));
        }
        // Decode band: recompute portal distances in the filled region.
        RegionView rv = make_plus_view(g_, tree_, id);
        std::vector<std::vector<double>> pd(k);
        for (std::int32_t i = 0; i < k; ++i)
            pd[i] = rv.g.sssp_dist(rv.local(seq.portals[i]));
        for (const auto& kv : nt.t21) {
            auto dec = decode_units(kv.second.first_units,
                                    nt.registry.pattern(kv.second.pattern_id));
            std::int32_t lu = rv.local(kv.first);
            for (std::int32_t i = 0; i < k; ++i) {
                double dt = static_cast<double>(dec[i]) * delta_;
                double d = pd[i][lu];
                double guard = kFloatGuard * std::max(1.0, std::abs(d) + std::abs(dt));
                if (dt < d - guard || dt > d + (i + 1) * delta_ + guard)
                    throw AuditError("decode band violated at region " +
                                     std::to_string(id));
            }
        }
        if (csv)
            *csv << id << "," << k << "," << g_formula << "," << nt.registry.size() << ","
                 << cap << "," << nt.dplus.size() << "," << nt.firsts.size() << ","
                 << max_first << "\n";
    }
    // Composition bound per composed leaf/ancestor pair: induced pattern of
    // u's leaf pattern within k units (of delta) of u's stored pattern at the
    // ancestor, where k is the ancestor sequence length.
    for (const auto& kv : t41_) {
        if (!kv.second.composed) continue;
        std::int32_t leaf = kv.first.first, anc = kv.first.second;
        const std::int32_t ka = tree_.splits[tree_.nodes[anc].parent].portals.k();
        const NodeTables& lt = node_tables_[leaf];
        const NodeTables& at = node_tables_[anc];
        for (const auto& uv : lt.t21) {
            const Pattern& induced =
                kv.second.induced.pattern(kv.second.t41a_induced[uv.second.pattern_id]);
            const Pattern& truth =
                at.registry.pattern(at.t21.at(uv.first).pattern_id);
            for (std::size_t i = 0; i < induced.units.size(); ++i)
                if (std::llabs(static_cast<std::int64_t>(induced.units[i]) -
                               truth.units[i]) > ka)
                    throw AuditError("composition bound violated: leaf " +
                                     std::to_string(leaf) + " ancestor " +
                                     std::to_string(anc));
        }
    }
    // T3 recomputation.
    for (std::int32_t id = 0; id < tree_.node_count(); ++id) {
        const Region& r = tree_.nodes[id];
        if (r.is_leaf()) continue;
        const NodeTables& n1 = node_tables_[r.child1];
        const NodeTables& n2 = node_tables_[r.child2];
        for (const auto& kv : t3_[id].entries) {
            auto d1 = decode_units(n1.dplus[kv.first.first].first_units,
                                   n1.registry.pattern(n1.dplus[kv.first.first].pattern_id));
            auto d2 = decode_units(n2.dplus[kv.first.second].first_units,
                                   n2.registry.pattern(n2.dplus[kv.first.second].pattern_id));
            if (encoding_distance_units(d1, d2) != kv.second)
                throw AuditError("T3 entry does not recompute");
        }
    }
}

}  // namespace pado
