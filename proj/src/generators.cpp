#include "pado/generators.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pado {

Family family_from_string(const std::string& s) {
    if (s == "grid") return Family::Grid;
    if (s == "delaunay_like") return Family::DelaunayLike;
    if (s == "path") return Family::Path;
    if (s == "cycle") return Family::Cycle;
    throw ValidationError("unknown family: " + s);
}

WeightLaw weight_law_from_string(const std::string& s) {
    if (s == "unit") return WeightLaw::Unit;
    if (s == "uniform") return WeightLaw::Uniform;
    if (s == "expint") return WeightLaw::ExpInt;
    throw ValidationError("unknown weight law: " + s);
}

namespace {

double draw_weight(const GenSpec& spec, Rng& rng) {
    switch (spec.law) {
        case WeightLaw::Unit:
            return 1.0;
        case WeightLaw::Uniform:
            return rng.uniform(spec.lo, spec.hi);
        case WeightLaw::ExpInt:
            // 2^k with k uniform in [lo, hi]; integer weights spread over scales.
            return std::ldexp(1.0, static_cast<int>(spec.lo + rng.below(
                                       static_cast<std::uint64_t>(spec.hi - spec.lo + 1))));
    }
    return 1.0;
}

PlaneGraph gen_grid(const GenSpec& spec) {
    const std::int32_t R = spec.rows, C = spec.cols;
    if (R < 1 || C < 1 || (R == 1 && C == 1)) throw ValidationError("grid too small");
    Rng rng(spec.seed);
    PlaneGraph g;
    for (std::int32_t i = 0; i < R * C; ++i) g.add_vertex();
    auto id = [C](std::int32_t r, std::int32_t c) { return r * C + c; };
    // Horizontal edges first (row-major), then vertical (row-major).
    std::map<std::pair<std::int32_t, std::int32_t>, EdgeId> eid;
    for (std::int32_t r = 0; r < R; ++r)
        for (std::int32_t c = 0; c + 1 < C; ++c)
            eid[{id(r, c), id(r, c + 1)}] = g.add_edge(id(r, c), id(r, c + 1),
                                                       draw_weight(spec, rng));
    for (std::int32_t r = 0; r + 1 < R; ++r)
        for (std::int32_t c = 0; c < C; ++c)
            eid[{id(r, c), id(r + 1, c)}] = g.add_edge(id(r, c), id(r + 1, c),
                                                       draw_weight(spec, rng));
    auto find = [&](std::int32_t a, std::int32_t b) {
        auto it = eid.find({std::min(a, b), std::max(a, b)});
        return it == eid.end() ? -1 : it->second;
    };
    // Rotation in (N, E, S, W) order at every vertex.
    for (std::int32_t r = 0; r < R; ++r) {
        for (std::int32_t c = 0; c < C; ++c) {
            std::vector<EdgeId> rot;
            if (r > 0) rot.push_back(find(id(r, c), id(r - 1, c)));
            if (c + 1 < C) rot.push_back(find(id(r, c), id(r, c + 1)));
            if (r + 1 < R) rot.push_back(find(id(r, c), id(r + 1, c)));
            if (c > 0) rot.push_back(find(id(r, c), id(r, c - 1)));
            g.set_rotation(id(r, c), std::move(rot));
        }
    }
    g.finalize();
    return g;
}

PlaneGraph gen_path_or_cycle(const GenSpec& spec, bool cycle) {
    const std::int32_t N = spec.count;
    if (N < 2 || (cycle && N < 3)) throw ValidationError("instance too small");
    Rng rng(spec.seed);
    PlaneGraph g;
    for (std::int32_t i = 0; i < N; ++i) g.add_vertex();
    for (std::int32_t i = 0; i + 1 < N; ++i) g.add_edge(i, i + 1, draw_weight(spec, rng));
    if (cycle) g.add_edge(N - 1, 0, draw_weight(spec, rng));
    for (std::int32_t i = 0; i < N; ++i) {
        std::vector<EdgeId> rot;
        if (i > 0) rot.push_back(i - 1);
        if (i + 1 < N) rot.push_back(i);
        if (cycle) {
            if (i == 0) rot.push_back(N - 1);
            if (i == N - 1) rot.push_back(N - 1);
        }
        g.set_rotation(i, std::move(rot));
    }
    g.finalize();
    return g;
}

// Incremental combinatorial triangulation: repeatedly split a pseudo-random
// face by a new vertex, then apply pseudo-random edge flips. No geometry, so
// output is platform-identical.
PlaneGraph gen_delaunay_like(const GenSpec& spec) {
    const std::int32_t N = spec.count;
    if (N < 3) throw ValidationError("delaunay_like needs >= 3 vertices");
    Rng rng(spec.seed);

    struct Tri {
        VertexId a, b, c;
    };
    // Maintain the triangulation combinatorially as oriented triangles plus a
    // vertex->neighbors order rebuilt at the end via a face-based embedding.
    std::vector<Tri> tris{{0, 1, 2}, {0, 2, 1}};  // two sides of the starting triangle
    std::map<std::pair<VertexId, VertexId>, std::pair<std::int32_t, std::int32_t>> side;
    auto set_side = [&](VertexId x, VertexId y, std::int32_t t, std::int32_t corner) {
        side[{x, y}] = {t, corner};
    };
    // side[(x,y)] = (triangle containing directed edge x->y, corner index of x)
    set_side(0, 1, 0, 0);
    set_side(1, 2, 0, 1);
    set_side(2, 0, 0, 2);
    set_side(0, 2, 1, 0);
    set_side(2, 1, 1, 1);
    set_side(1, 0, 1, 2);

    auto corner = [&](const Tri& t, std::int32_t i) -> VertexId {
        return i == 0 ? t.a : (i == 1 ? t.b : t.c);
    };

    std::int32_t next_vertex = 3;
    while (next_vertex < N) {
        // Insert vertex into a pseudo-random triangle. Never pick triangle 1
        // initially designated as the outer side until enough faces exist, to
        // keep min degree 3.
        std::int32_t t = static_cast<std::int32_t>(rng.below(tris.size()));
        Tri old = tris[t];
        VertexId p = next_vertex++;
        std::int32_t t1 = t;
        std::int32_t t2 = static_cast<std::int32_t>(tris.size());
        std::int32_t t3 = t2 + 1;
        tris[t1] = {old.a, old.b, p};
        tris.push_back({old.b, old.c, p});
        tris.push_back({old.c, old.a, p});
        set_side(old.a, old.b, t1, 0);
        set_side(old.b, p, t1, 1);
        set_side(p, old.a, t1, 2);
        set_side(old.b, old.c, t2, 0);
        set_side(old.c, p, t2, 1);
        set_side(p, old.b, t2, 2);
        set_side(old.c, old.a, t3, 0);
        set_side(old.a, p, t3, 1);
        set_side(p, old.c, t3, 2);
    }
    // Random flips for variety: flip the diagonal of the quad formed by two
    // adjacent triangles when the result stays a simple triangulation.
    std::int64_t flips = 3LL * N;
    for (std::int64_t it = 0; it < flips; ++it) {
        std::int32_t t = static_cast<std::int32_t>(rng.below(tris.size()));
        std::int32_t ci = static_cast<std::int32_t>(rng.below(3));
        Tri tt = tris[t];
        VertexId x = corner(tt, ci), y = corner(tt, (ci + 1) % 3), z = corner(tt, (ci + 2) % 3);
        auto itR = side.find({y, x});
        if (itR == side.end()) continue;
        auto [t2, c2] = itR->second;
        Tri uu = tris[t2];
        VertexId w = corner(uu, (c2 + 2) % 3);
        if (w == z) continue;
        if (side.count({z, w}) || side.count({w, z})) continue;  // already adjacent
        // Flip (x,y) -> (z,w):  xyz / yxw  becomes  xwz / wyz
        tris[t] = {x, w, z};
        tris[t2] = {w, y, z};
        side.erase({x, y});
        side.erase({y, x});
        set_side(x, w, t, 0);
        set_side(w, z, t, 1);
        set_side(z, x, t, 2);
        set_side(w, y, t2, 0);
        set_side(y, z, t2, 1);
        set_side(z, w, t2, 2);
    }

    // Build the embedding: at every vertex, order neighbors by walking around
    // the vertex through adjacent triangles.
    PlaneGraph g;
    for (std::int32_t i = 0; i < N; ++i) g.add_vertex();
    std::map<std::pair<VertexId, VertexId>, EdgeId> eid;
    for (const Tri& t : tris) {
        VertexId vs[3] = {t.a, t.b, t.c};
        for (int i = 0; i < 3; ++i) {
            VertexId x = vs[i], y = vs[(i + 1) % 3];
            if (x < y && !eid.count({x, y})) eid[{x, y}] = -1;
        }
    }
    Rng wrng(spec.seed ^ 0x5eedf00dULL);
    for (auto& kv : eid) kv.second = g.add_edge(kv.first.first, kv.first.second,
                                                draw_weight(spec, wrng));
    auto edge_of = [&](VertexId x, VertexId y) {
        return eid.at({std::min(x, y), std::max(x, y)});
    };
    for (VertexId v = 0; v < N; ++v) {
        // Find one directed edge v->w, then walk: next neighbor after w is the
        // third corner of the triangle on side (v,w).
        VertexId start = -1;
        for (const auto& kv : side) {
            if (kv.first.first == v) {
                start = kv.first.second;
                break;
            }
        }
        if (start < 0) throw ValidationError("isolated vertex in triangulation");
        std::vector<EdgeId> rot;
        VertexId w = start;
        do {
            rot.push_back(edge_of(v, w));
            auto [t, c] = side.at({v, w});
            w = corner(tris[t], (c + 2) % 3);  // third corner of triangle (v,w,·)
        } while (w != start);
        g.set_rotation(v, std::move(rot));
    }
    g.finalize();
    return g;
}

}  // namespace

PlaneGraph generate(const GenSpec& spec) {
    switch (spec.family) {
        case Family::Grid:
            return gen_grid(spec);
        case Family::DelaunayLike:
            return gen_delaunay_like(spec);
        case Family::Path:
            return gen_path_or_cycle(spec, false);
        case Family::Cycle:
            return gen_path_or_cycle(spec, true);
    }
    throw ValidationError("unknown family");
}

std::vector<QueryPair> sample_pairs(const PlaneGraph& g, std::int32_t count,
                                    std::uint64_t seed, PairLaw law) {
    if (count < 1) throw ValidationError("pair count must be >= 1");
    std::vector<VertexId> q;
    for (VertexId v = 0; v < g.n(); ++v)
        if (g.queryable(v)) q.push_back(v);
    if (q.size() < 2) throw ValidationError("not enough queryable vertices");
    Rng rng(seed);
    std::vector<QueryPair> out;
    if (law == PairLaw::Uniform) {
        while (static_cast<std::int32_t>(out.size()) < count) {
            VertexId u = q[rng.below(q.size())];
            VertexId v = q[rng.below(q.size())];
            if (u != v) out.push_back({u, v});
        }
        return out;
    }
    // Per-scale: bucket candidates by floor(log2 d), then round-robin so every
    // occupied scale contributes. One SSSP per sampled source, many targets.
    std::map<std::int32_t, std::vector<QueryPair>> buckets;
    std::size_t total = 0;
    const std::int32_t sources = std::max<std::int32_t>(8, count / 16);
    for (std::int32_t s = 0; s < sources && total < static_cast<std::size_t>(4 * count);
         ++s) {
        VertexId u = q[rng.below(q.size())];
        SsspResult sp = g.sssp(u);
        for (std::int32_t t = 0; t < 64 && total < static_cast<std::size_t>(4 * count);
             ++t) {
            VertexId v = q[rng.below(q.size())];
            double d = sp.dist[v];
            if (u == v || d == kInf || d <= 0) continue;
            auto b = static_cast<std::int32_t>(std::floor(std::log2(d)));
            buckets[b].push_back({u, v});
            ++total;
        }
    }
    while (static_cast<std::int32_t>(out.size()) < count) {
        bool any = false;
        for (auto& kv : buckets) {
            if (kv.second.empty()) continue;
            out.push_back(kv.second.back());
            kv.second.pop_back();
            any = true;
            if (static_cast<std::int32_t>(out.size()) >= count) break;
        }
        if (!any) break;
    }
    // Top up uniformly if the buckets ran dry.
    while (static_cast<std::int32_t>(out.size()) < count) {
        VertexId u = q[rng.below(q.size())];
        VertexId v = q[rng.below(q.size())];
        if (u != v) out.push_back({u, v});
    }
    return out;
}

void write_pairs(const std::vector<QueryPair>& pairs, std::ostream& out) {
    for (const auto& p : pairs) out << "q " << p.u << " " << p.v << "\n";
}

std::vector<QueryPair> read_pairs(std::istream& in) {
    std::vector<QueryPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok != "q") throw ValidationError("malformed pairs line");
        std::int64_t u, v;
        if (!(ls >> u >> v)) throw ValidationError("malformed pairs line");
        pairs.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
    return pairs;
}

}  // namespace pado
