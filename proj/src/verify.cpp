#include "pado/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

namespace pado {

ExactOracle::ExactOracle(const PlaneGraph& g, bool matrix) : g_(g), matrix_(matrix) {
    if (matrix_) {
        rows_.resize(g.n());
        int threads = std::min<int>(env_thread_cap(), std::max(1, g.n() / 64));
        if (threads <= 1) {
            for (VertexId v = 0; v < g.n(); ++v) rows_[v] = g.sssp(v).dist;
        } else {
            std::vector<std::thread> pool;
            std::atomic<VertexId> next{0};
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&] {
                    for (VertexId v = next++; v < g_.n(); v = next++)
                        rows_[v] = g_.sssp(v).dist;
                });
            for (auto& th : pool) th.join();
        }
    }
}

double ExactOracle::distance(VertexId u, VertexId v) const {
    if (u < 0 || v < 0 || u >= g_.n() || v >= g_.n())
        throw ValidationError("vertex out of range");
    if (u == v) return 0.0;
    if (matrix_) return rows_[u][v];
    auto it = cache_.find(u);
    if (it == cache_.end()) it = cache_.emplace(u, g_.sssp(u)).first;
    return it->second.dist[v];
}

double exact_distance(const PlaneGraph& g, VertexId u, VertexId v) {
    if (u == v) return 0.0;
    return g.distance(u, v);
}

void AuditReport::write_csv(std::ostream& out) const {
    out << "pair,u,v,d,answer,err,bound,pass\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.pair << "," << r.u << "," << r.v << "," << r.d << "," << r.answer << ","
            << r.err << "," << r.bound << "," << (r.pass ? 1 : 0) << "\n";
}

void AuditReport::write_histogram_csv(std::ostream& out, std::int32_t buckets) const {
    double bound = rows.empty() ? 1.0 : rows.front().bound;
    if (bound <= 0) bound = 1.0;
    std::vector<std::int64_t> counts(buckets + 1, 0);
    for (const auto& r : rows) {
        auto b = static_cast<std::int32_t>(std::floor(r.err / bound * buckets));
        b = std::clamp(b, 0, buckets);
        ++counts[b];
    }
    out << "bucket_lo,bucket_hi,count\n";
    out.precision(17);
    for (std::int32_t b = 0; b <= buckets; ++b)
        out << (bound * b / buckets) << ","
            << (b == buckets ? kInf : bound * (b + 1) / buckets) << "," << counts[b] << "\n";
}

AuditReport audit_stretch(const std::function<double(VertexId, VertexId)>& oracle,
                          const PlaneGraph& g, const std::vector<QueryPair>& pairs,
                          double bound, bool multiplicative) {
    AuditReport rep;
    rep.rows.resize(pairs.size());
    ExactOracle exact(g, /*matrix=*/g.n() <= 512);

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        double d = exact.distance(p.u, p.v);
        double a = oracle(p.u, p.v);
        double err = multiplicative ? (d > 0 ? a / d - 1.0 : 0.0) : a - d;
        double hi = multiplicative ? (1.0 + bound) * d : d + bound;
        bool pass = leq_guarded(d, a) && leq_guarded(a, hi);
        rep.rows[i] = {static_cast<std::int64_t>(i), p.u, p.v, d, a, err, bound, pass};
    }
    double sum = 0.0;
    for (const auto& r : rep.rows) {
        rep.max_err = std::max(rep.max_err, r.err);
        sum += r.err;
        if (!r.pass) ++rep.violations;
    }
    rep.mean_err = rep.rows.empty() ? 0.0 : sum / static_cast<double>(rep.rows.size());
    return rep;
}

}  // namespace pado
