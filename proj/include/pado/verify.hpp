#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pado/generators.hpp"
#include "pado/plane_graph.hpp"

namespace pado {

/// Independent ground truth. Matrix mode stores all-pairs distances (meant
/// for n <= 2000); SSSP mode runs Dijkstra per source and caches the result.
/// Both modes agree exactly; queries are read-only apart from the cache.
class ExactOracle {
  public:
    explicit ExactOracle(const PlaneGraph& g, bool matrix = false);

    double distance(VertexId u, VertexId v) const;
    bool matrix_mode() const { return matrix_; }

  private:
    const PlaneGraph& g_;
    bool matrix_;
    std::vector<std::vector<double>> rows_;          // matrix mode
    mutable std::map<VertexId, SsspResult> cache_;   // sssp mode
};

double exact_distance(const PlaneGraph& g, VertexId u, VertexId v);

struct AuditRow {
    std::int64_t pair;
    VertexId u, v;
    double d;
    double answer;
    double err;
    double bound;
    bool pass;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    double max_err = 0.0;
    double mean_err = 0.0;
    std::int64_t violations = 0;

    bool ok() const { return violations == 0; }
    void write_csv(std::ostream& out) const;
    /// err counts per bucket [i*bound/10, (i+1)*bound/10).
    void write_histogram_csv(std::ostream& out, std::int32_t buckets = 10) const;
};

// Relative float guard for band checks: the statements are exact over the
// reals; this only absorbs accumulation noise, far below any slack tested.
constexpr double kFloatGuard = 1e-9;

inline bool leq_guarded(double a, double b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return a <= b + kFloatGuard * scale;
}

/// Audits answer(u,v) in [d, d+bound] (additive) or [d, (1+eps)d]
/// (multiplicative, bound = eps) over the sampled pairs.
AuditReport audit_stretch(const std::function<double(VertexId, VertexId)>& oracle,
                          const PlaneGraph& g, const std::vector<QueryPair>& pairs,
                          double bound, bool multiplicative);

}  // namespace pado
