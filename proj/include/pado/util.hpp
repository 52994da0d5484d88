#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pado {

// Thrown on malformed inputs (bad files, broken rotations, invalid ids).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a built structure fails one of its checked properties.
struct AuditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SplitMix64. Used for every seeded choice so outputs are identical across
// platforms and standard library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // uniform double in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  private:
    std::uint64_t state_;
};

inline int env_thread_cap() {
    if (const char* s = std::getenv("PADO_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 1;
}

}  // namespace pado
