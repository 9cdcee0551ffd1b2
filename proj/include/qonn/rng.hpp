#ifndef QONN_RNG_HPP
#define QONN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace qonn {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard and the derived doubles below avoid the implementation-defined
// std distributions, so identical seeds give identical streams everywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<uint64_t>(hi - lo + 1));
    }

    // Standard normal via Box-Muller (cached spare kept for determinism).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

    // Derive an independent stream (restart seeds, worker seeds).
    uint64_t derive(uint64_t salt) {
        uint64_t x = base_ ^ (salt * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    static Rng derived(uint64_t seed, uint64_t salt) {
        Rng r(seed);
        return Rng(r.derive(salt));
    }

  private:
    std::mt19937_64 eng_;
    uint64_t base_ = eng_();
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qonn

#endif
