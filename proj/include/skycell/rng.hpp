#pragma once

// Deterministic random streams. Every random quantity in a run is a pure
// function of (seed, labels): named child streams are derived by hashing, and
// one-shot keyed draws exist for quantities that must not depend on call
// order (shadowing fields, daily traffic jitter). std::mt19937_64 is fully
// specified by the standard; the double/int conversions are implemented here
// because the standard distributions are not bit-portable.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>

namespace skycell {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// FNV-1a, used to turn stream names into label words.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) {
    return splitmix64(seed ^ splitmix64(label));
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::string_view label) {
    return mix_seed(seed, fnv1a(label));
}

// 53-bit mantissa draw in [0, 1).
constexpr double u64_to_unit_double(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return u64_to_unit_double(next_u64()); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t uniform_u64(std::uint64_t n) {
        if (n == 0) throw std::domain_error("uniform_u64: n must be positive");
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_u64(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Standard normal via Box-Muller (no state carried between calls).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Child stream derived from this stream's seed (not its state), so the
    // result is independent of how much the parent has been consumed.
    Rng stream(std::string_view label) const { return Rng(mix_seed(seed_, label)); }
    Rng stream(std::string_view label, std::uint64_t index) const {
        return Rng(mix_seed(mix_seed(seed_, label), index));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Order-independent one-shot draws keyed by a chain of labels.
constexpr std::uint64_t key_chain(std::uint64_t k) { return k; }
template <typename... Rest>
constexpr std::uint64_t key_chain(std::uint64_t k, std::uint64_t next, Rest... rest) {
    return key_chain(mix_seed(k, next), rest...);
}

template <typename... Keys>
double keyed_uniform(std::uint64_t seed, Keys... keys) {
    return u64_to_unit_double(splitmix64(key_chain(seed, static_cast<std::uint64_t>(keys)...)));
}

template <typename... Keys>
double keyed_gaussian(std::uint64_t seed, Keys... keys) {
    const std::uint64_t k = key_chain(seed, static_cast<std::uint64_t>(keys)...);
    double u1 = u64_to_unit_double(splitmix64(k));
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // draw of exactly 0 would break the log
    const double u2 = u64_to_unit_double(splitmix64(k + 0x9e3779b97f4a7c15ull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace skycell
