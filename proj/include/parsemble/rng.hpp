// Deterministic random numbers. One seeded generator per run; child streams
// for replicates/iterations are derived by hashing (seed, tag, index) so they
// are independent of draw order and identical across platforms.

#ifndef PARSEMBLE_RNG_HPP
#define PARSEMBLE_RNG_HPP

#include <cstdint>
#include <string_view>

namespace parsemble {

class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed), state_(mix(seed)) {}

    std::uint64_t next_u64() {
        // splitmix64: tiny, fast, well distributed, and trivially portable.
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi] inclusive.
    int next_int(int lo, int hi) {
        auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % range);
    }

    bool next_bool(double p_true) { return next_double() < p_true; }

    // Child stream keyed by (original seed, tag, index); unaffected by how
    // many values were drawn from this generator.
    SplitRng split(std::string_view tag, std::uint64_t index = 0) const {
        std::uint64_t h = seed_;
        for (char c : tag) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        return SplitRng(mix(h ^ mix(index)));
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace parsemble

#endif  // PARSEMBLE_RNG_HPP
