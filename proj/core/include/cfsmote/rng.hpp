#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string_view>

namespace cfsmote::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream id for a (master seed, tag, counter) cell. Deriving the
// seed for one cell never consumes state from another, so cells can run in
// any order or in parallel and still reproduce.
inline std::uint64_t derive(std::uint64_t master, std::string_view tag, std::uint64_t counter = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag bytes
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t state = master ^ h;
    splitmix64(state);
    state ^= counter * 0x2545f4914f6cdd1dULL;
    return splitmix64(state);
}

// mt19937_64 with fully specified draw-to-value mappings. The standard leaves
// distribution algorithms implementation-defined; mapping the raw 64-bit
// output ourselves keeps a fixed seed byte-reproducible across toolchains.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1), 53-bit resolution
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // uniform on {0, ..., n-1}, unbiased via rejection
    std::size_t index(std::size_t n) {
        if (n == 0) throw std::logic_error("rng::Stream::index: n must be positive");
        const std::uint64_t bound = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return static_cast<std::size_t>(draw % bound);
    }

    // standard normal via Box-Muller, spare cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = unit();
        } while (u1 <= 0.0);
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cfsmote::rng
