#ifndef DISENT_RNG_HPP
#define DISENT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace disent {

namespace detail {

// SplitMix64 finalizer. Full 64-bit avalanche, bijective.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

// Counter-based deterministic generator with labeled substreams.
//
// A stream is (key, counter); draw i of a stream is mix64(key + i*golden),
// so the sequence depends only on the key and the number of draws so far.
// Substream derivation reads the key, never the counter: deriving the same
// label twice, at any point in the parent's life, yields the same child
// stream. That is what makes grid cells order-independent.
class RngState {
public:
    RngState() = default;

    static RngState seeded(std::uint64_t seed) {
        RngState r;
        r.key_ = detail::mix64(seed + detail::kGolden);
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::kGolden);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n = 0 is a caller bug; returns 0.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // One standard normal draw (Marsaglia polar, spare discarded so the
    // draw count stays a pure function of the stream position).
    double next_normal() {
        for (;;) {
            const double u = 2.0 * next_uniform() - 1.0;
            const double v = 2.0 * next_uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    // Fills out with i.i.d. N(0,1); uses both halves of each polar pair.
    void normal_fill(std::span<double> out) {
        std::size_t i = 0;
        while (i + 2 <= out.size()) {
            for (;;) {
                const double u = 2.0 * next_uniform() - 1.0;
                const double v = 2.0 * next_uniform() - 1.0;
                const double s = u * u + v * v;
                if (s > 0.0 && s < 1.0) {
                    const double f = std::sqrt(-2.0 * std::log(s) / s);
                    out[i] = u * f;
                    out[i + 1] = v * f;
                    break;
                }
            }
            i += 2;
        }
        if (i < out.size()) out[i] = next_normal();
    }

    std::vector<double> normal_vector(std::size_t n) {
        std::vector<double> out(n);
        normal_fill(out);
        return out;
    }

    // Independent child stream for `label`. Pure: does not advance this
    // stream and ignores how far it has been consumed.
    RngState substream(std::string_view label) const {
        RngState child;
        std::uint64_t h = detail::fnv1a64(label);
        child.key_ = detail::mix64(key_ ^ (h + detail::kGolden + (key_ << 6) + (key_ >> 2)));
        child.counter_ = 0;
        return child;
    }

    // Fisher-Yates."perm" must already hold the values to permute.
    template <typename T>
    void shuffle(std::vector<T>& perm) {
        for (std::size_t i = perm.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(perm[i - 1], perm[j]);
        }
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace disent

#endif
