#ifndef FAQRANK_UTIL_HPP
#define FAQRANK_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faqrank {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic 64-bit generator (splitmix64). All randomized pieces of the
/// pipeline draw from this so that replays are exact regardless of the
/// standard library in use; std::uniform_* distributions are not portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t threshold = -n % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    bool coin(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::uint64_t state_;
};

// ---- UTF-8 helpers -------------------------------------------------------
// The corpora are German; tokens carry umlauts and the occasional typo-mangled
// multibyte sequence. All per-character work (stemming, edit distance, delete
// variants) happens on code points, never on raw bytes. Invalid bytes decode
// to U+FFFD so malformed input degrades instead of corrupting offsets.

std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(const std::u32string& cps);

// ---- file helpers --------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

/// Write-then-rename so a crashed run never leaves a half-written artifact.
void atomic_write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace faqrank

#endif
