#ifndef ISPSO_CORE_HPP
#define ISPSO_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ispso {

/// Thrown for all domain and input errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary feature-selection vector, one bit per feature.
class FeatureMask {
public:
    FeatureMask() = default;
    explicit FeatureMask(std::size_t n) : bits_(n, 0) {}

    static FeatureMask all_set(std::size_t n) {
        FeatureMask m(n);
        std::fill(m.bits_.begin(), m.bits_.end(), std::uint8_t{1});
        return m;
    }

    static FeatureMask from_indices(std::size_t n, std::span<const std::size_t> idx) {
        FeatureMask m(n);
        for (std::size_t i : idx) {
            if (i >= n) throw Error("feature index " + std::to_string(i) + " out of range");
            m.bits_[i] = 1;
        }
        return m;
    }

    std::size_t size() const { return bits_.size(); }
    bool test(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v = true) { bits_[i] = v ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }
    bool any() const { return count() > 0; }

    /// Indices of set bits, ascending.
    std::vector<std::size_t> selected() const {
        std::vector<std::size_t> out;
        out.reserve(bits_.size());
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(i);
        return out;
    }

    std::size_t hamming_distance(const FeatureMask& other) const {
        if (other.size() != size()) throw Error("mask length mismatch");
        std::size_t d = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) d += bits_[i] != other.bits_[i];
        return d;
    }

    std::string to_string() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) s[i] = '1';
        return s;
    }

    bool operator==(const FeatureMask&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Seeded random source. All stochastic draws in a run come from one Rng so
/// the documented draw order (particle-major, dimension-minor) makes runs
/// exactly reproducible. The unit draw uses the raw 64-bit output directly
/// instead of std::uniform_real_distribution, whose mapping is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::size_t next_index(std::size_t n) {
        if (n == 0) throw Error("next_index: empty range");
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace ispso

#endif
