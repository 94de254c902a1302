#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/special_functions/erf.hpp>

namespace atmq {

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Identifies a reproducible random stream. Identical (seed, stream) pairs
/// always produce identical sequences.
struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Independent child stream, e.g. one per sweep point or per channel.
    [[nodiscard]] constexpr RandomSource substream(std::uint64_t index) const noexcept {
        return {seed, detail::mix64(stream * detail::kGolden + index + 1)};
    }

    friend constexpr bool operator==(const RandomSource&, const RandomSource&) = default;
};

/// Counter-based generator: the i-th output is a pure function of
/// (seed, stream, i), so any stream can be replayed or split without
/// shared state.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(RandomSource source) noexcept
        : key_(detail::mix64(source.seed ^ detail::mix64(source.stream + detail::kGolden))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        return detail::mix64(key_ + (++counter_) * detail::kGolden);
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by inversion.
    double normal() {
        return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * uniform());
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use the
    /// u^(1/shape) boost.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double boost_factor = std::pow(uniform(), 1.0 / shape);
            return gamma(shape + 1.0) * boost_factor;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x = 0.0;
            double v = 0.0;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace atmq
