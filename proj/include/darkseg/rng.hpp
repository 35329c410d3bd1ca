#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace darkseg {

/// Deterministic PRNG used for every stochastic step in the toolkit.
///
/// The generator is xoshiro256++ (Blackman & Vigna), state-expanded from the
/// user seed with splitmix64. It is fixed by contract, not an implementation
/// detail: identical seeds must reproduce identical artifacts across runs,
/// platforms and standard libraries, which rules out std::mt19937 +
/// std::*_distribution (their output is implementation-defined).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint32_t below(std::uint32_t n);

    /// Standard normal deviate via the Irwin-Hall sum of 12 uniforms minus 6.
    /// Chosen over Box-Muller because it needs no libm calls, so results are
    /// bit-identical wherever IEEE-754 doubles are (tail truncates at +/-6
    /// sigma, irrelevant at the noise levels used here).
    double gaussian();

  private:
    std::array<std::uint64_t, 4> state_;
};

/// splitmix64 step; also used to derive independent substreams.
std::uint64_t splitmix64(std::uint64_t & state);

/// Derives a substream seed from a base seed and a stream tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a hash, used to give string ids (image ids) stable substreams.
std::uint64_t fnv1a(std::string_view text);

} // namespace darkseg
