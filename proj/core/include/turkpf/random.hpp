#pragma once

#include <cstdint>
#include <random>

namespace turkpf {

// Deterministic random stream used everywhere randomness is consumed.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// C++ standard, and all variate transforms are implemented here rather
// than delegated to std::*_distribution (which is free to differ across
// standard libraries). Two streams built from the same seed therefore
// produce identical draw sequences on any conforming platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    // Number of raw 64-bit words consumed so far.
    std::uint64_t position() const { return position_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform on (0, 1); rejects exact zeros.
    double uniform_pos();
    // Standard normal via the Marsaglia polar method (spare value discarded).
    double normal();
    // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 uses the
    // boost Gamma(shape + 1) * U^(1/shape).
    double gamma(double shape);
    // Beta(a, b) as Ga/(Ga + Gb) from two gamma draws.
    double beta(double a, double b);

    // Child stream seeded from one draw of this stream, bit-mixed so the
    // two sequences do not overlap in practice.
    RandomStream fork();

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

} // namespace turkpf
