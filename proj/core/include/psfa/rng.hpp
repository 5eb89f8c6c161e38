#ifndef PSFA_RNG_HPP
#define PSFA_RNG_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace psfa {

// xoshiro256++ seeded through splitmix64, with Box-Muller (trigonometric form,
// pair cached) as the normal transform. The integer stream is bit-identical
// everywhere; normal draws additionally depend on the platform's log/cos/sin.
// Identical seeds give identical draw sequences, which is what makes random
// restarts and synthetic data reproducible.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double normal();  // standard normal
    double normal(double mean, double sd);

    std::uint64_t seed() const { return seed_; }
    // Count of raw 64-bit words consumed so far.
    std::uint64_t position() const { return position_; }

private:
    std::array<std::uint64_t, 4> state_;
    std::uint64_t seed_ = 0;
    std::uint64_t position_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// n independent N(mean, sd^2) draws. sd == 0 yields a constant sequence.
// Throws InvalidParameter for sd < 0.
std::vector<double> draw_normal(SeededRng& rng, double mean, double sd, std::size_t n);

}  // namespace psfa

#endif
