#pragma once

#include <cstdint>
#include <random>

#include "novbar/rational.hpp"

namespace novbar {

// Deterministic seeded generator.  All randomized paths in the library draw
// through this wrapper, never from ambient randomness, so identical seeds
// reproduce identical artifacts byte for byte.
class rng {
  public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound); bound > 0.  Modulo bias is irrelevant for the
    // small bounds used here and keeps draws platform-stable.
    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    long range(long lo, long hi) { // inclusive
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    // Uniform rational in [-bound, bound] on a grid of 2*steps+1 points.
    rational symmetric(const rational& bound, long steps = 1000) {
        return bound * make_rational(range(-steps, steps), steps);
    }

    // Uniform rational in (0, 1) on a fine grid.
    rational unit_interval(long steps = 10000) {
        return make_rational(range(1, steps - 1), steps);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace novbar
