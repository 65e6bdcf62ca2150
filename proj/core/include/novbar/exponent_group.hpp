#pragma once

#include <string>
#include <vector>

#include "novbar/rational.hpp"

namespace novbar {

// Finitely generated subgroup of (Q, +), presented by positive rational
// generators.  Any such subgroup is cyclic, so membership reduces to an
// exact divisibility test against the gcd of the generators.  The empty
// presentation is the trivial group {0}.
class exponent_group {
  public:
    exponent_group() = default;
    explicit exponent_group(std::vector<rational> generators);

    bool trivial() const { return step_ == 0; }
    const std::vector<rational>& generators() const { return generators_; }
    // The single positive generator of the group (0 when trivial).
    const rational& step() const { return step_; }

    bool contains(const rational& x) const;
    // Canonical representative of x mod the group: x itself when trivial,
    // otherwise the value in [0, step).
    rational reduce_mod(const rational& x) const;

    friend bool operator==(const exponent_group& a, const exponent_group& b) {
        return a.step_ == b.step_;
    }
    friend bool operator!=(const exponent_group& a, const exponent_group& b) { return !(a == b); }

    std::string str() const;

  private:
    std::vector<rational> generators_;
    rational step_ = 0;
};

} // namespace novbar
