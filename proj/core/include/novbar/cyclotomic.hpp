#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "novbar/rational.hpp"

namespace novbar {

// Element of Q(xi_p), the p-th cyclotomic field, stored canonically as
//   c[0] + c[1] xi + ... + c[p-2] xi^{p-2}
// reduced modulo 1 + xi + ... + xi^{p-1} = 0.  Two elements are equal iff
// their coordinate vectors agree.  For p = 2 this degenerates to Q with
// xi_2 = -1.
class cyclotomic {
  public:
    explicit cyclotomic(unsigned prime);
    cyclotomic(unsigned prime, std::vector<rational> coords);

    static cyclotomic from_rational(unsigned prime, const rational& value);
    static cyclotomic from_long(unsigned prime, long value) {
        return from_rational(prime, rational(value));
    }
    // xi_p^power, reduced.
    static cyclotomic zeta(unsigned prime, long power = 1);

    unsigned prime() const { return prime_; }
    const std::vector<rational>& coords() const { return coords_; }
    bool is_zero() const;
    bool is_rational() const;
    // The coordinate of xi^0; only the whole value if is_rational().
    const rational& rational_part() const { return coords_[0]; }

    cyclotomic operator-() const;
    cyclotomic& operator+=(const cyclotomic& rhs);
    cyclotomic& operator-=(const cyclotomic& rhs);
    cyclotomic& operator*=(const cyclotomic& rhs);

    friend cyclotomic operator+(cyclotomic a, const cyclotomic& b) { return a += b; }
    friend cyclotomic operator-(cyclotomic a, const cyclotomic& b) { return a -= b; }
    friend cyclotomic operator*(cyclotomic a, const cyclotomic& b) { return a *= b; }
    friend bool operator==(const cyclotomic& a, const cyclotomic& b) {
        return a.prime_ == b.prime_ && a.coords_ == b.coords_;
    }
    friend bool operator!=(const cyclotomic& a, const cyclotomic& b) { return !(a == b); }

    // Multiplicative inverse via extended Euclid in Q[x] modulo the
    // cyclotomic polynomial; throws domain_error on zero.
    cyclotomic inverse() const;

    cyclotomic& operator*=(const rational& s);
    friend cyclotomic operator*(cyclotomic a, const rational& s) { return a *= s; }
    friend cyclotomic operator*(const rational& s, cyclotomic a) { return a *= s; }

    std::string str() const;

  private:
    void check_same_field(const cyclotomic& rhs) const;

    unsigned prime_;
    std::vector<rational> coords_; // size prime_ - 1
};

} // namespace novbar
