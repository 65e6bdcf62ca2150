#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

#include "novbar/errors.hpp"

namespace novbar {

// All exact scalar data in this library is built on GMP rationals.
using rational = mpq_class;
using bigint = mpz_class;

inline rational make_rational(long num, long den = 1) {
    if (den == 0) throw domain_error("rational with zero denominator");
    rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "num", "num/den" or a decimal like "-3.25" into an exact rational.
rational parse_rational(const std::string& text);

// Canonical "num/den" (plain "num" when den == 1).
std::string rational_to_string(const rational& q);

// Largest integer n with n <= q.
bigint rational_floor(const rational& q);

rational rational_gcd(const rational& a, const rational& b);

// A rational extended by -inf and +inf.  Used for valuations (+inf at the
// zero scalar), filtration levels (-inf at the zero vector) and bar lengths.
class ext_rational {
  public:
    ext_rational() : kind_(kind::finite), value_(0) {}
    ext_rational(rational v) : kind_(kind::finite), value_(std::move(v)) {}
    ext_rational(long v) : kind_(kind::finite), value_(v) {}

    static ext_rational neg_infinity() { return ext_rational(kind::neg_inf); }
    static ext_rational infinity() { return ext_rational(kind::pos_inf); }

    bool is_finite() const { return kind_ == kind::finite; }
    bool is_infinite() const { return kind_ != kind::finite; }
    bool is_pos_infinity() const { return kind_ == kind::pos_inf; }
    bool is_neg_infinity() const { return kind_ == kind::neg_inf; }

    // Finite value; throws on +-inf.
    const rational& finite() const {
        if (!is_finite()) throw domain_error("ext_rational: infinite value has no finite part");
        return value_;
    }

    friend bool operator==(const ext_rational& a, const ext_rational& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != kind::finite || a.value_ == b.value_;
    }
    friend bool operator<(const ext_rational& a, const ext_rational& b) {
        if (a.kind_ == b.kind_) return a.kind_ == kind::finite && a.value_ < b.value_;
        return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
    }
    friend bool operator!=(const ext_rational& a, const ext_rational& b) { return !(a == b); }
    friend bool operator>(const ext_rational& a, const ext_rational& b) { return b < a; }
    friend bool operator<=(const ext_rational& a, const ext_rational& b) { return !(b < a); }
    friend bool operator>=(const ext_rational& a, const ext_rational& b) { return !(a < b); }

    // Shift by a finite amount; infinities absorb.
    friend ext_rational operator+(const ext_rational& a, const rational& s) {
        return a.is_finite() ? ext_rational(a.value_ + s) : a;
    }
    friend ext_rational operator-(const ext_rational& a, const rational& s) {
        return a.is_finite() ? ext_rational(a.value_ - s) : a;
    }

    std::string str() const;

  private:
    enum class kind : int { neg_inf = -1, finite = 0, pos_inf = 1 };
    explicit ext_rational(kind k) : kind_(k), value_(0) {}

    kind kind_;
    rational value_;
};

} // namespace novbar
