#include "novbar/cyclotomic.hpp"

#include <algorithm>
#include <sstream>

namespace novbar {

namespace {

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Dense polynomials over Q, used only for the inverse computation.
using poly = std::vector<rational>;

std::size_t degree(const poly& f) {
    std::size_t d = f.size();
    while (d > 0 && f[d - 1] == 0) --d;
    return d; // number of meaningful coefficients; zero poly -> 0
}

poly poly_scale(const poly& f, const rational& s) {
    poly g(f);
    for (auto& c : g) c *= s;
    return g;
}

poly poly_sub(const poly& a, const poly& b) {
    poly r(std::max(a.size(), b.size()), rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return r;
}

poly poly_shift_mul(const poly& f, std::size_t k, const rational& s) {
    poly g(f.size() + k, rational(0));
    for (std::size_t i = 0; i < f.size(); ++i) g[i + k] = f[i] * s;
    return g;
}

// Remainder and quotient action for a / b with b != 0.
void poly_divmod(poly a, const poly& b, poly& quot) {
    std::size_t db = degree(b);
    quot.assign(a.size(), rational(0));
    while (degree(a) >= db && degree(a) > 0) {
        std::size_t da = degree(a);
        if (da < db) break;
        rational c = a[da - 1] / b[db - 1];
        std::size_t k = da - db;
        quot[k] += c;
        a = poly_sub(a, poly_shift_mul(b, k, c));
        a.resize(da - 1);
    }
}

} // namespace

cyclotomic::cyclotomic(unsigned prime) : prime_(prime), coords_(prime - 1, rational(0)) {
    if (!is_prime(prime)) throw config_error("cyclotomic: p must be prime, got " + std::to_string(prime));
}

cyclotomic::cyclotomic(unsigned prime, std::vector<rational> coords) : cyclotomic(prime) {
    if (coords.size() != static_cast<std::size_t>(prime - 1))
        throw config_error("cyclotomic: expected p-1 coordinates");
    coords_ = std::move(coords);
    for (auto& c : coords_) c.canonicalize();
}

cyclotomic cyclotomic::from_rational(unsigned prime, const rational& value) {
    cyclotomic z(prime);
    z.coords_[0] = value;
    return z;
}

cyclotomic cyclotomic::zeta(unsigned prime, long power) {
    cyclotomic z(prime);
    long k = power % static_cast<long>(prime);
    if (k < 0) k += prime;
    if (static_cast<unsigned>(k) == prime - 1) {
        // xi^{p-1} = -(1 + xi + ... + xi^{p-2})
        for (auto& c : z.coords_) c = -1;
    } else {
        z.coords_[static_cast<std::size_t>(k)] = 1;
    }
    return z;
}

bool cyclotomic::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const rational& c) { return c == 0; });
}

bool cyclotomic::is_rational() const {
    for (std::size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

void cyclotomic::check_same_field(const cyclotomic& rhs) const {
    if (prime_ != rhs.prime_) throw config_error("cyclotomic: mixed primes");
}

cyclotomic cyclotomic::operator-() const {
    cyclotomic r(*this);
    for (auto& c : r.coords_) c = -c;
    return r;
}

cyclotomic& cyclotomic::operator+=(const cyclotomic& rhs) {
    check_same_field(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
}

cyclotomic& cyclotomic::operator-=(const cyclotomic& rhs) {
    check_same_field(rhs);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
}

cyclotomic& cyclotomic::operator*=(const cyclotomic& rhs) {
    check_same_field(rhs);
    const std::size_t n = coords_.size(); // p - 1
    // Convolve into exponents 0 .. 2p-4, fold xi^p = 1, then eliminate
    // xi^{p-1} with the minimal polynomial.
    std::vector<rational> folded(prime_, rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (coords_[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (rhs.coords_[j] == 0) continue;
            folded[(i + j) % prime_] += coords_[i] * rhs.coords_[j];
        }
    }
    const rational& top = folded[prime_ - 1];
    for (std::size_t i = 0; i < n; ++i) coords_[i] = folded[i] - top;
    return *this;
}

cyclotomic& cyclotomic::operator*=(const rational& s) {
    for (auto& c : coords_) c *= s;
    return *this;
}

cyclotomic cyclotomic::inverse() const {
    if (is_zero()) throw domain_error("cyclotomic: inverse of zero");
    if (is_rational()) {
        cyclotomic r(prime_);
        r.coords_[0] = 1 / coords_[0];
        return r;
    }
    // Extended Euclid for gcd(a, Phi_p) = 1 in Q[x]: track u with
    // u*a = r (mod Phi_p); when r becomes a nonzero constant, u/r is a^{-1}.
    poly phi(prime_, rational(1)); // 1 + x + ... + x^{p-1}
    poly r0 = phi;
    poly r1(coords_.begin(), coords_.end());
    poly u0(prime_, rational(0));
    poly u1(prime_, rational(0));
    u1[0] = 1;
    while (true) {
        std::size_t d1 = degree(r1);
        if (d1 == 0) throw domain_error("cyclotomic: not invertible (unexpected)");
        if (d1 == 1) {
            // r1 is a nonzero constant.
            rational c = 1 / r1[0];
            poly inv = poly_scale(u1, c);
            // Reduce modulo Phi_p back to the canonical basis.
            cyclotomic result(prime_);
            std::vector<rational> folded(prime_, rational(0));
            for (std::size_t i = 0; i < inv.size(); ++i)
                if (inv[i] != 0) folded[i % prime_] += inv[i];
            const rational top = folded[prime_ - 1];
            for (std::size_t i = 0; i + 1 < prime_; ++i) result.coords_[i] = folded[i] - top;
            return result;
        }
        poly q;
        poly_divmod(r0, r1, q);
        poly r2 = r0;
        poly u2 = u0;
        // r2 = r0 - q*r1, u2 = u0 - q*u1
        for (std::size_t k = 0; k < q.size(); ++k) {
            if (q[k] == 0) continue;
            r2 = poly_sub(r2, poly_shift_mul(r1, k, q[k]));
            u2 = poly_sub(u2, poly_shift_mul(u1, k, q[k]));
        }
        r0 = std::move(r1);
        u0 = std::move(u1);
        r1 = std::move(r2);
        u1 = std::move(u2);
    }
}

std::string cyclotomic::str() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == 0) continue;
        if (!first) out << " + ";
        out << rational_to_string(coords_[i]);
        if (i > 0) out << "*z^" << i;
        first = false;
    }
    return out.str();
}

} // namespace novbar
