#include "novbar/novikov.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace novbar {

novikov_scalar::novikov_scalar(unsigned prime, exponent_group gamma)
    : prime_(prime), gamma_(std::move(gamma)) {}

novikov_scalar novikov_scalar::constant(const cyclotomic& c, const exponent_group& gamma) {
    novikov_scalar s(c.prime(), gamma);
    if (!c.is_zero()) s.terms_.push_back({rational(0), c});
    return s;
}

novikov_scalar novikov_scalar::monomial(const rational& exponent, const cyclotomic& coeff,
                                        const exponent_group& gamma) {
    novikov_scalar s(coeff.prime(), gamma);
    if (!gamma.contains(exponent))
        throw config_error("novikov_scalar: exponent " + rational_to_string(exponent) +
                           " not in Gamma " + gamma.str());
    if (!coeff.is_zero()) s.terms_.push_back({exponent, coeff});
    return s;
}

novikov_scalar novikov_scalar::from_terms(unsigned prime, const exponent_group& gamma,
                                          std::vector<term> terms,
                                          std::optional<rational> truncation) {
    novikov_scalar s(prime, gamma);
    for (auto& t : terms) {
        t.exponent.canonicalize();
        if (!gamma.contains(t.exponent))
            throw config_error("novikov_scalar: exponent " + rational_to_string(t.exponent) +
                               " not in Gamma " + gamma.str());
        if (t.coeff.prime() != prime) throw config_error("novikov_scalar: mixed primes");
    }
    s.terms_ = std::move(terms);
    s.trunc_ = std::move(truncation);
    s.normalize();
    return s;
}

void novikov_scalar::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const term& a, const term& b) { return a.exponent < b.exponent; });
    std::vector<term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exponent == t.exponent) {
            merged.back().coeff += t.coeff;
            if (merged.back().coeff.is_zero()) merged.pop_back();
        } else if (!t.coeff.is_zero()) {
            merged.push_back(std::move(t));
        }
    }
    terms_ = std::move(merged);
    if (trunc_) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), *trunc_,
                                   [](const term& t, const rational& o) { return t.exponent < o; });
        terms_.erase(it, terms_.end());
    }
}

bool novikov_scalar::terms_same(const novikov_scalar& rhs) const {
    if (terms_.size() != rhs.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exponent != rhs.terms_[i].exponent || terms_[i].coeff != rhs.terms_[i].coeff)
            return false;
    return true;
}

void novikov_scalar::check_compatible(const novikov_scalar& rhs) const {
    if (prime_ != rhs.prime_) throw config_error("novikov_scalar: mixed primes");
    if (gamma_ != rhs.gamma_) throw config_error("novikov_scalar: mixed exponent groups");
}

ext_rational novikov_scalar::valuation() const {
    if (terms_.empty()) return ext_rational::infinity();
    return ext_rational(terms_.front().exponent);
}

const cyclotomic& novikov_scalar::leading_coeff() const {
    if (terms_.empty()) throw domain_error("novikov_scalar: zero has no leading coefficient");
    return terms_.front().coeff;
}

cyclotomic novikov_scalar::coeff_at(const rational& exponent) const {
    for (const auto& t : terms_) {
        if (t.exponent == exponent) return t.coeff;
        if (t.exponent > exponent) break;
    }
    return cyclotomic(prime_);
}

novikov_scalar novikov_scalar::operator-() const {
    novikov_scalar r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

novikov_scalar& novikov_scalar::operator+=(const novikov_scalar& rhs) {
    check_compatible(rhs);
    std::optional<rational> tr;
    if (trunc_ && rhs.trunc_) tr = std::min(*trunc_, *rhs.trunc_);
    else if (trunc_) tr = trunc_;
    else if (rhs.trunc_) tr = rhs.trunc_;
    terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    trunc_ = tr;
    normalize();
    return *this;
}

novikov_scalar& novikov_scalar::operator-=(const novikov_scalar& rhs) {
    return *this += -rhs;
}

novikov_scalar& novikov_scalar::operator*=(const novikov_scalar& rhs) {
    check_compatible(rhs);
    // Truncation of the product: the unknown tail of one factor enters at
    // its bound plus the valuation of the other factor.
    std::optional<rational> tr;
    auto consider = [&tr](const std::optional<rational>& bound, const novikov_scalar& other) {
        if (!bound) return;
        if (other.terms_.empty() && !other.trunc_) return; // exactly zero: tail annihilated
        rational shifted = other.terms_.empty() ? *other.trunc_ + *bound
                                                : other.terms_.front().exponent + *bound;
        if (!tr || shifted < *tr) tr = shifted;
    };
    consider(trunc_, rhs);
    consider(rhs.trunc_, *this);
    if ((terms_.empty() && !trunc_) || (rhs.terms_.empty() && !rhs.trunc_)) tr = std::nullopt;

    std::map<rational, cyclotomic> acc;
    for (const auto& a : terms_) {
        for (const auto& b : rhs.terms_) {
            rational e = a.exponent + b.exponent;
            e.canonicalize();
            auto it = acc.find(e);
            if (it == acc.end()) acc.emplace(e, a.coeff * b.coeff);
            else it->second += a.coeff * b.coeff;
        }
    }
    terms_.clear();
    for (auto& [e, c] : acc)
        if (!c.is_zero()) terms_.push_back({e, std::move(c)});
    trunc_ = tr;
    normalize();
    return *this;
}

novikov_scalar& novikov_scalar::operator*=(const cyclotomic& c) {
    if (c.prime() != prime_) throw config_error("novikov_scalar: mixed primes");
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    normalize();
    return *this;
}

novikov_scalar& novikov_scalar::operator*=(const rational& s) {
    return *this *= cyclotomic::from_rational(prime_, s);
}

novikov_scalar novikov_scalar::pow(unsigned exponent) const {
    novikov_scalar r = one(prime_, gamma_);
    novikov_scalar base(*this);
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) r *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return r;
}

novikov_scalar novikov_scalar::invert(std::optional<rational> order) const {
    if (terms_.empty()) throw domain_error("novikov_scalar: inverse of zero");
    const rational lead_exp = terms_.front().exponent;
    novikov_scalar lead_inv =
        monomial(-lead_exp, terms_.front().coeff.inverse(), gamma_);
    if (terms_.size() == 1) {
        // Monomial: exact inverse; an unknown tail of the input enters the
        // inverse at trunc - 2*nu.
        if (trunc_) lead_inv.trunc_ = *trunc_ - 2 * lead_exp;
        lead_inv.normalize();
        return lead_inv;
    }
    novikov_scalar q = *this * lead_inv;
    q -= one(prime_, gamma_); // nu(q) > 0
    if (!order) throw precondition_error("novikov_scalar::invert: order required for a series");
    novikov_scalar acc = one(prime_, gamma_);
    novikov_scalar power = one(prime_, gamma_);
    const novikov_scalar neg_q = -q;
    while (true) {
        power *= neg_q;
        power.truncate_at(*order + lead_exp);
        if (power.is_zero()) break;
        if (power.valuation().is_finite() && power.valuation().finite() - lead_exp >= *order) break;
        acc += power;
    }
    novikov_scalar result = acc * lead_inv;
    result.truncate_at(*order);
    return result;
}

novikov_scalar& novikov_scalar::truncate_at(const rational& order) {
    trunc_ = trunc_ ? std::min(*trunc_, order) : order;
    normalize();
    return *this;
}

std::string novikov_scalar::str() const {
    std::ostringstream out;
    if (terms_.empty()) out << "0";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out << " + ";
        out << "(" << terms_[i].coeff.str() << ")";
        if (terms_[i].exponent != 0) out << "*t^" << rational_to_string(terms_[i].exponent);
    }
    if (trunc_) out << " + O(t^" << rational_to_string(*trunc_) << ")";
    return out.str();
}

std::optional<novikov_scalar> solve_perturbed_unity_root(const novikov_poly& h, unsigned prime,
                                                         long target_power,
                                                         const exponent_group& gamma,
                                                         const std::optional<rational>& order,
                                                         long root_choice) {
    if (h.size() > prime) // h[i] multiplies x^i, so size p means degree p-1
        throw precondition_error("solve_perturbed_unity_root: deg h must be < p");
    bool h_zero = true;
    for (const auto& c : h) {
        if (c.prime() != prime || c.gamma() != gamma)
            throw config_error("solve_perturbed_unity_root: coefficient context mismatch");
        if (!c.is_zero()) {
            h_zero = false;
            if (!(c.valuation() > ext_rational(rational(0))))
                throw precondition_error(
                    "solve_perturbed_unity_root: coefficients must have positive valuation");
        }
    }
    // x^p = xi^q + h(x) with p not dividing q has no solution: at the zero
    // level it would produce a p-th root of a primitive root of unity,
    // which the irreducible condition for Q(xi_p) rules out.
    if (target_power % static_cast<long>(prime) != 0) return std::nullopt;

    const cyclotomic a0 = cyclotomic::zeta(prime, root_choice);
    novikov_scalar x = novikov_scalar::constant(a0, gamma);
    if (h_zero) return x; // unperturbed: exact root of unity

    if (!order)
        throw precondition_error("solve_perturbed_unity_root: order required when h != 0");

    auto residual = [&](const novikov_scalar& cur) {
        novikov_scalar r = novikov_scalar::one(prime, gamma);
        novikov_scalar xk = novikov_scalar::one(prime, gamma);
        for (const auto& coeff : h) {
            r += coeff * xk;
            xk *= cur;
            xk.truncate_at(*order);
        }
        r -= cur.pow(prime);
        r.truncate_at(*order);
        return r;
    };

    const rational p_rat(static_cast<long>(prime));
    for (int guard = 0; guard < 100000; ++guard) {
        novikov_scalar r = residual(x);
        if (r.is_zero()) break;
        const rational g = r.valuation().finite();
        if (g >= *order) break;
        // The lowest unresolved level is corrected by delta with
        // p*a0^{p-1}*delta = leading(r), i.e. delta = leading(r)*a0/p.
        cyclotomic delta = r.leading_coeff() * a0;
        delta *= rational(1) / p_rat;
        x += novikov_scalar::monomial(g, delta, gamma);
    }
    x.truncate_at(*order);

    novikov_scalar check = residual(x);
    if (!check.is_zero() && check.valuation().finite() < *order)
        throw verify_error("solve_perturbed_unity_root: residual did not vanish below the order");
    return x;
}

} // namespace novbar
