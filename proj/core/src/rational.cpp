#include "novbar/rational.hpp"

namespace novbar {

rational parse_rational(const std::string& text) {
    if (text.empty()) throw domain_error("empty rational literal");
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_len = text.size() - dot - 1;
        bigint num;
        if (num.set_str(digits, 10) != 0) throw domain_error("bad rational literal: " + text);
        bigint den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        rational q(num, den);
        q.canonicalize();
        return q;
    }
    rational q;
    if (q.set_str(text, 10) != 0) throw domain_error("bad rational literal: " + text);
    q.canonicalize();
    if (q.get_den() == 0) throw domain_error("rational with zero denominator: " + text);
    return q;
}

std::string rational_to_string(const rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bigint rational_floor(const rational& q) {
    bigint n;
    mpz_fdiv_q(n.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return n;
}

rational rational_gcd(const rational& a, const rational& b) {
    // gcd over Q: gcd of numerators scaled to the common denominator.
    bigint num_gcd, den_lcm;
    mpz_gcd(num_gcd.get_mpz_t(),
            bigint(a.get_num() * b.get_den()).get_mpz_t(),
            bigint(b.get_num() * a.get_den()).get_mpz_t());
    den_lcm = a.get_den() * b.get_den();
    rational g(num_gcd, den_lcm);
    g.canonicalize();
    if (g < 0) g = -g;
    return g;
}

std::string ext_rational::str() const {
    if (is_pos_infinity()) return "inf";
    if (is_neg_infinity()) return "-inf";
    return rational_to_string(value_);
}

} // namespace novbar
