#include "novbar/exponent_group.hpp"

#include <sstream>

namespace novbar {

exponent_group::exponent_group(std::vector<rational> generators)
    : generators_(std::move(generators)) {
    for (auto& g : generators_) {
        g.canonicalize();
        if (g <= 0) throw config_error("exponent_group: generators must be positive");
        step_ = (step_ == 0) ? g : rational_gcd(step_, g);
    }
}

bool exponent_group::contains(const rational& x) const {
    if (x == 0) return true;
    if (trivial()) return false;
    rational q = x / step_;
    q.canonicalize();
    return q.get_den() == 1;
}

rational exponent_group::reduce_mod(const rational& x) const {
    if (trivial()) return x;
    rational r = x - rational(rational_floor(x / step_)) * step_;
    r.canonicalize();
    return r;
}

std::string exponent_group::str() const {
    if (trivial()) return "{0}";
    std::ostringstream out;
    out << "<";
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (i) out << ", ";
        out << rational_to_string(generators_[i]);
    }
    out << ">";
    return out.str();
}

} // namespace novbar
