#include "novbar/filtered.hpp"

#include <algorithm>
#include <set>

namespace novbar {

sparse_vec sparse_vec::unit(std::size_t index, const novikov_scalar& one) {
    sparse_vec v;
    v.entries.emplace_back(index, one);
    return v;
}

const novikov_scalar* sparse_vec::find(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const auto& e, std::size_t i) { return e.first < i; });
    if (it != entries.end() && it->first == index) return &it->second;
    return nullptr;
}

bool operator==(const sparse_vec& a, const sparse_vec& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (a.entries[i].first != b.entries[i].first || a.entries[i].second != b.entries[i].second)
            return false;
    return true;
}

sparse_vec combine(const novikov_scalar& ca, const sparse_vec& a, const novikov_scalar& cb,
                   const sparse_vec& b) {
    sparse_vec r;
    r.entries.reserve(a.entries.size() + b.entries.size());
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j == b.entries.size() ||
            (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
            novikov_scalar v = ca * a.entries[i].second;
            if (!v.is_zero()) r.entries.emplace_back(a.entries[i].first, std::move(v));
            ++i;
        } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
            novikov_scalar v = cb * b.entries[j].second;
            if (!v.is_zero()) r.entries.emplace_back(b.entries[j].first, std::move(v));
            ++j;
        } else {
            novikov_scalar v = ca * a.entries[i].second + cb * b.entries[j].second;
            if (!v.is_zero()) r.entries.emplace_back(a.entries[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return r;
}

sparse_vec add(const sparse_vec& a, const sparse_vec& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const novikov_scalar one =
        novikov_scalar::one(a.entries[0].second.prime(), a.entries[0].second.gamma());
    return combine(one, a, one, b);
}

sparse_vec sub(const sparse_vec& a, const sparse_vec& b) {
    if (b.is_zero()) return a;
    const novikov_scalar one =
        novikov_scalar::one(b.entries[0].second.prime(), b.entries[0].second.gamma());
    return combine(one, a, -one, b);
}

sparse_vec scale(const novikov_scalar& c, const sparse_vec& a) {
    sparse_vec r;
    if (c.is_zero()) return r;
    for (const auto& [i, v] : a.entries) {
        novikov_scalar s = c * v;
        if (!s.is_zero()) r.entries.emplace_back(i, std::move(s));
    }
    return r;
}

void filtered_space::validate() {
    if (labels.size() != filtrations.size())
        throw config_error("filtered_space: labels/filtrations size mismatch");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw config_error("filtered_space: duplicate labels");
    // GMP comparisons assume canonical form; normalize whatever callers fed in.
    for (auto& f : filtrations) f.canonicalize();
}

bool same_space(const filtered_space& a, const filtered_space& b) {
    return a.prime == b.prime && a.gamma == b.gamma && a.labels == b.labels &&
           a.filtrations == b.filtrations;
}

ext_rational filtration_of(const filtered_space& space, const sparse_vec& v) {
    ext_rational level = ext_rational::neg_infinity();
    for (const auto& [i, coeff] : v.entries) {
        if (i >= space.dim()) throw config_error("filtration_of: index out of range");
        ext_rational candidate(space.filtrations[i] - coeff.valuation().finite());
        if (candidate > level) level = candidate;
    }
    return level;
}

kvec reduce_vector_to_zero_level(const filtered_space& space, const sparse_vec& v) {
    ext_rational level = filtration_of(space, v);
    if (!level.is_finite())
        throw precondition_error("reduce_to_zero_level: zero vector");
    kvec column(space.dim(), cyclotomic(space.prime));
    for (const auto& [i, coeff] : v.entries)
        column[i] = coeff.coeff_at(space.filtrations[i] - level.finite());
    return column;
}

kmatrix reduce_to_zero_level(const filtered_space& space, const std::vector<sparse_vec>& vectors) {
    kmatrix out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.push_back(reduce_vector_to_zero_level(space, v));
    return out;
}

bool is_orthogonal(const filtered_space& space, const std::vector<sparse_vec>& vectors) {
    k_echelon ech;
    for (const auto& v : vectors)
        if (!ech.try_add(reduce_vector_to_zero_level(space, v))) return false;
    return true;
}

filtered_map::filtered_map(filtered_space domain, filtered_space codomain)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), cols_(domain_.dim()) {
    domain_.validate();
    codomain_.validate();
    if (domain_.prime != codomain_.prime || domain_.gamma != codomain_.gamma)
        throw config_error("filtered_map: domain/codomain context mismatch");
}

filtered_map::filtered_map(filtered_space domain, filtered_space codomain,
                           std::vector<sparse_vec> columns)
    : filtered_map(std::move(domain), std::move(codomain)) {
    if (columns.size() != cols_.size()) throw config_error("filtered_map: wrong column count");
    cols_ = std::move(columns);
    for (const auto& col : cols_)
        for (const auto& [i, v] : col.entries) {
            if (i >= codomain_.dim()) throw config_error("filtered_map: row out of range");
            if (v.prime() != domain_.prime || v.gamma() != domain_.gamma)
                throw config_error("filtered_map: entry context mismatch");
        }
}

filtered_map filtered_map::identity(const filtered_space& space) {
    filtered_map m(space, space);
    const novikov_scalar one = space.one_scalar();
    for (std::size_t j = 0; j < space.dim(); ++j) m.cols_[j] = sparse_vec::unit(j, one);
    return m;
}

void filtered_map::set_entry(std::size_t row, std::size_t col, const novikov_scalar& value) {
    if (row >= codomain_.dim() || col >= domain_.dim())
        throw config_error("filtered_map::set_entry: index out of range");
    if (value.prime() != domain_.prime || value.gamma() != domain_.gamma)
        throw config_error("filtered_map::set_entry: scalar context mismatch");
    auto& entries = cols_[col].entries;
    auto it = std::lower_bound(entries.begin(), entries.end(), row,
                               [](const auto& e, std::size_t i) { return e.first < i; });
    if (it != entries.end() && it->first == row) {
        if (value.is_zero()) entries.erase(it);
        else it->second = value;
    } else if (!value.is_zero()) {
        entries.insert(it, {row, value});
    }
}

novikov_scalar filtered_map::entry(std::size_t row, std::size_t col) const {
    const novikov_scalar* p = cols_.at(col).find(row);
    return p ? *p : domain_.zero_scalar();
}

bool filtered_map::is_zero() const {
    return std::all_of(cols_.begin(), cols_.end(), [](const sparse_vec& c) { return c.is_zero(); });
}

sparse_vec filtered_map::apply(const sparse_vec& v) const {
    sparse_vec result;
    const novikov_scalar one = domain_.one_scalar();
    for (const auto& [j, coeff] : v.entries) {
        if (j >= cols_.size()) throw config_error("filtered_map::apply: index out of range");
        result = combine(one, result, coeff, cols_[j]);
    }
    return result;
}

filtered_map filtered_map::operator+(const filtered_map& rhs) const {
    if (!same_space(domain_, rhs.domain_) || !same_space(codomain_, rhs.codomain_))
        throw config_error("filtered_map: shape mismatch in +");
    filtered_map r(domain_, codomain_);
    for (std::size_t j = 0; j < cols_.size(); ++j) r.cols_[j] = add(cols_[j], rhs.cols_[j]);
    return r;
}

filtered_map filtered_map::operator-(const filtered_map& rhs) const {
    if (!same_space(domain_, rhs.domain_) || !same_space(codomain_, rhs.codomain_))
        throw config_error("filtered_map: shape mismatch in -");
    filtered_map r(domain_, codomain_);
    for (std::size_t j = 0; j < cols_.size(); ++j) r.cols_[j] = sub(cols_[j], rhs.cols_[j]);
    return r;
}

filtered_map filtered_map::operator*(const filtered_map& rhs) const {
    if (!same_space(domain_, rhs.codomain_))
        throw config_error("filtered_map: composition shape mismatch");
    filtered_map r(rhs.domain_, codomain_);
    for (std::size_t j = 0; j < rhs.cols_.size(); ++j) r.cols_[j] = apply(rhs.cols_[j]);
    return r;
}

filtered_map filtered_map::scaled(const novikov_scalar& c) const {
    filtered_map r(domain_, codomain_);
    for (std::size_t j = 0; j < cols_.size(); ++j) r.cols_[j] = scale(c, cols_[j]);
    return r;
}

filtered_map filtered_map::pow(unsigned exponent) const {
    if (!same_space(domain_, codomain_))
        throw config_error("filtered_map::pow: endomorphism required");
    filtered_map result = identity(domain_);
    filtered_map base(*this);
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

ext_rational filtered_map::shift_bound() const {
    ext_rational bound = ext_rational::neg_infinity();
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        ext_rational lv = filtration_of(codomain_, cols_[j]);
        if (!lv.is_finite()) continue;
        ext_rational shift(lv.finite() - domain_.filtrations[j]);
        if (shift > bound) bound = shift;
    }
    return bound;
}

bool filtered_map::commutes_with(const filtered_map& other) const {
    filtered_map ab = (*this) * other;
    filtered_map ba = other * (*this);
    for (std::size_t j = 0; j < ab.cols_.size(); ++j)
        if (!(ab.cols_[j] == ba.cols_[j])) return false;
    return true;
}

std::size_t unfiltered_rank(const std::vector<sparse_vec>& columns) {
    std::vector<sparse_vec> work(columns);
    std::size_t rank = 0;
    std::vector<bool> retired(work.size(), false);
    while (true) {
        std::size_t pj = work.size();
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (!retired[j] && !work[j].is_zero()) {
                pj = j;
                break;
            }
        }
        if (pj == work.size()) break;
        ++rank;
        retired[pj] = true;
        const std::size_t prow = work[pj].entries.front().first;
        const novikov_scalar b = work[pj].entries.front().second;
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (retired[j] || work[j].is_zero()) continue;
            const novikov_scalar* a = work[j].find(prow);
            if (!a) continue;
            work[j] = combine(b, work[j], -(*a), work[pj]);
        }
    }
    return rank;
}

std::size_t unfiltered_rank(const filtered_map& map) {
    return unfiltered_rank(map.columns());
}

namespace {

// Exact division in the ring of finite Novikov sums: succeeds iff the
// quotient is itself a finite sum (always true for monomial divisors).
std::optional<novikov_scalar> try_divide(const novikov_scalar& num, const novikov_scalar& den) {
    if (den.is_zero()) throw domain_error("try_divide: division by zero");
    if (num.is_zero()) return num;
    if (den.is_monomial()) return num * den.invert();
    novikov_scalar rem = num;
    novikov_scalar quot = novikov_scalar::zero(num.prime(), num.gamma());
    for (int guard = 0; guard < 4096; ++guard) {
        if (rem.is_zero()) return quot;
        novikov_scalar lead = novikov_scalar::monomial(
            rem.terms().front().exponent - den.terms().front().exponent,
            rem.terms().front().coeff * den.terms().front().coeff.inverse(), num.gamma());
        quot += lead;
        rem -= lead * den;
    }
    return std::nullopt;
}

} // namespace

std::optional<sparse_vec> lambda_solve(const std::vector<sparse_vec>& columns, const sparse_vec& b,
                                       const novikov_scalar& one) {
    const std::size_t n = columns.size();
    std::size_t rows = 0;
    for (const auto& c : columns)
        for (const auto& [i, v] : c.entries) rows = std::max(rows, i + 1);
    for (const auto& [i, v] : b.entries) rows = std::max(rows, i + 1);

    // Dense augmented system, eliminated fraction-free; divisions appear
    // only in back-substitution.
    const novikov_scalar zero = novikov_scalar::zero(one.prime(), one.gamma());
    std::vector<std::vector<novikov_scalar>> m(rows, std::vector<novikov_scalar>(n + 1, zero));
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [i, v] : columns[j].entries) m[i][j] = v;
    for (const auto& [i, v] : b.entries) m[i][n] = v;

    std::vector<std::size_t> pivot_row_of_col(n, rows);
    std::size_t current_row = 0;
    for (std::size_t col = 0; col < n && current_row < rows; ++col) {
        // Prefer a monomial pivot so later divisions stay exact.
        std::size_t pr = rows;
        for (std::size_t r = current_row; r < rows; ++r) {
            if (m[r][col].is_zero()) continue;
            if (pr == rows) pr = r;
            if (m[r][col].is_monomial()) {
                pr = r;
                break;
            }
        }
        if (pr == rows) continue;
        std::swap(m[pr], m[current_row]);
        const novikov_scalar piv = m[current_row][col];
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == current_row || m[r][col].is_zero()) continue;
            const novikov_scalar f = m[r][col];
            for (std::size_t c2 = 0; c2 <= n; ++c2)
                m[r][c2] = piv * m[r][c2] - f * m[current_row][c2];
        }
        pivot_row_of_col[col] = current_row;
        ++current_row;
    }
    // Inconsistency: a nonzero rhs on a fully eliminated row.
    for (std::size_t r = current_row; r < rows; ++r)
        if (!m[r][n].is_zero()) return std::nullopt;
    for (std::size_t r = 0; r < rows; ++r) {
        bool all_zero = true;
        for (std::size_t c = 0; c < n; ++c)
            if (!m[r][c].is_zero()) {
                all_zero = false;
                break;
            }
        if (all_zero && !m[r][n].is_zero()) return std::nullopt;
    }

    sparse_vec x;
    for (std::size_t col = 0; col < n; ++col) {
        if (pivot_row_of_col[col] == rows) continue; // free variable -> 0
        const std::size_t r = pivot_row_of_col[col];
        auto q = try_divide(m[r][n], m[r][col]);
        if (!q)
            throw precondition_error(
                "lambda_solve: exact solve needs a truncation order (non-terminating division)");
        if (!q->is_zero()) x.entries.emplace_back(col, std::move(*q));
    }
    std::sort(x.entries.begin(), x.entries.end(),
              [](const auto& a, const auto& b2) { return a.first < b2.first; });
    return x;
}

std::vector<sparse_vec> lambda_invert(const std::vector<sparse_vec>& columns,
                                      const novikov_scalar& one) {
    const std::size_t n = columns.size();
    std::vector<sparse_vec> inverse(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto x = lambda_solve(columns, sparse_vec::unit(j, one), one);
        if (!x) throw domain_error("lambda_invert: matrix is singular");
        inverse[j] = std::move(*x);
    }
    return inverse;
}

} // namespace novbar
