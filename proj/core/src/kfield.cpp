#include "novbar/kfield.hpp"

namespace novbar {

bool k_echelon::try_add(kvec column) {
    for (const auto& r : rows_) {
        const cyclotomic& c = column[r.pivot];
        if (c.is_zero()) continue;
        for (std::size_t i = 0; i < column.size(); ++i) column[i] -= c * r.column[i];
    }
    std::size_t pivot = column.size();
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (!column[i].is_zero()) {
            pivot = i;
            break;
        }
    }
    if (pivot == column.size()) return false;
    cyclotomic inv = column[pivot].inverse();
    for (auto& c : column) c *= inv;
    rows_.push_back({pivot, std::move(column)});
    return true;
}

std::size_t k_rank(kmatrix columns) {
    k_echelon ech;
    for (auto& col : columns) ech.try_add(std::move(col));
    return ech.rank();
}

} // namespace novbar
