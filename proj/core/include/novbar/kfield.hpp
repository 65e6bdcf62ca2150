#pragma once

#include <vector>

#include "novbar/cyclotomic.hpp"

namespace novbar {

// Column vectors over K = Q(xi_p).
using kvec = std::vector<cyclotomic>;
using kmatrix = std::vector<kvec>; // list of columns, all the same length

std::size_t k_rank(kmatrix columns);

// Incremental row-echelon accumulator for K-columns; try_add keeps the
// column only if it enlarges the span.
class k_echelon {
  public:
    bool try_add(kvec column);
    std::size_t rank() const { return rows_.size(); }

  private:
    struct row_entry {
        std::size_t pivot;
        kvec column; // normalized so column[pivot] == 1
    };
    std::vector<row_entry> rows_;
};

} // namespace novbar
