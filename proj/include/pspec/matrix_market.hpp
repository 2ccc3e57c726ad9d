#pragma once

#include "pspec/projection.hpp"
#include "pspec/types.hpp"

#include <string>

namespace pspec {

/// Parsed Matrix Market file.  Coordinate files keep their triplets (already
/// expanded for symmetric/hermitian storage, duplicates preserved for the
/// sparse constructor to sum); array files land in `dense`.
struct MarketMatrix {
    Index rows = 0, cols = 0;
    bool coordinate = false;
    std::vector<Triplet> entries;
    Matrix dense;

    Matrix to_dense() const;
    SparseMatrix to_sparse() const;
};

/// Reader for the `array` and `coordinate` formats with `real`, `integer`, or
/// `complex` fields and `general`, `symmetric`, or `hermitian` symmetry.
/// Malformed input raises InputError with the offending line number;
/// `pattern` matrices are rejected.
MarketMatrix read_matrix_market(const std::string& path);

/// Writers; 17 significant digits so values round-trip exactly.
void write_matrix_market(const std::string& path, const Matrix& M);
void write_matrix_market(const std::string& path, const SparseMatrix& M);

}  // namespace pspec
