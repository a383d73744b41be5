#pragma once

#include <optional>
#include <vector>

#include "nadeg/rational.hpp"

// Exact linear algebra over Q on small dense matrices. Rows of an RMatrix are
// treated as vectors; "row space" means the span of the rows.
namespace nadeg::linalg {

struct Echelon {
  RMatrix rows;             // reduced row echelon form, zero rows removed
  std::vector<int> pivots;  // pivot column of each row
};

/// Reduced row echelon form. Pivot choice: largest |entry| in the column,
/// ties broken by lowest row index.
Echelon rref(RMatrix m);

int rank(const RMatrix& m);

/// Basis of {x : m x = 0}, one vector per free column.
RMatrix nullspace(const RMatrix& m, int cols);

/// Canonical basis (RREF rows) of the row space.
RMatrix row_basis(const RMatrix& m);

/// Basis of the intersection of two row spaces in Q^cols.
RMatrix intersect(const RMatrix& a, const RMatrix& b, int cols);

bool in_row_space(const RMatrix& basis, const RVector& v);

/// Coordinates c with sum_i c_i * rows[i] = v, if v is in the row space.
/// rows must be linearly independent.
std::optional<RVector> coordinates(const RMatrix& rows, const RVector& v);

Rational determinant(RMatrix m);

std::optional<RMatrix> inverse(const RMatrix& m);

RMatrix transpose(const RMatrix& m, int cols);

RMatrix identity(int n);

/// Indices of a maximal subset of `candidates` that extends `base` to a
/// linearly independent family, scanning candidates in order.
std::vector<int> greedy_extension(const RMatrix& base, const RMatrix& candidates);

}  // namespace nadeg::linalg
