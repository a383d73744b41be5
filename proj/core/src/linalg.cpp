#include "nadeg/linalg.hpp"

#include <boost/multiprecision/number.hpp>

#include "nadeg/error.hpp"

namespace nadeg::linalg {

namespace {

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

size_t width(const RMatrix& m) { return m.empty() ? 0 : m.front().size(); }

}  // namespace

Echelon rref(RMatrix m) {
  Echelon out;
  const size_t rows = m.size();
  const size_t cols = width(m);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t best = rows;
    for (size_t i = r; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      if (best == rows || abs_q(m[i][c]) > abs_q(m[best][c])) best = i;
    }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    Rational inv = Rational(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) {
      if (m[r][j] != 0) m[r][j] *= inv;
    }
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (size_t j = c; j < cols; ++j) {
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
      }
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

int rank(const RMatrix& m) { return static_cast<int>(rref(m).rows.size()); }

RMatrix nullspace(const RMatrix& m, int cols) {
  Echelon e = rref(m);
  std::vector<int> is_pivot(static_cast<size_t>(cols), -1);
  for (size_t k = 0; k < e.pivots.size(); ++k) is_pivot[static_cast<size_t>(e.pivots[k])] = static_cast<int>(k);
  RMatrix basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)] >= 0) continue;
    RVector v(static_cast<size_t>(cols), Rational(0));
    v[static_cast<size_t>(free)] = 1;
    for (size_t k = 0; k < e.pivots.size(); ++k) {
      v[static_cast<size_t>(e.pivots[k])] = -e.rows[k][static_cast<size_t>(free)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

RMatrix row_basis(const RMatrix& m) { return rref(m).rows; }

RMatrix intersect(const RMatrix& a, const RMatrix& b, int cols) {
  RMatrix ab = row_basis(a);
  RMatrix bb = row_basis(b);
  if (ab.empty() || bb.empty()) return {};
  // Solve c^T A = d^T B, i.e. [A^T | -B^T] (c; d) = 0.
  const size_t ka = ab.size();
  const size_t kb = bb.size();
  RMatrix system(static_cast<size_t>(cols), RVector(ka + kb));
  for (int j = 0; j < cols; ++j) {
    for (size_t i = 0; i < ka; ++i) system[static_cast<size_t>(j)][i] = ab[i][static_cast<size_t>(j)];
    for (size_t i = 0; i < kb; ++i) system[static_cast<size_t>(j)][ka + i] = -bb[i][static_cast<size_t>(j)];
  }
  RMatrix ns = nullspace(system, static_cast<int>(ka + kb));
  RMatrix vecs;
  for (const auto& sol : ns) {
    RVector v(static_cast<size_t>(cols), Rational(0));
    for (size_t i = 0; i < ka; ++i) {
      if (sol[i] == 0) continue;
      for (int j = 0; j < cols; ++j) v[static_cast<size_t>(j)] += sol[i] * ab[i][static_cast<size_t>(j)];
    }
    vecs.push_back(std::move(v));
  }
  return row_basis(vecs);
}

bool in_row_space(const RMatrix& basis, const RVector& v) {
  if (basis.empty()) {
    for (const auto& x : v) {
      if (x != 0) return false;
    }
    return true;
  }
  RMatrix m = basis;
  m.push_back(v);
  return rank(m) == rank(basis);
}

std::optional<RVector> coordinates(const RMatrix& rows, const RVector& v) {
  const size_t k = rows.size();
  const size_t cols = v.size();
  // Augmented system: sum_i c_i rows[i][j] = v[j] for each column j.
  RMatrix aug(cols, RVector(k + 1));
  for (size_t j = 0; j < cols; ++j) {
    for (size_t i = 0; i < k; ++i) aug[j][i] = rows[i][j];
    aug[j][k] = v[j];
  }
  Echelon e = rref(aug);
  RVector c(k, Rational(0));
  for (size_t r = 0; r < e.rows.size(); ++r) {
    if (static_cast<size_t>(e.pivots[r]) == k) return std::nullopt;
    c[static_cast<size_t>(e.pivots[r])] = e.rows[r][k];
  }
  return c;
}

Rational determinant(RMatrix m) {
  const size_t n = m.size();
  Rational det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = n;
    for (size_t i = c; i < n; ++i) {
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    }
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    Rational inv = Rational(1) / m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

std::optional<RMatrix> inverse(const RMatrix& m) {
  const size_t n = m.size();
  RMatrix aug(n, RVector(2 * n, Rational(0)));
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    for (size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  Echelon e = rref(aug);
  if (e.rows.size() < n || static_cast<size_t>(e.pivots[n - 1]) >= n) return std::nullopt;
  RMatrix inv(n, RVector(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  }
  return inv;
}

RMatrix transpose(const RMatrix& m, int cols) {
  RMatrix t(static_cast<size_t>(cols), RVector(m.size()));
  for (size_t i = 0; i < m.size(); ++i) {
    for (int j = 0; j < cols; ++j) t[static_cast<size_t>(j)][i] = m[i][static_cast<size_t>(j)];
  }
  return t;
}

RMatrix identity(int n) {
  RMatrix id(static_cast<size_t>(n), RVector(static_cast<size_t>(n), Rational(0)));
  for (int i = 0; i < n; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return id;
}

std::vector<int> greedy_extension(const RMatrix& base, const RMatrix& candidates) {
  std::vector<int> chosen;
  RMatrix current = row_basis(base);
  int r = static_cast<int>(current.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    RMatrix trial = current;
    trial.push_back(candidates[i]);
    int tr = rank(trial);
    if (tr > r) {
      chosen.push_back(static_cast<int>(i));
      current = row_basis(trial);
      r = tr;
    }
  }
  return chosen;
}

}  // namespace nadeg::linalg
