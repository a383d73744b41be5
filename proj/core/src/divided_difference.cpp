#include "nadeg/divided_difference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "nadeg/error.hpp"

namespace nadeg {

const char* to_string(ExpMethod m) {
  switch (m) {
    case ExpMethod::divided_difference: return "divided_difference";
    case ExpMethod::series_fallback: return "series_fallback";
    case ExpMethod::subdivision: return "subdivision";
  }
  return "unknown";
}

namespace {

constexpr long double kEps = std::numeric_limits<long double>::epsilon();

using Matrix = std::vector<long double>;  // dense (N+1)x(N+1), row-major, lower triangular

// Lower-triangular product c = a * b.
void lower_mul(const Matrix& a, const Matrix& b, Matrix& c, size_t n) {
  std::fill(c.begin(), c.end(), 0.0L);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k <= i; ++k) {
      const long double aik = a[i * n + k];
      if (aik == 0.0L) continue;
      for (size_t j = 0; j <= k; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  }
}

DividedDifference via_matrix(std::span<const long double> x) {
  const size_t n = x.size();
  const long double lo = *std::min_element(x.begin(), x.end());
  const long double hi = *std::max_element(x.begin(), x.end());
  const long double spread = hi - lo;

  // Scale so that the 1-norm of B / 2^s is at most 1/2.
  int s = 0;
  long double norm = spread + 1.0L;
  while (norm > 0.5L) {
    norm *= 0.5L;
    ++s;
  }
  const long double scale = std::ldexp(1.0L, -s);

  Matrix b(n * n, 0.0L);
  for (size_t i = 0; i < n; ++i) {
    b[i * n + i] = (x[i] - lo) * scale;
    if (i + 1 < n) b[(i + 1) * n + i] = scale;
  }

  Matrix sum(n * n, 0.0L);
  Matrix term(n * n, 0.0L);
  Matrix next(n * n, 0.0L);
  for (size_t i = 0; i < n; ++i) {
    sum[i * n + i] = 1.0L;
    term[i * n + i] = 1.0L;
  }
  int terms = 0;
  for (int k = 1; k < 200; ++k) {
    lower_mul(term, b, next, n);
    const long double inv_k = 1.0L / static_cast<long double>(k);
    for (auto& v : next) v *= inv_k;
    term.swap(next);
    bool small = static_cast<size_t>(k) >= n;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j <= i; ++j) {
        sum[i * n + j] += term[i * n + j];
        if (small && term[i * n + j] > 1e-22L * sum[i * n + j]) small = false;
      }
    }
    terms = k;
    if (small) break;
  }
  for (int k = 0; k < s; ++k) {
    lower_mul(sum, sum, next, n);
    sum.swap(next);
  }

  DividedDifference out;
  out.value = std::exp(lo) * sum[(n - 1) * n];
  out.method = ExpMethod::divided_difference;
  // Nonnegative arithmetic throughout: error grows with the operation count only.
  const long double ops = static_cast<long double>(n) * static_cast<long double>(s + terms + 2);
  out.est_rel_error = static_cast<double>(ops * kEps + kEps * std::max(std::fabs(lo), std::fabs(hi)));
  return out;
}

DividedDifference via_series(std::span<const long double> x) {
  const size_t n = x.size();
  const long double mean = std::accumulate(x.begin(), x.end(), 0.0L) / static_cast<long double>(n);
  std::vector<long double> u(n);
  long double r = 0.0L;
  for (size_t i = 0; i < n; ++i) {
    u[i] = x[i] - mean;
    r = std::max(r, std::fabs(u[i]));
  }

  // h[i] holds the complete homogeneous symmetric polynomial h_j(u_0..u_i) for the current j.
  std::vector<long double> h(n, 1.0L);
  long double inv_fact = 1.0L;  // 1 / (N + j)! with N = n - 1
  for (size_t k = 2; k < n; ++k) inv_fact /= static_cast<long double>(k);
  long double total = h[n - 1] * inv_fact;
  long double last = total;
  // |h_j| ≤ C(N+j, j)·r^j, so the j-th term is at most r^j / (N!·j!); h_j
  // itself can vanish (h_1 = 0 after centering) and is no stopping signal.
  long double bound = inv_fact;
  int j = 0;
  for (j = 1; j < 400; ++j) {
    long double prev = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      h[i] = prev + u[i] * h[i];
      prev = h[i];
    }
    inv_fact /= static_cast<long double>(n - 1 + static_cast<size_t>(j));
    last = h[n - 1] * inv_fact;
    total += last;
    bound *= r / static_cast<long double>(j);
    if (bound < 1e-20L * std::fabs(total)) break;
  }
  DividedDifference out;
  out.value = std::exp(mean) * total;
  out.method = ExpMethod::series_fallback;
  out.est_rel_error = static_cast<double>(bound / std::fabs(total) + static_cast<long double>(n * static_cast<size_t>(j + 2)) * kEps +
                                          kEps * std::fabs(mean));
  return out;
}

void check_nodes(std::span<const long double> nodes) {
  if (nodes.empty()) throw Error(ErrorKind::InvalidInput, "divided difference of an empty node set");
  for (long double v : nodes) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite divided-difference node");
  }
}

}  // namespace

DividedDifference exp_divided_difference(std::span<const long double> nodes) {
  check_nodes(nodes);
  const long double lo = *std::min_element(nodes.begin(), nodes.end());
  const long double hi = *std::max_element(nodes.begin(), nodes.end());
  const long double mean = std::accumulate(nodes.begin(), nodes.end(), 0.0L) / static_cast<long double>(nodes.size());
  const long double rel_spread = (hi - lo) / std::max(1.0L, std::fabs(mean));
  if (rel_spread < static_cast<long double>(kClusterThreshold)) return via_series(nodes);
  return via_matrix(nodes);
}

DividedDifference exp_divided_difference(std::span<const long double> nodes, ExpMethod method) {
  check_nodes(nodes);
  switch (method) {
    case ExpMethod::series_fallback: return via_series(nodes);
    case ExpMethod::divided_difference: return via_matrix(nodes);
    case ExpMethod::subdivision: break;
  }
  throw Error(ErrorKind::InvalidInput, "subdivision is a simplex-level method, not a divided-difference path");
}

}  // namespace nadeg
