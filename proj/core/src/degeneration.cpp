#include <algorithm>
#include <set>

#include "nadeg/error.hpp"
#include "nadeg/filtration.hpp"
#include "nadeg/linalg.hpp"

namespace nadeg {

MonomialModel::MonomialModel(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1) throw Error(ErrorKind::InvalidInput, "monomial model needs at least one variable");
}

std::vector<std::vector<int>> MonomialModel::monomials(int m) const {
  if (m < 0) throw Error(ErrorKind::InvalidInput, "negative degree");
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<size_t>(num_vars_), 0);
  // exponents of x_0 descending, then recursively the remaining variables
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == num_vars_ - 1) {
      e[static_cast<size_t>(var)] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<size_t>(var)] = k;
      self(self, var + 1, left - k);
    }
  };
  rec(rec, 0, m);
  return out;
}

int MonomialModel::dimension(int m) const { return static_cast<int>(monomials(m).size()); }

namespace {

std::vector<Rational> monomial_weights(const MonomialModel& model, const std::vector<long>& w, int m) {
  if (static_cast<int>(w.size()) != model.num_vars()) {
    throw Error(ErrorKind::InvalidWeightFiltration, "weight vector has " + std::to_string(w.size()) + " entries for " +
                                                        std::to_string(model.num_vars()) + " variables");
  }
  std::vector<Rational> out;
  for (const auto& a : model.monomials(m)) {
    long c = 0;
    for (size_t i = 0; i < a.size(); ++i) c += a[i] * w[i];
    out.emplace_back(c);
  }
  return out;
}

// Span of the lowest-weight parts of the elements of row space V:
// ⊕_c proj_c(V ∩ span{e_j : c_j ≥ c}).
RMatrix initial_subspace(const RMatrix& v, const std::vector<Rational>& c, const std::set<Rational>& levels) {
  const int n = static_cast<int>(c.size());
  RMatrix out;
  for (const auto& level : levels) {
    RMatrix coords;
    for (int j = 0; j < n; ++j) {
      if (c[static_cast<size_t>(j)] >= level) {
        RVector e(static_cast<size_t>(n), Rational(0));
        e[static_cast<size_t>(j)] = 1;
        coords.push_back(std::move(e));
      }
    }
    RMatrix part = linalg::intersect(v, coords, n);
    for (auto& row : part) {
      for (int j = 0; j < n; ++j) {
        if (c[static_cast<size_t>(j)] != level) row[static_cast<size_t>(j)] = 0;
      }
    }
    for (auto& row : linalg::row_basis(part)) out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

FiltrationLevel weight_filtration(const MonomialModel& model, const std::vector<long>& w, int m) {
  auto c = monomial_weights(model, w, m);
  std::vector<RVector> alpha;
  for (const auto& x : c) alpha.push_back(RVector{x});
  return FiltrationLevel::from_values(m, RVector(c.begin(), c.end()), std::move(alpha));
}

GradedFiltration initial_term_degeneration(const MonomialModel& model, const std::vector<long>& w,
                                           const GradedFiltration& f1, int m) {
  const auto c = monomial_weights(model, w, m);
  const auto& lv = f1.level(m);
  if (lv.dim() != static_cast<int>(c.size())) {
    throw Error(ErrorKind::DimensionMismatch, "F1 level has dimension " + std::to_string(lv.dim()) + ", monomial basis has " +
                                                  std::to_string(c.size()));
  }
  const std::set<Rational> levels(c.begin(), c.end());
  std::vector<FlagStep> flags;
  for (const auto& step : lv.flags()) flags.push_back(FlagStep{step.value, initial_subspace(step.rows, c, levels)});
  FiltrationLevel degenerate = FiltrationLevel::from_flags(m, lv.dim(), std::move(flags));

  // every adapted basis vector is homogeneous; record its weight
  std::vector<RVector> alpha;
  for (const auto& row : degenerate.basis()) {
    std::optional<Rational> weight;
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 0) continue;
      if (weight && *weight != c[j]) throw Error(ErrorKind::InvalidWeightFiltration, "initial subspace is not weight-graded");
      weight = c[j];
    }
    alpha.push_back(RVector{*weight});
  }
  GradedFiltration out(f1.label().empty() ? "initial_term" : f1.label() + "/initial_term");
  out.set_level(FiltrationLevel::from_basis(m, degenerate.basis(), degenerate.values(), std::move(alpha)));
  return out;
}

}  // namespace nadeg
