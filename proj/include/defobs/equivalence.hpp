#pragma once

// Homotopy equivalences between complexes of free modules, found by Gaussian
// elimination: a differential component P -> P that is an isomorphism on a
// single summand is cancelled together with its source and target summands.

#include <optional>
#include <string>
#include <vector>

#include "defobs/complexes.hpp"

namespace defobs {

/// to : X -> Y and from : Y -> X with from o to ~ 1 and to o from ~ 1.
struct HomotopyEquivalence {
  GradedMap to, from;
  GradedMap source_homotopy;  // D(h) = from o to - 1_X
  GradedMap target_homotopy;  // D(h) = to o from - 1_Y

  bool verify() const {
    if (!to.is_chain_map() || !from.is_chain_map()) return false;
    const Complex& X = to.source();
    const Complex& Y = to.target();
    return Homotopy{GradedMap::identity(X), compose(from, to), source_homotopy}.verify() &&
           Homotopy{GradedMap::identity(Y), compose(to, from), target_homotopy}.verify();
  }
};

/// Completes a pair of chain maps to an equivalence by solving for both homotopies.
inline std::optional<HomotopyEquivalence> equivalence_from(const GradedMap& to, const GradedMap& from) {
  if (!to.is_chain_map() || !from.is_chain_map()) return std::nullopt;
  auto hs = homotopy_between(GradedMap::identity(to.source()), compose(from, to));
  if (!hs) return std::nullopt;
  auto ht = homotopy_between(GradedMap::identity(to.target()), compose(to, from));
  if (!ht) return std::nullopt;
  return HomotopyEquivalence{to, from, hs->h, ht->h};
}

namespace detail {

inline Matrix select(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(m.ring(), int(rows.size()), int(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(int(r), int(c)) = m(rows[r], cols[c]);
  return out;
}

inline std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i < b; ++i) v.push_back(i);
  return v;
}

inline std::vector<int> complement(int n, const std::vector<int>& skip) {
  std::vector<int> v;
  for (int i = 0, k = 0; i < n; ++i) {
    if (k < int(skip.size()) && skip[k] == i) {
      ++k;
      continue;
    }
    v.push_back(i);
  }
  return v;
}

// Basis positions of summand k in the free module of the given type.
inline std::vector<int> summand_rows(const Algebra& A, const ModuleType& t, int k) {
  int off = 0;
  for (int j = 0; j < k; ++j) off += A.right_rank(t[j]);
  return range(off, off + A.right_rank(t[k]));
}

struct Cancellation {
  int degree, src_summand, tgt_summand;
};

inline std::optional<Cancellation> find_cancellation(const Complex& c) {
  if (c.is_zero_object()) return std::nullopt;
  const Algebra& A = *c.algebra();
  const bool plain = A.is_trivial();
  for (int k = c.lo(); k < c.hi(); ++k) {
    Matrix d = c.d(k);
    const ModuleType &s = c.type(k), &t = c.type(k + 1);
    for (int j = 0; j < int(t.size()); ++j)
      for (int i = 0; i < int(s.size()); ++i) {
        if (s[i] != t[j]) continue;
        auto rows = summand_rows(A, t, j), cols = summand_rows(A, s, i);
        // Over a plain ring a summand is one basis vector; otherwise the block must be invertible.
        if (plain ? c.ring().is_unit(d(rows[0], cols[0])) : invert(select(d, rows, cols)).has_value())
          return Cancellation{k, i, j};
      }
  }
  return std::nullopt;
}

}  // namespace detail

struct MinimalModel {
  Complex complex;
  HomotopyEquivalence equivalence;  // input -> complex
};

/// Repeatedly cancels invertible components; the result has no unit components left.
inline MinimalModel minimal_model(const Complex& input) {
  using detail::select;
  Complex cur = input;
  GradedMap to = GradedMap::identity(input), from = GradedMap::identity(input);
  const Ring& R = input.ring();
  const Algebra& A = *input.algebra();
  while (auto cancel = detail::find_cancellation(cur)) {
    const int k = cancel->degree;
    const ModuleType &tk = cur.type(k), &tk1 = cur.type(k + 1);
    auto bi = detail::summand_rows(A, tk, cancel->src_summand);
    auto bj = detail::summand_rows(A, tk1, cancel->tgt_summand);
    auto di = detail::complement(cur.rank(k), bi);
    auto ej = detail::complement(cur.rank(k + 1), bj);
    Matrix d = cur.d(k);
    Matrix phi_inv = *invert(select(d, bj, bi));
    Matrix delta = select(d, bj, di), gamma = select(d, ej, bi), eps = select(d, ej, di);

    std::vector<ModuleType> types;
    std::vector<Matrix> diffs;
    for (int n = cur.lo(); n <= cur.hi(); ++n) {
      ModuleType t = cur.type(n);
      if (n == k) t.erase(t.begin() + cancel->src_summand);
      if (n == k + 1) t.erase(t.begin() + cancel->tgt_summand);
      types.push_back(t);
    }
    auto all = [&](int n) { return detail::range(0, cur.rank(n)); };
    for (int n = cur.lo(); n <= cur.hi(); ++n) {
      if (n == k - 1) diffs.push_back(select(cur.d(n), di, all(n)));
      else if (n == k) diffs.push_back(eps - gamma * phi_inv * delta);
      else if (n == k + 1) diffs.push_back(select(cur.d(n), all(n + 1), ej));
      else diffs.push_back(cur.d(n));
    }
    Complex next(R, cur.algebra(), cur.lo(), types, diffs);

    GradedMap step_to = GradedMap::build(cur, next, 0, [&](int n) {
      if (n == k) return select(Matrix::identity(R, cur.rank(k)), di, all(k));
      if (n == k + 1) {
        Matrix m(R, int(ej.size()), cur.rank(k + 1));
        Matrix g = -(gamma * phi_inv);
        for (int r = 0; r < int(ej.size()); ++r) {
          for (int c = 0; c < int(bj.size()); ++c) m(r, bj[c]) = g(r, c);
          m(r, ej[r]) = 1;
        }
        return m;
      }
      return Matrix::identity(R, cur.rank(n));
    });
    GradedMap step_from = GradedMap::build(next, cur, 0, [&](int n) {
      if (n == k) {
        Matrix m(R, cur.rank(k), int(di.size()));
        Matrix y = -(phi_inv * delta);
        for (int c = 0; c < int(di.size()); ++c) {
          for (int r = 0; r < int(bi.size()); ++r) m(bi[r], c) = y(r, c);
          m(di[c], c) = 1;
        }
        return m;
      }
      if (n == k + 1) return select(Matrix::identity(R, cur.rank(k + 1)), all(k + 1), ej);
      return Matrix::identity(R, cur.rank(n));
    });
    to = compose(step_to, to);
    from = compose(from, step_from);
    cur = next;
  }
  Complex M = cur.trimmed();
  GradedMap t = to.transfer(input, M), f = from.transfer(M, input);
  auto eq = equivalence_from(t, f);
  require(eq.has_value(), ErrorCode::InternalCocycleFailure, "Gaussian elimination did not give an equivalence");
  return {M, *eq};
}

}  // namespace defobs
