#pragma once

// Finite-dimensional basic algebras given by a basis of paths between vertices
// and integer structure constants, their free right modules, and the
// realization of module morphisms as matrices over a coefficient ring.
//
// A free module is a list of vertices v_1, ..., v_k standing for e_{v_1}A + ... + e_{v_k}A.
// Hom(e_i A, e_j A) = e_j A e_i acting by left multiplication. Over a ring R a free
// module e_v A is R-free on the basis elements x with x = e_v x; morphisms are
// stored as R-matrices in that basis and are addressed by their coordinates in
// the bases of the e_j A e_i.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "defobs/error.hpp"
#include "defobs/linalg.hpp"

namespace defobs {

class Algebra {
 public:
  struct BasisElement {
    int target = 0, source = 0;  // x = e_target x e_source
    std::string label;
  };
  using Term = std::pair<int, long long>;  // (basis index, coefficient)

  Algebra(std::string name, int vertices, std::vector<BasisElement> basis,
          std::map<std::pair<int, int>, std::vector<Term>> products, std::vector<int> idempotents)
      : name_(std::move(name)), vertices_(vertices), basis_(std::move(basis)), idempotents_(std::move(idempotents)) {
    const int n = size();
    table_.assign(std::size_t(n) * n, {});
    for (auto& [key, terms] : products) table_[std::size_t(key.first) * n + key.second] = terms;
    right_basis_.assign(vertices_, {});
    for (int b = 0; b < n; ++b) right_basis_[basis_[b].target].push_back(b);
    position_.assign(n, 0);
    for (int v = 0; v < vertices_; ++v)
      for (std::size_t k = 0; k < right_basis_[v].size(); ++k) position_[right_basis_[v][k]] = int(k);
    validate();
  }

  const std::string& name() const { return name_; }
  int vertices() const { return vertices_; }
  int size() const { return int(basis_.size()); }
  const BasisElement& element(int b) const { return basis_[b]; }
  int idempotent(int v) const { return idempotents_[v]; }
  bool is_trivial() const { return vertices_ == 1 && size() == 1; }

  const std::vector<Term>& product(int a, int b) const { return table_[std::size_t(a) * size() + b]; }

  /// Basis of e_v A, i.e. elements with target v.
  const std::vector<int>& right_basis(int v) const { return right_basis_[v]; }
  int right_rank(int v) const { return int(right_basis_[v].size()); }
  /// Index of basis element b inside right_basis(target(b)).
  int position(int b) const { return position_[b]; }

  /// Basis of e_j A e_i = Hom(e_i A, e_j A).
  std::vector<int> hom_basis(int i, int j) const {
    std::vector<int> out;
    for (int b = 0; b < size(); ++b)
      if (basis_[b].target == j && basis_[b].source == i) out.push_back(b);
    return out;
  }

  /// The one-vertex algebra with basis {1}: free modules are plain R^n.
  static std::shared_ptr<const Algebra> trivial() {
    static const auto alg = std::make_shared<const Algebra>(
        "k", 1, std::vector<BasisElement>{{0, 0, "1"}},
        std::map<std::pair<int, int>, std::vector<Term>>{{{0, 0}, {{0, 1}}}}, std::vector<int>{0});
    return alg;
  }

  /// Upper triangular 2x2 matrices: e1, e2 and alpha = e1 alpha e2.
  static std::shared_ptr<const Algebra> a2() {
    static const auto alg = std::make_shared<const Algebra>(
        "A2", 2, std::vector<BasisElement>{{0, 0, "e1"}, {1, 1, "e2"}, {0, 1, "alpha"}},
        std::map<std::pair<int, int>, std::vector<Term>>{
            {{0, 0}, {{0, 1}}}, {{1, 1}, {{1, 1}}}, {{0, 2}, {{2, 1}}}, {{2, 1}, {{2, 1}}}},
        std::vector<int>{0, 1});
    return alg;
  }

  /// A^op (x) A, whose right modules are A-bimodules: m.(u (x) v) = u m v.
  /// Vertex (a, b) is a * vertices() + b; basis element (u, v) is u * size() + v.
  static std::shared_ptr<const Algebra> enveloping(const Algebra& a) {
    const int n = a.size(), V = a.vertices();
    std::vector<BasisElement> basis;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        // As an element of A^op, u = e_source(u) u e_target(u).
        basis.push_back({a.basis_[u].source * V + a.basis_[v].target, a.basis_[u].target * V + a.basis_[v].source,
                         a.basis_[u].label + "(x)" + a.basis_[v].label});
      }
    std::map<std::pair<int, int>, std::vector<Term>> products;
    for (int x = 0; x < n * n; ++x)
      for (int y = 0; y < n * n; ++y) {
        int u = x / n, v = x % n, u2 = y / n, v2 = y % n;
        // (u (x) v)(u2 (x) v2) = (u2 u) (x) (v v2)
        std::vector<Term> terms;
        for (auto [p, cp] : a.product(u2, u))
          for (auto [q, cq] : a.product(v, v2)) terms.push_back({p * n + q, cp * cq});
        if (!terms.empty()) products[{x, y}] = terms;
      }
    std::vector<int> idem;
    for (int i = 0; i < V; ++i)
      for (int j = 0; j < V; ++j) idem.push_back(a.idempotents_[i] * n + a.idempotents_[j]);
    return std::make_shared<const Algebra>("(" + a.name_ + ")^e", V * V, std::move(basis), std::move(products),
                                           std::move(idem));
  }

 private:
  void validate() const {
    const int n = size();
    require(int(idempotents_.size()) == vertices_, ErrorCode::InvalidArgument, "one idempotent per vertex");
    for (int b = 0; b < n; ++b)
      require(basis_[b].target >= 0 && basis_[b].target < vertices_ && basis_[b].source >= 0 &&
                  basis_[b].source < vertices_,
              ErrorCode::InvalidArgument, "basis element with bad vertex");
    // Associativity on basis triples and compatibility of the vertex grading.
    auto mul_vec = [&](const std::map<int, long long>& x, int b, bool left) {
      std::map<int, long long> out;
      for (auto [a, c] : x)
        for (auto [d, e] : left ? product(b, a) : product(a, b)) out[d] += c * e;
      std::erase_if(out, [](auto& kv) { return kv.second == 0; });
      return out;
    };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (auto [c, coeff] : product(a, b)) {
          require(basis_[a].source == basis_[b].target && basis_[c].target == basis_[a].target &&
                      basis_[c].source == basis_[b].source,
                  ErrorCode::InvalidArgument, "structure constants violate the vertex grading");
          (void)coeff;
        }
        for (int c = 0; c < n; ++c) {
          auto ab_c = mul_vec(mul_vec({{a, 1}}, b, false), c, false);
          auto a_bc = mul_vec(mul_vec({{b, 1}}, c, false), a, true);
          require(ab_c == a_bc, ErrorCode::InvalidArgument, "algebra is not associative");
        }
      }
    for (int v = 0; v < vertices_; ++v) {
      int e = idempotents_[v];
      for (int b = 0; b < n; ++b) {
        auto left = product(e, b), right = product(b, e);
        bool lt = basis_[b].target == v, rs = basis_[b].source == v;
        require(left == (lt ? std::vector<Term>{{b, 1}} : std::vector<Term>{}), ErrorCode::InvalidArgument,
                "idempotent relation fails on the left");
        require(right == (rs ? std::vector<Term>{{b, 1}} : std::vector<Term>{}), ErrorCode::InvalidArgument,
                "idempotent relation fails on the right");
      }
    }
  }

  std::string name_;
  int vertices_;
  std::vector<BasisElement> basis_;
  std::vector<int> idempotents_;
  std::vector<std::vector<Term>> table_;
  std::vector<std::vector<int>> right_basis_;
  std::vector<int> position_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Vertices of the summands of a free module.
using ModuleType = std::vector<int>;

inline int module_rank(const Algebra& a, const ModuleType& t) {
  int r = 0;
  for (int v : t) r += a.right_rank(v);
  return r;
}

inline ModuleType trivial_type(int rank) { return ModuleType(rank, 0); }

/// Hom_A(src, tgt) for free modules, as a free R-module with a coordinate basis.
class MorphismSpace {
 public:
  struct Coordinate {
    int tgt_summand, src_summand, element;
    int row, col;  // where the coordinate is read off a realized matrix
  };

  MorphismSpace(AlgebraPtr algebra, const Ring& ring, ModuleType src, ModuleType tgt)
      : alg_(std::move(algebra)), ring_(ring), src_(std::move(src)), tgt_(std::move(tgt)) {
    const Algebra& A = *alg_;
    src_off_ = offsets(src_);
    tgt_off_ = offsets(tgt_);
    rows_ = module_rank(A, tgt_);
    cols_ = module_rank(A, src_);
    trivial_ = A.is_trivial();
    if (trivial_) return;
    for (std::size_t l = 0; l < tgt_.size(); ++l)
      for (std::size_t k = 0; k < src_.size(); ++k)
        for (int x : A.hom_basis(src_[k], tgt_[l])) {
          int e = A.idempotent(src_[k]);
          coords_.push_back({int(l), int(k), x, tgt_off_[l] + A.position(x), src_off_[k] + A.position(e)});
        }
  }

  int dim() const { return trivial_ ? rows_ * cols_ : int(coords_.size()); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const ModuleType& source() const { return src_; }
  const ModuleType& target() const { return tgt_; }
  const Ring& ring() const { return ring_; }
  /// Coordinate metadata; empty for the trivial algebra.
  const std::vector<Coordinate>& coordinate_list() const { return coords_; }

  Matrix realize(const Vec& c) const {
    require(int(c.size()) == dim(), ErrorCode::DimensionMismatch, "coordinate vector length mismatch");
    Matrix m(ring_, rows_, cols_);
    if (trivial_) {
      m.data() = c;
      return m;
    }
    const Algebra& A = *alg_;
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      if (!c[k]) continue;
      const auto& co = coords_[k];
      int sv = src_[co.src_summand];
      // Column for basis element y of e_sv A: x * y.
      for (int y : A.right_basis(sv))
        for (auto [z, coeff] : A.product(co.element, y)) {
          int r = tgt_off_[co.tgt_summand] + A.position(z);
          int col = src_off_[co.src_summand] + A.position(y);
          m(r, col) = ring_.add(m(r, col), ring_.mul(ring_.from_int(coeff), c[k]));
        }
    }
    return m;
  }

  Vec coordinates(const Matrix& m) const {
    require(m.rows() == rows_ && m.cols() == cols_, ErrorCode::DimensionMismatch,
            "morphism matrix has shape " + m.shape());
    if (trivial_) return m.data();
    Vec c(coords_.size());
    for (std::size_t k = 0; k < coords_.size(); ++k) c[k] = m(coords_[k].row, coords_[k].col);
    return c;
  }

  /// Whether m is the realization of a module morphism.
  bool is_morphism(const Matrix& m) const { return realize(coordinates(m)) == m; }

  Matrix basis_element(int k) const {
    Vec c(dim(), 0);
    c[k] = 1;
    return realize(c);
  }

  /// Same coordinate system over another ring of the family.
  MorphismSpace over(const Ring& ring) const { return MorphismSpace(alg_, ring, src_, tgt_); }

 private:
  std::vector<int> offsets(const ModuleType& t) const {
    std::vector<int> off;
    int o = 0;
    for (int v : t) {
      off.push_back(o);
      o += alg_->right_rank(v);
    }
    return off;
  }

  AlgebraPtr alg_;
  Ring ring_;
  ModuleType src_, tgt_;
  std::vector<int> src_off_, tgt_off_;
  std::vector<Coordinate> coords_;
  int rows_ = 0, cols_ = 0;
  bool trivial_ = false;
};

}  // namespace defobs
