#pragma once

// Bounded cochain complexes of finite free modules, graded maps between them,
// cones, cylinders, Hom complexes and null-homotopy solving.
//
// Conventions:
//   Hom differential  D(f) = d o f - (-1)^|f| f o d
//   Cone(s)^n = F^{n+1} + G^n,  d(a, b) = (-d a, s a + d b)
//   C[k]^n = C^{n+k},           d_{C[k]} = (-1)^k d_C

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "defobs/algebra.hpp"
#include "defobs/error.hpp"
#include "defobs/linalg.hpp"

namespace defobs {

inline int sign_of(int k) { return (k % 2 == 0) ? 1 : -1; }

inline ModuleType concat_types(std::initializer_list<ModuleType> parts) {
  ModuleType out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

class Complex {
 public:
  Complex() : alg_(Algebra::trivial()) {}

  /// types[k] is the module in degree lo + k; diffs[k] maps degree lo + k to lo + k + 1.
  /// A missing last differential is taken to be zero.
  Complex(Ring ring, AlgebraPtr alg, int lo, std::vector<ModuleType> types, std::vector<Matrix> diffs)
      : ring_(std::move(ring)), alg_(std::move(alg)), lo_(lo), types_(std::move(types)), d_(std::move(diffs)) {
    require(d_.size() <= types_.size(), ErrorCode::DimensionMismatch, "more differentials than degrees");
    while (d_.size() < types_.size()) {
      int deg = lo_ + int(d_.size());
      d_.push_back(Matrix(ring_, rank(deg + 1), rank(deg)));
    }
    for (int i = lo_; i <= hi(); ++i) {
      Matrix& m = d_[i - lo_];
      require(m.rows() == rank(i + 1) && m.cols() == rank(i), ErrorCode::DimensionMismatch,
              "differential in degree " + std::to_string(i) + " has shape " + m.shape() + ", expected " +
                  std::to_string(rank(i + 1)) + "x" + std::to_string(rank(i)));
      if (m.empty()) m = Matrix(ring_, m.rows(), m.cols());
      require(m.ring() == ring_, ErrorCode::LevelMismatch,
              "differential in degree " + std::to_string(i) + " lives over another ring");
      if (!alg_->is_trivial())
        require(space(i, i + 1).is_morphism(d_[i - lo_]), ErrorCode::ValidationError,
                "differential in degree " + std::to_string(i) + " is not a module morphism");
    }
  }

  /// Complex of plain free R-modules.
  static Complex free(const Ring& ring, int lo, const std::vector<int>& ranks, std::vector<Matrix> diffs) {
    std::vector<ModuleType> types;
    for (int r : ranks) types.push_back(trivial_type(r));
    return Complex(ring, Algebra::trivial(), lo, std::move(types), std::move(diffs));
  }

  static Complex zero(const Ring& ring, AlgebraPtr alg = Algebra::trivial()) {
    return Complex(ring, std::move(alg), 0, {}, {});
  }

  /// Complex assembled from per-degree callbacks on [lo, hi].
  static Complex build(const Ring& ring, AlgebraPtr alg, int lo, int hi, const std::function<ModuleType(int)>& type,
                       const std::function<Matrix(int)>& diff) {
    std::vector<ModuleType> types;
    for (int i = lo; i <= hi; ++i) types.push_back(type(i));
    std::vector<Matrix> diffs;
    for (int i = lo; i <= hi; ++i) diffs.push_back(diff(i));
    return Complex(ring, std::move(alg), lo, std::move(types), std::move(diffs)).trimmed();
  }

  const Ring& ring() const { return ring_; }
  const AlgebraPtr& algebra() const { return alg_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(types_.size()) - 1; }
  bool in_support(int i) const { return i >= lo_ && i <= hi(); }
  bool is_zero_object() const {
    for (auto& t : types_)
      if (!t.empty()) return false;
    return true;
  }

  const ModuleType& type(int i) const {
    static const ModuleType empty;
    return in_support(i) ? types_[i - lo_] : empty;
  }
  int rank(int i) const { return module_rank(*alg_, type(i)); }
  int total_rank() const {
    int r = 0;
    for (int i = lo_; i <= hi(); ++i) r += rank(i);
    return r;
  }

  /// Differential d^i : C^i -> C^{i+1}; zero outside the support.
  Matrix d(int i) const {
    if (in_support(i)) return d_[i - lo_];
    return Matrix(ring_, rank(i + 1), rank(i));
  }
  const Matrix& d_ref(int i) const { return d_.at(i - lo_); }

  void set_d(int i, const Matrix& m) {
    require(in_support(i), ErrorCode::DimensionMismatch, "set_d outside support");
    require(m.rows() == rank(i + 1) && m.cols() == rank(i), ErrorCode::DimensionMismatch, "set_d shape");
    d_[i - lo_] = m;
  }

  MorphismSpace space(int i, int j) const { return MorphismSpace(alg_, ring_, type(i), type(j)); }

  /// First degree i with d^{i+1} d^i != 0, if any.
  std::optional<int> first_defect() const {
    for (int i = lo_; i < hi(); ++i)
      if (!(d(i + 1) * d(i)).is_zero()) return i;
    return std::nullopt;
  }
  bool is_complex() const { return !first_defect().has_value(); }
  void check() const {
    if (auto i = first_defect())
      fail(ErrorCode::NotAComplex,
           "d^" + std::to_string(*i + 1) + " o d^" + std::to_string(*i) + " != 0");
  }

  Complex base_change(const Ring& target) const {
    std::vector<Matrix> diffs;
    for (auto& m : d_) diffs.push_back(m.reduce_to(target));
    return Complex(target, alg_, lo_, types_, std::move(diffs));
  }

  Complex shift(int k) const {
    std::vector<Matrix> diffs;
    for (auto& m : d_) diffs.push_back(k % 2 ? -m : m);
    return Complex(ring_, alg_, lo_ - k, types_, std::move(diffs));
  }

  /// Drops zero modules at both ends of the support.
  Complex trimmed() const {
    int a = lo_, b = hi();
    while (a <= b && type(a).empty()) ++a;
    while (b >= a && type(b).empty()) --b;
    if (a > b) return Complex(ring_, alg_, 0, {}, {});
    if (a == lo_ && b == hi()) return *this;
    std::vector<ModuleType> types(types_.begin() + (a - lo_), types_.begin() + (b - lo_ + 1));
    std::vector<Matrix> diffs(d_.begin() + (a - lo_), d_.begin() + (b - lo_ + 1));
    return Complex(ring_, alg_, a, std::move(types), std::move(diffs));
  }

  bool operator==(const Complex& o) const {
    Complex a = trimmed(), b = o.trimmed();
    return a.ring_ == b.ring_ && a.alg_ == b.alg_ && a.lo_ == b.lo_ && a.types_ == b.types_ && a.d_ == b.d_;
  }
  bool operator!=(const Complex& o) const { return !(*this == o); }

 private:
  Ring ring_;
  AlgebraPtr alg_;
  int lo_ = 0;
  std::vector<ModuleType> types_;
  std::vector<Matrix> d_;
};

/// A family of module maps f^i : X^i -> Y^{i+k}.
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(Complex src, Complex tgt, int degree, std::vector<Matrix> comps)
      : src_(std::move(src)), tgt_(std::move(tgt)), deg_(degree), c_(std::move(comps)) {
    require(src_.ring() == tgt_.ring(), ErrorCode::LevelMismatch, "map between complexes over different rings");
    require(src_.algebra() == tgt_.algebra(), ErrorCode::LevelMismatch, "map between complexes over different algebras");
    const int n = src_.is_zero_object() ? 0 : src_.hi() - src_.lo() + 1;
    require(int(c_.size()) == n, ErrorCode::DimensionMismatch, "one component per source degree required");
    for (int i = src_.lo(); i < src_.lo() + n; ++i) {
      Matrix& m = c_[i - src_.lo()];
      require(m.rows() == tgt_.rank(i + deg_) && m.cols() == src_.rank(i), ErrorCode::DimensionMismatch,
              "component in degree " + std::to_string(i) + " has shape " + m.shape());
      if (m.empty()) m = Matrix(src_.ring(), m.rows(), m.cols());
      require(m.ring() == src_.ring(), ErrorCode::LevelMismatch, "component over the wrong ring");
    }
  }

  static GradedMap zero(const Complex& src, const Complex& tgt, int degree) {
    std::vector<Matrix> comps;
    if (!src.is_zero_object())
      for (int i = src.lo(); i <= src.hi(); ++i) comps.emplace_back(src.ring(), tgt.rank(i + degree), src.rank(i));
    return GradedMap(src, tgt, degree, std::move(comps));
  }
  static GradedMap identity(const Complex& c) {
    std::vector<Matrix> comps;
    if (!c.is_zero_object())
      for (int i = c.lo(); i <= c.hi(); ++i) comps.push_back(Matrix::identity(c.ring(), c.rank(i)));
    return GradedMap(c, c, 0, std::move(comps));
  }
  static GradedMap build(const Complex& src, const Complex& tgt, int degree, const std::function<Matrix(int)>& fn) {
    std::vector<Matrix> comps;
    if (!src.is_zero_object())
      for (int i = src.lo(); i <= src.hi(); ++i) comps.push_back(fn(i));
    return GradedMap(src, tgt, degree, std::move(comps));
  }

  const Complex& source() const { return src_; }
  const Complex& target() const { return tgt_; }
  int degree() const { return deg_; }
  const Ring& ring() const { return src_.ring(); }

  /// f^i; a zero matrix outside the source support.
  Matrix at(int i) const {
    if (src_.in_support(i) && !src_.is_zero_object()) return c_[i - src_.lo()];
    return Matrix(src_.ring(), tgt_.rank(i + deg_), src_.rank(i));
  }
  const std::vector<Matrix>& components() const { return c_; }
  void set(int i, const Matrix& m) {
    require(src_.in_support(i), ErrorCode::DimensionMismatch, "set outside source support");
    require(m.rows() == tgt_.rank(i + deg_) && m.cols() == src_.rank(i), ErrorCode::DimensionMismatch,
            "component shape mismatch");
    c_[i - src_.lo()] = m;
  }

  bool is_zero() const {
    for (auto& m : c_)
      if (!m.is_zero()) return false;
    return true;
  }

  GradedMap operator+(const GradedMap& o) const { return combine(o, false); }
  GradedMap operator-(const GradedMap& o) const { return combine(o, true); }
  GradedMap operator-() const {
    GradedMap r = *this;
    for (auto& m : r.c_) m = -m;
    return r;
  }
  GradedMap scaled(Elem c) const {
    GradedMap r = *this;
    for (auto& m : r.c_) m = m.scaled(c);
    return r;
  }
  bool operator==(const GradedMap& o) const {
    return deg_ == o.deg_ && src_ == o.src_ && tgt_ == o.tgt_ && c_ == o.c_;
  }

  /// D(f) = d o f - (-1)^k f o d, of degree k + 1.
  GradedMap differential() const {
    return build(src_, tgt_, deg_ + 1, [&](int i) {
      return tgt_.d(i + deg_) * at(i) - (at(i + 1) * src_.d(i)).scaled(sign_elem(deg_));
    });
  }
  bool is_chain_map() const { return differential().is_zero(); }

  GradedMap base_change(const Ring& target) const {
    std::vector<Matrix> comps;
    for (auto& m : c_) comps.push_back(m.reduce_to(target));
    return GradedMap(src_.base_change(target), tgt_.base_change(target), deg_, std::move(comps));
  }

  /// Same map between complexes with the same graded modules, possibly trimmed differently.
  GradedMap transfer(const Complex& src, const Complex& tgt) const {
    return build(src, tgt, deg_, [&](int i) { return at(i); });
  }

  /// Same components viewed between other complexes with identical graded modules.
  GradedMap retarget(const Complex& src, const Complex& tgt) const { return GradedMap(src, tgt, deg_, c_); }

 private:
  Elem sign_elem(int k) const { return k % 2 ? ring().neg(1) : 1; }
  GradedMap combine(const GradedMap& o, bool subtract) const {
    require(deg_ == o.deg_, ErrorCode::DimensionMismatch, "sum of maps of different degrees");
    require(c_.size() == o.c_.size(), ErrorCode::DimensionMismatch, "sum of maps with different sources");
    GradedMap r = *this;
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = subtract ? c_[k] - o.c_[k] : c_[k] + o.c_[k];
    return r;
  }

  Complex src_, tgt_;
  int deg_ = 0;
  std::vector<Matrix> c_;
};

/// g o f.
inline GradedMap compose(const GradedMap& g, const GradedMap& f) {
  return GradedMap::build(f.source(), g.target(), f.degree() + g.degree(),
                          [&](int i) { return g.at(i + f.degree()) * f.at(i); });
}

using ChainMap = GradedMap;

/// Witness that two maps X -> Y agree up to homotopy: g - f = d h + h d.
struct Homotopy {
  GradedMap f, g, h;
  bool verify() const { return (g - f) == h.differential(); }
};

// ---------------------------------------------------------------------------
// Cones and cylinders

/// Smallest interval containing the supports of the given complexes, each shifted by its offset.
inline std::pair<int, int> support_union(std::initializer_list<std::pair<const Complex&, int>> parts) {
  int lo = 0, hi = -1;
  bool any = false;
  for (auto& [c, off] : parts) {
    if (c.is_zero_object()) continue;
    Complex t = c.trimmed();
    if (!any) {
      lo = t.lo() + off, hi = t.hi() + off, any = true;
    } else {
      lo = std::min(lo, t.lo() + off);
      hi = std::max(hi, t.hi() + off);
    }
  }
  return {lo, hi};
}

struct ConeTriangle {
  Complex cone;
  GradedMap inclusion;   // G -> Cone(s)
  GradedMap projection;  // Cone(s) -> F[1]
  GradedMap witness;     // F -> Cone(s) of degree -1 with D(witness) = inclusion o s
};

inline ConeTriangle cone(const ChainMap& s) {
  require(s.degree() == 0, ErrorCode::InvalidArgument, "cone of a map of nonzero degree");
  const Complex& F = s.source();
  const Complex& G = s.target();
  const Ring& R = F.ring();
  auto [lo, hi] = support_union({{F, -1}, {G, 0}});
  Complex C = Complex::build(
      R, F.algebra(), lo, hi, [&](int n) { return concat_types({F.type(n + 1), G.type(n)}); },
      [&](int n) {
        return Matrix::from_blocks(R, {{-F.d(n + 1), Matrix(R, F.rank(n + 2), G.rank(n))},
                                       {s.at(n + 1), G.d(n)}});
      });
  GradedMap inc = GradedMap::build(G, C, 0, [&](int n) {
    return Matrix::from_blocks(R, {{Matrix(R, F.rank(n + 1), G.rank(n))}, {Matrix::identity(R, G.rank(n))}});
  });
  Complex F1 = F.shift(1);
  GradedMap proj = GradedMap::build(C, F1, 0, [&](int n) {
    return Matrix::from_blocks(R, {{Matrix::identity(R, F.rank(n + 1)), Matrix(R, F.rank(n + 1), G.rank(n))}});
  });
  GradedMap w = GradedMap::build(F, C, -1, [&](int n) {
    return Matrix::from_blocks(R, {{Matrix::identity(R, F.rank(n))}, {Matrix(R, G.rank(n - 1), F.rank(n))}});
  });
  return {std::move(C), std::move(inc), std::move(proj), std::move(w)};
}

/// Factorization s = q o j through the mapping cylinder Cyl^n = F^n + F^{n+1} + G^n,
/// d(a, b, c) = (d a - b, -d b, s b + d c).
struct Cylinder {
  Complex cyl;
  GradedMap j;  // F -> Cyl, a -> (a, 0, 0), degreewise split
  GradedMap r;  // degreewise retraction of j (not a chain map)
  GradedMap q;  // Cyl -> G, (a, b, c) -> s a + c
  GradedMap i;  // G -> Cyl, c -> (0, 0, c), homotopy inverse of q
  GradedMap h;  // degree -1 on Cyl with id - i q = D(h)
};

inline Cylinder cylinder_factor(const ChainMap& s) {
  require(s.degree() == 0, ErrorCode::InvalidArgument, "cylinder of a map of nonzero degree");
  const Complex& F = s.source();
  const Complex& G = s.target();
  const Ring& R = F.ring();
  auto [lo, hi] = support_union({{F, 0}, {F, -1}, {G, 0}});
  auto Z = [&](int r, int c) { return Matrix(R, r, c); };
  auto I = [&](int n) { return Matrix::identity(R, n); };
  Complex C = Complex::build(
      R, F.algebra(), lo, hi, [&](int n) { return concat_types({F.type(n), F.type(n + 1), G.type(n)}); },
      [&](int n) {
        int a0 = F.rank(n), b0 = F.rank(n + 1), c0 = G.rank(n);
        int a1 = F.rank(n + 1), b1 = F.rank(n + 2), c1 = G.rank(n + 1);
        return Matrix::from_blocks(R, {{F.d(n), -I(a1), Z(a1, c0)},
                                       {Z(b1, a0), -F.d(n + 1), Z(b1, c0)},
                                       {Z(c1, a0), s.at(n + 1), G.d(n)}});
      });
  GradedMap j = GradedMap::build(F, C, 0, [&](int n) {
    return Matrix::from_blocks(R, {{I(F.rank(n))}, {Z(F.rank(n + 1), F.rank(n))}, {Z(G.rank(n), F.rank(n))}});
  });
  GradedMap r = GradedMap::build(C, F, 0, [&](int n) {
    return Matrix::from_blocks(R, {{I(F.rank(n)), Z(F.rank(n), F.rank(n + 1)), Z(F.rank(n), G.rank(n))}});
  });
  GradedMap q = GradedMap::build(C, G, 0, [&](int n) {
    return Matrix::from_blocks(R, {{s.at(n), Z(G.rank(n), F.rank(n + 1)), I(G.rank(n))}});
  });
  GradedMap i = GradedMap::build(G, C, 0, [&](int n) {
    return Matrix::from_blocks(R, {{Z(F.rank(n), G.rank(n))}, {Z(F.rank(n + 1), G.rank(n))}, {I(G.rank(n))}});
  });
  GradedMap h = GradedMap::build(C, C, -1, [&](int n) {
    // (a, b, c) in degree n -> (0, -a, 0) in degree n - 1, where F^n is the middle summand.
    int a0 = F.rank(n), b0 = F.rank(n + 1), c0 = G.rank(n);
    int a1 = F.rank(n - 1), c1 = G.rank(n - 1);
    return Matrix::from_blocks(R, {{Z(a1, a0), Z(a1, b0), Z(a1, c0)},
                                   {-I(a0), Z(a0, b0), Z(a0, c0)},
                                   {Z(c1, a0), Z(c1, b0), Z(c1, c0)}});
  });
  return {std::move(C), std::move(j), std::move(r), std::move(q), std::move(i), std::move(h)};
}

// ---------------------------------------------------------------------------
// Hom complexes

/// Hom^n(X, Y) = prod_i Hom(X^i, Y^{i+n}), in module-morphism coordinates.
class HomComplex {
 public:
  HomComplex(Complex x, Complex y) : x_(std::move(x)), y_(std::move(y)) {
    require(x_.ring() == y_.ring(), ErrorCode::LevelMismatch, "Hom between complexes over different rings");
    require(x_.algebra() == y_.algebra(), ErrorCode::LevelMismatch, "Hom between complexes over different algebras");
    if (x_.is_zero_object() || y_.is_zero_object()) {
      lo_ = 0, hi_ = -1;
    } else {
      lo_ = y_.lo() - x_.hi();
      hi_ = y_.hi() - x_.lo();
    }
  }

  const Complex& source() const { return x_; }
  const Complex& target() const { return y_; }
  const Ring& ring() const { return x_.ring(); }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  struct Block {
    int i;  // source degree
    int offset;
    MorphismSpace space;
  };

  const std::vector<Block>& blocks(int n) const {
    auto it = blocks_.find(n);
    if (it != blocks_.end()) return it->second;
    std::vector<Block> out;
    int off = 0;
    if (!x_.is_zero_object())
      for (int i = x_.lo(); i <= x_.hi(); ++i) {
        MorphismSpace sp(x_.algebra(), ring(), x_.type(i), y_.type(i + n));
        int d = sp.dim();
        if (!d) continue;
        out.push_back({i, off, std::move(sp)});
        off += d;
      }
    return blocks_.emplace(n, std::move(out)).first->second;
  }

  int dim(int n) const {
    int d = 0;
    for (auto& b : blocks(n)) d += b.space.dim();
    return d;
  }

  Vec to_vector(const GradedMap& f) const {
    const int n = f.degree();
    Vec v(dim(n), 0);
    for (auto& b : blocks(n)) {
      Vec c = b.space.coordinates(f.at(b.i));
      std::copy(c.begin(), c.end(), v.begin() + b.offset);
    }
    return v;
  }

  GradedMap from_vector(int n, const Vec& v) const {
    require(int(v.size()) == dim(n), ErrorCode::DimensionMismatch, "Hom vector length mismatch");
    GradedMap f = GradedMap::zero(x_, y_, n);
    for (auto& b : blocks(n)) {
      Vec c(v.begin() + b.offset, v.begin() + b.offset + b.space.dim());
      f.set(b.i, b.space.realize(c));
    }
    return f;
  }

  /// The differential D : Hom^n -> Hom^{n+1} as a matrix.
  const Matrix& d(int n) const {
    auto it = d_.find(n);
    if (it != d_.end()) return it->second;
    Matrix m = x_.algebra()->is_trivial() ? d_trivial(n) : d_generic(n);
    return d_.emplace(n, std::move(m)).first->second;
  }

  /// Cohomology in degree n; requires a field.
  Cohomology cohomology(int n) const { return Cohomology(d(n - 1), d(n)); }

 private:
  Matrix d_generic(int n) const {
    const int rows = dim(n + 1), cols = dim(n);
    Matrix m(ring(), rows, cols);
    for (auto& b : blocks(n))
      for (int k = 0; k < b.space.dim(); ++k) {
        Vec v(cols, 0);
        v[b.offset + k] = 1;
        Vec image = to_vector(from_vector(n, v).differential());
        for (int r = 0; r < rows; ++r) m(r, b.offset + k) = image[r];
      }
    return m;
  }

  Matrix d_trivial(int n) const {
    const Ring& R = ring();
    const int rows = dim(n + 1), cols = dim(n);
    Matrix m(R, rows, cols);
    const Elem sgn = n % 2 ? R.one() : R.neg(R.one());  // coefficient of f o d is -(-1)^n
    std::map<int, int> off_n, off_n1;
    for (auto& b : blocks(n)) off_n[b.i] = b.offset;
    for (auto& b : blocks(n + 1)) off_n1[b.i] = b.offset;
    for (auto& [i, row_off] : off_n1) {
      const int nb = x_.rank(i), na1 = y_.rank(i + n + 1);
      // d_Y o f^i
      if (auto it = off_n.find(i); it != off_n.end()) {
        const Matrix dy = y_.d(i + n);
        const int na = y_.rank(i + n);
        for (int a1 = 0; a1 < na1; ++a1)
          for (int a = 0; a < na; ++a) {
            Elem c = dy(a1, a);
            if (!c) continue;
            for (int bb = 0; bb < nb; ++bb) m(row_off + a1 * nb + bb, it->second + a * nb + bb) = c;
          }
      }
      // -(-1)^n f^{i+1} o d_X
      if (auto it = off_n.find(i + 1); it != off_n.end()) {
        const Matrix dx = x_.d(i);
        const int nb1 = x_.rank(i + 1);
        for (int a1 = 0; a1 < na1; ++a1)
          for (int b1 = 0; b1 < nb1; ++b1)
            for (int bb = 0; bb < nb; ++bb) {
              Elem c = dx(b1, bb);
              if (!c) continue;
              Elem& e = m(row_off + a1 * nb + bb, it->second + a1 * nb1 + b1);
              e = R.add(e, R.mul(sgn, c));
            }
      }
    }
    return m;
  }

  Complex x_, y_;
  int lo_ = 0, hi_ = -1;
  mutable std::map<int, std::vector<Block>> blocks_;
  mutable std::map<int, Matrix> d_;
};

/// Decides null-homotopy of degree-0 maps X -> Y over any ring of the family.
class NullHomotopySolver {
 public:
  NullHomotopySolver(const Complex& x, const Complex& y) : hom_(x, y), solver_(hom_.d(-1)) {}

  const HomComplex& hom() const { return hom_; }

  /// h with f = d h + h d, if one exists.
  std::optional<GradedMap> solve(const GradedMap& f) const {
    require(f.degree() == 0, ErrorCode::InvalidArgument, "null-homotopy of a map of nonzero degree");
    auto x = solver_.solve(hom_.to_vector(f));
    if (!x) return std::nullopt;
    return hom_.from_vector(-1, *x);
  }

  bool is_null_homotopic(const GradedMap& f) const { return solve(f).has_value(); }

  /// Equal for f and g iff f - g is null-homotopic.
  Vec homotopy_key(const GradedMap& f) const { return solver_.coset_key(hom_.to_vector(f)); }

 private:
  HomComplex hom_;
  RingSolver solver_;
};

inline std::optional<GradedMap> null_homotopy_solve(const GradedMap& f) {
  return NullHomotopySolver(f.source(), f.target()).solve(f);
}

inline std::optional<Homotopy> homotopy_between(const GradedMap& f, const GradedMap& g) {
  auto h = null_homotopy_solve(g - f);
  if (!h) return std::nullopt;
  return Homotopy{f, g, *h};
}

/// Generators of the module of chain maps X -> Y of degree n.
inline std::vector<GradedMap> chain_map_generators(const Complex& x, const Complex& y, int n = 0) {
  HomComplex hom(x, y);
  RingSolver solver(hom.d(n));
  std::vector<GradedMap> out;
  for (auto& v : solver.kernel_generators()) out.push_back(hom.from_vector(n, v));
  return out;
}

/// H^n of a complex over a field.
inline Cohomology cohomology(const Complex& c, int n) { return Cohomology(c.d(n - 1), c.d(n)); }

/// Whether the complex is exact in every degree; over a chain ring this is decided with the ring solver.
inline bool is_acyclic(const Complex& c) {
  if (c.is_zero_object()) return true;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    RingSolver image(c.d(n - 1));
    for (auto& z : RingSolver(c.d(n)).kernel_generators())
      if (!image.in_image(z)) return false;
  }
  return true;
}

inline Complex base_change(const Complex& c, const Ring& target) { return c.base_change(target); }
inline GradedMap base_change(const GradedMap& f, const Ring& target) { return f.base_change(target); }

}  // namespace defobs
