#pragma once

// Dense matrices over the tower rings, linear algebra over the residue field,
// and a diagonalizing solver over the (non-field) chain rings.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "defobs/error.hpp"
#include "defobs/rings.hpp"

namespace defobs {

using Vec = std::vector<Elem>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, int rows, int cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {
    require(rows >= 0 && cols >= 0, ErrorCode::DimensionMismatch, "negative matrix dimension");
  }

  static Matrix zero(const Ring& ring, int rows, int cols) { return Matrix(ring, rows, cols); }
  static Matrix identity(const Ring& ring, int n) {
    Matrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  /// Entries given as element codes.
  static Matrix from_rows(const Ring& ring, const std::vector<std::vector<Elem>>& rows, int cols = -1) {
    int r = int(rows.size());
    int c = r ? int(rows[0].size()) : std::max(cols, 0);
    Matrix m(ring, r, c);
    for (int i = 0; i < r; ++i) {
      require(int(rows[i].size()) == c, ErrorCode::DimensionMismatch, "ragged matrix rows");
      for (int j = 0; j < c; ++j) {
        require(ring.contains(rows[i][j]), ErrorCode::InvalidArgument, "matrix entry outside ring");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }
  static Matrix column(const Ring& ring, const Vec& v) {
    Matrix m(ring, int(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.data_[i] = v[i];
    return m;
  }

  const Ring& ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Elem operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  Elem& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const std::vector<Elem>& data() const { return data_; }
  std::vector<Elem>& data() { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ring_ == o.ring_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator+(const Matrix& o) const {
    check_same_shape(o, "+");
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.add(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o, "-");
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.sub(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator-() const {
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.neg(data_[k]);
    return r;
  }
  Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
  Matrix& operator-=(const Matrix& o) { return *this = *this - o; }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, ErrorCode::DimensionMismatch,
            "product of " + shape() + " and " + o.shape());
    require(ring_ == o.ring_, ErrorCode::LevelMismatch, "product across rings");
    Matrix r(ring_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        Elem a = (*this)(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j) {
          Elem b = o(k, j);
          if (b) r(i, j) = ring_.add(r(i, j), ring_.mul(a, b));
        }
      }
    return r;
  }

  Vec apply(const Vec& v) const {
    require(int(v.size()) == cols_, ErrorCode::DimensionMismatch, "vector length mismatch");
    Vec out(rows_, 0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if ((*this)(i, j) && v[j]) out[i] = ring_.add(out[i], ring_.mul((*this)(i, j), v[j]));
    return out;
  }

  Matrix scaled(Elem c) const {
    Matrix r(ring_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.mul(c, data_[k]);
    return r;
  }

  Matrix transpose() const {
    Matrix r(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  Matrix block(int r0, int c0, int nr, int nc) const {
    require(r0 >= 0 && c0 >= 0 && r0 + nr <= rows_ && c0 + nc <= cols_, ErrorCode::DimensionMismatch,
            "block out of range");
    Matrix r(ring_, nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }

  void set_block(int r0, int c0, const Matrix& b) {
    require(r0 >= 0 && c0 >= 0 && r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, ErrorCode::DimensionMismatch,
            "set_block out of range");
    require(b.empty() || b.ring_ == ring_, ErrorCode::LevelMismatch, "set_block across rings");
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  /// Assemble from a grid of blocks; row heights and column widths must be consistent.
  static Matrix from_blocks(const Ring& ring, const std::vector<std::vector<Matrix>>& grid) {
    if (grid.empty()) return Matrix(ring, 0, 0);
    std::vector<int> heights, widths;
    for (auto& row : grid) heights.push_back(row.empty() ? 0 : row[0].rows());
    for (auto& b : grid[0]) widths.push_back(b.cols());
    int total_r = 0, total_c = 0;
    for (int h : heights) total_r += h;
    for (int w : widths) total_c += w;
    Matrix m(ring, total_r, total_c);
    int r0 = 0;
    for (std::size_t bi = 0; bi < grid.size(); ++bi) {
      require(grid[bi].size() == widths.size(), ErrorCode::DimensionMismatch, "ragged block grid");
      int c0 = 0;
      for (std::size_t bj = 0; bj < widths.size(); ++bj) {
        const Matrix& b = grid[bi][bj];
        require(b.rows() == heights[bi] && b.cols() == widths[bj], ErrorCode::DimensionMismatch,
                "inconsistent block sizes");
        m.set_block(r0, c0, b);
        c0 += widths[bj];
      }
      r0 += heights[bi];
    }
    return m;
  }

  static Matrix block_diagonal(const Ring& ring, const std::vector<Matrix>& blocks) {
    int r = 0, c = 0;
    for (auto& b : blocks) r += b.rows(), c += b.cols();
    Matrix m(ring, r, c);
    r = c = 0;
    for (auto& b : blocks) {
      m.set_block(r, c, b);
      r += b.rows();
      c += b.cols();
    }
    return m;
  }

  /// Entrywise reduction to a lower level.
  Matrix reduce_to(const Ring& target) const {
    require(ring_.same_family(target), ErrorCode::FamilyMismatch, "matrix reduction across families");
    require(target.length() <= ring_.length(), ErrorCode::LevelError, "matrix reduction must go down");
    Matrix r(target, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] % target.size();
    return r;
  }

  /// Canonical entrywise lift to a higher level.
  Matrix lift_to(const Ring& target) const {
    require(ring_.same_family(target), ErrorCode::FamilyMismatch, "matrix lift across families");
    require(target.length() >= ring_.length(), ErrorCode::LevelError, "matrix lift must go up");
    Matrix r(target, rows_, cols_);
    r.data_ = data_;
    return r;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < rows_; ++i) {
      os << (i ? "," : "") << '[';
      for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << ring_.format((*this)(i, j));
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch,
            std::string("shape mismatch in ") + op + ": " + shape() + " vs " + o.shape());
    require(ring_ == o.ring_, ErrorCode::LevelMismatch, std::string("ring mismatch in ") + op);
  }

  Ring ring_;
  int rows_ = 0, cols_ = 0;
  std::vector<Elem> data_;
};

/// Entrywise b_decompose of a matrix with entries in b; result over R0.
inline Matrix b_decompose(const Tower& tower, const Matrix& m) {
  require(m.ring() == tower.rbar(), ErrorCode::LevelMismatch, "b_decompose expects a matrix over Rbar");
  Matrix out(tower.r0(), m.rows(), m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k) out.data()[k] = tower.b_decompose(m.data()[k]);
  return out;
}

/// c -> c * basis(b), entrywise, from R0 to Rbar.
inline Matrix b_scale(const Tower& tower, const Matrix& m) {
  require(m.ring() == tower.r0(), ErrorCode::LevelMismatch, "b_scale expects a matrix over R0");
  Matrix out(tower.rbar(), m.rows(), m.cols());
  for (std::size_t k = 0; k < m.data().size(); ++k) out.data()[k] = tower.b_scale(m.data()[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Linear algebra over the residue field

struct Echelon {
  Matrix form;              // reduced row echelon form
  std::vector<int> pivots;  // pivot column per nonzero row
  Matrix transform;         // transform * M = form
  Matrix inverse;           // inverse * form = M
  int rank() const { return int(pivots.size()); }
};

inline Echelon rref(const Matrix& m) {
  const Ring& F = m.ring();
  require(F.is_field(), ErrorCode::InvalidArgument, "rref requires a field");
  Matrix a = m;
  Matrix t = Matrix::identity(F, m.rows());
  Matrix ti = Matrix::identity(F, m.rows());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
      for (int j = 0; j < t.cols(); ++j) std::swap(t(r, j), t(piv, j));
      for (int i = 0; i < ti.rows(); ++i) std::swap(ti(i, r), ti(i, piv));
    }
    Elem pv = a(r, c), inv = F.inverse(pv);
    for (int j = 0; j < a.cols(); ++j) a(r, j) = F.mul(a(r, j), inv);
    for (int j = 0; j < t.cols(); ++j) t(r, j) = F.mul(t(r, j), inv);
    for (int i = 0; i < ti.rows(); ++i) ti(i, r) = F.mul(ti(i, r), pv);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Elem f = a(i, c);
      for (int j = 0; j < a.cols(); ++j) a(i, j) = F.sub(a(i, j), F.mul(f, a(r, j)));
      for (int j = 0; j < t.cols(); ++j) t(i, j) = F.sub(t(i, j), F.mul(f, t(r, j)));
      // row_i -= f row_r on the left means column r += f column i on the inverse.
      for (int k = 0; k < ti.rows(); ++k) ti(k, r) = F.add(ti(k, r), F.mul(f, ti(k, i)));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots), std::move(t), std::move(ti)};
}

inline int rank(const Matrix& m) { return rref(m).rank(); }

/// Basis of the kernel of m, as the columns of the returned matrix.
inline Matrix kernel(const Matrix& m) {
  const Ring& F = m.ring();
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix k(F, m.cols(), int(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    int fc = free_cols[f];
    k(fc, int(f)) = 1;
    for (int r = 0; r < e.rank(); ++r) k(e.pivots[r], int(f)) = F.neg(e.form(r, fc));
  }
  return k;
}

/// A subspace of F^n held as its reduced row echelon basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(const Ring& field, int ambient) : basis_(field, 0, ambient) {}

  static Subspace span_rows(const Matrix& rows) {
    Echelon e = rref(rows);
    Subspace s;
    s.basis_ = e.form.block(0, 0, e.rank(), rows.cols());
    s.pivots_ = e.pivots;
    return s;
  }
  static Subspace span_columns(const Matrix& cols) { return span_rows(cols.transpose()); }

  int dim() const { return basis_.rows(); }
  int ambient() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }

  /// Residual of v after reduction against the echelon basis; zero iff v lies in the span.
  Vec reduce(Vec v) const {
    const Ring& F = basis_.ring();
    for (int r = 0; r < dim(); ++r) {
      Elem c = v[pivots_[r]];
      if (!c) continue;
      for (int j = 0; j < ambient(); ++j) v[j] = F.sub(v[j], F.mul(c, basis_(r, j)));
    }
    return v;
  }

  bool contains(const Vec& v) const {
    require(int(v.size()) == ambient(), ErrorCode::DimensionMismatch, "subspace membership length mismatch");
    Vec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; });
  }

  /// Coordinates of v in the echelon basis, if v lies in the span.
  std::optional<Vec> coordinates(const Vec& v) const {
    if (!contains(v)) return std::nullopt;
    Vec c(dim());
    for (int r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
    return c;
  }

  Subspace operator+(const Subspace& o) const {
    Matrix stacked = Matrix::from_blocks(basis_.ring(), {{basis_}, {o.basis_}});
    return span_rows(stacked);
  }

  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }

 private:
  Matrix basis_;
  std::vector<int> pivots_;
};

struct FieldSolution {
  std::optional<Vec> particular;
  Matrix kernel;  // columns span {x : A x = 0}
};

inline FieldSolution solve_field(const Matrix& a, const Vec& b) {
  require(int(b.size()) == a.rows(), ErrorCode::DimensionMismatch, "right-hand side length mismatch");
  const Ring& F = a.ring();
  Matrix aug(F, a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (int i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
  Echelon e = rref(aug);
  FieldSolution out{std::nullopt, kernel(a)};
  if (e.rank() && e.pivots.back() == a.cols()) return out;
  Vec x(a.cols(), 0);
  for (int r = 0; r < e.rank(); ++r) x[e.pivots[r]] = e.form(r, a.cols());
  out.particular = std::move(x);
  return out;
}

/// Cohomology at the middle of V' -> V -> V'' over a field, with a canonical basis.
///
/// The basis is obtained by walking the echelon basis of the cocycles and keeping
/// each vector not already in the span of the coboundaries and the vectors kept so far.
class Cohomology {
 public:
  Cohomology() = default;
  Cohomology(const Matrix& d_in, const Matrix& d_out) : d_in_(d_in) {
    const Ring& F = d_out.ring();
    const int n = d_out.cols();
    require(d_in.rows() == n, ErrorCode::DimensionMismatch, "cohomology: composable maps required");
    cocycles_ = Subspace::span_columns(kernel(d_out));
    boundaries_ = Subspace::span_columns(d_in);
    Subspace acc = boundaries_;
    std::vector<Vec> kept;
    for (int r = 0; r < cocycles_.dim(); ++r) {
      Vec z(n);
      for (int j = 0; j < n; ++j) z[j] = cocycles_.basis()(r, j);
      if (acc.contains(z)) continue;
      kept.push_back(z);
      acc = acc + Subspace::span_rows(Matrix::from_rows(F, {z}));
    }
    basis_ = Matrix(F, n, int(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k)
      for (int j = 0; j < n; ++j) basis_(j, int(k)) = kept[k][j];
    // Columns: kept representatives, then an echelon basis of the coboundaries.
    Matrix all(F, n, dim() + boundaries_.dim());
    all.set_block(0, 0, basis_);
    all.set_block(0, dim(), boundaries_.basis().transpose());
    expand_ = all;
  }

  int dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  const Subspace& cocycles() const { return cocycles_; }
  const Subspace& coboundaries() const { return boundaries_; }

  bool is_cocycle(const Vec& z) const { return cocycles_.contains(z); }
  bool is_coboundary(const Vec& z) const { return boundaries_.contains(z); }

  /// Coordinates of the class of z in the canonical basis.
  Vec coordinates(const Vec& z) const {
    require(is_cocycle(z), ErrorCode::NotACocycle, "coordinates of a non-cocycle");
    auto sol = solve_field(expand_, z);
    require(sol.particular.has_value(), ErrorCode::InternalCocycleFailure, "cocycle outside Z = H + B");
    return Vec(sol.particular->begin(), sol.particular->begin() + dim());
  }

  /// Some x with d_in x = z, if z is a coboundary.
  std::optional<Vec> primitive(const Vec& z) const { return solve_field(d_in_, z).particular; }

  /// Cocycle representing the given coordinates.
  Vec representative(const Vec& coords) const { return basis_.apply(coords); }

 private:
  Matrix d_in_, basis_, expand_;
  Subspace cocycles_, boundaries_;
};

// ---------------------------------------------------------------------------
// Linear systems over a finite chain ring

/// Diagonalization U A V = diag(pi^v_0, ..., pi^v_{r-1}, 0, ...) by full pivoting on
/// minimal valuation. Solves A x = y and produces kernel generators over the ring.
class RingSolver {
 public:
  explicit RingSolver(const Matrix& a) : ring_(a.ring()), m_(a.rows()), n_(a.cols()) {
    const Ring& R = ring_;
    Matrix w = a;
    u_ = Matrix::identity(R, m_);
    v_ = Matrix::identity(R, n_);
    const int N = R.length();
    for (int k = 0; k < std::min(m_, n_); ++k) {
      int bi = -1, bj = -1, bv = N;
      for (int i = k; i < m_ && bv > 0; ++i)
        for (int j = k; j < n_; ++j) {
          Elem x = w(i, j);
          if (!x) continue;
          int v = R.valuation(x);
          if (v < bv) {
            bv = v, bi = i, bj = j;
            if (v == 0) break;
          }
        }
      if (bi < 0) break;
      if (bi != k) {
        swap_rows(w, k, bi);
        swap_rows(u_, k, bi);
      }
      if (bj != k) {
        swap_cols(w, k, bj);
        swap_cols(v_, k, bj);
      }
      Elem unit = R.divide_pi_power(w(k, k), bv);
      Elem uinv = R.inverse(unit);
      scale_row(w, k, uinv);
      scale_row(u_, k, uinv);
      for (int i = k + 1; i < m_; ++i) {
        if (!w(i, k)) continue;
        Elem c = R.divide_pi_power(w(i, k), bv);
        axpy_row(w, i, k, c);
        axpy_row(u_, i, k, c);
      }
      for (int j = k + 1; j < n_; ++j) {
        if (!w(k, j)) continue;
        Elem c = R.divide_pi_power(w(k, j), bv);
        axpy_col(w, j, k, c);
        axpy_col(v_, j, k, c);
      }
      vals_.push_back(bv);
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_; }
  int rank() const { return int(vals_.size()); }
  const std::vector<int>& valuations() const { return vals_; }

  std::optional<Vec> solve(const Vec& y) const {
    require(int(y.size()) == m_, ErrorCode::DimensionMismatch, "ring solve length mismatch");
    const Ring& R = ring_;
    Vec z = u_.apply(y);
    Vec w(n_, 0);
    for (int i = 0; i < m_; ++i) {
      if (i < rank()) {
        if (R.valuation(z[i]) < vals_[i]) return std::nullopt;
        w[i] = R.divide_pi_power(z[i], vals_[i]);
      } else if (z[i]) {
        return std::nullopt;
      }
    }
    return v_.apply(w);
  }

  bool in_image(const Vec& y) const { return solve(y).has_value(); }

  /// Canonical representative data of y modulo the image: equal iff y1 - y2 lies in the image.
  Vec coset_key(const Vec& y) const {
    require(int(y.size()) == m_, ErrorCode::DimensionMismatch, "ring solve length mismatch");
    Vec z = u_.apply(y);
    for (int i = 0; i < rank(); ++i) {
      Elem modulus = 1;
      for (int k = 0; k < vals_[i]; ++k) modulus *= ring_.p();
      z[i] %= modulus;  // the low digits, i.e. the residue modulo pi^v
    }
    return z;
  }

  /// Generators of {x : A x = 0} as a module over the ring.
  std::vector<Vec> kernel_generators() const {
    const Ring& R = ring_;
    std::vector<Vec> out;
    for (int i = 0; i < n_; ++i) {
      Vec e(n_, 0);
      if (i < rank()) {
        if (vals_[i] == 0) continue;
        e[i] = R.pi_power(R.length() - vals_[i]);
      } else {
        e[i] = 1;
      }
      out.push_back(v_.apply(e));
    }
    return out;
  }

  /// log_p of the kernel's cardinality.
  int kernel_length() const {
    int total = (n_ - rank()) * ring_.length();
    for (int v : vals_) total += v;
    return total;
  }

 private:
  static void swap_rows(Matrix& m, int a, int b) {
    for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
  }
  static void swap_cols(Matrix& m, int a, int b) {
    for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
  }
  void scale_row(Matrix& m, int r, Elem c) const {
    for (int j = 0; j < m.cols(); ++j) m(r, j) = ring_.mul(m(r, j), c);
  }
  // row_dst -= c * row_src
  void axpy_row(Matrix& m, int dst, int src, Elem c) const {
    for (int j = 0; j < m.cols(); ++j)
      if (m(src, j)) m(dst, j) = ring_.sub(m(dst, j), ring_.mul(c, m(src, j)));
  }
  // col_dst -= c * col_src
  void axpy_col(Matrix& m, int dst, int src, Elem c) const {
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, src)) m(i, dst) = ring_.sub(m(i, dst), ring_.mul(c, m(i, src)));
  }

  Ring ring_;
  int m_, n_;
  Matrix u_, v_;
  std::vector<int> vals_;
};

/// Inverse of a square matrix over a chain ring, if it is invertible.
inline std::optional<Matrix> invert(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  RingSolver solver(a);
  if (solver.rank() != a.rows()) return std::nullopt;
  for (int v : solver.valuations())
    if (v) return std::nullopt;
  Matrix inv(a.ring(), a.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    Vec e(a.rows(), 0);
    e[j] = 1;
    Vec x = *solver.solve(e);
    for (int i = 0; i < a.rows(); ++i) inv(i, j) = x[i];
  }
  return inv;
}

}  // namespace defobs
