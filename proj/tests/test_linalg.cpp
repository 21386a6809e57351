#include <gtest/gtest.h>

#include <set>

#include "defobs/linalg.hpp"
#include "support/generators.hpp"

using namespace defobs;
using testgen::Rng;

namespace {

const Ring F2 = Ring::truncated_poly(2, 1);
const Ring F3 = Ring::integers_mod(3, 1);

// All vectors of F^n in lexicographic order of digits.
std::vector<Vec> all_vectors(const Ring& F, int n) {
  std::vector<Vec> out;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= F.size();
  for (std::uint64_t k = 0; k < total; ++k) {
    Vec v(n);
    std::uint64_t c = k;
    for (int i = 0; i < n; ++i) {
      v[i] = Elem(c % F.size());
      c /= F.size();
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST(Matrix, Basics) {
  Rng rng(1);
  Matrix m = testgen::random_matrix(rng, F3, 3, 4);
  EXPECT_EQ(Matrix::identity(F3, 3) * m, m);
  Matrix a = Matrix::from_rows(F2, {{1, 1}, {1, 1}});
  Matrix b = Matrix::from_rows(F2, {{1}, {1}});
  EXPECT_TRUE((a * b).is_zero());
  EXPECT_EQ(m.transpose().transpose(), m);
  EXPECT_THROW(m * m, Error);
}

TEST(Matrix, BlockRoundTripOfTriangularShape) {
  Rng rng(2);
  Ring R = Ring::truncated_poly(2, 3);
  Matrix beta = testgen::random_matrix(rng, R, 2, 3);
  Matrix b = Matrix::from_blocks(R, {{Matrix::identity(R, 3), Matrix(R, 3, 2)}, {beta, Matrix::identity(R, 2)}});
  EXPECT_EQ(b.block(3, 0, 2, 3), beta);
  EXPECT_EQ(b.block(0, 0, 3, 3), Matrix::identity(R, 3));
  EXPECT_TRUE(b.block(0, 3, 3, 2).is_zero());
  // (1 0; beta 1)^{-1} = (1 0; -beta 1)
  Matrix inv = Matrix::from_blocks(R, {{Matrix::identity(R, 3), Matrix(R, 3, 2)}, {-beta, Matrix::identity(R, 2)}});
  EXPECT_EQ(b * inv, Matrix::identity(R, 5));
}

TEST(Matrix, Associativity) {
  Rng rng(3);
  for (const Ring& R : {Ring::truncated_poly(3, 3), Ring::integers_mod(2, 4)}) {
    for (int t = 0; t < 20; ++t) {
      Matrix a = testgen::random_matrix(rng, R, 3, 4), b = testgen::random_matrix(rng, R, 4, 2),
             c = testgen::random_matrix(rng, R, 2, 3), d = testgen::random_matrix(rng, R, 4, 2);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + d), a * b + a * d);
    }
  }
}

TEST(Matrix, ReduceLiftRoundTrip) {
  Rng rng(4);
  Ring R = Ring::truncated_poly(2, 2), Rbar = Ring::truncated_poly(2, 3);
  for (int t = 0; t < 100; ++t) {
    Matrix m = testgen::random_matrix(rng, R, 3, 2);
    EXPECT_EQ(m.lift_to(Rbar).reduce_to(R), m);
  }
  EXPECT_TRUE(Matrix(R, 2, 2).lift_to(Rbar).is_zero());
  EXPECT_THROW(Matrix(Rbar, 1, 1).lift_to(R), Error);
}

TEST(FieldLinalg, RrefBasics) {
  EXPECT_EQ(rref(Matrix(F3, 3, 4)).rank(), 0);
  EXPECT_EQ(rref(Matrix::identity(F3, 4)).rank(), 4);
  Matrix m = Matrix::from_rows(F3, {{1, 2}, {2, 1}});
  Echelon e = rref(m);
  // [[1,2],[2,1]] has determinant 1 - 4 = 0 mod 3; brute-force kernel has 3 vectors.
  int kernel_size = 0;
  for (auto& v : all_vectors(F3, 2))
    if (m.apply(v) == Vec(2, 0)) ++kernel_size;
  EXPECT_EQ(kernel_size, 3);
  EXPECT_EQ(e.rank(), 1);
  EXPECT_EQ(e.transform * m, e.form);
  EXPECT_EQ(e.inverse * e.form, m);
}

TEST(FieldLinalg, RrefProperties) {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const Ring& F = t % 2 ? F2 : F3;
    Matrix m = testgen::random_matrix(rng, F, testgen::uniform(rng, 1, 5), testgen::uniform(rng, 1, 6));
    Echelon e = rref(m);
    EXPECT_EQ(e.transform * m, e.form);
    EXPECT_EQ(e.inverse * e.form, m);
    EXPECT_EQ(rref(e.form).form, e.form);  // idempotent
    for (std::size_t k = 1; k < e.pivots.size(); ++k) EXPECT_LT(e.pivots[k - 1], e.pivots[k]);
    // Rank is invariant under row and column permutations.
    Matrix p = m;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) p(i, j) = m(m.rows() - 1 - i, (j + 1) % m.cols());
    EXPECT_EQ(rank(p), e.rank());
    EXPECT_EQ(rank(m.transpose()), e.rank());
  }
}

TEST(FieldLinalg, SolveTrivialCases) {
  auto z = solve_field(Matrix(F3, 2, 3), Vec{0, 0});
  ASSERT_TRUE(z.particular);
  EXPECT_EQ(*z.particular, (Vec{0, 0, 0}));
  EXPECT_EQ(z.kernel.cols(), 3);
  auto id = solve_field(Matrix::identity(F3, 3), Vec{2, 0, 1});
  ASSERT_TRUE(id.particular);
  EXPECT_EQ(*id.particular, (Vec{2, 0, 1}));
  EXPECT_EQ(id.kernel.cols(), 0);
}

TEST(FieldLinalg, SolveAgreesWithExhaustiveScan) {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const Ring& F = t % 3 ? F2 : F3;
    int rows = testgen::uniform(rng, 1, 5);
    int cols = F.size() == 2 ? testgen::uniform(rng, 1, 8) : testgen::uniform(rng, 1, 5);
    Matrix a = testgen::random_matrix(rng, F, rows, cols);
    Vec b = t % 2 ? testgen::random_vec(rng, F, rows) : a.apply(testgen::random_vec(rng, F, cols));
    auto sol = solve_field(a, b);
    int solutions = 0, kernel_count = 0;
    for (auto& v : all_vectors(F, cols)) {
      if (a.apply(v) == b) ++solutions;
      if (a.apply(v) == Vec(rows, 0)) ++kernel_count;
    }
    EXPECT_EQ(sol.particular.has_value(), solutions > 0);
    if (sol.particular) EXPECT_EQ(a.apply(*sol.particular), b);
    int expected = 1;
    for (int k = 0; k < sol.kernel.cols(); ++k) expected *= int(F.size());
    EXPECT_EQ(kernel_count, expected);
    EXPECT_TRUE((a * sol.kernel).is_zero());
    if (sol.particular) EXPECT_EQ(solutions, kernel_count);
  }
}

TEST(FieldLinalg, SubspaceOperations) {
  Matrix rows = Matrix::from_rows(F3, {{1, 2, 0}, {2, 1, 0}});
  Subspace s = Subspace::span_rows(rows);
  EXPECT_EQ(s.dim(), 1);
  EXPECT_TRUE(s.contains({2, 1, 0}));
  EXPECT_FALSE(s.contains({0, 0, 1}));
  Subspace t = Subspace::span_rows(Matrix::from_rows(F3, {{0, 0, 1}}));
  EXPECT_EQ((s + t).dim(), 2);
  auto c = s.coordinates({2, 1, 0});
  ASSERT_TRUE(c);
  EXPECT_EQ((*c)[0], 2u);
}

TEST(FieldLinalg, CohomologyCanonicalBasis) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Ring& F = t % 2 ? F2 : F3;
    int a = testgen::uniform(rng, 0, 3), b = testgen::uniform(rng, 1, 5);
    Matrix d_in = testgen::random_matrix(rng, F, b, a);
    // d_out with d_out d_in = 0: rows from the left kernel of d_in.
    Matrix left = kernel(d_in.transpose()).transpose();
    Matrix d_out = testgen::random_matrix(rng, F, 2, left.rows()) * left;
    if (left.rows() == 0) d_out = Matrix(F, 0, b);
    ASSERT_TRUE((d_out * d_in).is_zero());
    Cohomology h(d_in, d_out);
    EXPECT_EQ(h.dim(), (b - rank(d_out)) - rank(d_in));
    Cohomology again(d_in, d_out);
    EXPECT_EQ(h.basis(), again.basis());
    for (int k = 0; k < h.dim(); ++k) {
      Vec e(h.dim(), 0);
      e[k] = 1;
      Vec z = h.representative(e);
      Vec z2 = z;
      Vec bnd = d_in.apply(testgen::random_vec(rng, F, a));
      for (int i = 0; i < b; ++i) z2[i] = F.add(z2[i], bnd[i]);
      EXPECT_EQ(h.coordinates(z2), e);
    }
    Vec bnd = d_in.apply(testgen::random_vec(rng, F, a));
    EXPECT_TRUE(h.is_coboundary(bnd));
    auto prim = h.primitive(bnd);
    ASSERT_TRUE(prim);
    EXPECT_EQ(d_in.apply(*prim), bnd);
  }
}

TEST(RingSolver, AgreesWithExhaustiveScan) {
  Rng rng(8);
  for (const Ring& R : {Ring::truncated_poly(2, 2), Ring::integers_mod(2, 3), Ring::integers_mod(3, 2)}) {
    for (int t = 0; t < 40; ++t) {
      int rows = testgen::uniform(rng, 1, 3), cols = testgen::uniform(rng, 1, R.size() > 4 ? 2 : 3);
      Matrix a = testgen::random_matrix(rng, R, rows, cols);
      // Bias towards non-units to exercise valuations.
      if (t % 2)
        for (auto& x : a.data()) x = R.mul(x, R.pi_power(testgen::uniform(rng, 0, 1)));
      RingSolver solver(a);
      int kernel_count = 0;
      std::set<Vec> image;
      for (auto& v : all_vectors(R, cols)) {
        Vec y = a.apply(v);
        image.insert(y);
        if (y == Vec(rows, 0)) ++kernel_count;
      }
      int expected = 1;
      for (int k = 0; k < solver.kernel_length(); ++k) expected *= int(R.p());
      EXPECT_EQ(kernel_count, expected);
      for (auto& y : all_vectors(R, rows)) {
        auto x = solver.solve(y);
        EXPECT_EQ(x.has_value(), image.count(y) == 1);
        if (x) EXPECT_EQ(a.apply(*x), y);
      }
      // Kernel generators generate the kernel: their span has the right size.
      std::set<Vec> span{Vec(cols, 0)};
      for (auto& g : solver.kernel_generators()) {
        EXPECT_EQ(a.apply(g), Vec(rows, 0));
        std::set<Vec> next;
        for (auto& v : span)
          for (Elem c = 0; c < R.size(); ++c) {
            Vec w = v;
            for (int i = 0; i < cols; ++i) w[i] = R.add(w[i], R.mul(c, g[i]));
            next.insert(w);
          }
        span = std::move(next);
      }
      EXPECT_EQ(int(span.size()), kernel_count);
    }
  }
}

TEST(RingSolver, Inverse) {
  Rng rng(9);
  Ring R = Ring::truncated_poly(3, 3);
  for (int t = 0; t < 20; ++t) {
    Matrix m = testgen::random_invertible(rng, R, 3);
    EXPECT_EQ(*invert(m) * m, Matrix::identity(R, 3));
  }
  Matrix singular = Matrix::from_rows(R, {{R.pi_power(1), 0}, {0, 1}});
  EXPECT_FALSE(invert(singular).has_value());
}

TEST(Tower, MatrixBDecomposition) {
  Tower t = make_tower(Ring::integers_mod(3, 3), Ring::integers_mod(3, 2), Ring::integers_mod(3, 1));
  Matrix c = Matrix::from_rows(t.r0(), {{0, 1}, {2, 1}});
  Matrix b = b_scale(t, c);
  EXPECT_TRUE(b.reduce_to(t.r()).is_zero());
  EXPECT_EQ(b_decompose(t, b), c);
}
