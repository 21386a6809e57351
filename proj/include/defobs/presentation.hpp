#pragma once

// The split-presentation route. A degreewise split mono s: J -> I over R, a fixed lift
// Ibar of I and split lifts s0bar, t0bar give Ibar^i = Jbar^i + Kbar^i with block differential
// [[d11, d12], [d21, d22]]. A graded lift of s is normalized to id + beta; the (2,1) block
//     phi = -beta d11 + d21 + d22 beta
// of the conjugated differential is a 1-cocycle of Hom+ = Hom(I0, I0) / Hom-, where Hom- are
// the maps with vanishing (2,1) block. mu identifies Hom+ with Hom(J0, K0).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "defobs/complexes.hpp"
#include "defobs/obstruction.hpp"

namespace defobs {

struct PresentedProblem {
  Tower tower;
  Complex J, I;  // over R
  GradedMap s;   // J -> I, chain map
  GradedMap t;   // I -> J, degreewise retraction
  Complex Ibar;  // over Rbar

  // Per degree on [lo(), hi()], indexed by i - lo().
  std::vector<Matrix> s0bar, t0bar;  // t0bar s0bar = id
  std::vector<Matrix> kbar, pk;      // basis of Kbar = ker t0bar, and the projection onto it
  std::vector<ModuleType> k_types;
  std::vector<Matrix> d11, d12, d21, d22;

  Complex J0, K0, I0;  // I0 in adapted coordinates, block upper triangular

  LiftProblem problem;  // the lifting problem whose class this presentation computes
  GradedMap kappa;      // K0 -> problem.H0(), chain map

  // Degree range covered by the per-degree vectors.
  int lo_ = 0, hi_ = -1;

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool in_range(int i) const { return i >= lo_ && i <= hi_; }
  Matrix block(const std::vector<Matrix>& v, int i, int rows, int cols) const {
    if (!in_range(i) || !in_range(i + 1)) return Matrix(tower.rbar(), rows, cols);
    return v[i - lo()];
  }
  int rank_k(int i) const { return in_range(i) ? kbar[i - lo()].cols() : 0; }
};

namespace detail {

inline Matrix lift_morphism(const AlgebraPtr& alg, const Ring& from, const Ring& to, const ModuleType& src,
                            const ModuleType& tgt, const Matrix& m) {
  return MorphismSpace(alg, to, src, tgt).realize(MorphismSpace(alg, from, src, tgt).coordinates(m));
}

}  // namespace detail

/// (1 - n) tbar with n = tbar sbar - 1; exact inverse on the left of sbar since n^2 = 0.
inline Matrix normalize_retraction(const Tower& T, const Matrix& sbar, const Matrix& tbar) {
  const Ring& Rb = T.rbar();
  Matrix n = tbar * sbar - Matrix::identity(Rb, sbar.cols());
  b_decompose(T, n);  // n must be b-valued
  Matrix out = (Matrix::identity(Rb, n.rows()) - n) * tbar;
  require(out * sbar == Matrix::identity(Rb, sbar.cols()), ErrorCode::InternalCocycleFailure,
          "normalized retraction is not a left inverse");
  return out;
}

namespace detail {

// Fills everything downstream of s0bar, t0bar; kbar/pk are coordinate-aligned when possible.
inline void decompose(PresentedProblem& pp) {
  const Tower& T = pp.tower;
  const Ring& Rb = T.rbar();
  const Ring& R0 = T.r0();
  const AlgebraPtr& alg = pp.I.algebra();
  if (!pp.in_range(pp.lo())) {
    pp.J0 = pp.J.base_change(R0);
    pp.K0 = Complex::zero(R0, alg);
    pp.I0 = Complex::zero(R0, alg);
    return;
  }
  for (int i = pp.lo(); i <= pp.hi(); ++i) {
    const Matrix& s0 = pp.s0bar[i - pp.lo()];
    const Matrix& t0 = pp.t0bar[i - pp.lo()];
    const int nj = s0.cols(), ni = s0.rows();
    const ModuleType& ti = pp.I.type(i);
    const ModuleType& tj = pp.J.type(i);
    // Aligned: J is the leading summand block of I.
    bool aligned = tj.size() <= ti.size() && std::equal(tj.begin(), tj.end(), ti.begin()) &&
                   s0 == Matrix::from_blocks(Rb, {{Matrix::identity(Rb, nj)}, {Matrix(Rb, ni - nj, nj)}}) &&
                   t0 == Matrix::from_blocks(Rb, {{Matrix::identity(Rb, nj), Matrix(Rb, nj, ni - nj)}});
    if (aligned) {
      pp.kbar.push_back(Matrix::from_blocks(Rb, {{Matrix(Rb, nj, ni - nj)}, {Matrix::identity(Rb, ni - nj)}}));
      pp.pk.push_back(Matrix::from_blocks(Rb, {{Matrix(Rb, ni - nj, nj), Matrix::identity(Rb, ni - nj)}}));
      pp.k_types.emplace_back(ti.begin() + tj.size(), ti.end());
      continue;
    }
    require(alg->is_trivial(), ErrorCode::PresentationUnavailable,
            "complement of a non-aligned split summand is only supported over the trivial algebra");
    RingSolver solver(t0);
    std::vector<Vec> gens = solver.kernel_generators();
    require(solver.rank() == nj && int(gens.size()) == ni - nj, ErrorCode::PresentationUnavailable,
            "retraction is not split surjective in degree " + std::to_string(i));
    Matrix kb(Rb, ni, ni - nj);
    for (int c = 0; c < ni - nj; ++c)
      for (int r = 0; r < ni; ++r) kb(r, c) = gens[c][r];
    auto inv = invert(Matrix::from_blocks(Rb, {{s0, kb}}));
    require(inv.has_value(), ErrorCode::PresentationUnavailable, "J and K do not span I");
    pp.kbar.push_back(kb);
    pp.pk.push_back(inv->block(nj, 0, ni - nj, ni));
    pp.k_types.push_back(trivial_type(ni - nj));
  }
  for (int i = pp.lo(); i <= pp.hi(); ++i) {
    const int k = i - pp.lo();
    Matrix d = pp.Ibar.d(i);
    bool next = pp.in_range(i + 1);
    Matrix t1 = next ? pp.t0bar[k + 1] : Matrix(Rb, 0, d.rows());
    Matrix p1 = next ? pp.pk[k + 1] : Matrix(Rb, 0, d.rows());
    pp.d11.push_back(t1 * d * pp.s0bar[k]);
    pp.d12.push_back(t1 * d * pp.kbar[k]);
    pp.d21.push_back(p1 * d * pp.s0bar[k]);
    pp.d22.push_back(p1 * d * pp.kbar[k]);
    Matrix back = Matrix::from_blocks(Rb, {{next ? Matrix::from_blocks(Rb, {{pp.s0bar[k + 1], pp.kbar[k + 1]}})
                                                 : Matrix(Rb, 0, d.rows())}});
    Matrix blocks = Matrix::from_blocks(Rb, {{pp.d11[k], pp.d12[k]}, {pp.d21[k], pp.d22[k]}});
    Matrix inv_here = Matrix::from_blocks(Rb, {{pp.t0bar[k]}, {pp.pk[k]}});
    require(back * blocks * inv_here == d, ErrorCode::InternalCocycleFailure,
            "block decomposition does not reassemble d_Ibar in degree " + std::to_string(i));
    b_decompose(T, pp.d21[k]);  // J is a subcomplex modulo b
  }
  const int lo = pp.lo(), hi = pp.hi();
  pp.J0 = Complex::build(R0, alg, lo, hi, [&](int i) { return pp.J.type(i); },
                         [&](int i) { return pp.d11[i - lo].reduce_to(R0); });
  pp.K0 = Complex::build(R0, alg, lo, hi, [&](int i) { return pp.k_types[i - lo]; },
                         [&](int i) { return pp.d22[i - lo].reduce_to(R0); });
  pp.I0 = Complex::build(
      R0, alg, lo, hi, [&](int i) { return concat_types({pp.J.type(i), pp.k_types[i - lo]}); },
      [&](int i) {
        const int k = i - lo;
        return Matrix::from_blocks(Rb, {{pp.d11[k], pp.d12[k]}, {Matrix(Rb, pp.d21[k].rows(), pp.d21[k].cols()), pp.d22[k]}})
            .reduce_to(R0);
      });
  require(pp.J0 == pp.J.base_change(R0), ErrorCode::InternalCocycleFailure, "d11 does not reduce to d_J");
  pp.J0.check();
  pp.K0.check();
  pp.I0.check();
}

inline void init_lifts(PresentedProblem& pp) {
  const Tower& T = pp.tower;
  const AlgebraPtr& alg = pp.I.algebra();
  auto [lo, hi] = support_union({{pp.J, 0}, {pp.I, 0}});
  pp.lo_ = lo;
  pp.hi_ = hi;
  for (int i = lo; i <= hi; ++i) {
    Matrix s0 = lift_morphism(alg, T.r(), T.rbar(), pp.J.type(i), pp.I.type(i), pp.s.at(i));
    Matrix t = lift_morphism(alg, T.r(), T.rbar(), pp.I.type(i), pp.J.type(i), pp.t.at(i));
    pp.s0bar.push_back(s0);
    pp.t0bar.push_back(normalize_retraction(T, s0, t));
  }
}

inline void check_split_inputs(const Tower& T, const Complex& J, const Complex& I, const GradedMap& s,
                               const GradedMap& t, const Complex& Ibar) {
  require(J.ring() == T.r() && I.ring() == T.r() && Ibar.ring() == T.rbar(), ErrorCode::LevelMismatch,
          "J, I must be over R and Ibar over Rbar");
  J.check();
  I.check();
  Ibar.check();
  require(Ibar.base_change(T.r()) == I, ErrorCode::ValidationError, "Ibar does not reduce to I");
  require(s.degree() == 0 && s.source() == J && s.target() == I && s.is_chain_map(), ErrorCode::ValidationError,
          "s must be a chain map J -> I");
  require(t.degree() == 0 && t.source() == I && t.target() == J, ErrorCode::ValidationError,
          "t must be a degree-0 graded map I -> J");
  require(compose(t, s) == GradedMap::identity(J), ErrorCode::ValidationError, "t o s != id");
}

}  // namespace detail

/// A split mono s: J -> I with retraction t and a lift Ibar of I. The associated lifting
/// problem is (J, I, s, Ibar), compared through kappa(k) = (-d12 k, k) : K0 -> Cone(s0).
inline PresentedProblem present_split(const Tower& T, const Complex& J, const Complex& I, const GradedMap& s,
                                      const GradedMap& t, const Complex& Ibar) {
  detail::check_split_inputs(T, J, I, s, t, Ibar);
  LiftProblem problem(T, J, I, s, Ibar);
  PresentedProblem pp{T, J, I, s, t, Ibar, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, problem, {}};
  detail::init_lifts(pp);
  detail::decompose(pp);
  const Ring& R0 = T.r0();
  pp.kappa = GradedMap::build(pp.K0, problem.H0(), 0, [&](int n) {
    const int k = n - pp.lo();
    return Matrix::from_blocks(R0, {{-pp.block(pp.d12, n, J.rank(n + 1), pp.rank_k(n)).reduce_to(R0)},
                                    {pp.kbar[k].reduce_to(R0)}});
  });
  require(pp.kappa.is_chain_map(), ErrorCode::InternalCocycleFailure, "kappa is not a chain map");
  return pp;
}

/// Presentation through the cylinder: J = F, I = Cyl(s), and Ibar the conjugate of
/// Cone(id_Fbar) + Gbar by Phi(a, b, c) = (a, b - dbar a, c + sbar a) with canonical lifts
/// dbar, sbar. Then K0 = Cone(s0) on the nose and kappa = id.
inline PresentedProblem present(const LiftProblem& problem) {
  const Tower& T = problem.tower();
  const Ring& Rb = T.rbar();
  const Complex& F = problem.F();
  const Complex& G = problem.G();
  Cylinder cyl = cylinder_factor(problem.s());
  GradedLift g = naive_lift(problem);
  auto dt = [&](int i) {
    return F.in_support(i) && !F.is_zero_object() ? g.d[i - g.lo] : Matrix(Rb, F.rank(i + 1), F.rank(i));
  };
  auto st = [&](int i) {
    return F.in_support(i) && !F.is_zero_object() ? g.s[i - g.lo] : Matrix(Rb, G.rank(i), F.rank(i));
  };
  auto I = [&](int n) { return Matrix::identity(Rb, n); };
  auto Z = [&](int r, int c) { return Matrix(Rb, r, c); };
  auto phi = [&](int n, bool inverse) {
    int a = F.rank(n), b = F.rank(n + 1), c = G.rank(n);
    Matrix d = dt(n), s = st(n);
    if (inverse) return Matrix::from_blocks(Rb, {{I(a), Z(a, b), Z(a, c)}, {d, I(b), Z(b, c)}, {-s, Z(c, b), I(c)}});
    return Matrix::from_blocks(Rb, {{I(a), Z(a, b), Z(a, c)}, {-d, I(b), Z(b, c)}, {s, Z(c, b), I(c)}});
  };
  Complex Ibar;
  if (!cyl.cyl.is_zero_object()) {
    Ibar = Complex::build(
        Rb, F.algebra(), cyl.cyl.lo(), cyl.cyl.hi(), [&](int n) { return cyl.cyl.type(n); },
        [&](int n) {
          int a0 = F.rank(n), b0 = F.rank(n + 1), c0 = G.rank(n);
          int a1 = F.rank(n + 1), b1 = F.rank(n + 2), c1 = G.rank(n + 1);
          Matrix split = Matrix::from_blocks(
              Rb, {{Z(a1, a0), -I(b0), Z(a1, c0)}, {Z(b1, a0), Z(b1, b0), Z(b1, c0)}, {Z(c1, a0), Z(c1, b0), problem.Gbar().d(n)}});
          return phi(n + 1, true) * split * phi(n, false);
        });
  } else {
    Ibar = Complex::zero(Rb, F.algebra());
  }
  Complex Ired = Ibar.base_change(T.r());
  require(Ired == cyl.cyl, ErrorCode::PresentationUnavailable, "transported lift does not reduce to Cyl(s)");
  Ibar.check();
  GradedMap j = cyl.j.transfer(F, Ired), r = cyl.r.transfer(Ired, F);
  detail::check_split_inputs(T, F, Ired, j, r, Ibar);
  PresentedProblem pp{T, F, Ired, j, r, Ibar, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, problem, {}};
  detail::init_lifts(pp);
  detail::decompose(pp);
  require(pp.K0 == problem.H0(), ErrorCode::PresentationUnavailable, "complement is not Cone(s0)");
  pp.kappa = GradedMap::identity(problem.H0()).transfer(pp.K0, problem.H0());
  return pp;
}

// ---------------------------------------------------------------------------
// Hom+ and mu

/// Hom+ built as the quotient of Hom(I0, I0): coordinates are those of the (2,1) block, and the
/// differential is induced from the full Hom differential on I0.
class HomPlus {
 public:
  explicit HomPlus(const PresentedProblem& pp) : pp_(&pp), jk_(pp.J0, pp.K0), ii_(pp.I0, pp.I0) {}

  int dim(int n) const { return jk_.dim(n); }

  /// Embeds a (2,1)-block coordinate vector as an element of Hom^n(I0, I0).
  GradedMap embed(int n, const Vec& v) const {
    GradedMap u = jk_.from_vector(n, v);
    const Ring& R0 = pp_->tower.r0();
    return GradedMap::build(pp_->I0, pp_->I0, n, [&](int i) {
      int nj_src = pp_->J0.rank(i), nk_src = pp_->K0.rank(i);
      int nj_tgt = pp_->J0.rank(i + n), nk_tgt = pp_->K0.rank(i + n);
      return Matrix::from_blocks(R0, {{Matrix(R0, nj_tgt, nj_src), Matrix(R0, nj_tgt, nk_src)},
                                      {u.at(i), Matrix(R0, nk_tgt, nk_src)}});
    });
  }
  /// The (2,1)-block coordinates of an element of Hom^n(I0, I0).
  Vec project(const GradedMap& t) const {
    const int n = t.degree();
    GradedMap u = GradedMap::build(pp_->J0, pp_->K0, n, [&](int i) {
      return t.at(i).block(pp_->J0.rank(i + n), 0, pp_->K0.rank(i + n), pp_->J0.rank(i));
    });
    return jk_.to_vector(u);
  }

  /// Differential of Hom+ in degree n, computed through Hom(I0, I0).
  Matrix d(int n) const {
    const Ring& R0 = pp_->tower.r0();
    Matrix m(R0, dim(n + 1), dim(n));
    for (int c = 0; c < dim(n); ++c) {
      Vec e(dim(n), 0);
      e[c] = 1;
      Vec img = project(embed(n, e).differential());
      for (int r = 0; r < m.rows(); ++r) m(r, c) = img[r];
    }
    return m;
  }

  /// Hom- (vanishing (2,1) block) is a subcomplex, so the quotient is well defined.
  bool minus_is_subcomplex(int n) const {
      const int total = ii_.dim(n);
    for (int c = 0; c < total; ++c) {
      Vec e(total, 0);
      e[c] = 1;
      GradedMap t = ii_.from_vector(n, e);
      Vec own = project(t);
      if (std::any_of(own.begin(), own.end(), [](Elem x) { return x != 0; })) continue;
      Vec img = project(t.differential());
      for (Elem x : img)
        if (x) return false;
    }
    return true;
  }

  Cohomology cohomology(int n) const { return Cohomology(d(n - 1), d(n)); }
  const HomComplex& target() const { return jk_; }

 private:
  const PresentedProblem* pp_;
  HomComplex jk_, ii_;
};

/// mu : Hom+^n -> Hom^n(J0, K0), the restriction to J0 followed by projection to K0.
inline Matrix mu_map(const PresentedProblem& pp, int n) {
  HomPlus plus(pp);
  const Ring& R0 = pp.tower.r0();
  Matrix m(R0, plus.target().dim(n), plus.dim(n));
  for (int c = 0; c < plus.dim(n); ++c) {
    Vec e(plus.dim(n), 0);
    e[c] = 1;
    GradedMap t = plus.embed(n, e);
    GradedMap u = GradedMap::build(pp.J0, pp.K0, n, [&](int i) {
      Matrix restricted = t.at(i).block(0, 0, t.at(i).rows(), pp.J0.rank(i));
      return restricted.block(pp.J0.rank(i + n), 0, pp.K0.rank(i + n), pp.J0.rank(i));
    });
    Vec img = plus.target().to_vector(u);
    for (int r = 0; r < m.rows(); ++r) m(r, c) = img[r];
  }
  return m;
}

/// mu is square, invertible and intertwines the differentials in degrees n and n + 1.
inline bool verify_mu(const PresentedProblem& pp, int n) {
  HomPlus plus(pp);
  if (!plus.minus_is_subcomplex(n)) return false;
  Matrix m0 = mu_map(pp, n), m1 = mu_map(pp, n + 1);
  if (m0.rows() != m0.cols() || m1.rows() != m1.cols()) return false;
  if (!invert(m0) || !invert(m1)) return false;
  return m1 * plus.d(n) == plus.target().d(n) * m0;
}

struct FaithfulClass {
  Vec beta_free_phi;  // phi / b in Hom+^1 coordinates
  Vec coordinates;
  bool is_zero = false;
};

/// phi for the graded lift sbar (default: s0bar), as b^-1 phi in Hom+^1 coordinates.
inline Vec faithful_cocycle(const PresentedProblem& pp, const std::optional<std::vector<Matrix>>& sbar = std::nullopt) {
  const Tower& T = pp.tower;
  const Ring& Rb = T.rbar();
  HomPlus plus(pp);
  std::vector<Matrix> beta;
  for (int i = pp.lo(); i <= pp.hi(); ++i) {
    const int k = i - pp.lo();
    if (!sbar) {
      beta.emplace_back(Rb, pp.rank_k(i), pp.J.rank(i));
      continue;
    }
    const Matrix& sb = (*sbar)[k];
    require(sb.reduce_to(T.r()) == pp.s.at(i), ErrorCode::InvalidArgument, "graded lift does not reduce to s");
    Matrix a = pp.t0bar[k] * sb;
    Matrix one = Matrix::identity(Rb, a.rows());
    Matrix a_inv = one + one - a;  // (a - 1)^2 = 0
    require(a * a_inv == Matrix::identity(Rb, a.rows()), ErrorCode::InternalCocycleFailure, "normalization failed");
    beta.push_back(pp.pk[k] * sb * a_inv);
    b_decompose(T, beta.back());
  }
  GradedMap phi = GradedMap::build(pp.J0, pp.K0, 1, [&](int i) {
    const int k = i - pp.lo();
    const int nj0 = pp.J.rank(i), nk0 = pp.rank_k(i), nj1 = pp.J.rank(i + 1), nk1 = pp.rank_k(i + 1);
    Matrix b0 = beta[k];
    Matrix b1 = pp.in_range(i + 1) ? beta[k + 1] : Matrix(Rb, nk1, nj1);
    // b_sbar = [[1, 0], [beta, 1]] and dtilde = b_sbar^-1 d b_sbar.
    auto bs = [&](const Matrix& b, int nj, int nk, bool inv) {
      return Matrix::from_blocks(Rb, {{Matrix::identity(Rb, nj), Matrix(Rb, nj, nk)},
                                      {inv ? -b : b, Matrix::identity(Rb, nk)}});
    };
    Matrix d = Matrix::from_blocks(Rb, {{pp.block(pp.d11, i, nj1, nj0), pp.block(pp.d12, i, nj1, nk0)},
                                        {pp.block(pp.d21, i, nk1, nj0), pp.block(pp.d22, i, nk1, nk0)}});
    Matrix dt = bs(b1, nj1, nk1, true) * d * bs(b0, nj0, nk0, false);
    Matrix block = dt.block(nj1, 0, nk1, nj0);
    Matrix formula = -(b1 * pp.block(pp.d11, i, nj1, nj0)) + pp.block(pp.d21, i, nk1, nj0) +
                     pp.block(pp.d22, i, nk1, nk0) * b0;
    require(block == formula, ErrorCode::InternalCocycleFailure, "phi does not match its block formula");
    return b_decompose(T, block);
  });
  return plus.target().to_vector(phi);
}

inline FaithfulClass faithful_class(const PresentedProblem& pp,
                                    const std::optional<std::vector<Matrix>>& sbar = std::nullopt) {
  HomPlus plus(pp);
  FaithfulClass out;
  out.beta_free_phi = faithful_cocycle(pp, sbar);
  Cohomology h1 = plus.cohomology(1);
  require(h1.is_cocycle(out.beta_free_phi), ErrorCode::InternalCocycleFailure, "phi is not a cocycle of Hom+");
  out.coordinates = h1.coordinates(out.beta_free_phi);
  out.is_zero = h1.is_coboundary(out.beta_free_phi);
  return out;
}

/// Carries a Hom+^1 cocycle through mu and kappa into Hom^1(F0, H0) of the lifting problem.
inline ObstructionClass mu_transport(const PresentedProblem& pp, const Vec& plus_cocycle) {
  Vec u = mu_map(pp, 1).apply(plus_cocycle);
  HomComplex jk(pp.J0, pp.K0);
  GradedMap image = compose(pp.kappa, jk.from_vector(1, u));
  return class_of(pp.problem, image.transfer(pp.problem.F0(), pp.problem.H0()));
}

inline ObstructionClass mu_transport(const PresentedProblem& pp, const FaithfulClass& c) {
  return mu_transport(pp, c.beta_free_phi);
}

}  // namespace defobs
