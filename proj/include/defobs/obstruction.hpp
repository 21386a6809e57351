#pragma once

// Obstruction class, constructive lifting and classification of lifts of a
// morphism s: F -> G along a small extension Rbar ->> R, with the lift Gbar of G fixed.
//
// The class lives in H^1 Hom(F0, H0) with H0 = Cone(s0). For a graded lift
// (dbar, sbar) the defect pair
//     e = b^-1 (dbar o dbar),   f = b^-1 (d_Gbar o sbar - sbar o dbar)
// is a 1-cocycle (e; f) of that complex. A degree-0 cochain xi = (x; y) with
// D(xi) = (e; f) corrects the lift to (dbar + b x, sbar - b y).

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "defobs/complexes.hpp"
#include "defobs/error.hpp"
#include "defobs/linalg.hpp"
#include "defobs/rings.hpp"

namespace defobs {

/// Hom(F0, H0) with its cohomology in degrees -1, 0, 1.
struct ObstructionSpace {
  ConeTriangle h0;
  HomComplex hom;
  Cohomology h_minus1, h0_coh, h1;

  ObstructionSpace(const ChainMap& s0)
      : h0(cone(s0)), hom(s0.source(), h0.cone),
        h_minus1(hom.cohomology(-1)), h0_coh(hom.cohomology(0)), h1(hom.cohomology(1)) {}
};

class LiftProblem {
 public:
  LiftProblem(const Tower& tower, Complex F, Complex G, ChainMap s, Complex Gbar)
      : tower_(tower), F_(std::move(F)), G_(std::move(G)), s_(std::move(s)), Gbar_(std::move(Gbar)) {
    require(F_.ring() == tower_.r() && G_.ring() == tower_.r(), ErrorCode::LevelMismatch,
            "F and G must live over R = " + tower_.r().descriptor());
    require(Gbar_.ring() == tower_.rbar(), ErrorCode::LevelMismatch,
            "Gbar must live over Rbar = " + tower_.rbar().descriptor());
    require(F_.algebra() == G_.algebra() && G_.algebra() == Gbar_.algebra(), ErrorCode::ValidationError,
            "F, G and Gbar must be modules over the same algebra");
    F_.check();
    G_.check();
    Gbar_.check();
    require(Gbar_.base_change(tower_.r()) == G_, ErrorCode::ValidationError, "Gbar does not reduce to G");
    require(s_.degree() == 0 && s_.source() == F_ && s_.target() == G_, ErrorCode::ValidationError,
            "s must be a degree-0 map F -> G");
    for (int i = F_.lo(); i <= F_.hi(); ++i)
      require(MorphismSpace(F_.algebra(), tower_.r(), F_.type(i), G_.type(i)).is_morphism(s_.at(i)),
              ErrorCode::ValidationError, "s is not a module morphism in degree " + std::to_string(i));
    require(s_.is_chain_map(), ErrorCode::ValidationError, "s is not a chain map");
    F0_ = F_.base_change(tower_.r0());
    G0_ = G_.base_change(tower_.r0());
    s0_ = s_.base_change(tower_.r0());
    space_ = std::make_shared<const ObstructionSpace>(s0_);
  }

  const Tower& tower() const { return tower_; }
  const Complex& F() const { return F_; }
  const Complex& G() const { return G_; }
  const ChainMap& s() const { return s_; }
  const Complex& Gbar() const { return Gbar_; }
  const Complex& F0() const { return F0_; }
  const Complex& G0() const { return G0_; }
  const ChainMap& s0() const { return s0_; }
  const Complex& H0() const { return space_->h0.cone; }
  const ObstructionSpace& space() const { return *space_; }
  const HomComplex& hom() const { return space_->hom; }

  /// Module-morphism coordinates F^i -> F^{i+1} and F^i -> G^i over a ring of the family.
  MorphismSpace d_space(int i, const Ring& ring) const {
    return MorphismSpace(F_.algebra(), ring, F_.type(i), F_.type(i + 1));
  }
  MorphismSpace s_space(int i, const Ring& ring) const {
    return MorphismSpace(F_.algebra(), ring, F_.type(i), G_.type(i));
  }

 private:
  Tower tower_;
  Complex F_, G_;
  ChainMap s_;
  Complex Gbar_;
  Complex F0_, G0_;
  ChainMap s0_;
  std::shared_ptr<const ObstructionSpace> space_;
};

/// Degreewise lifts of d_F and s over Rbar, not necessarily closed or commuting.
struct GradedLift {
  int lo = 0;
  std::vector<Matrix> d;  // d[i - lo] : F^i -> F^{i+1}
  std::vector<Matrix> s;  // s[i - lo] : F^i -> G^i

  Complex as_complex(const LiftProblem& p) const {
    std::vector<ModuleType> types;
    for (int i = p.F().lo(); i <= p.F().hi(); ++i) types.push_back(p.F().type(i));
    if (p.F().is_zero_object()) return Complex::zero(p.tower().rbar(), p.F().algebra());
    return Complex(p.tower().rbar(), p.F().algebra(), p.F().lo(), types, d);
  }
  /// sbar as a graded map out of the (possibly non-closed) graded module.
  GradedMap as_map(const LiftProblem& p) const { return GradedMap(as_complex(p), p.Gbar(), 0, s); }

  bool reduces_to(const LiftProblem& p) const {
    const Ring& R = p.tower().r();
    for (std::size_t k = 0; k < d.size(); ++k) {
      int i = lo + int(k);
      if (d[k].reduce_to(R) != p.F().d(i) || s[k].reduce_to(R) != p.s().at(i)) return false;
    }
    return true;
  }
};

/// Coordinatewise lift of d_F and s; with a seed, a random b-valued perturbation is added.
inline GradedLift naive_lift(const LiftProblem& p, std::optional<std::uint64_t> seed = std::nullopt) {
  const Tower& T = p.tower();
  GradedLift out;
  out.lo = p.F().lo();
  if (p.F().is_zero_object()) return out;
  std::mt19937_64 rng(seed.value_or(0));
  std::uniform_int_distribution<std::uint32_t> coeff(0, T.r0().size() - 1);
  auto lift = [&](const Vec& c) {
    Vec v(c);
    if (seed)
      for (auto& x : v) x = T.rbar().add(x, T.b_scale(coeff(rng)));
    return v;
  };
  for (int i = p.F().lo(); i <= p.F().hi(); ++i) {
    Vec dc = p.d_space(i, T.r()).coordinates(p.F().d(i));
    out.d.push_back(p.d_space(i, T.rbar()).realize(lift(dc)));
    Vec sc = p.s_space(i, T.r()).coordinates(p.s().at(i));
    out.s.push_back(p.s_space(i, T.rbar()).realize(lift(sc)));
  }
  return out;
}

struct DefectPair {
  GradedMap e;        // F0 -> F0, degree 2
  GradedMap f;        // F0 -> G0, degree 1
  GradedMap cochain;  // (e; f) : F0 -> H0, degree 1
};

namespace detail {

/// Stacks x : F0 -> F0[1] (degree 1) and y : F0 -> G0 (degree 0) into F0 -> Cone(s0), degree 0;
/// with shift = 1 stacks degree-2 and degree-1 maps into a degree-1 map.
inline GradedMap stack_into_cone(const LiftProblem& p, const GradedMap& top, const GradedMap& bottom, int degree) {
  const Ring& R0 = p.tower().r0();
  return GradedMap::build(p.F0(), p.H0(), degree, [&](int i) {
    return Matrix::from_blocks(R0, {{top.at(i)}, {bottom.at(i)}});
  });
}

inline std::pair<GradedMap, GradedMap> split_from_cone(const LiftProblem& p, const GradedMap& xi) {
  const int k = xi.degree();
  GradedMap top = GradedMap::build(p.F0(), p.F0(), k + 1, [&](int i) {
    return xi.at(i).block(0, 0, p.F0().rank(i + k + 1), p.F0().rank(i));
  });
  GradedMap bottom = GradedMap::build(p.F0(), p.G0(), k, [&](int i) {
    return xi.at(i).block(p.F0().rank(i + k + 1), 0, p.G0().rank(i + k), p.F0().rank(i));
  });
  return {top, bottom};
}

}  // namespace detail

inline DefectPair defect_pair(const LiftProblem& p, const GradedLift& lift) {
  require(lift.reduces_to(p), ErrorCode::InvalidArgument, "graded lift does not reduce to (d_F, s)");
  const Tower& T = p.tower();
  const Complex& F = p.F();
  auto dbar = [&](int i) {
    if (!F.in_support(i)) return Matrix(T.rbar(), F.rank(i + 1), F.rank(i));
    return lift.d[i - lift.lo];
  };
  auto sbar = [&](int i) {
    if (!F.in_support(i)) return Matrix(T.rbar(), p.G().rank(i), F.rank(i));
    return lift.s[i - lift.lo];
  };
  GradedMap e = GradedMap::build(p.F0(), p.F0(), 2, [&](int i) { return b_decompose(T, dbar(i + 1) * dbar(i)); });
  GradedMap f = GradedMap::build(p.F0(), p.G0(), 1, [&](int i) {
    return b_decompose(T, p.Gbar().d(i) * sbar(i) - sbar(i + 1) * dbar(i));
  });
  GradedMap c = detail::stack_into_cone(p, e, f, 1);
  // -d0 e + e d0 = 0 and s0 e + d0 f + f d0 = 0, i.e. D(e; f) = 0.
  if (!c.differential().is_zero())
    fail(ErrorCode::InternalCocycleFailure, "defect pair is not a 1-cocycle of Hom(F0, Cone(s0))");
  return {std::move(e), std::move(f), std::move(c)};
}

struct ObstructionClass {
  Vec representative;  // cocycle in Hom^1(F0, H0) coordinates
  Vec coordinates;     // in the canonical basis of H^1
  bool is_zero = false;
  int h1_dim = 0;
};

inline ObstructionClass class_of(const LiftProblem& p, const GradedMap& cocycle) {
  const Cohomology& h1 = p.space().h1;
  ObstructionClass out;
  out.representative = p.hom().to_vector(cocycle);
  require(h1.is_cocycle(out.representative), ErrorCode::NotACocycle, "class of a non-cocycle");
  out.coordinates = h1.coordinates(out.representative);
  out.is_zero = h1.is_coboundary(out.representative);
  out.h1_dim = h1.dim();
  return out;
}

inline ObstructionClass obstruction_class(const LiftProblem& p, const GradedLift& lift) {
  return class_of(p, defect_pair(p, lift).cochain);
}
inline ObstructionClass obstruction_class(const LiftProblem& p) { return obstruction_class(p, naive_lift(p)); }

/// A lift (Fbar, sbar) of (F, s) with sbar : Fbar -> Gbar a strict chain map.
struct LiftSolution {
  Complex Fbar;
  ChainMap sbar;

  GradedLift graded() const {
    GradedLift g;
    g.lo = Fbar.lo();
    if (Fbar.is_zero_object()) return g;
    for (int i = Fbar.lo(); i <= Fbar.hi(); ++i) {
      g.d.push_back(Fbar.d(i));
      g.s.push_back(sbar.at(i));
    }
    return g;
  }

  /// Empty string if valid, else the first failed check.
  std::string check(const LiftProblem& p) const {
    const Ring& R = p.tower().r();
    if (Fbar.ring() != p.tower().rbar()) return "Fbar is not over Rbar";
    if (!Fbar.is_complex()) return "Fbar is not a complex";
    if (Fbar.base_change(R) != p.F()) return "Fbar does not reduce to F";
    if (sbar.target() != p.Gbar() || sbar.source() != Fbar) return "sbar has the wrong endpoints";
    if (!sbar.is_chain_map()) return "sbar is not a chain map";
    if (!(sbar.base_change(R).retarget(p.F(), p.G()) == p.s())) return "sbar does not reduce to s";
    return {};
  }
  bool verify(const LiftProblem& p) const { return check(p).empty(); }

  bool operator==(const LiftSolution& o) const { return Fbar == o.Fbar && sbar == o.sbar; }
};

inline LiftSolution solution_from(const LiftProblem& p, const GradedLift& g) {
  Complex Fbar = g.as_complex(p);
  return {Fbar, GradedMap(Fbar, p.Gbar(), 0, g.s)};
}

/// Applies the degree-0 cochain xi = (x; y) in Hom^0(F0, H0): (dbar + b x, sbar - b y).
inline GradedLift perturb(const LiftProblem& p, const GradedLift& g, const GradedMap& xi) {
  const Tower& T = p.tower();
  auto [x, y] = detail::split_from_cone(p, xi);
  GradedLift out = g;
  for (std::size_t k = 0; k < g.d.size(); ++k) {
    int i = g.lo + int(k);
    out.d[k] = g.d[k] + b_scale(T, x.at(i));
    out.s[k] = g.s[k] - b_scale(T, y.at(i));
  }
  return out;
}

/// Corrects the given graded lift (default: the naive lift) into a strict lift.
inline LiftSolution correct_lift(const LiftProblem& p, const GradedLift& lift) {
  DefectPair dp = defect_pair(p, lift);
  ObstructionClass cls = class_of(p, dp.cochain);
  if (!cls.is_zero) fail(ErrorCode::ObstructionNonzero, "obstruction class is nonzero; no lift exists");
  auto xi = p.space().h1.primitive(cls.representative);
  require(xi.has_value(), ErrorCode::InternalCocycleFailure, "coboundary without primitive");
  LiftSolution sol = solution_from(p, perturb(p, lift, p.hom().from_vector(0, *xi)));
  std::string why = sol.check(p);
  if (!why.empty()) fail(ErrorCode::InternalCocycleFailure, "corrected lift fails verification: " + why);
  return sol;
}
inline LiftSolution correct_lift(const LiftProblem& p) { return correct_lift(p, naive_lift(p)); }

/// The action of a 0-cocycle xi of Hom(F0, H0) on a lift.
inline LiftSolution h0_action(const LiftProblem& p, const LiftSolution& sol, const Vec& xi) {
  require(int(xi.size()) == p.hom().dim(0), ErrorCode::DimensionMismatch, "xi has the wrong length");
  require(p.space().h0_coh.is_cocycle(xi), ErrorCode::NotACocycle, "xi is not a 0-cocycle");
  LiftSolution out = solution_from(p, perturb(p, sol.graded(), p.hom().from_vector(0, xi)));
  std::string why = out.check(p);
  if (!why.empty()) fail(ErrorCode::InternalCocycleFailure, "acted lift fails verification: " + why);
  return out;
}

/// The cochain zeta with L2 = L1 + b zeta, i.e. zeta = (x; y) with dbar2 = dbar1 + b x, sbar2 = sbar1 - b y.
inline Vec lift_difference(const LiftProblem& p, const LiftSolution& l1, const LiftSolution& l2) {
  const Tower& T = p.tower();
  GradedLift a = l1.graded(), b = l2.graded();
  GradedMap x = GradedMap::zero(p.F0(), p.F0(), 1), y = GradedMap::zero(p.F0(), p.G0(), 0);
  for (std::size_t k = 0; k < a.d.size(); ++k) {
    int i = a.lo + int(k);
    x.set(i, b_decompose(T, b.d[k] - a.d[k]));
    y.set(i, b_decompose(T, a.s[k] - b.s[k]));
  }
  return p.hom().to_vector(detail::stack_into_cone(p, x, y, 0));
}

// ---------------------------------------------------------------------------
// Equivalence of lifts

/// Witness that L1 and L2 are equivalent: c = 1 + b gamma : Fbar1 -> Fbar2 is a chain
/// isomorphism reducing to the identity, and sbar2 o c - sbar1 = d h + h d.
struct LiftIsomorphism {
  GradedMap c;
  GradedMap h;
};

/// The linear system, based at a lift L, whose solutions (gamma, h, zeta) are exactly the
/// equivalences L ~ L + b zeta:
///   b (gamma d - d gamma - x) = 0,   b (s0 gamma - y) - d_Gbar h - h dbar = 0.
class LiftEquivalenceSystem {
 public:
  LiftEquivalenceSystem(const LiftProblem& p, LiftSolution base)
      : p_(&p), base_(std::move(base)), ff_(base_.Fbar, base_.Fbar), fg_(base_.Fbar, p.Gbar()) {
    const Tower& T = p.tower();
    const Ring& Rb = T.rbar();
    const Elem b = T.b_basis();
    ng_ = ff_.dim(0), nh_ = fg_.dim(-1), nx_ = ff_.dim(1), ny_ = fg_.dim(0);
    Matrix a(Rb, nx_ + ny_, ng_ + nh_ + nx_ + ny_);
    // gamma columns: -b D(gamma) in the x-rows, b (sbar o gamma) in the y-rows.
    const Matrix& dff = ff_.d(0);
    for (int k = 0; k < ng_; ++k) {
      for (int r = 0; r < nx_; ++r) a(r, k) = Rb.neg(Rb.mul(b, dff(r, k)));
      Vec g(ng_, 0);
      g[k] = 1;
      Vec sg = fg_.to_vector(compose(base_.sbar, ff_.from_vector(0, g)));
      for (int r = 0; r < ny_; ++r) a(nx_ + r, k) = Rb.mul(b, sg[r]);
    }
    const Matrix& dfg = fg_.d(-1);
    for (int k = 0; k < nh_; ++k)
      for (int r = 0; r < ny_; ++r) a(nx_ + r, ng_ + k) = Rb.neg(dfg(r, k));
    for (int r = 0; r < nx_ + ny_; ++r) a(r, ng_ + nh_ + r) = Rb.neg(b);
    a_ = a;
    unknowns_ = a.block(0, 0, nx_ + ny_, ng_ + nh_);
    solver_ = std::make_shared<RingSolver>(unknowns_);
  }

  /// The subspace S of Hom^0(F0, H0) with L ~ L + b zeta exactly for zeta in S.
  Subspace stabilizer() const {
    const Tower& T = p_->tower();
    RingSolver full(a_);
    Matrix gens(T.r0(), 0, p_->hom().dim(0));
    std::vector<Vec> rows;
    for (auto& v : full.kernel_generators()) {
      Vec zeta(v.begin() + ng_ + nh_, v.end());
      for (auto& z : zeta) z = z % T.r0().size();
      rows.push_back(to_cone_coordinates(zeta));
    }
    Matrix m(T.r0(), int(rows.size()), p_->hom().dim(0));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < m.cols(); ++c) m(int(r), c) = rows[r][c];
    return Subspace::span_rows(m);
  }

  /// An explicit equivalence base ~ other, if one exists.
  std::optional<LiftIsomorphism> isomorphism(const LiftSolution& other) const {
    const LiftProblem& p = *p_;
    const Tower& T = p.tower();
    const Ring& Rb = T.rbar();
    Vec zeta = from_cone_coordinates(lift_difference(p, base_, other));
    Vec rhs(nx_ + ny_, 0);
    for (int r = 0; r < nx_ + ny_; ++r)
      for (int k = 0; k < nx_ + ny_; ++k)
        if (zeta[k]) rhs[r] = Rb.sub(rhs[r], Rb.mul(a_(r, ng_ + nh_ + k), zeta[k]));
    auto u = solver_->solve(rhs);
    if (!u) return std::nullopt;
    Vec g(u->begin(), u->begin() + ng_), h(u->begin() + ng_, u->end());
    GradedMap gamma = ff_.from_vector(0, g).scaled(T.b_basis());
    GradedMap c = (GradedMap::identity(base_.Fbar) + gamma).retarget(base_.Fbar, other.Fbar);
    GradedMap hmap = fg_.from_vector(-1, h);
    LiftIsomorphism iso{c, hmap};
    require(verify(iso, other), ErrorCode::InternalCocycleFailure, "lift isomorphism fails verification");
    return iso;
  }

  bool verify(const LiftIsomorphism& iso, const LiftSolution& other) const {
    if (!iso.c.is_chain_map()) return false;
    if (!(iso.c.base_change(p_->tower().r()).retarget(p_->F(), p_->F()) == GradedMap::identity(p_->F()))) return false;
    GradedMap lhs = compose(other.sbar, iso.c) - base_.sbar;
    return lhs == iso.h.differential();
  }

 private:
  // (x; y) coordinates over Hom^1(Fbar, Fbar) x Hom^0(Fbar, Gbar), reduced to R0, to Hom^0(F0, H0).
  Vec to_cone_coordinates(const Vec& zeta) const {
    const LiftProblem& p = *p_;
    HomComplex ff0(p.F0(), p.F0()), fg0(p.F0(), p.G0());
    Vec xs(zeta.begin(), zeta.begin() + nx_), ys(zeta.begin() + nx_, zeta.end());
    return p.hom().to_vector(detail::stack_into_cone(p, ff0.from_vector(1, xs), fg0.from_vector(0, ys), 0));
  }
  Vec from_cone_coordinates(const Vec& xi) const {
    const LiftProblem& p = *p_;
    auto [x, y] = detail::split_from_cone(p, p.hom().from_vector(0, xi));
    HomComplex ff0(p.F0(), p.F0()), fg0(p.F0(), p.G0());
    Vec out = ff0.to_vector(x), ys = fg0.to_vector(y);
    out.insert(out.end(), ys.begin(), ys.end());
    return out;  // codes over R0 are valid canonical lifts to Rbar
  }

  const LiftProblem* p_;
  LiftSolution base_;
  HomComplex ff_, fg_;
  int ng_ = 0, nh_ = 0, nx_ = 0, ny_ = 0;
  Matrix a_, unknowns_;
  std::shared_ptr<RingSolver> solver_;
};

inline std::optional<LiftIsomorphism> lift_isomorphism(const LiftProblem& p, const LiftSolution& l1,
                                                       const LiftSolution& l2) {
  return LiftEquivalenceSystem(p, l1).isomorphism(l2);
}

// ---------------------------------------------------------------------------
// Classification

struct LiftSet {
  std::vector<LiftSolution> representatives;
  std::vector<Vec> h0_coordinates;  // of each representative relative to the base lift
  std::vector<int> stabilizer_dims;  // dimension of the stabilizer image in H^0, per class
};

struct ClassificationOptions {
  std::uint64_t max_h0_elements = 4096;
};

struct LiftReport {
  int h_minus1_dim = 0, h0_dim = 0, h1_dim = 0;
  Vec class_coordinates;
  bool is_zero = false;
  bool lift_found = false;
  std::optional<std::uint64_t> lift_class_count;
  bool torsor_certified = false;
  bool exhaustive = false;
};

struct Classification {
  LiftReport report;
  ObstructionClass obstruction;
  std::optional<LiftSolution> base;
  LiftSet lifts;
};

inline std::uint64_t ipow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r = (r > (UINT64_MAX / p)) ? UINT64_MAX : r * p;
  return r;
}

/// Enumerates H^0 and groups its elements into equivalence classes of lifts.
inline Classification classify_lifts(const LiftProblem& p, const ClassificationOptions& opts = {}) {
  Classification out;
  const ObstructionSpace& S = p.space();
  const Ring& R0 = p.tower().r0();
  LiftReport& rep = out.report;
  rep.h_minus1_dim = S.h_minus1.dim();
  rep.h0_dim = S.h0_coh.dim();
  rep.h1_dim = S.h1.dim();
  out.obstruction = obstruction_class(p);
  rep.class_coordinates = out.obstruction.coordinates;
  rep.is_zero = out.obstruction.is_zero;
  if (!rep.is_zero) {
    rep.lift_class_count = 0;
    rep.exhaustive = true;
    return out;
  }
  out.base = correct_lift(p);
  rep.lift_found = true;
  const std::uint64_t q = R0.size();
  const std::uint64_t total = ipow(q, rep.h0_dim);
  auto index_of = [&](const Vec& c) {
    std::uint64_t k = 0;
    for (int i = rep.h0_dim - 1; i >= 0; --i) k = k * q + c[i];
    return k;
  };
  auto vec_of = [&](std::uint64_t k) {
    Vec c(rep.h0_dim);
    for (int i = 0; i < rep.h0_dim; ++i) {
      c[i] = Elem(k % q);
      k /= q;
    }
    return c;
  };
  auto stabilizer_in_h0 = [&](const LiftSolution& at) {
    Subspace st = LiftEquivalenceSystem(p, at).stabilizer();
    Matrix rows(R0, st.dim(), rep.h0_dim);
    for (int r = 0; r < st.dim(); ++r) {
      Vec z(st.ambient());
      for (int c = 0; c < st.ambient(); ++c) z[c] = st.basis()(r, c);
      require(S.h0_coh.is_cocycle(z), ErrorCode::InternalCocycleFailure, "stabilizer element is not a cocycle");
      Vec c = S.h0_coh.coordinates(z);
      for (int k = 0; k < rep.h0_dim; ++k) rows(r, k) = c[k];
    }
    return Subspace::span_rows(rows);
  };

  if (total > opts.max_h0_elements) {
    Subspace w = stabilizer_in_h0(*out.base);
    out.lifts.representatives.push_back(*out.base);
    out.lifts.h0_coordinates.push_back(Vec(rep.h0_dim, 0));
    out.lifts.stabilizer_dims.push_back(w.dim());
    if (rep.h_minus1_dim == 0) {
      rep.lift_class_count = total;
      rep.torsor_certified = w.dim() == 0;
    }
    rep.exhaustive = false;
    return out;
  }

  std::vector<bool> seen(total, false);
  bool all_free = true;
  std::uint64_t classes = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    if (seen[k]) continue;
    Vec c = vec_of(k);
    LiftSolution at = k == 0 ? *out.base : h0_action(p, *out.base, S.h0_coh.representative(c));
    Subspace w = stabilizer_in_h0(at);
    if (w.dim()) all_free = false;
    // Mark c + span(w).
    const std::uint64_t span_size = ipow(q, w.dim());
    for (std::uint64_t m = 0; m < span_size; ++m) {
      Vec v = c;
      std::uint64_t mm = m;
      for (int r = 0; r < w.dim(); ++r) {
        Elem coeff = Elem(mm % q);
        mm /= q;
        for (int j = 0; j < rep.h0_dim; ++j) v[j] = R0.add(v[j], R0.mul(coeff, w.basis()(r, j)));
      }
      seen[index_of(v)] = true;
    }
    out.lifts.representatives.push_back(at);
    out.lifts.h0_coordinates.push_back(c);
    out.lifts.stabilizer_dims.push_back(w.dim());
    ++classes;
  }
  rep.lift_class_count = classes;
  rep.exhaustive = true;
  rep.torsor_certified = rep.h_minus1_dim == 0 && all_free;
  return out;
}

}  // namespace defobs
