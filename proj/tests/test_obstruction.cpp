#include <gtest/gtest.h>

#include "defobs/obstruction.hpp"
#include "support/generators.hpp"

using namespace defobs;
using testgen::Rng;

namespace {

Matrix M(const Ring& R, std::vector<std::vector<Elem>> rows, int cols = -1) { return Matrix::from_rows(R, rows, cols); }

// F2[t]/t^3 ->> F2[t]/t^2 ->> F2; t has code 2.
const Tower& t2() {
  static Tower T = testgen::ladder_step(2, 1);
  return T;
}

LiftProblem t_multiplication_problem() {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1, 1}, {M(T.r(), {{2}})});
  Complex Gbar = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{2}})});
  GradedMap s(F, F, 0, {M(T.r(), {{2}}), M(T.r(), {{0}})});
  return LiftProblem(T, F, F, s, Gbar);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Obstruction, RejectsInconsistentInputs) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1, 1}, {M(T.r(), {{2}})});
  Complex wrong = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{1}})});
  GradedMap s = GradedMap::identity(F);
  EXPECT_EQ(code_of([&] { LiftProblem(T, F, F, s, wrong); }), ErrorCode::ValidationError);
  GradedMap not_chain(F, F, 0, {M(T.r(), {{1}}), M(T.r(), {{0}})});
  Complex Gbar = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{2}})});
  EXPECT_EQ(code_of([&] { LiftProblem(T, F, F, not_chain, Gbar); }), ErrorCode::ValidationError);
}

TEST(Obstruction, NaiveLiftOfZeroDifferential) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {2, 1}, {});
  Complex Gbar = Complex::free(T.rbar(), 0, {1}, {});
  LiftProblem p(T, F, Gbar.base_change(T.r()), GradedMap::zero(F, Gbar.base_change(T.r()), 0), Gbar);
  GradedLift g = naive_lift(p);
  for (auto& m : g.d) EXPECT_TRUE(m.is_zero());
  for (auto& m : g.s) EXPECT_TRUE(m.is_zero());
  DefectPair dp = defect_pair(p, g);
  EXPECT_TRUE(dp.e.is_zero());
  EXPECT_TRUE(dp.f.is_zero());
}

TEST(Obstruction, SeededLiftsDifferByB) {
  Rng rng(11);
  const Tower& T = t2();
  for (int trial = 0; trial < 100; ++trial) {
    LiftProblem p = testgen::random_problem(rng, T);
    GradedLift a = naive_lift(p), b = naive_lift(p, trial + 1);
    EXPECT_TRUE(a.reduces_to(p));
    EXPECT_TRUE(b.reduces_to(p));
    for (std::size_t k = 0; k < a.d.size(); ++k) {
      EXPECT_NO_THROW(b_decompose(T, b.d[k] - a.d[k]));
      EXPECT_NO_THROW(b_decompose(T, b.s[k] - a.s[k]));
    }
  }
}

TEST(Obstruction, MultiplicationByTIsObstructed) {
  LiftProblem p = t_multiplication_problem();
  ObstructionClass c = obstruction_class(p);
  EXPECT_FALSE(c.is_zero);
  EXPECT_EQ(code_of([&] { correct_lift(p); }), ErrorCode::ObstructionNonzero);
  Classification cl = classify_lifts(p);
  EXPECT_FALSE(cl.report.lift_found);
  EXPECT_EQ(cl.report.lift_class_count, 0u);
}

TEST(Obstruction, IdentityHasOneLift) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1}, {});
  Complex Gbar = Complex::free(T.rbar(), 0, {1}, {});
  LiftProblem p(T, F, F, GradedMap::identity(F), Gbar);
  Classification cl = classify_lifts(p);
  EXPECT_TRUE(cl.report.is_zero);
  EXPECT_EQ(cl.report.h0_dim, 0);
  EXPECT_EQ(cl.report.lift_class_count, 1u);
  EXPECT_TRUE(cl.report.torsor_certified);
}

TEST(Obstruction, SingleModuleObjectHasOneLift) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1}, {});
  Complex zero = Complex::zero(T.r());
  LiftProblem p(T, F, zero, GradedMap::zero(F, zero, 0), Complex::zero(T.rbar()));
  Classification cl = classify_lifts(p);
  EXPECT_TRUE(cl.report.is_zero);
  EXPECT_EQ(cl.report.lift_class_count, 1u);
}

TEST(Obstruction, EmptySourceLiftsUniquely) {
  const Tower& T = t2();
  Complex zero = Complex::zero(T.r());
  Complex Gbar = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{2}})});
  Complex G = Gbar.base_change(T.r());
  LiftProblem p(T, zero, G, GradedMap::zero(zero, G, 0), Gbar);
  Classification cl = classify_lifts(p);
  EXPECT_TRUE(cl.report.is_zero);
  EXPECT_EQ(cl.report.lift_class_count, 1u);
}

TEST(Obstruction, ClassIndependentOfGradedLift) {
  Rng rng(5);
  for (int p : {2, 3}) {
    for (int n : {0, 1}) {
      Tower T = testgen::ladder_step(p, n, p == 3);
      for (int trial = 0; trial < 40; ++trial) {
        testgen::ProblemShape shape{testgen::uniform(rng, 1, 4), 2, 6, false};
        LiftProblem pr = testgen::random_problem(rng, T, shape);
        ObstructionClass a = obstruction_class(pr, naive_lift(pr, rng()));
        ObstructionClass b = obstruction_class(pr, naive_lift(pr, rng()));
        EXPECT_EQ(a.coordinates, b.coordinates);
        EXPECT_EQ(a.is_zero, b.is_zero);
      }
    }
  }
}

TEST(Obstruction, CorrectedLiftsVerify) {
  Rng rng(17);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Tower T = testgen::ladder_step(trial % 2 ? 3 : 2, trial % 3 == 0 ? 1 : 0);
    LiftProblem p = testgen::random_problem(rng, T, {3, 2, 5, false});
    ObstructionClass c = obstruction_class(p);
    if (!c.is_zero) {
      EXPECT_EQ(code_of([&] { correct_lift(p); }), ErrorCode::ObstructionNonzero);
      continue;
    }
    LiftSolution sol = correct_lift(p, naive_lift(p, trial));
    EXPECT_EQ(sol.check(p), "");
    ++solved;
  }
  EXPECT_GT(solved, 50);
}

TEST(Obstruction, ClosedNaiveLiftNeedsNoCorrection) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1, 1}, {M(T.r(), {{1}})});
  Complex Gbar = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{1}})});
  LiftProblem p(T, F, F, GradedMap::identity(F), Gbar);
  DefectPair dp = defect_pair(p, naive_lift(p));
  EXPECT_TRUE(dp.cochain.is_zero());
  LiftSolution sol = correct_lift(p);
  EXPECT_EQ(sol.Fbar, Gbar);
}

TEST(Obstruction, H0ActionAndInverseAreEquivalent) {
  Rng rng(23);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    LiftProblem p = testgen::random_problem(rng, testgen::ladder_step(2, 1), {2, 2, 4, false});
    if (!obstruction_class(p).is_zero || p.space().h0_coh.dim() == 0) continue;
    LiftSolution base = correct_lift(p);
    EXPECT_EQ(h0_action(p, base, Vec(p.hom().dim(0), 0)), base);
    Vec c = testgen::random_vec(rng, p.tower().r0(), p.space().h0_coh.dim());
    Vec xi = p.space().h0_coh.representative(c);
    Vec neg(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) neg[i] = p.tower().r0().neg(xi[i]);
    LiftSolution back = h0_action(p, h0_action(p, base, xi), neg);
    EXPECT_TRUE(lift_isomorphism(p, base, back).has_value());
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(Obstruction, H0ActionRejectsNonCocycles) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    LiftProblem p = testgen::random_problem(rng, t2(), {2, 2, 4, false});
    if (!obstruction_class(p).is_zero) continue;
    const Matrix& d0 = p.hom().d(0);
    for (int k = 0; k < d0.cols(); ++k) {
      Vec e(d0.cols(), 0);
      e[k] = 1;
      if (p.space().h0_coh.is_cocycle(e)) continue;
      EXPECT_EQ(code_of([&] { h0_action(p, correct_lift(p), e); }), ErrorCode::NotACocycle);
      return;
    }
  }
  FAIL() << "no instance with a non-cocycle found";
}

TEST(Obstruction, TorsorWhenHMinusOneVanishes) {
  Rng rng(31);
  int seen = 0;
  for (int trial = 0; trial < 300 && seen < 30; ++trial) {
    LiftProblem p = testgen::random_problem(rng, testgen::ladder_step(trial % 2 ? 3 : 2, 0), {2, 2, 4, false});
    Classification cl = classify_lifts(p);
    if (!cl.report.is_zero || cl.report.h_minus1_dim != 0) continue;
    EXPECT_EQ(*cl.report.lift_class_count, ipow(p.tower().r0().size(), cl.report.h0_dim));
    EXPECT_TRUE(cl.report.torsor_certified);
    ++seen;
  }
  EXPECT_GT(seen, 10);
}

TEST(Obstruction, RepresentativesArePairwiseInequivalent) {
  Rng rng(37);
  int seen = 0;
  for (int trial = 0; trial < 300 && seen < 10; ++trial) {
    LiftProblem p = testgen::random_problem(rng, t2(), {2, 2, 4, false});
    Classification cl = classify_lifts(p);
    auto& reps = cl.lifts.representatives;
    if (reps.size() < 2 || reps.size() > 16) continue;
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = 0; j < reps.size(); ++j)
        EXPECT_EQ(lift_isomorphism(p, reps[i], reps[j]).has_value(), i == j);
    ++seen;
  }
  EXPECT_GT(seen, 3);
}

TEST(Obstruction, HomotopicMapsHaveSameInvariants) {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    LiftProblem p = testgen::random_problem(rng, testgen::ladder_step(2, trial % 2), {3, 2, 5, false});
    GradedMap k = testgen::random_graded_map(rng, p.F(), p.G(), -1);
    GradedMap s2 = p.s() + k.differential();
    LiftProblem q(p.tower(), p.F(), p.G(), s2, p.Gbar());
    Classification a = classify_lifts(p), b = classify_lifts(q);
    EXPECT_EQ(a.report.is_zero, b.report.is_zero);
    EXPECT_EQ(a.report.lift_class_count, b.report.lift_class_count);
  }
}

TEST(Obstruction, ZeroTargetIsObjectDeformation) {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    LiftProblem p = testgen::random_problem(rng, testgen::ladder_step(2, 1), {3, 2, 5, true});
    DefectPair dp = defect_pair(p, naive_lift(p, trial));
    EXPECT_TRUE(dp.f.is_zero());
    // H0 = F0[1]; the class lives in Ext^2(F0, F0).
    EXPECT_EQ(p.space().h1.dim(), HomComplex(p.F0(), p.F0()).cohomology(2).dim());
  }
}

// ---------------------------------------------------------------------------
// Split presentation

#include "defobs/presentation.hpp"

namespace {

PresentedProblem random_presented(Rng& rng, const Tower& T, int length = 3, int max_rank = 2) {
  auto inst = testgen::random_split_instance(rng, T, length, max_rank);
  return present_split(T, inst.J, inst.I, inst.s, inst.t, inst.Ibar);
}

}  // namespace

TEST(Presentation, RetractionNormalization) {
  Rng rng(3);
  const Tower& T = t2();
  for (int trial = 0; trial < 50; ++trial) {
    int nj = testgen::uniform(rng, 1, 3), nk = testgen::uniform(rng, 0, 2);
    Matrix P = testgen::random_invertible(rng, T.rbar(), nj + nk);
    Matrix s = P.block(0, 0, nj + nk, nj);
    Matrix t = invert(P)->block(0, 0, nj, nj + nk) + b_scale(T, testgen::random_matrix(rng, T.r0(), nj, nj + nk));
    Matrix t0 = normalize_retraction(T, s, t);
    EXPECT_EQ(t0 * s, Matrix::identity(T.rbar(), nj));
    EXPECT_EQ(t0.reduce_to(T.r()), t.reduce_to(T.r()));
  }
}

TEST(Presentation, SubcomplexInclusionHasZeroPhi) {
  const Tower& T = t2();
  Complex Jb = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{2}})});
  Complex Ib = Complex::free(T.rbar(), 0, {2, 1}, {M(T.rbar(), {{2, 1}})});
  Complex J = Jb.base_change(T.r()), I = Ib.base_change(T.r());
  GradedMap s(J, I, 0, {M(T.r(), {{1}, {0}}), M(T.r(), {{1}})});
  GradedMap t(I, J, 0, {M(T.r(), {{1, 0}}), M(T.r(), {{1}})});
  PresentedProblem pp = present_split(T, J, I, s, t, Ib);
  for (Elem x : faithful_cocycle(pp)) EXPECT_EQ(x, 0u);
  EXPECT_TRUE(faithful_class(pp).is_zero);
}

TEST(Presentation, PathEqualityOnGeneratedInstances) {
  Rng rng(47);
  int nonzero = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Tower T = testgen::ladder_step(trial % 2 ? 3 : 2, trial % 3 == 2 ? 1 : 0);
    PresentedProblem pp = random_presented(rng, T);
    EXPECT_TRUE(verify_mu(pp, 0));
    EXPECT_TRUE(verify_mu(pp, 1));
    FaithfulClass fc = faithful_class(pp);
    ObstructionClass moved = mu_transport(pp, fc);
    ObstructionClass direct = obstruction_class(pp.problem);
    EXPECT_EQ(moved.coordinates, direct.coordinates);
    EXPECT_EQ(fc.is_zero, direct.is_zero);
    if (!direct.is_zero) ++nonzero;
    else EXPECT_TRUE(correct_lift(pp.problem).verify(pp.problem));
  }
  EXPECT_GT(nonzero, 0);
}

TEST(Presentation, ClassIgnoresChoiceOfGradedLift) {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const Tower& T = t2();
    PresentedProblem pp = random_presented(rng, T);
    std::vector<Matrix> sbar;
    for (std::size_t k = 0; k < pp.s0bar.size(); ++k)
      sbar.push_back(pp.s0bar[k] + b_scale(T, testgen::random_matrix(rng, T.r0(), pp.s0bar[k].rows(), pp.s0bar[k].cols())));
    EXPECT_EQ(faithful_class(pp, sbar).coordinates, faithful_class(pp).coordinates);
  }
}

TEST(Presentation, CylinderPresentationMatchesDefectRoute) {
  Rng rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    Tower T = testgen::ladder_step(trial % 2 ? 3 : 2, trial % 4 == 3 ? 1 : 0);
    LiftProblem p = testgen::random_problem(rng, T, {3, 2, 5, trial % 5 == 4});
    PresentedProblem pp = present(p);
    EXPECT_TRUE(verify_mu(pp, 1));
    // K0 = Cone(s0) and the graded lift is the canonical one, so the cocycles agree exactly.
    EXPECT_EQ(mu_transport(pp, faithful_class(pp)).representative, obstruction_class(p).representative);
  }
}

TEST(Presentation, ZeroClassTransportsToZero) {
  Rng rng(61);
  PresentedProblem pp = random_presented(rng, t2());
  HomPlus plus(pp);
  ObstructionClass c = mu_transport(pp, Vec(plus.dim(1), 0));
  EXPECT_TRUE(c.is_zero);
}
