#include <gtest/gtest.h>

#include <algorithm>

#include "defobs/oracle.hpp"
#include "support/generators.hpp"

using namespace defobs;
using testgen::Rng;

namespace {

Matrix M(const Ring& R, std::vector<std::vector<Elem>> rows, int cols = -1) { return Matrix::from_rows(R, rows, cols); }

const Tower& t2() {
  static Tower T = testgen::ladder_step(2, 1);
  return T;
}

// Direct evaluation of every candidate, without incremental updates.
std::vector<std::uint64_t> slow_enumerate(const LiftProblem& p) {
  LiftEnumerator en(p);
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < en.candidate_count(); ++k)
    if (en.solution(k).verify(p)) out.push_back(k);
  return out;
}

// Conjugates F by a permutation of each basis, carrying s along.
LiftProblem relabel(Rng& rng, const LiftProblem& p) {
  const Ring& R = p.tower().r();
  std::vector<Matrix> P;
  const Complex& F = p.F();
  for (int i = F.lo(); i <= F.hi(); ++i) {
    std::vector<int> perm(F.rank(i));
    for (int k = 0; k < int(perm.size()); ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix m(R, F.rank(i), F.rank(i));
    for (int k = 0; k < int(perm.size()); ++k) m(perm[k], k) = 1;
    P.push_back(m);
  }
  auto at = [&](int i) { return P[i - F.lo()]; };
  std::vector<int> ranks;
  std::vector<Matrix> d;
  for (int i = F.lo(); i <= F.hi(); ++i) {
    ranks.push_back(F.rank(i));
    d.push_back(i < F.hi() ? at(i + 1) * F.d(i) * at(i).transpose() : F.d(i));
  }
  Complex F2 = Complex::free(R, F.lo(), ranks, d);
  GradedMap s = GradedMap::build(F2, p.G(), 0, [&](int i) { return p.s().at(i) * at(i).transpose(); });
  return LiftProblem(p.tower(), F2, p.G(), s, p.Gbar());
}

}  // namespace

TEST(Oracle, IdentityEveryCandidateLifts) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1}, {});
  LiftProblem p(T, F, F, GradedMap::identity(F), Complex::free(T.rbar(), 0, {1}, {}));
  OracleLifts raw = enumerate_lifts(p);
  EXPECT_EQ(raw.candidates_scanned, 2u);
  EXPECT_EQ(raw.indices.size(), 2u);
  EXPECT_EQ(count_classes(p, raw).classes, 1u);
}

TEST(Oracle, ObstructedInstanceHasNoLifts) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {1, 1}, {M(T.r(), {{2}})});
  Complex Gbar = Complex::free(T.rbar(), 0, {1, 1}, {M(T.rbar(), {{2}})});
  LiftProblem p(T, F, F, GradedMap(F, F, 0, {M(T.r(), {{2}}), M(T.r(), {{0}})}), Gbar);
  EXPECT_FALSE(obstruction_class(p).is_zero);
  EXPECT_TRUE(enumerate_lifts(p).indices.empty());
}

TEST(Oracle, IncrementalScanMatchesDirectEvaluation) {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    Tower T = testgen::ladder_step(trial % 3 == 0 ? 3 : 2, trial % 2, trial % 5 == 0);
    LiftProblem p = testgen::random_problem(rng, T, {testgen::uniform(rng, 1, 3), 2, 3, false});
    LiftEnumerator en(p);
    if (en.candidate_count() > 2048) continue;
    EXPECT_EQ(en.run({}).indices, slow_enumerate(p));
  }
}

TEST(Oracle, WorkersAgree) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    LiftProblem p = testgen::random_problem(rng, t2(), {2, 2, 4, false});
    SearchBounds one, three;
    three.workers = 3;
    LiftEnumerator en(p);
    if (en.candidate_count() > 4096) continue;
    OracleLifts a = en.run(one), b = en.run(three);
    EXPECT_EQ(a.indices, b.indices);
    EXPECT_EQ(a.candidates_scanned, b.candidates_scanned);
  }
}

TEST(Oracle, ExistenceAgreesWithEngine) {
  Rng rng(6);
  int zero = 0, nonzero = 0;
  for (int trial = 0; trial < 150; ++trial) {
    Tower T = testgen::ladder_step(trial % 4 == 0 ? 3 : 2, trial % 2);
    LiftProblem p = testgen::random_problem(rng, T, {2, 2, 3, false});
    LiftEnumerator en(p);
    if (en.candidate_count() > 4096) continue;
    OracleLifts raw = en.run({});
    ObstructionClass c = obstruction_class(p);
    EXPECT_EQ(c.is_zero, !raw.indices.empty());
    if (c.is_zero) {
      ++zero;
      auto k = en.index_of(correct_lift(p));
      ASSERT_TRUE(k.has_value());
      EXPECT_TRUE(std::binary_search(raw.indices.begin(), raw.indices.end(), *k));
    } else {
      ++nonzero;
    }
  }
  EXPECT_GT(zero, 10);
  EXPECT_GT(nonzero, 3);
}

TEST(Oracle, ClassCountsAgreeWithEngine) {
  Rng rng(8);
  int compared = 0, certified = 0;
  for (int trial = 0; trial < 200 && compared < 40; ++trial) {
    Tower T = testgen::ladder_step(trial % 3 == 0 ? 3 : 2, 0);
    LiftProblem p = testgen::random_problem(rng, T, {2, 2, 3, false});
    LiftEnumerator en(p);
    if (en.candidate_count() > 1024) continue;
    Classification cl = classify_lifts(p);
    if (!cl.report.is_zero) continue;
    OracleClasses oc = count_classes(p, en.run({}));
    EXPECT_EQ(oc.classes, *cl.report.lift_class_count);
    if (cl.report.torsor_certified) {
      ++certified;
      EXPECT_EQ(oc.classes, ipow(T.r0().size(), cl.report.h0_dim));
    }
    ++compared;
  }
  EXPECT_GT(compared, 10);
  EXPECT_GT(certified, 3);
}

TEST(Oracle, RelabelingInvariance) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    LiftProblem p = testgen::random_problem(rng, testgen::ladder_step(2, 0), {2, 2, 3, false});
    if (LiftEnumerator(p).candidate_count() > 1024) continue;
    LiftProblem q = relabel(rng, p);
    OracleReport a = run_oracle(p), b = run_oracle(q);
    EXPECT_EQ(a.lifts_found, b.lifts_found);
    EXPECT_EQ(a.classes, b.classes);
  }
}

TEST(Oracle, ObjectCases) {
  const Tower& T = t2();
  EXPECT_TRUE(object_obstruction_oracle(T, Complex::free(T.r(), 0, {2}, {})));
  Complex contractible = Complex::free(T.r(), 0, {1, 1}, {M(T.r(), {{1}})});
  EXPECT_TRUE(object_obstruction_oracle(T, contractible));
  LiftProblem single = object_problem(T, Complex::free(T.r(), 0, {1}, {}));
  EXPECT_EQ(count_classes(single, enumerate_lifts(single)).classes, 1u);
}

TEST(Oracle, ObjectVerdictsAgreeWithEngine) {
  Rng rng(12);
  Tower T = testgen::ladder_step(2, 1);
  for (int trial = 0; trial < 40; ++trial) {
    Complex F = testgen::random_complex(rng, T.r(), 0, testgen::random_ranks(rng, 3, 2, 4));
    bool oracle = object_obstruction_oracle(T, F);
    ObjectExt ext = object_ext(T, F);
    EXPECT_EQ(oracle, ext.obstruction_zero);
    EXPECT_EQ(obstruction_class(object_problem(T, F)).is_zero, oracle);
  }
}

TEST(Oracle, BoundsAreEnforced) {
  const Tower& T = t2();
  Complex F = Complex::free(T.r(), 0, {3, 3}, {Matrix(T.r(), 3, 3)});
  Complex Gbar = Complex::free(T.rbar(), 0, {3, 3}, {Matrix(T.rbar(), 3, 3)});
  Complex G = Gbar.base_change(T.r());
  LiftProblem p(T, F, G, GradedMap::zero(F, G, 0), Gbar);
  try {
    enumerate_lifts(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundsExceeded);
  }
  SearchBounds tiny;
  tiny.max_total_rank = 2;
  EXPECT_THROW(LiftEnumerator(p, tiny), Error);
}
