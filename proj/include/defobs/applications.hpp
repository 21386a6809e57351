#pragma once

// Decomposition triangles of the diagonal bimodule of a triangular algebra and
// their inductive lifting along an m-adic ladder.
//
// Bimodules over A are right modules over A^e = A^op (x) A, presented as complexes
// of free A^e-modules. P(a, b) denotes the free module on the vertex (a, b); as a
// bimodule it is A e_a (x) e_b A. The functor attached to a kernel K is - (x)_A K,
// evaluated on the projectives e_i A:
//   e_i A (x)_A P(a, b) = sum over w in e_i A e_a of e_b A.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "defobs/complexes.hpp"
#include "defobs/equivalence.hpp"
#include "defobs/obstruction.hpp"
#include "defobs/oracle.hpp"

namespace defobs {

/// The enveloping algebra of A, one shared instance per algebra so that complexes compare equal.
inline const AlgebraPtr& enveloping_of(const AlgebraPtr& A) {
  static std::mutex mu;
  static std::map<const Algebra*, std::pair<AlgebraPtr, AlgebraPtr>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(A.get());
  if (it == cache.end()) it = cache.emplace(A.get(), std::make_pair(A, Algebra::enveloping(*A))).first;
  return it->second.second;
}

inline int bimodule_vertex(const Algebra& A, int a, int b) { return a * A.vertices() + b; }

/// One term c * (u (x) v) of a bimodule morphism between summands.
struct BimoduleTerm {
  int tgt_summand, src_summand;
  int u, v;
  long long coeff;
};

inline Matrix bimodule_map(const Ring& ring, const AlgebraPtr& A, const ModuleType& src, const ModuleType& tgt,
                           const std::vector<BimoduleTerm>& terms) {
  MorphismSpace sp(enveloping_of(A), ring, src, tgt);
  Vec c(sp.dim(), 0);
  const auto& coords = sp.coordinate_list();
  for (const auto& t : terms) {
    int x = t.u * A->size() + t.v;
    std::size_t k = 0;
    while (k < coords.size() && !(coords[k].tgt_summand == t.tgt_summand && coords[k].src_summand == t.src_summand &&
                                  coords[k].element == x))
      ++k;
    require(k < coords.size(), ErrorCode::InvalidArgument, "bimodule term does not match the summand vertices");
    c[k] = ring.add(c[k], ring.from_int(t.coeff));
  }
  return sp.realize(c);
}

/// e_i A (x)_A K as a complex of free right A-modules.
inline Complex tensor_image(const Complex& K, const AlgebraPtr& A, int i) {
  const AlgebraPtr& Ae = enveloping_of(A);
  require(K.algebra() == Ae, ErrorCode::InvalidArgument, "kernel is not a bimodule over the given algebra");
  const Algebra& a = *A;
  const int V = a.vertices(), n = a.size();
  const Ring& R = K.ring();
  if (K.is_zero_object()) return Complex::zero(R, A);
  struct Copy {
    int summand, w, vertex;
  };
  auto copies = [&](int k) {
    std::vector<Copy> out;
    const ModuleType& t = K.type(k);
    for (int s = 0; s < int(t.size()); ++s)
      for (int w : a.hom_basis(t[s] / V, i)) out.push_back({s, w, t[s] % V});
    return out;
  };
  auto type_of = [&](int k) {
    ModuleType t;
    for (auto& c : copies(k)) t.push_back(c.vertex);
    return t;
  };
  auto diff = [&](int k) {
    auto src = copies(k), tgt = copies(k + 1);
    MorphismSpace out(A, R, type_of(k), type_of(k + 1));
    Vec c(out.dim(), 0);
    std::map<std::tuple<int, int, int>, int> index;
    for (std::size_t m = 0; m < out.coordinate_list().size(); ++m) {
      const auto& co = out.coordinate_list()[m];
      index[{co.tgt_summand, co.src_summand, co.element}] = int(m);
    }
    MorphismSpace ks = K.space(k, k + 1);
    Vec kc = ks.coordinates(K.d(k));
    for (std::size_t m = 0; m < kc.size(); ++m) {
      if (!kc[m]) continue;
      const auto& co = ks.coordinate_list()[m];
      int u = co.element / n, v = co.element % n;
      for (int p = 0; p < int(src.size()); ++p) {
        if (src[p].summand != co.src_summand) continue;
        for (auto [z, coeff] : a.product(src[p].w, u)) {
          int q = 0;
          while (q < int(tgt.size()) && !(tgt[q].summand == co.tgt_summand && tgt[q].w == z)) ++q;
          require(q < int(tgt.size()), ErrorCode::InternalCocycleFailure, "tensor image lost a basis element");
          int slot = index.at({q, p, v});
          c[slot] = R.add(c[slot], R.mul(kc[m], R.from_int(coeff)));
        }
      }
    }
    return out.realize(c);
  };
  return Complex::build(R, A, K.lo(), K.hi(), type_of, diff);
}

// ---------------------------------------------------------------------------
// Semiorthogonality

struct HomVanishing {
  int source_vertex, target_vertex;
  int lo = 0, hi = -1;
  std::vector<int> central_dims;  // dim H^n over the residue field, n = lo..hi
  bool direct_acyclic = true;     // decided over the level ring itself
};

struct SemiorthogonalityCertificate {
  int level = 0;
  bool central_vanishing = false;
  bool direct_vanishing = false;
  std::vector<HomVanishing> pairs;

  bool certified() const { return central_vanishing && direct_vanishing; }
};

inline bool hom_acyclic(const HomComplex& h) {
  for (int n = h.lo(); n <= h.hi(); ++n) {
    RingSolver image(h.d(n - 1));
    for (auto& z : RingSolver(h.d(n)).kernel_generators())
      if (!image.in_image(z)) return false;
  }
  return true;
}

/// RHom(E_left(e_i A), E_right(e_j A)) for all vertices i, j, without raising.
inline SemiorthogonalityCertificate semiorthogonality(const Complex& left, const Complex& right, const AlgebraPtr& A,
                                                      int level) {
  SemiorthogonalityCertificate cert;
  cert.level = level;
  cert.central_vanishing = cert.direct_vanishing = true;
  const Ring field = left.ring().at_length(1);
  for (int i = 0; i < A->vertices(); ++i)
    for (int j = 0; j < A->vertices(); ++j) {
      Complex x = tensor_image(left, A, i), y = tensor_image(right, A, j);
      HomComplex direct(x, y), central(x.base_change(field), y.base_change(field));
      HomVanishing hv{i, j, central.lo(), central.hi(), {}, hom_acyclic(direct)};
      for (int n = central.lo(); n <= central.hi(); ++n) {
        int dim = central.cohomology(n).dim();
        hv.central_dims.push_back(dim);
        if (dim) cert.central_vanishing = false;
      }
      if (!hv.direct_acyclic) cert.direct_vanishing = false;
      cert.pairs.push_back(std::move(hv));
    }
  return cert;
}

/// Central-fiber vanishing plus the direct computation at the level; the two must agree.
inline SemiorthogonalityCertificate check_semiorthogonality(const Complex& left, const Complex& right,
                                                            const AlgebraPtr& A, int level) {
  SemiorthogonalityCertificate cert = semiorthogonality(left, right, A, level);
  require(cert.central_vanishing == cert.direct_vanishing, ErrorCode::InternalCocycleFailure,
          "Nakayama reduction disagrees with the direct computation at level " + std::to_string(level));
  if (!cert.central_vanishing)
    for (auto& pv : cert.pairs)
      for (int k = 0; k < int(pv.central_dims.size()); ++k)
        if (pv.central_dims[k])
          fail(ErrorCode::NotSemiorthogonal,
               "Hom^" + std::to_string(pv.lo + k) + " from the image of e" + std::to_string(pv.source_vertex + 1) +
                   "A to the image of e" + std::to_string(pv.target_vertex + 1) + "A has dimension " +
                   std::to_string(pv.central_dims[k]));
  return cert;
}

// ---------------------------------------------------------------------------
// Decomposition triangles

/// K2 -> diagonal -> K1 -> K2[1], with K1 a minimal model of the cone of the first map.
struct DecompositionTriangle {
  int level = 0;
  AlgebraPtr algebra;
  Complex K2, diagonal, K1;
  ChainMap iota;      // K2 -> diagonal
  ChainMap pi;        // diagonal -> K1
  ChainMap rotation;  // K1 -> K2[1]
  GradedMap composite_witness;  // D(w) = pi o iota
  ConeTriangle cone;
  HomotopyEquivalence cone_equivalence;  // cone(iota) -> K1
  SemiorthogonalityCertificate certificate;

  const Ring& ring() const { return K2.ring(); }
};

inline DecompositionTriangle make_triangle(int level, const AlgebraPtr& A, const Complex& K2, const Complex& diagonal,
                                           const ChainMap& iota) {
  require(iota.is_chain_map(), ErrorCode::ValidationError, "K2 -> diagonal is not a chain map");
  DecompositionTriangle t;
  t.level = level;
  t.algebra = A;
  t.K2 = K2;
  t.diagonal = diagonal;
  t.iota = iota;
  t.cone = cone(iota);
  MinimalModel mm = minimal_model(t.cone.cone);
  t.K1 = mm.complex;
  t.cone_equivalence = mm.equivalence;
  t.pi = compose(mm.equivalence.to, t.cone.inclusion);
  t.rotation = compose(t.cone.projection, mm.equivalence.from);
  t.composite_witness = compose(mm.equivalence.to, t.cone.witness);
  require(Homotopy{GradedMap::zero(K2, t.K1, 0), compose(t.pi, iota), t.composite_witness}.verify(),
          ErrorCode::InternalCocycleFailure, "composite witness fails");
  t.certificate = check_semiorthogonality(t.K2, t.K1, A, level);
  return t;
}

/// The diagonal of A2 resolved by P(1,2) -> P(1,1) + P(2,2), u (x) v in vertex pairs (1-based).
inline Complex a2_diagonal(const Ring& ring) {
  AlgebraPtr A = Algebra::a2();
  const Algebra& a = *A;
  enum { e1 = 0, e2 = 1, alpha = 2 };
  ModuleType src{bimodule_vertex(a, 0, 1)}, tgt{bimodule_vertex(a, 0, 0), bimodule_vertex(a, 1, 1)};
  Matrix d = bimodule_map(ring, A, src, tgt, {{0, 0, e1, alpha, -1}, {1, 0, alpha, e2, 1}});
  return Complex(ring, enveloping_of(A), -1, {src, tgt}, {d});
}

/// The triangle K2 -> diagonal -> K1 with K2 = A e1 A = P(1,1) over R0 = F_p (any ring is accepted).
inline DecompositionTriangle build_a2_sod(const Ring& ring) {
  AlgebraPtr A = Algebra::a2();
  const Algebra& a = *A;
  Complex diag = a2_diagonal(ring);
  ModuleType k2{bimodule_vertex(a, 0, 0)};
  Complex K2(ring, enveloping_of(A), 0, {k2}, {});
  ChainMap iota = GradedMap::build(K2, diag, 0, [&](int) {
    return bimodule_map(ring, A, k2, diag.type(0), {{0, 0, 0, 0, 1}});
  });
  return make_triangle(0, A, K2, diag, iota);
}
inline DecompositionTriangle build_a2_sod(std::uint32_t p) { return build_a2_sod(Ring(Family::TruncatedPoly, p, 1)); }

// ---------------------------------------------------------------------------
// Lifting along a ladder

struct TowerOptions {
  std::optional<std::uint64_t> seed;  // perturbs the naive lift at each step
  bool oracle_first_step = true;
  SearchBounds bounds;
};

struct TowerLevel {
  int level = 0;
  DecompositionTriangle triangle;
  std::optional<LiftReport> report;     // of the step that produced this level
  std::optional<LiftSolution> solution;
};

struct TowerRunResult {
  std::vector<TowerLevel> levels;
  std::optional<OracleReport> oracle;  // first step, enumerated
  bool verdict = false;
};

inline Complex lift_complex(const Complex& c, const Ring& target) {
  if (c.is_zero_object()) return Complex::zero(target, c.algebra());
  std::vector<ModuleType> types;
  std::vector<Matrix> diffs;
  for (int i = c.lo(); i <= c.hi(); ++i) {
    types.push_back(c.type(i));
    diffs.push_back(c.d(i).lift_to(target));
  }
  Complex out(target, c.algebra(), c.lo(), types, diffs);
  require(out.is_complex(), ErrorCode::InvalidArgument, "coordinatewise lift of the diagonal is not a complex");
  return out;
}

inline TowerRunResult tower_lift(const DecompositionTriangle& base, const TowerLadder& ladder,
                                 const TowerOptions& opts = {}) {
  require(base.level == 0 && base.ring() == ladder.level(0), ErrorCode::LevelMismatch,
          "the input triangle must live over the bottom of the ladder");
  TowerRunResult out;
  out.levels.push_back({0, base, std::nullopt, std::nullopt});
  for (int n = 0; n < ladder.steps(); ++n) {
    const Tower& T = ladder.step(n);
    const DecompositionTriangle cur = out.levels.back().triangle;
    Complex Gbar = lift_complex(cur.diagonal, T.rbar());
    LiftProblem p(T, cur.K2, cur.diagonal, cur.iota, Gbar);
    Classification cl = classify_lifts(p);
    const std::string at = " lifting to level " + std::to_string(n + 1);
    if (!cl.report.is_zero) fail(ErrorCode::LiftObstructed, "nonzero obstruction" + at);
    if (cl.report.h_minus1_dim || cl.report.h0_dim || cl.report.lift_class_count != std::uint64_t(1))
      fail(ErrorCode::UniquenessFailure, "more than one lift class" + at);
    if (n == 0 && opts.oracle_first_step) {
      out.oracle = run_oracle(p, opts.bounds);
      if (out.oracle->classes != std::uint64_t(1))
        fail(ErrorCode::UniquenessFailure, "oracle does not find exactly one class" + at);
    }
    LiftSolution sol = opts.seed ? correct_lift(p, naive_lift(p, *opts.seed + std::uint64_t(n))) : *cl.base;
    DecompositionTriangle next = make_triangle(n + 1, cur.algebra, sol.Fbar, Gbar, sol.sbar);
    out.levels.push_back({n + 1, std::move(next), cl.report, std::move(sol)});
  }
  out.verdict = true;
  return out;
}

struct TowerRow {
  int level = 0;
  std::optional<LiftReport> report;
  bool sod_certified = false;
};

inline std::vector<TowerRow> tower_table(const TowerRunResult& run) {
  std::vector<TowerRow> rows;
  for (auto& l : run.levels) rows.push_back({l.level, l.report, l.triangle.certificate.certified()});
  return rows;
}

// ---------------------------------------------------------------------------
// Comparing two runs

struct LevelIsomorphism {
  int level = 0;
  GradedMap c;  // K2 of the first run -> K2 of the second
  GradedMap h;  // D(h) = s2 o c - s1
  int automorphism_dim = 0;  // h0 of the step; zero means c is unique up to homotopy
};

struct UniquenessCertificate {
  bool consistent = false;
  bool unique = false;
  std::vector<LevelIsomorphism> levels;
  std::string mismatch;
};

namespace detail {

inline std::string reduction_failure(const TowerRunResult& run, int n) {
  const DecompositionTriangle &hi = run.levels[n].triangle, &lo = run.levels[n - 1].triangle;
  if (hi.K2.base_change(lo.ring()) != lo.K2) return "K2 does not reduce";
  if (hi.diagonal.base_change(lo.ring()) != lo.diagonal) return "the diagonal does not reduce";
  if (!(hi.iota.base_change(lo.ring()).retarget(lo.K2, lo.diagonal) == lo.iota)) return "K2 -> diagonal does not reduce";
  return {};
}

inline bool is_isomorphism(const GradedMap& c) {
  for (auto& m : c.components())
    if (m.rows() != m.cols() || !invert(m)) return false;
  return true;
}

}  // namespace detail

/// Level-wise isomorphisms c_n between the K2 of two runs over the same input, with c_{n+1} reducing to c_n.
inline UniquenessCertificate uniqueness_certificate(const TowerRunResult& a, const TowerRunResult& b) {
  UniquenessCertificate out;
  auto mismatch = [&](std::string why) {
    out.mismatch = std::move(why);
    return out;
  };
  if (a.levels.size() != b.levels.size() || a.levels.empty()) return mismatch("runs have different depths");
  const DecompositionTriangle &a0 = a.levels[0].triangle, &b0 = b.levels[0].triangle;
  if (a0.K2 != b0.K2 || a0.diagonal != b0.diagonal || !(a0.iota == b0.iota)) return mismatch("runs have different inputs");
  out.levels.push_back({0, GradedMap::identity(a0.K2), GradedMap::zero(a0.K2, a0.diagonal, -1), 0});
  bool unique = true;
  for (int n = 1; n < int(a.levels.size()); ++n) {
    const std::string at = " at level " + std::to_string(n);
    for (const TowerRunResult* r : {&a, &b}) {
      std::string why = detail::reduction_failure(*r, n);
      if (!why.empty()) return mismatch(std::string(r == &a ? "first" : "second") + " run: " + why + at);
    }
    const DecompositionTriangle &ta = a.levels[n].triangle, &tb = b.levels[n].triangle;
    if (ta.diagonal != tb.diagonal) return mismatch("different diagonals" + at);
    const Ring& R = ta.ring();
    Tower T = make_tower(R, a.levels[n - 1].triangle.ring(), a0.ring());
    const Elem bgen = T.b_basis();
    const Complex &F1 = ta.K2, &F2 = tb.K2, &G = ta.diagonal;
    if (F1.lo() != F2.lo() || F1.hi() != F2.hi()) return mismatch("K2 supports differ" + at);

    const GradedMap& prev = out.levels.back().c;
    std::vector<Matrix> lifted;
    for (auto& m : prev.components()) lifted.push_back(m.lift_to(R));
    GradedMap c0(F1, F2, 0, lifted);
    const GradedMap s1 = ta.iota, s2 = tb.iota.retarget(F2, G);

    // b D(gamma) = -D(c0),  b (s2 gamma) - D(h) = s1 - s2 c0.
    HomComplex ff(F1, F2), fg(F1, G);
    const int ng = ff.dim(0), nh = fg.dim(-1), nx = ff.dim(1), ny = fg.dim(0);
    Matrix sys(R, nx + ny, ng + nh);
    for (int k = 0; k < ng; ++k) {
      Vec e(ng, 0);
      e[k] = 1;
      for (int r = 0; r < nx; ++r) sys(r, k) = R.mul(bgen, ff.d(0)(r, k));
      Vec y = fg.to_vector(compose(s2, ff.from_vector(0, e)));
      for (int r = 0; r < ny; ++r) sys(nx + r, k) = R.mul(bgen, y[r]);
    }
    for (int k = 0; k < nh; ++k)
      for (int r = 0; r < ny; ++r) sys(nx + r, ng + k) = R.neg(fg.d(-1)(r, k));
    Vec rhs(nx + ny, 0);
    Vec dx = ff.to_vector(c0.differential());
    for (int r = 0; r < nx; ++r) rhs[r] = R.neg(dx[r]);
    Vec dy = fg.to_vector(s1 - compose(s2, c0));
    for (int r = 0; r < ny; ++r) rhs[nx + r] = dy[r];
    auto sol = RingSolver(sys).solve(rhs);
    if (!sol) return mismatch("no compatible isomorphism" + at);
    Vec gamma(sol->begin(), sol->begin() + ng), hv(sol->begin() + ng, sol->end());
    GradedMap c = c0 + ff.from_vector(0, gamma).scaled(bgen);
    GradedMap h = fg.from_vector(-1, hv);
    require(c.is_chain_map() && detail::is_isomorphism(c) && Homotopy{s1, compose(s2, c), h}.verify(),
            ErrorCode::InternalCocycleFailure, "level isomorphism fails verification" + at);
    int aut = a.levels[n].report ? a.levels[n].report->h0_dim : 0;
    if (aut) unique = false;
    out.levels.push_back({n, c, h, aut});
  }
  out.consistent = true;
  out.unique = unique;
  return out;
}

}  // namespace defobs
