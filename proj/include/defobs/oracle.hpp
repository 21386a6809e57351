#pragma once

// Brute-force ground truth for small instances. Every graded lift differs from the canonical
// one by b times a residue-field coordinate vector; enumerate all of them and keep those with
// dbar o dbar = 0 and d_Gbar o sbar = sbar o dbar. Candidates are visited in a modular Gray
// code so that one coordinate changes per step and the residuals are updated in place.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "defobs/complexes.hpp"
#include "defobs/error.hpp"
#include "defobs/obstruction.hpp"

namespace defobs {

struct SearchBounds {
  int max_total_rank = 12;  // per complex
  int max_length = 6;       // support length per complex
  std::uint64_t max_candidates = std::uint64_t(1) << 16;
  double time_budget = 60.0;  // seconds
  int workers = 1;
};

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct OracleLifts {
  std::vector<std::uint64_t> indices;  // canonical candidate indices of the valid lifts, sorted
  std::uint64_t candidates_scanned = 0;
  double elapsed = 0;
};

class LiftEnumerator {
 public:
  struct Entry {
    int row, col;
    Elem value;
  };
  struct Unknown {
    bool is_d;  // else an entry of sbar
    int degree;
    std::vector<Entry> delta;  // b times one basis element
  };

  LiftEnumerator(const LiftProblem& p, const SearchBounds& bounds = {}) : p_(&p), ring_(p.tower().rbar()) {
    const Complex& F = p.F();
    check_shape(F, bounds);
    check_shape(p.G(), bounds);
    q_ = p.tower().r0().size();
    base_ = naive_lift(p);
    if (F.is_zero_object()) return;
    lo_ = F.lo(), hi_ = F.hi();
    const Elem b = p.tower().b_basis();
    for (int i = lo_; i <= hi_; ++i) {
      for (int kind = 0; kind < 2; ++kind) {
        MorphismSpace sp = kind == 0 ? p.d_space(i, ring_) : p.s_space(i, ring_);
        for (int k = 0; k < sp.dim(); ++k) {
          Matrix e = sp.basis_element(k);
          Unknown u{kind == 0, i, {}};
          for (int r = 0; r < e.rows(); ++r)
            for (int c = 0; c < e.cols(); ++c)
              if (e(r, c)) u.delta.push_back({r, c, ring_.mul(b, e(r, c))});
          unknowns_.push_back(std::move(u));
        }
      }
    }
  }

  const std::vector<Unknown>& unknowns() const { return unknowns_; }
  std::uint32_t radix() const { return q_; }

  /// Number of candidates, saturating at UINT64_MAX.
  std::uint64_t candidate_count() const { return ipow(q_, int(unknowns_.size())); }

  std::vector<std::uint32_t> digits_of(std::uint64_t index) const {
    std::vector<std::uint32_t> d(unknowns_.size());
    for (auto& x : d) {
      x = std::uint32_t(index % q_);
      index /= q_;
    }
    return d;
  }

  GradedLift candidate(std::uint64_t index) const {
    GradedLift g = base_;
    auto digits = digits_of(index);
    for (std::size_t k = 0; k < unknowns_.size(); ++k) {
      const Unknown& u = unknowns_[k];
      Matrix& m = u.is_d ? g.d[u.degree - lo_] : g.s[u.degree - lo_];
      for (std::uint32_t rep = 0; rep < digits[k]; ++rep)
        for (auto& e : u.delta) m(e.row, e.col) = ring_.add(m(e.row, e.col), e.value);
    }
    return g;
  }

  LiftSolution solution(std::uint64_t index) const { return solution_from(*p_, candidate(index)); }

  /// Candidate index of a lift of (d_F, s), or nullopt if it is not b-close to the canonical lift.
  std::optional<std::uint64_t> index_of(const LiftSolution& sol) const {
    GradedLift g = sol.graded();
    const Tower& T = p_->tower();
    std::uint64_t index = 0, scale = 1;
    for (int i = lo_; i <= hi_ && !unknowns_.empty(); ++i) {
      for (int kind = 0; kind < 2; ++kind) {
        MorphismSpace sp = kind == 0 ? p_->d_space(i, ring_) : p_->s_space(i, ring_);
        const Matrix& have = kind == 0 ? g.d[i - lo_] : g.s[i - lo_];
        const Matrix& base = kind == 0 ? base_.d[i - lo_] : base_.s[i - lo_];
        for (Elem x : sp.coordinates(have - base)) {
          Elem digit;
          try {
            digit = T.b_decompose(x);
          } catch (const Error&) {
            return std::nullopt;
          }
          index += std::uint64_t(digit) * scale;
          scale *= q_;
        }
      }
    }
    return index;
  }

  OracleLifts run(const SearchBounds& bounds) const {
    const auto t0 = Clock::now();
    const std::uint64_t total = candidate_count();
    if (total > bounds.max_candidates)
      fail(ErrorCode::BoundsExceeded, "candidate space of size " + std::to_string(q_) + "^" +
                                          std::to_string(unknowns_.size()) + " exceeds the cap of " +
                                          std::to_string(bounds.max_candidates));
    OracleLifts out;
    const int workers = std::max(1, std::min<int>(bounds.workers, int(std::min<std::uint64_t>(total, 64))));
    std::vector<std::vector<std::uint64_t>> found(workers);
    std::vector<std::uint64_t> scanned(workers, 0);
    auto work = [&](int w) {
      std::uint64_t begin = total * w / workers, end = total * (w + 1) / workers;
      scanned[w] = scan(begin, end, found[w], t0, bounds.time_budget);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(workers);
      for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
          try {
            work(w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      for (auto& t : threads) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (int w = 0; w < workers; ++w) {
      out.indices.insert(out.indices.end(), found[w].begin(), found[w].end());
      out.candidates_scanned += scanned[w];
    }
    std::sort(out.indices.begin(), out.indices.end());
    out.elapsed = seconds_since(t0);
    return out;
  }

 private:
  static void check_shape(const Complex& c, const SearchBounds& bounds) {
    if (c.is_zero_object()) return;
    Complex t = c.trimmed();
    if (t.is_zero_object()) return;
    if (t.total_rank() > bounds.max_total_rank || t.hi() - t.lo() + 1 > bounds.max_length)
      fail(ErrorCode::BoundsExceeded, "complex exceeds the oracle rank or length bounds");
  }

  // Dense row-major matrix over Rbar with in-place entry updates.
  struct Dense {
    int rows = 0, cols = 0;
    std::vector<Elem> a;
    Elem& at(int r, int c) { return a[std::size_t(r) * cols + c]; }
    Elem at(int r, int c) const { return a[std::size_t(r) * cols + c]; }
    static Dense of(const Matrix& m) {
      Dense d{m.rows(), m.cols(), m.data()};
      return d;
    }
  };

  struct State {
    std::vector<Dense> D, S, E, C, dG;
    std::int64_t nonzero = 0;
  };

  // Gray digit j of counter k: (k_j - k_{j+1}) mod q.
  std::vector<std::uint32_t> gray(std::uint64_t k) const {
    auto d = digits_of(k);
    std::vector<std::uint32_t> g(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
      std::uint32_t next = j + 1 < d.size() ? d[j + 1] : 0;
      g[j] = (d[j] + q_ - next) % q_;
    }
    return g;
  }

  std::uint64_t index_from_digits(const std::vector<std::uint32_t>& d) const {
    std::uint64_t x = 0;
    for (std::size_t j = d.size(); j-- > 0;) x = x * q_ + d[j];
    return x;
  }

  State initial_state(const std::vector<std::uint32_t>& digits) const {
    GradedLift g = base_;
    for (std::size_t k = 0; k < unknowns_.size(); ++k) {
      const Unknown& u = unknowns_[k];
      Matrix& m = u.is_d ? g.d[u.degree - lo_] : g.s[u.degree - lo_];
      for (std::uint32_t rep = 0; rep < digits[k]; ++rep)
        for (auto& e : u.delta) m(e.row, e.col) = ring_.add(m(e.row, e.col), e.value);
    }
    State st;
    const Complex& F = p_->F();
    const Complex& Gb = p_->Gbar();
    for (int i = lo_; i <= hi_; ++i) {
      st.D.push_back(Dense::of(g.d[i - lo_]));
      st.S.push_back(Dense::of(g.s[i - lo_]));
      st.dG.push_back(Dense::of(Gb.d(i)));
    }
    for (int i = lo_; i <= hi_; ++i) {
      Matrix dnext = i + 1 <= hi_ ? g.d[i + 1 - lo_] : Matrix(ring_, F.rank(i + 2), F.rank(i + 1));
      Matrix snext = i + 1 <= hi_ ? g.s[i + 1 - lo_] : Matrix(ring_, p_->G().rank(i + 1), F.rank(i + 1));
      st.E.push_back(Dense::of(dnext * g.d[i - lo_]));
      st.C.push_back(Dense::of(Gb.d(i) * g.s[i - lo_] - snext * g.d[i - lo_]));
    }
    for (auto* group : {&st.E, &st.C})
      for (auto& m : *group)
        for (Elem x : m.a) st.nonzero += x != 0;
    return st;
  }

  void bump(State& st, Dense& m, int r, int c, Elem delta) const {
    if (!delta) return;
    Elem& x = m.at(r, c);
    Elem y = ring_.add(x, delta);
    st.nonzero += (y != 0) - (x != 0);
    x = y;
  }

  // Adds b * basis element of unknown k once.
  void apply(State& st, const Unknown& u) const {
    const int k = u.degree - lo_;
    const bool has_prev = u.degree > lo_, has_next = u.degree < hi_;
    for (const Entry& e : u.delta) {
      if (u.is_d) {
        // E[k] = D[k+1] D[k]: column e.col gains D[k+1](:, e.row) v.
        if (has_next) {
          const Dense& dn = st.D[k + 1];
          for (int x = 0; x < dn.rows; ++x) bump(st, st.E[k], x, e.col, ring_.mul(dn.at(x, e.row), e.value));
          // C[k] = dG S[k] - S[k+1] D[k]: column e.col loses S[k+1](:, e.row) v.
          const Dense& sn = st.S[k + 1];
          for (int x = 0; x < sn.rows; ++x) bump(st, st.C[k], x, e.col, ring_.neg(ring_.mul(sn.at(x, e.row), e.value)));
        }
        // E[k-1] = D[k] D[k-1]: row e.row gains v D[k-1](e.col, :).
        if (has_prev) {
          const Dense& dp = st.D[k - 1];
          for (int y = 0; y < dp.cols; ++y) bump(st, st.E[k - 1], e.row, y, ring_.mul(e.value, dp.at(e.col, y)));
        }
        Elem& x = st.D[k].at(e.row, e.col);
        x = ring_.add(x, e.value);
      } else {
        const Dense& g = st.dG[k];
        for (int x = 0; x < g.rows; ++x) bump(st, st.C[k], x, e.col, ring_.mul(g.at(x, e.row), e.value));
        if (has_prev) {
          const Dense& dp = st.D[k - 1];
          for (int y = 0; y < dp.cols; ++y)
            bump(st, st.C[k - 1], e.row, y, ring_.neg(ring_.mul(e.value, dp.at(e.col, y))));
        }
        Elem& x = st.S[k].at(e.row, e.col);
        x = ring_.add(x, e.value);
      }
    }
  }

  std::uint64_t scan(std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& found, Clock::time_point t0,
                     double budget) const {
    if (begin >= end) return 0;
    std::vector<std::uint32_t> g = gray(begin);
    State st = initial_state(g);
    std::uint64_t scanned = 0;
    for (std::uint64_t k = begin;;) {
      ++scanned;
      if (st.nonzero == 0) found.push_back(index_from_digits(g));
      if (++k == end) break;
      if ((k & 4095) == 0 && seconds_since(t0) > budget)
        fail(ErrorCode::TimeBudgetExceeded, "oracle time budget of " + std::to_string(budget) + "s exhausted");
      // The Gray digit that changes is the number of trailing zero base-q digits of k.
      std::size_t j = 0;
      for (std::uint64_t x = k; x % q_ == 0; x /= q_) ++j;
      g[j] = (g[j] + 1) % q_;
      apply(st, unknowns_[j]);
    }
    return scanned;
  }

  const LiftProblem* p_;
  Ring ring_;
  std::uint32_t q_ = 2;
  GradedLift base_;
  int lo_ = 0, hi_ = -1;
  std::vector<Unknown> unknowns_;
};

inline OracleLifts enumerate_lifts(const LiftProblem& p, const SearchBounds& bounds = {}) {
  return LiftEnumerator(p, bounds).run(bounds);
}

struct OracleClasses {
  std::uint64_t classes = 0;
  std::vector<std::uint64_t> representatives;  // candidate indices
  std::vector<int> class_of;                   // per raw lift
  double elapsed = 0;
};

/// Groups raw lifts into classes: L ~ rep iff some c = 1 + b gamma with d_L = c d_rep c^-1
/// has s_L - s_rep c^-1 null-homotopic as a map into Gbar. All gamma are tried.
inline OracleClasses count_classes(const LiftProblem& p, const OracleLifts& raw, const SearchBounds& bounds = {}) {
  const auto t0 = Clock::now();
  const Tower& T = p.tower();
  const Ring& Rb = T.rbar();
  const std::uint32_t q = T.r0().size();
  LiftEnumerator en(p, bounds);
  OracleClasses out;
  const std::size_t n = raw.indices.size();
  out.class_of.assign(n, -1);
  if (n == 0) return out;
  std::vector<LiftSolution> lifts;
  std::unordered_map<std::string, std::vector<std::size_t>> by_d;
  auto key = [&](const Complex& c) {
    std::string s;
    if (p.F().is_zero_object()) return s;
    for (int i = p.F().lo(); i <= p.F().hi(); ++i) {
      Matrix d = c.d(i);
      for (Elem x : d.data()) s += std::to_string(x) + ",";
    }
    return s;
  };
  for (std::size_t k = 0; k < n; ++k) {
    lifts.push_back(en.solution(raw.indices[k]));
    by_d[key(lifts.back().Fbar)].push_back(k);
  }
  HomComplex end0(p.F(), p.F());
  const int ng = end0.dim(0);
  const std::uint64_t gammas = ipow(q, ng);
  if (gammas > bounds.max_candidates)
    fail(ErrorCode::BoundsExceeded, "isomorphism candidate space exceeds the cap");
  HomComplex end_bar(lifts[0].Fbar, lifts[0].Fbar);
  // Per differential: a null-homotopy solver and the raw lifts bucketed by homotopy class of sbar.
  struct Bucket {
    std::unique_ptr<NullHomotopySolver> nh;
    std::map<Vec, std::vector<std::size_t>> by_class;
  };
  std::unordered_map<std::string, Bucket> buckets;
  for (auto& [dk, members] : by_d) {
    Bucket& b = buckets[dk];
    b.nh = std::make_unique<NullHomotopySolver>(lifts[members[0]].Fbar, p.Gbar());
    for (std::size_t k : members) b.by_class[b.nh->homotopy_key(lifts[k].sbar)].push_back(k);
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (out.class_of[r] >= 0) continue;
    const int cls = int(out.classes++);
    out.representatives.push_back(raw.indices[r]);
    out.class_of[r] = cls;
    const LiftSolution& rep = lifts[r];
    for (std::uint64_t gi = 0; gi < gammas; ++gi) {
      if ((gi & 255) == 0 && seconds_since(t0) > bounds.time_budget)
        fail(ErrorCode::TimeBudgetExceeded, "oracle time budget exhausted while counting classes");
      Vec gcoords(ng);
      std::uint64_t x = gi;
      for (auto& c : gcoords) {
        c = Elem(x % q);
        x /= q;
      }
      GradedMap gamma = end_bar.from_vector(0, gcoords).scaled(T.b_basis()).retarget(rep.Fbar, rep.Fbar);
      GradedMap c = GradedMap::identity(rep.Fbar) + gamma;
      GradedMap c_inv = GradedMap::identity(rep.Fbar) - gamma;
      Complex moved = Complex::build(
          Rb, rep.Fbar.algebra(), rep.Fbar.lo(), rep.Fbar.hi(), [&](int i) { return rep.Fbar.type(i); },
          [&](int i) { return c.at(i + 1) * rep.Fbar.d(i) * c_inv.at(i); });
      auto it = buckets.find(key(moved));
      if (it == buckets.end()) continue;
      const Complex& target = it->second.nh->hom().source();
      GradedMap moved_s = compose(rep.sbar, c_inv.retarget(target, rep.Fbar));
      auto hit = it->second.by_class.find(it->second.nh->homotopy_key(moved_s));
      if (hit == it->second.by_class.end()) continue;
      for (std::size_t k : hit->second)
        if (out.class_of[k] < 0) out.class_of[k] = cls;
    }
  }
  out.elapsed = seconds_since(t0);
  return out;
}

struct OracleReport {
  std::uint64_t candidates_scanned = 0;
  std::uint64_t lifts_found = 0;
  std::optional<std::uint64_t> classes;
  double elapsed = 0;
};

inline OracleReport run_oracle(const LiftProblem& p, const SearchBounds& bounds = {}, bool classify = true) {
  const auto t0 = Clock::now();
  OracleLifts raw = enumerate_lifts(p, bounds);
  OracleReport r;
  r.candidates_scanned = raw.candidates_scanned;
  r.lifts_found = raw.indices.size();
  if (classify) {
    SearchBounds rest = bounds;
    rest.time_budget = std::max(0.0, bounds.time_budget - seconds_since(t0));
    r.classes = count_classes(p, raw, rest).classes;
  }
  r.elapsed = seconds_since(t0);
  return r;
}

// ---------------------------------------------------------------------------
// Objects (G = 0)

inline LiftProblem object_problem(const Tower& T, const Complex& F) {
  Complex zero = Complex::zero(T.r(), F.algebra());
  return LiftProblem(T, F, zero, GradedMap::zero(F, zero, 0), Complex::zero(T.rbar(), F.algebra()));
}

/// Whether F lifts to a complex over Rbar, decided by exhaustion.
inline bool object_obstruction_oracle(const Tower& T, const Complex& F, const SearchBounds& bounds = {}) {
  return !enumerate_lifts(object_problem(T, F), bounds).indices.empty();
}

/// The object obstruction b^-1 (dtilde o dtilde) in Ext^2(F0, F0), and dim Ext^1(F0, F0),
/// computed on End(F0) directly.
struct ObjectExt {
  bool obstruction_zero = true;
  Vec class_coordinates;
  int ext1_dim = 0;
  int ext2_dim = 0;
};

inline ObjectExt object_ext(const Tower& T, const Complex& F) {
  Complex F0 = F.base_change(T.r0());
  HomComplex end(F0, F0);
  ObjectExt out;
  out.ext1_dim = end.cohomology(1).dim();
  Cohomology h2 = end.cohomology(2);
  out.ext2_dim = h2.dim();
  if (F.is_zero_object()) return out;
  GradedMap e = GradedMap::build(F0, F0, 2, [&](int i) {
    auto lift = [&](int j) {
      return MorphismSpace(F.algebra(), T.rbar(), F.type(j), F.type(j + 1))
          .realize(F.space(j, j + 1).coordinates(F.d(j)));
    };
    return b_decompose(T, lift(i + 1) * lift(i));
  });
  Vec v = end.to_vector(e);
  out.class_coordinates = h2.coordinates(v);
  out.obstruction_zero = h2.is_coboundary(v);
  return out;
}

}  // namespace defobs
