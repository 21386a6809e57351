#pragma once

// Finite commutative local coefficient rings F_p[t]/(t^n) and Z/p^n, and the
// small-extension towers built from them.
//
// Both families share one element encoding: an element is the integer whose
// base-p digits are its coefficients (t-adic for the polynomial family,
// p-adic for the integers). Reduction to a lower level, the canonical lift,
// valuation, and division by a power of the uniformizer are then the same
// integer operations for both families; only +, - and * differ.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "defobs/error.hpp"

namespace defobs {

using Elem = std::uint32_t;

enum class Family { TruncatedPoly, IntegersMod };

namespace detail {

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Addition and multiplication tables for small truncated polynomial rings.
struct PolyTables {
  std::uint32_t q = 0;
  std::vector<std::uint16_t> add, mul, neg;
};

inline std::uint32_t poly_add_slow(std::uint32_t p, int n, std::uint32_t a, std::uint32_t b) {
  std::uint32_t out = 0, scale = 1;
  for (int i = 0; i < n; ++i) {
    out += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return out;
}

inline std::uint32_t poly_neg_slow(std::uint32_t p, int n, std::uint32_t a) {
  std::uint32_t out = 0, scale = 1;
  for (int i = 0; i < n; ++i) {
    out += ((p - a % p) % p) * scale;
    a /= p;
    scale *= p;
  }
  return out;
}

inline std::uint32_t poly_mul_slow(std::uint32_t p, int n, std::uint32_t a, std::uint32_t b) {
  std::uint32_t da[32], db[32];
  for (int i = 0; i < n; ++i) {
    da[i] = a % p;
    a /= p;
    db[i] = b % p;
    b /= p;
  }
  std::uint32_t out = 0, scale = 1;
  for (int k = 0; k < n; ++k) {
    std::uint64_t c = 0;
    for (int i = 0; i <= k; ++i) c += std::uint64_t(da[i]) * db[k - i];
    out += std::uint32_t(c % p) * scale;
    scale *= p;
  }
  return out;
}

inline std::shared_ptr<const PolyTables> poly_tables(std::uint32_t p, int n, std::uint32_t q) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, int>, std::shared_ptr<const PolyTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{p, n}];
  if (!slot) {
    auto t = std::make_shared<PolyTables>();
    t->q = q;
    t->add.resize(std::size_t(q) * q);
    t->mul.resize(std::size_t(q) * q);
    t->neg.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      t->neg[a] = std::uint16_t(poly_neg_slow(p, n, a));
      for (std::uint32_t b = 0; b < q; ++b) {
        t->add[a * q + b] = std::uint16_t(poly_add_slow(p, n, a, b));
        t->mul[a * q + b] = std::uint16_t(poly_mul_slow(p, n, a, b));
      }
    }
    slot = std::move(t);
  }
  return slot;
}

inline constexpr std::uint32_t kTableLimit = 256;

}  // namespace detail

/// A finite local ring F_p[t]/(t^n) or Z/p^n. Cheap to copy; immutable.
class Ring {
 public:
  Ring() = default;

  Ring(Family family, std::uint32_t p, int n) : family_(family), p_(p), n_(n) {
    require(detail::is_prime(p), ErrorCode::InvalidArgument, "p=" + std::to_string(p) + " is not prime");
    require(n >= 1 && n < 31, ErrorCode::InvalidArgument, "truncation length must lie in [1, 30]");
    std::uint64_t q = 1;
    for (int i = 0; i < n; ++i) {
      q *= p;
      require(q < (1ull << 31), ErrorCode::InvalidArgument, "ring too large");
    }
    q_ = std::uint32_t(q);
    if (family_ == Family::TruncatedPoly && n_ > 1 && q_ <= detail::kTableLimit)
      tables_ = detail::poly_tables(p_, n_, q_);
  }

  static Ring truncated_poly(std::uint32_t p, int n) { return Ring(Family::TruncatedPoly, p, n); }
  static Ring integers_mod(std::uint32_t p, int n) { return Ring(Family::IntegersMod, p, n); }

  Family family() const { return family_; }
  std::uint32_t characteristic_prime() const { return p_; }
  std::uint32_t p() const { return p_; }
  /// Nilpotency length n: the maximal ideal satisfies m^n = 0 and m^(n-1) != 0.
  int length() const { return n_; }
  std::uint32_t size() const { return q_; }
  bool is_field() const { return n_ == 1; }

  bool same_family(const Ring& other) const { return family_ == other.family_ && p_ == other.p_; }
  bool operator==(const Ring& o) const { return family_ == o.family_ && p_ == o.p_ && n_ == o.n_; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  bool contains(Elem a) const { return a < q_; }

  Elem add(Elem a, Elem b) const {
    if (family_ == Family::IntegersMod || n_ == 1) {
      std::uint32_t s = a + b;
      return s >= q_ ? s - q_ : s;
    }
    if (tables_) return tables_->add[a * q_ + b];
    return detail::poly_add_slow(p_, n_, a, b);
  }

  Elem neg(Elem a) const {
    if (family_ == Family::IntegersMod || n_ == 1) return a == 0 ? 0 : q_ - a;
    if (tables_) return tables_->neg[a];
    return detail::poly_neg_slow(p_, n_, a);
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (family_ == Family::IntegersMod || n_ == 1) return Elem(std::uint64_t(a) * b % q_);
    if (tables_) return tables_->mul[a * q_ + b];
    return detail::poly_mul_slow(p_, n_, a, b);
  }

  /// Image of an integer under Z -> ring.
  Elem from_int(long long k) const {
    if (family_ == Family::IntegersMod) {
      long long r = k % static_cast<long long>(q_);
      return Elem(r < 0 ? r + q_ : r);
    }
    long long r = k % static_cast<long long>(p_);
    return Elem(r < 0 ? r + p_ : r);
  }

  bool is_unit(Elem a) const { return a % p_ != 0; }

  /// Largest v with a in m^v; returns length() for zero.
  int valuation(Elem a) const {
    if (a == 0) return n_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  /// The v-th power of the uniformizer (t or p).
  Elem pi_power(int v) const {
    if (v >= n_) return 0;
    Elem r = 1;
    for (int i = 0; i < v; ++i) r *= p_;
    return r;
  }

  /// Canonical x with pi^v * x = a, for a of valuation at least v.
  Elem divide_pi_power(Elem a, int v) const {
    Elem d = 1;
    for (int i = 0; i < v && i < n_; ++i) d *= p_;
    return a / d;
  }

  Elem inverse(Elem a) const {
    require(is_unit(a), ErrorCode::InvalidArgument, "inverse of a non-unit");
    // Fermat on the residue, then Newton iteration x <- x (2 - a x).
    std::uint64_t base = a % p_, r = 1;
    for (std::uint32_t e = p_ - 2; e; e >>= 1) {
      if (e & 1) r = r * base % p_;
      base = base * base % p_;
    }
    Elem x = Elem(r);
    for (int prec = 1; prec < n_; prec *= 2) x = mul(x, sub(from_int(2), mul(a, x)));
    return x;
  }

  /// Base-p digits, lowest first; the coefficient list of the element.
  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> out(n_);
    for (int i = 0; i < n_; ++i) {
      out[i] = a % p_;
      a /= p_;
    }
    return out;
  }

  Elem from_digits(const std::vector<long long>& coeffs) const {
    require(int(coeffs.size()) <= n_, ErrorCode::InvalidArgument, "too many coefficients");
    Elem out = 0, scale = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      long long c = coeffs[i] % static_cast<long long>(p_);
      if (c < 0) c += p_;
      out += Elem(c) * scale;
      scale *= p_;
    }
    return out;
  }

  /// Image under the quotient map to a lower level of the same family.
  Elem reduce_to(Elem a, const Ring& target) const {
    require(same_family(target), ErrorCode::FamilyMismatch, "reduction across families");
    require(target.n_ <= n_, ErrorCode::LevelError, "reduction must go down in level");
    return a % target.q_;
  }

  /// Canonical coefficient-wise lift to a higher level of the same family.
  Elem lift_to(Elem a, const Ring& target) const {
    require(same_family(target), ErrorCode::FamilyMismatch, "lift across families");
    require(target.n_ >= n_, ErrorCode::LevelError, "lift must go up in level");
    return a;
  }

  /// Ring with the same family and prime at another truncation length.
  Ring at_length(int n) const { return Ring(family_, p_, n); }

  std::string format(Elem a) const;
  std::string descriptor() const;

 private:
  Family family_ = Family::IntegersMod;
  std::uint32_t p_ = 2;
  int n_ = 1;
  std::uint32_t q_ = 2;
  std::shared_ptr<const detail::PolyTables> tables_;
};

inline std::string Ring::format(Elem a) const {
  if (family_ == Family::IntegersMod) return std::to_string(a);
  if (n_ == 1) return std::to_string(a);
  auto d = digits(a);
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n_; ++i) os << (i ? "," : "") << d[i];
  os << ')';
  return os.str();
}

inline std::string Ring::descriptor() const {
  std::ostringstream os;
  if (family_ == Family::TruncatedPoly)
    os << "Fp[t]/t^n p=" << p_ << " n=" << n_;
  else
    os << "Z/p^n p=" << p_ << " n=" << n_;
  return os.str();
}

/// Parses "Fp[t]/t^n p=<p> n=<n>" or "Z/p^n p=<p> n=<n>".
inline Ring parse_ring(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string head;
  is >> head;
  Family family;
  if (head == "Fp[t]/t^n")
    family = Family::TruncatedPoly;
  else if (head == "Z/p^n")
    family = Family::IntegersMod;
  else
    fail(ErrorCode::ParseError, "unknown ring family '" + head + "'");
  std::optional<long long> p, n;
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "expected key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq);
    long long value = 0;
    try {
      value = std::stoll(tok.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad integer in '" + tok + "'");
    }
    if (key == "p")
      p = value;
    else if (key == "n")
      n = value;
    else
      fail(ErrorCode::ParseError, "unknown ring parameter '" + key + "'");
  }
  if (!p || !n) fail(ErrorCode::ParseError, "ring descriptor needs p= and n=");
  if (*p < 2 || *p > 65535 || *n < 1 || *n > 30) fail(ErrorCode::ParseError, "ring parameters out of range");
  return Ring(family, std::uint32_t(*p), int(*n));
}

// ---------------------------------------------------------------------------
// Towers

/// A small extension Rbar ->> R ->> R0 with a = ker(Rbar -> R0), b = ker(Rbar -> R).
///
/// Both ideals are powers of the maximal ideal: a = (pi^len(R0)), b = (pi^len(R)).
/// b is required to be free of rank one over the field R0, with basis pi^len(R).
class Tower {
 public:
  const Ring& rbar() const { return rbar_; }
  const Ring& r() const { return r_; }
  const Ring& r0() const { return r0_; }

  /// Generators of a and b inside Rbar.
  Elem a_generator() const { return rbar_.pi_power(r0_.length()); }
  Elem b_generator() const { return rbar_.pi_power(r_.length()); }
  /// The chosen R0-basis of b.
  Elem b_basis() const { return b_generator(); }

  /// c * basis(b) for c in R0.
  Elem b_scale(Elem c) const { return rbar_.mul(b_basis(), c); }

  /// The unique c in R0 with x = c * basis(b).
  Elem b_decompose(Elem x) const {
    require(rbar_.valuation(x) >= r_.length(), ErrorCode::NotInB,
            "element " + rbar_.format(x) + " does not lie in b");
    return rbar_.divide_pi_power(x, r_.length()) % r0_.size();
  }

  Elem reduce_to_r(Elem x) const { return rbar_.reduce_to(x, r_); }
  Elem reduce_to_r0(Elem x) const { return rbar_.reduce_to(x, r0_); }
  Elem lift_from_r(Elem x) const { return r_.lift_to(x, rbar_); }

 private:
  friend Tower make_tower(const Ring&, const Ring&, const Ring&);
  Tower(Ring rbar, Ring r, Ring r0) : rbar_(std::move(rbar)), r_(std::move(r)), r0_(std::move(r0)) {}
  Ring rbar_, r_, r0_;
};

inline Tower make_tower(const Ring& rbar, const Ring& r, const Ring& r0) {
  require(rbar.same_family(r) && r.same_family(r0), ErrorCode::FamilyMismatch,
          "tower rings must share family and prime");
  require(rbar.length() > r.length() && r.length() >= r0.length(), ErrorCode::LevelError,
          "tower needs len(Rbar) > len(R) >= len(R0)");
  Tower tower(rbar, r, r0);
  const Elem a = tower.a_generator(), b = tower.b_generator();
  require(rbar.mul(a, b) == 0, ErrorCode::NotSmallExtension,
          "a*b != 0 in " + rbar.descriptor() + " (a=" + rbar.format(a) + ", b=" + rbar.format(b) + ")");
  // a*b = 0 already forces b^2 = 0 because b is contained in a.
  require(rbar.mul(b, b) == 0, ErrorCode::NotSmallExtension, "b^2 != 0");
  require(r0.is_field(), ErrorCode::ResidueNotField, "R0 must be the residue field F_p");
  // |b| = p^(len Rbar - len R) must equal |R0| for b to be free of rank one over R0.
  require(rbar.length() - r.length() == r0.length(), ErrorCode::BRankUnsupported,
          "b has R0-rank " + std::to_string(rbar.length() - r.length()) + ", only rank 1 is supported");
  return tower;
}

/// The chain R_n = R_full / m^(n+1), 0 <= n < N, with the towers (R_{n+1}, R_n, R_0).
class TowerLadder {
 public:
  explicit TowerLadder(const Ring& full) : full_(full) {
    for (int n = 0; n < full.length(); ++n) levels_.push_back(full.at_length(n + 1));
    for (int n = 0; n + 1 < full.length(); ++n) towers_.push_back(make_tower(levels_[n + 1], levels_[n], levels_[0]));
  }

  int depth() const { return int(levels_.size()); }
  const Ring& level(int n) const { return levels_.at(n); }
  const Ring& residue_field() const { return levels_.front(); }
  /// The tower R_{n+1} ->> R_n ->> R_0.
  const Tower& step(int n) const { return towers_.at(n); }
  int steps() const { return int(towers_.size()); }

 private:
  Ring full_;
  std::vector<Ring> levels_;
  std::vector<Tower> towers_;
};

}  // namespace defobs
