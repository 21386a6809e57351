#pragma once

// Line-oriented scenario files and the text reports produced from them.
//
//   tower Fp[t]/t^n p=2 n=3 ; Fp[t]/t^n p=2 n=2 ; Fp[t]/t^n p=2 n=1
//   complex F R lo=0 ranks=1,1
//   d F 0 [[(0,1)]]
//   map s F G
//   component s 0 [[1]]
//   problem F G s Gbar
//
// Levels are named Rbar, R, R0. Entries are integers (residues) or coefficient
// tuples (c0,c1,...) in the truncated polynomial family. Blank lines and text
// after '#' are ignored.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "defobs/applications.hpp"
#include "defobs/obstruction.hpp"
#include "defobs/oracle.hpp"

namespace defobs {

inline constexpr const char* kConventions =
    "2 hom:D(f)=d.f-(-1)^|f|f.d cone:[[-dF,0],[s,dG]] lift:(dbar+bx,sbar-by)";

enum class Task { Check, Lift, Classify, Oracle, Tower, DemoSod };

inline std::string to_string(Task t) {
  switch (t) {
    case Task::Check: return "check";
    case Task::Lift: return "lift";
    case Task::Classify: return "classify";
    case Task::Oracle: return "oracle";
    case Task::Tower: return "tower";
    case Task::DemoSod: return "demo-sod";
  }
  return "?";
}

inline std::optional<Task> parse_task(const std::string& s) {
  for (Task t : {Task::Check, Task::Lift, Task::Classify, Task::Oracle, Task::Tower, Task::DemoSod})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct ScenarioOptions {
  std::optional<std::uint64_t> seed;
  std::uint64_t max_candidates = std::uint64_t(1) << 16;
  double time_budget = 60;
  std::string out;
};

struct Scenario {
  std::optional<Task> task;
  std::optional<Tower> tower;
  std::optional<Ring> ladder;  // top ring of the ladder
  std::string algebra_name = "k";
  AlgebraPtr algebra = Algebra::trivial();
  std::map<std::string, Complex> complexes;
  std::map<std::string, GradedMap> maps;
  struct ProblemIds {
    std::string F, G, s, Gbar;
  };
  std::optional<ProblemIds> problem_ids;
  std::optional<LiftSolution> solution;  // embedded lift to verify
  ScenarioOptions options;

  LiftProblem problem() const {
    require(tower && problem_ids, ErrorCode::ValidationError, "scenario has no tower and problem lines");
    const auto& ids = *problem_ids;
    return LiftProblem(*tower, complexes.at(ids.F), complexes.at(ids.G), maps.at(ids.s), complexes.at(ids.Gbar));
  }
};

namespace detail {

struct Located {
  int line = 0;
  int column = 1;
};

[[noreturn]] inline void parse_fail(const Located& at, const std::string& what) {
  fail(ErrorCode::ParseError, "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + what);
}

[[noreturn]] inline void validation_fail(const Located& at, const std::string& what) {
  fail(ErrorCode::ValidationError, "line " + std::to_string(at.line) + ": " + what);
}

struct Word {
  std::string text;
  int column;
};

inline std::vector<Word> split_words(const std::string& line) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), int(i) + 1});
    i = j;
  }
  return out;
}

inline long long parse_int(const Word& w, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(w.text, &used);
    if (used == w.text.size()) return v;
  } catch (const std::exception&) {
  }
  parse_fail({line, w.column}, "expected an integer for " + what + ", got '" + w.text + "'");
}

// Nested integer lists: [[a, (c0,c1)], [..]].
class MatrixReader {
 public:
  MatrixReader(const std::string& text, int line, int column) : s_(text), line_(line), col0_(column) {}

  std::vector<std::vector<std::vector<long long>>> read() {
    std::vector<std::vector<std::vector<long long>>> rows;
    expect('[');
    skip();
    if (peek() == ']') {
      ++i_;
      finish();
      return rows;
    }
    while (true) {
      rows.push_back(read_row());
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      break;
    }
    finish();
    return rows;
  }

 private:
  std::vector<std::vector<long long>> read_row() {
    std::vector<std::vector<long long>> row;
    expect('[');
    skip();
    if (peek() == ']') {
      ++i_;
      return row;
    }
    while (true) {
      row.push_back(read_entry());
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      return row;
    }
  }

  std::vector<long long> read_entry() {
    skip();
    if (peek() != '(') return {read_number()};
    ++i_;
    std::vector<long long> coeffs;
    while (true) {
      coeffs.push_back(read_number());
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(')');
      return coeffs;
    }
  }

  long long read_number() {
    skip();
    std::size_t start = i_;
    if (peek() == '-') ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == start || (i_ == start + 1 && s_[start] == '-')) error("expected a number");
    if (i_ - start > 12) error("number too large");
    return std::stoll(s_.substr(start, i_ - start));
  }

  void finish() {
    skip();
    if (i_ != s_.size()) error("trailing text after matrix");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++i_;
  }
  [[noreturn]] void error(const std::string& what) const { parse_fail({line_, col0_ + int(i_)}, what); }

  const std::string& s_;
  int line_, col0_;
  std::size_t i_ = 0;
};

inline Elem to_elem(const Ring& R, const std::vector<long long>& e, const Located& at) {
  if (e.size() == 1) return R.from_int(e[0]);
  if (R.family() != Family::TruncatedPoly) validation_fail(at, "coefficient tuples need the truncated polynomial family");
  if (int(e.size()) > R.length()) validation_fail(at, "tuple longer than the ring length " + std::to_string(R.length()));
  return R.from_digits(e);
}

struct PendingComplex {
  Located at;
  std::string level;
  int lo = 0;
  std::vector<ModuleType> types;
  std::map<int, std::pair<Located, std::string>> diffs;  // degree -> matrix text
};

struct PendingMap {
  Located at;
  std::string src, tgt;
  int degree = 0;
  std::map<int, std::pair<Located, std::string>> comps;
};

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  using namespace detail;
  Scenario sc;
  std::map<std::string, PendingComplex> complexes;
  std::vector<std::string> complex_order;
  std::map<std::string, PendingMap> maps;
  std::vector<std::string> map_order;
  std::map<std::pair<char, int>, std::pair<Located, std::string>> solution;
  std::optional<Located> problem_at;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto rest_after = [](const std::string& line, const std::vector<Word>& w, std::size_t k) {
    return std::make_pair(line.substr(w[k].column - 1), w[k].column);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    auto w = split_words(line);
    if (w.empty()) continue;
    const std::string& key = w[0].text;
    auto need = [&](std::size_t n, const char* usage) {
      if (w.size() < n) parse_fail({lineno, w.back().column}, std::string("expected: ") + usage);
    };
    if (key == "tower" || key == "ladder") {
      std::string body = line.substr(w[0].column - 1 + key.size());
      try {
        if (key == "ladder") {
          sc.ladder = parse_ring(body);
          continue;
        }
        std::vector<Ring> rings;
        std::size_t pos = 0;
        while (true) {
          std::size_t semi = body.find(';', pos);
          rings.push_back(parse_ring(body.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos)));
          if (semi == std::string::npos) break;
          pos = semi + 1;
        }
        if (rings.size() != 3) parse_fail({lineno, w[0].column}, "a tower needs three rings separated by ';'");
        sc.tower = make_tower(rings[0], rings[1], rings[2]);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError && std::string(e.what()).find("line ") != std::string::npos) throw;
        if (e.code() == ErrorCode::ParseError) parse_fail({lineno, w.size() > 1 ? w[1].column : 1}, e.what());
        validation_fail({lineno, 1}, e.what());
      }
    } else if (key == "algebra") {
      need(2, "algebra k|A2|A2e");
      const std::string& a = w[1].text;
      sc.algebra_name = a;
      if (a == "k") sc.algebra = Algebra::trivial();
      else if (a == "A2") sc.algebra = Algebra::a2();
      else if (a == "A2e") sc.algebra = enveloping_of(Algebra::a2());
      else parse_fail({lineno, w[1].column}, "unknown algebra '" + a + "'");
    } else if (key == "complex") {
      need(5, "complex <id> <Rbar|R|R0> lo=<n> ranks=<r,...>|types=<v,..>/<v,..>");
      PendingComplex pc;
      pc.at = {lineno, w[1].column};
      pc.level = w[2].text;
      bool have_lo = false, have_shape = false;
      for (std::size_t k = 3; k < w.size(); ++k) {
        auto eq = w[k].text.find('=');
        if (eq == std::string::npos) parse_fail({lineno, w[k].column}, "expected key=value");
        std::string name = w[k].text.substr(0, eq), value = w[k].text.substr(eq + 1);
        Word vw{value, w[k].column + int(eq) + 1};
        if (name == "lo") {
          pc.lo = int(parse_int(vw, lineno, "lo"));
          have_lo = true;
        } else if (name == "ranks" || name == "types") {
          std::vector<std::string> parts;
          std::string cur;
          const char sep = name == "ranks" ? ',' : '/';
          for (char c : value) {
            if (c == sep) {
              parts.push_back(cur);
              cur.clear();
            } else {
              cur += c;
            }
          }
          parts.push_back(cur);
          for (auto& part : parts) {
            if (name == "ranks") {
              long long r = parse_int({part, vw.column}, lineno, "rank");
              if (r < 0 || r > 64) parse_fail({lineno, vw.column}, "rank out of range");
              pc.types.push_back(trivial_type(int(r)));
            } else {
              ModuleType t;
              if (part != "-") {
                std::stringstream ps(part);
                std::string v;
                while (std::getline(ps, v, ',')) t.push_back(int(parse_int({v, vw.column}, lineno, "vertex")));
              }
              pc.types.push_back(t);
            }
          }
          have_shape = true;
        } else {
          parse_fail({lineno, w[k].column}, "unknown complex attribute '" + name + "'");
        }
      }
      if (!have_lo || !have_shape) parse_fail({lineno, w[0].column}, "complex needs lo= and ranks= or types=");
      if (complexes.count(w[1].text)) validation_fail({lineno, 1}, "duplicate complex id '" + w[1].text + "'");
      complexes[w[1].text] = pc;
      complex_order.push_back(w[1].text);
    } else if (key == "d") {
      need(4, "d <complex> <degree> <matrix>");
      auto it = complexes.find(w[1].text);
      if (it == complexes.end()) validation_fail({lineno, 1}, "unknown complex '" + w[1].text + "'");
      int deg = int(parse_int(w[2], lineno, "degree"));
      auto [m, col] = rest_after(line, w, 3);
      it->second.diffs[deg] = {{lineno, col}, m};
    } else if (key == "map") {
      need(4, "map <id> <source> <target> [degree=<k>]");
      PendingMap pm;
      pm.at = {lineno, w[1].column};
      pm.src = w[2].text;
      pm.tgt = w[3].text;
      if (w.size() > 4) {
        if (w[4].text.rfind("degree=", 0) != 0) parse_fail({lineno, w[4].column}, "expected degree=<k>");
        pm.degree = int(parse_int({w[4].text.substr(7), w[4].column + 7}, lineno, "degree"));
      }
      if (maps.count(w[1].text)) validation_fail({lineno, 1}, "duplicate map id '" + w[1].text + "'");
      maps[w[1].text] = pm;
      map_order.push_back(w[1].text);
    } else if (key == "component") {
      need(4, "component <map> <degree> <matrix>");
      auto it = maps.find(w[1].text);
      if (it == maps.end()) validation_fail({lineno, 1}, "unknown map '" + w[1].text + "'");
      int deg = int(parse_int(w[2], lineno, "degree"));
      auto [m, col] = rest_after(line, w, 3);
      it->second.comps[deg] = {{lineno, col}, m};
    } else if (key == "problem") {
      need(5, "problem <F> <G> <s> <Gbar>");
      sc.problem_ids = Scenario::ProblemIds{w[1].text, w[2].text, w[3].text, w[4].text};
      problem_at = Located{lineno, 1};
    } else if (key == "solution") {
      need(4, "solution d|s <degree> <matrix>");
      if (w[1].text != "d" && w[1].text != "s") parse_fail({lineno, w[1].column}, "expected d or s");
      int deg = int(parse_int(w[2], lineno, "degree"));
      auto [m, col] = rest_after(line, w, 3);
      solution[{w[1].text[0], deg}] = {{lineno, col}, m};
    } else if (key == "task") {
      need(2, "task <name>");
      auto t = parse_task(w[1].text);
      if (!t) parse_fail({lineno, w[1].column}, "unknown task '" + w[1].text + "'");
      sc.task = t;
    } else if (key == "seed") {
      need(2, "seed <n>");
      sc.options.seed = std::uint64_t(parse_int(w[1], lineno, "seed"));
    } else if (key == "max-candidates") {
      need(2, "max-candidates <n>");
      sc.options.max_candidates = std::uint64_t(parse_int(w[1], lineno, "max-candidates"));
    } else if (key == "time-budget") {
      need(2, "time-budget <seconds>");
      sc.options.time_budget = double(parse_int(w[1], lineno, "time-budget"));
    } else if (key == "out") {
      need(2, "out <path>");
      sc.options.out = w[1].text;
    } else {
      parse_fail({lineno, w[0].column}, "unknown directive '" + key + "'");
    }
  }

  // Assembly and validation.
  auto ring_of = [&](const std::string& level, const Located& at) -> Ring {
    if (!sc.tower) validation_fail(at, "complexes need a tower line first");
    if (level == "Rbar") return sc.tower->rbar();
    if (level == "R") return sc.tower->r();
    if (level == "R0") return sc.tower->r0();
    validation_fail(at, "unknown level '" + level + "' (use Rbar, R or R0)");
  };
  auto read_matrix = [&](const Ring& R, const std::pair<Located, std::string>& src, int rows, int cols,
                         const std::string& what) {
    auto entries = MatrixReader(src.second, src.first.line, src.first.column).read();
    std::vector<std::vector<Elem>> m;
    for (auto& row : entries) {
      m.emplace_back();
      for (auto& e : row) m.back().push_back(to_elem(R, e, src.first));
    }
    int r = int(m.size());
    int c = r ? int(m[0].size()) : cols;
    for (auto& row : m)
      if (int(row.size()) != c) validation_fail(src.first, what + " has ragged rows");
    if (r != rows || c != cols)
      validation_fail(src.first, what + " has shape " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                                     std::to_string(rows) + "x" + std::to_string(cols));
    return Matrix::from_rows(R, m, cols);
  };
  for (auto& id : complex_order) {
    PendingComplex& pc = complexes[id];
    Ring R = ring_of(pc.level, pc.at);
    auto rank = [&](int i) {
      if (i < pc.lo || i >= pc.lo + int(pc.types.size())) return 0;
      const ModuleType& t = pc.types[i - pc.lo];
      for (int v : t)
        if (v < 0 || v >= sc.algebra->vertices()) validation_fail(pc.at, "vertex out of range in " + id);
      return module_rank(*sc.algebra, t);
    };
    std::vector<Matrix> diffs;
    for (int i = pc.lo; i < pc.lo + int(pc.types.size()); ++i) {
      auto it = pc.diffs.find(i);
      if (it == pc.diffs.end()) {
        diffs.emplace_back(R, rank(i + 1), rank(i));
        continue;
      }
      diffs.push_back(read_matrix(R, it->second, rank(i + 1), rank(i),
                                  "differential d^" + std::to_string(i) + " of " + id));
    }
    for (auto& [deg, src] : pc.diffs)
      if (deg < pc.lo || deg >= pc.lo + int(pc.types.size()))
        validation_fail(src.first, "differential d^" + std::to_string(deg) + " of " + id + " is outside the support");
    try {
      Complex c(R, sc.algebra, pc.lo, pc.types, diffs);
      c.check();
      sc.complexes.emplace(id, c);
    } catch (const Error& e) {
      validation_fail(pc.at, "complex " + id + ": " + e.what());
    }
  }
  for (auto& id : map_order) {
    PendingMap& pm = maps[id];
    auto find = [&](const std::string& cid) -> const Complex& {
      auto it = sc.complexes.find(cid);
      if (it == sc.complexes.end()) validation_fail(pm.at, "map " + id + " refers to unknown complex '" + cid + "'");
      return it->second;
    };
    const Complex &X = find(pm.src), &Y = find(pm.tgt);
    if (X.ring() != Y.ring()) validation_fail(pm.at, "map " + id + " joins complexes over different levels");
    GradedMap f = GradedMap::zero(X, Y, pm.degree);
    for (auto& [deg, src] : pm.comps) {
      if (!X.in_support(deg) || X.is_zero_object())
        validation_fail(src.first, "component " + std::to_string(deg) + " of " + id + " is outside the source support");
      f.set(deg, read_matrix(X.ring(), src, Y.rank(deg + pm.degree), X.rank(deg),
                             "component " + std::to_string(deg) + " of " + id));
    }
    sc.maps.emplace(id, f);
  }
  if (sc.problem_ids) {
    const auto& ids = *sc.problem_ids;
    for (auto& cid : {ids.F, ids.G, ids.Gbar})
      if (!sc.complexes.count(cid)) validation_fail(*problem_at, "problem refers to unknown complex '" + cid + "'");
    if (!sc.maps.count(ids.s)) validation_fail(*problem_at, "problem refers to unknown map '" + ids.s + "'");
    LiftProblem p = [&] {
      try {
        return sc.problem();
      } catch (const Error& e) {
        validation_fail(*problem_at, e.what());
      }
    }();
    if (!solution.empty()) {
      const Complex& F = p.F();
      const Ring& Rb = p.tower().rbar();
      GradedLift g;
      g.lo = F.lo();
      if (!F.is_zero_object())
        for (int i = F.lo(); i <= F.hi(); ++i) {
          auto d = solution.find({'d', i}), s = solution.find({'s', i});
          if (d == solution.end() || s == solution.end())
            validation_fail(*problem_at, "solution is missing degree " + std::to_string(i));
          g.d.push_back(read_matrix(Rb, d->second, F.rank(i + 1), F.rank(i), "solution d^" + std::to_string(i)));
          g.s.push_back(read_matrix(Rb, s->second, p.G().rank(i), F.rank(i), "solution s^" + std::to_string(i)));
        }
      try {
        sc.solution = solution_from(p, g);
      } catch (const Error& e) {
        validation_fail(*problem_at, std::string("solution: ") + e.what());
      }
    }
  } else if (!solution.empty()) {
    validation_fail(solution.begin()->second.first, "solution lines need a problem line");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline std::string format_matrix(const Matrix& m) {
  std::string out = "[";
  for (int r = 0; r < m.rows(); ++r) {
    out += r ? ",[" : "[";
    for (int c = 0; c < m.cols(); ++c) out += (c ? "," : "") + m.ring().format(m(r, c));
    out += "]";
  }
  return out + "]";
}

inline std::string format_vec(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

inline std::string yes(bool b) { return b ? "true" : "false"; }

inline void write_report(std::ostream& os, const LiftReport& r) {
  os << "h_minus1_dim: " << r.h_minus1_dim << "\n";
  os << "h0_dim: " << r.h0_dim << "\n";
  os << "h1_dim: " << r.h1_dim << "\n";
  os << "class_coordinates: " << format_vec(r.class_coordinates) << "\n";
  os << "is_zero: " << yes(r.is_zero) << "\n";
  os << "lift_found: " << yes(r.lift_found) << "\n";
  os << "lift_class_count: " << (r.lift_class_count ? std::to_string(*r.lift_class_count) : "unknown") << "\n";
  os << "torsor_certified: " << yes(r.torsor_certified) << "\n";
}

inline void write_solution(std::ostream& os, const LiftSolution& sol) {
  const Complex& F = sol.Fbar;
  if (F.is_zero_object()) return;
  for (int i = F.lo(); i <= F.hi(); ++i) {
    os << "solution d " << i << " " << format_matrix(F.d(i)) << "\n";
    os << "solution s " << i << " " << format_matrix(sol.sbar.at(i)) << "\n";
  }
}

inline std::string format_types(const Complex& c) {
  if (c.is_zero_object()) return "0";
  std::string out = "lo=" + std::to_string(c.lo()) + " types=";
  for (int i = c.lo(); i <= c.hi(); ++i) {
    if (i > c.lo()) out += "/";
    if (c.type(i).empty()) out += "-";
    for (std::size_t k = 0; k < c.type(i).size(); ++k) out += (k ? "," : "") + std::to_string(c.type(i)[k]);
  }
  return out;
}

inline void write_certificate(std::ostream& os, const SemiorthogonalityCertificate& c) {
  for (auto& pv : c.pairs) {
    os << "rhom e" << pv.source_vertex + 1 << " e" << pv.target_vertex + 1 << ": degrees " << pv.lo << ".." << pv.hi
       << " central_dims " << format_vec(Vec(pv.central_dims.begin(), pv.central_dims.end()))
       << " direct_acyclic " << yes(pv.direct_acyclic) << "\n";
  }
}

}  // namespace detail

/// Scenario text for a lifting problem over the trivial algebra; parse_scenario inverts it.
inline std::string format_problem(const LiftProblem& p) {
  using detail::format_matrix;
  const Tower& T = p.tower();
  require(p.F().algebra()->is_trivial(), ErrorCode::InvalidArgument, "only plain complexes are written");
  std::ostringstream os;
  os << "tower " << T.rbar().descriptor() << " ; " << T.r().descriptor() << " ; " << T.r0().descriptor() << "\n";
  auto complex = [&](const std::string& id, const char* level, const Complex& c) {
    if (c.is_zero_object()) {
      os << "complex " << id << " " << level << " lo=0 ranks=0\n";
      return;
    }
    os << "complex " << id << " " << level << " lo=" << c.lo() << " ranks=";
    for (int i = c.lo(); i <= c.hi(); ++i) os << (i > c.lo() ? "," : "") << c.rank(i);
    os << "\n";
    for (int i = c.lo(); i <= c.hi(); ++i)
      if (!c.d(i).is_zero()) os << "d " << id << " " << i << " " << format_matrix(c.d(i)) << "\n";
  };
  complex("F", "R", p.F());
  complex("G", "R", p.G());
  complex("Gbar", "Rbar", p.Gbar());
  os << "map s F G\n";
  if (!p.F().is_zero_object())
    for (int i = p.F().lo(); i <= p.F().hi(); ++i)
      if (!p.s().at(i).is_zero()) os << "component s " << i << " " << format_matrix(p.s().at(i)) << "\n";
  os << "problem F G s Gbar\n";
  return os.str();
}

/// Runs the scenario's task and returns the report text. Errors propagate as exceptions.
inline std::string run_scenario(const Scenario& sc, Task task) {
  using namespace detail;
  std::ostringstream os;
  os << "conventions: " << kConventions << "\n";
  os << "task: " << to_string(task) << "\n";
  SearchBounds bounds;
  bounds.max_candidates = sc.options.max_candidates;
  bounds.time_budget = sc.options.time_budget;

  if (task == Task::Tower || task == Task::DemoSod) {
    require(sc.ladder.has_value(), ErrorCode::ValidationError, "tower and demo-sod need a ladder line");
    TowerLadder ladder(*sc.ladder);
    DecompositionTriangle tri = build_a2_sod(ladder.level(0));
    os << "algebra: A2\n";
    os << "ladder: " << sc.ladder->descriptor() << " depth=" << ladder.depth() << "\n";
    if (task == Task::DemoSod) {
      os << "K2: " << format_types(tri.K2) << "\n";
      os << "diagonal: " << format_types(tri.diagonal) << "\n";
      os << "K1: " << format_types(tri.K1) << "\n";
      os << "composite_null_homotopic: "
         << yes(Homotopy{GradedMap::zero(tri.K2, tri.K1, 0), compose(tri.pi, tri.iota), tri.composite_witness}.verify())
         << "\n";
      os << "cone_equivalent_to_K1: " << yes(tri.cone_equivalence.verify()) << "\n";
      write_certificate(os, tri.certificate);
      os << "sod_certified: " << yes(tri.certificate.certified()) << "\n";
      return os.str();
    }
    TowerOptions opts;
    opts.seed = sc.options.seed;
    opts.bounds = bounds;
    TowerRunResult run = tower_lift(tri, ladder, opts);
    os << "level h_minus1 h0 h1 class_zero sod_certified\n";
    for (auto& row : tower_table(run)) {
      os << row.level;
      if (row.report)
        os << " " << row.report->h_minus1_dim << " " << row.report->h0_dim << " " << row.report->h1_dim << " "
           << yes(row.report->is_zero);
      else
        os << " - - - -";
      os << " " << yes(row.sod_certified) << "\n";
    }
    if (run.oracle)
      os << "oracle_level1: candidates_scanned=" << run.oracle->candidates_scanned
         << " lifts_found=" << run.oracle->lifts_found << " classes=" << run.oracle->classes.value_or(0) << "\n";
    UniquenessCertificate self = uniqueness_certificate(run, run);
    os << "uniqueness: " << yes(self.consistent && self.unique) << "\n";
    os << "verdict: " << yes(run.verdict) << "\n";
    return os.str();
  }

  LiftProblem p = sc.problem();
  os << "tower: " << p.tower().rbar().descriptor() << " ; " << p.tower().r().descriptor() << " ; "
     << p.tower().r0().descriptor() << "\n";
  if (sc.solution) {
    std::string why = sc.solution->check(p);
    os << "solution_valid: " << yes(why.empty()) << "\n";
    if (!why.empty()) os << "solution_failure: " << why << "\n";
  }
  switch (task) {
    case Task::Check: {
      ObstructionClass c = obstruction_class(p);
      LiftReport r;
      r.h_minus1_dim = p.space().h_minus1.dim();
      r.h0_dim = p.space().h0_coh.dim();
      r.h1_dim = p.space().h1.dim();
      r.class_coordinates = c.coordinates;
      r.is_zero = c.is_zero;
      os << "h_minus1_dim: " << r.h_minus1_dim << "\n";
      os << "h0_dim: " << r.h0_dim << "\n";
      os << "h1_dim: " << r.h1_dim << "\n";
      os << "class_coordinates: " << format_vec(r.class_coordinates) << "\n";
      os << "is_zero: " << yes(r.is_zero) << "\n";
      break;
    }
    case Task::Lift: {
      ObstructionClass c = obstruction_class(p);
      os << "h1_dim: " << p.space().h1.dim() << "\n";
      os << "class_coordinates: " << format_vec(c.coordinates) << "\n";
      os << "is_zero: " << yes(c.is_zero) << "\n";
      os << "lift_found: " << yes(c.is_zero) << "\n";
      if (c.is_zero) write_solution(os, correct_lift(p, naive_lift(p, sc.options.seed)));
      break;
    }
    case Task::Classify: {
      Classification cl = classify_lifts(p);
      write_report(os, cl.report);
      os << "exhaustive: " << yes(cl.report.exhaustive) << "\n";
      for (std::size_t k = 0; k < cl.lifts.h0_coordinates.size(); ++k)
        os << "class " << k << ": h0 " << format_vec(cl.lifts.h0_coordinates[k]) << " stabilizer_dim "
           << cl.lifts.stabilizer_dims[k] << "\n";
      break;
    }
    case Task::Oracle: {
      OracleReport r = run_oracle(p, bounds);
      os << "candidates_scanned: " << r.candidates_scanned << "\n";
      os << "lifts_found: " << r.lifts_found << "\n";
      os << "classes: " << (r.classes ? std::to_string(*r.classes) : "unknown") << "\n";
      os << "elapsed: " << r.elapsed << "\n";
      break;
    }
    default:
      break;
  }
  return os.str();
}

/// Process exit code for an error: 2 for malformed input, 3 for exhausted bounds, 1 otherwise.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BoundsExceeded:
    case ErrorCode::TimeBudgetExceeded:
      return 3;
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::NotSmallExtension:
    case ErrorCode::BRankUnsupported:
    case ErrorCode::ResidueNotField:
    case ErrorCode::FamilyMismatch:
    case ErrorCode::LevelError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotAComplex:
    case ErrorCode::LevelMismatch:
    case ErrorCode::InvalidArgument:
      return 2;
    default:
      return 1;
  }
}

}  // namespace defobs
