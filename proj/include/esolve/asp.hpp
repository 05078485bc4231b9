#pragma once

// Answer sets of ground, subjective-free programs: choice compilation,
// Gelfond-Lifschitz reduct, stability checking, and complete enumeration by
// backtracking with propagation. A generic adapter runs an external solver
// and verifies its output.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "esolve/ast.hpp"
#include "esolve/parse.hpp"

namespace esolve {

struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& msg)
      : std::runtime_error("resource limit exceeded: " + msg) {}
};

struct ExternalSolverError : std::runtime_error {
  explicit ExternalSolverError(const std::string& msg)
      : std::runtime_error("external solver: " + msg) {}
};

struct SolveLimits {
  long long node_budget = 10'000'000;  // search nodes before giving up
  int minimality_cap = 20;             // max true atoms for the subset check
};

// (lower, upper, elements, guard): any model with a satisfied guard must make
// between lower and upper of the elements true.
struct CardinalityConstraint {
  long long lower = 0;
  long long upper = 0;
  std::vector<ObjectiveLiteral> elements;
  std::vector<ObjectiveLiteral> guard_pos;
  std::vector<ObjectiveLiteral> guard_neg;
};

struct GroundAspProgram {
  std::vector<Rule> rules;  // no choice heads, no subjective literals
  std::vector<CardinalityConstraint> cardinalities;
};

inline std::string choice_aux_name(std::size_t rule_idx, std::size_t elem_idx) {
  return "aux_c_" + std::to_string(rule_idx) + "_" + std::to_string(elem_idx);
}

inline bool is_choice_aux(const ObjectiveLiteral& l) {
  return l.atom.predicate.rfind("aux_c_", 0) == 0;
}

// Compiles one choice rule (rule index i) into the standard pair of rules per
// element plus a cardinality constraint. Throws on upper < lower.
inline void compile_choice(const Rule& r, std::size_t rule_idx,
                           GroundAspProgram& out) {
  const ChoiceHead& ch = *r.choice;
  long long n = static_cast<long long>(ch.elements.size());
  long long upper = std::min(ch.upper, n);
  if (upper < ch.lower)
    throw GroundError("choice rule upper bound below lower bound: " +
                      to_string(r));
  CardinalityConstraint cc;
  cc.lower = ch.lower;
  cc.upper = upper;
  cc.guard_pos = r.body_pos;
  cc.guard_neg = r.body_neg;
  for (std::size_t j = 0; j < ch.elements.size(); ++j) {
    const ObjectiveLiteral& a = ch.elements[j].literal;
    ObjectiveLiteral aux = lit(choice_aux_name(rule_idx, j));
    Rule pick;
    pick.head.push_back(a);
    pick.body_pos = r.body_pos;
    pick.body_neg = r.body_neg;
    pick.body_neg.push_back(aux);
    Rule skip;
    skip.head.push_back(aux);
    skip.body_pos = r.body_pos;
    skip.body_neg = r.body_neg;
    skip.body_neg.push_back(a);
    out.rules.push_back(std::move(pick));
    out.rules.push_back(std::move(skip));
    cc.elements.push_back(a);
  }
  out.cardinalities.push_back(std::move(cc));
}

// Compiles a ground subjective-free program, lowering choice heads.
inline GroundAspProgram compile(const Program& p) {
  GroundAspProgram out;
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    if (!r.body_subj.empty())
      throw std::logic_error("subjective literal reached the ASP solver: " +
                             to_string(r));
    if (r.choice) {
      compile_choice(r, i, out);
    } else {
      out.rules.push_back(r);
    }
  }
  return out;
}

inline std::set<ObjectiveLiteral> atom_universe(const GroundAspProgram& p) {
  std::set<ObjectiveLiteral> out;
  for (const Rule& r : p.rules) {
    for (const auto& l : r.head) out.insert(l);
    for (const auto& l : r.body_pos) out.insert(l);
    for (const auto& l : r.body_neg) out.insert(l);
  }
  for (const auto& c : p.cardinalities) {
    for (const auto& l : c.elements) out.insert(l);
    for (const auto& l : c.guard_pos) out.insert(l);
    for (const auto& l : c.guard_neg) out.insert(l);
  }
  return out;
}

// Gelfond-Lifschitz reduct wrt X: drops rules whose negative body meets X and
// strips the remaining negative bodies.
inline GroundAspProgram gl_reduct(const GroundAspProgram& p,
                                  const BeliefSet& x) {
  GroundAspProgram out;
  out.cardinalities = p.cardinalities;
  for (const Rule& r : p.rules) {
    bool blocked = std::any_of(r.body_neg.begin(), r.body_neg.end(),
                               [&](const auto& l) { return x.count(l) > 0; });
    if (blocked) continue;
    Rule nr;
    nr.head = r.head;
    nr.body_pos = r.body_pos;
    out.rules.push_back(std::move(nr));
  }
  return out;
}

// Least model of a positive non-disjunctive program; nullopt when the closure
// is contradictory or fires an integrity constraint.
inline std::optional<BeliefSet> least_model(const GroundAspProgram& p) {
  for (const Rule& r : p.rules) {
    if (r.head.size() > 1 || !r.body_neg.empty())
      throw std::logic_error("least_model requires a positive normal program");
  }
  BeliefSet m;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : p.rules) {
      if (r.head.size() != 1) continue;
      bool sat = std::all_of(r.body_pos.begin(), r.body_pos.end(),
                             [&](const auto& l) { return m.count(l) > 0; });
      if (sat && m.insert(r.head[0]).second) changed = true;
    }
  }
  if (!consistent(m)) return std::nullopt;
  for (const Rule& r : p.rules) {
    if (!r.head.empty()) continue;
    bool sat = std::all_of(r.body_pos.begin(), r.body_pos.end(),
                           [&](const auto& l) { return m.count(l) > 0; });
    if (sat) return std::nullopt;
  }
  return m;
}

namespace detail {

inline bool rule_body_sat(const Rule& r, const BeliefSet& x) {
  for (const auto& l : r.body_pos)
    if (!x.count(l)) return false;
  for (const auto& l : r.body_neg)
    if (x.count(l)) return false;
  return true;
}

inline bool guard_sat(const CardinalityConstraint& c, const BeliefSet& x) {
  for (const auto& l : c.guard_pos)
    if (!x.count(l)) return false;
  for (const auto& l : c.guard_neg)
    if (x.count(l)) return false;
  return true;
}

inline bool cardinality_sat(const CardinalityConstraint& c, const BeliefSet& x) {
  if (!guard_sat(c, x)) return true;
  long long n = std::count_if(c.elements.begin(), c.elements.end(),
                              [&](const auto& l) { return x.count(l) > 0; });
  return c.lower <= n && n <= c.upper;
}

// Y |= every rule of a reduct (positive rules incl. constraints).
inline bool model_of_reduct(const GroundAspProgram& reduct, const BeliefSet& y) {
  for (const Rule& r : reduct.rules) {
    bool body = std::all_of(r.body_pos.begin(), r.body_pos.end(),
                            [&](const auto& l) { return y.count(l) > 0; });
    if (!body) continue;
    bool head = std::any_of(r.head.begin(), r.head.end(),
                            [&](const auto& l) { return y.count(l) > 0; });
    if (!head) return false;
  }
  return true;
}

}  // namespace detail

// Decides membership in AN(P). Normal programs: stability via the GL reduct
// least model. Disjunctive programs: model of the reduct with no smaller
// model, checked by subset enumeration over the true atoms.
inline bool is_answer_set(const GroundAspProgram& p, const BeliefSet& x,
                          const SolveLimits& lim = {}) {
  if (!consistent(x)) return false;
  for (const Rule& r : p.rules) {
    if (!detail::rule_body_sat(r, x)) continue;
    bool head = std::any_of(r.head.begin(), r.head.end(),
                            [&](const auto& l) { return x.count(l) > 0; });
    if (!head) return false;  // covers constraints: empty head never satisfied
  }
  for (const auto& c : p.cardinalities)
    if (!detail::cardinality_sat(c, x)) return false;

  GroundAspProgram reduct = gl_reduct(p, x);
  bool disjunctive = std::any_of(p.rules.begin(), p.rules.end(),
                                 [](const Rule& r) { return r.head.size() > 1; });
  if (!disjunctive) {
    reduct.cardinalities.clear();
    std::optional<BeliefSet> m = least_model(reduct);
    return m && *m == x;
  }
  // minimality by exhaustive subset check
  if (static_cast<int>(x.size()) > lim.minimality_cap)
    throw ResourceLimitError("minimality check over " +
                             std::to_string(x.size()) + " true atoms");
  std::vector<ObjectiveLiteral> xs(x.begin(), x.end());
  std::uint64_t full = (1ull << xs.size()) - 1;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    BeliefSet y;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (mask & (1ull << i)) y.insert(xs[i]);
    if (detail::model_of_reduct(reduct, y)) return false;
  }
  return true;
}

namespace detail {

// Complete enumeration: DFS over atom truth values in canonical order, false
// branch first, with propagation (supported-rule firing, cardinality bounds,
// and falsification through the positive-reduct least fixpoint). Stability is
// verified at every total assignment.
class AspSearch {
 public:
  AspSearch(const GroundAspProgram& p, const SolveLimits& lim)
      : prog_(p), lim_(lim) {
    std::set<ObjectiveLiteral> uni = atom_universe(p);
    atoms_.assign(uni.begin(), uni.end());
    for (std::size_t i = 0; i < atoms_.size(); ++i) index_[atoms_[i]] = i;
    comp_.assign(atoms_.size(), -1);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      auto it = index_.find(atoms_[i].complement());
      if (it != index_.end()) comp_[i] = static_cast<int>(it->second);
    }
    for (const Rule& r : p.rules) {
      IRule ir;
      for (const auto& l : r.head) ir.head.push_back(index_.at(l));
      for (const auto& l : r.body_pos) ir.pos.push_back(index_.at(l));
      for (const auto& l : r.body_neg) ir.neg.push_back(index_.at(l));
      rules_.push_back(std::move(ir));
    }
    for (const auto& c : p.cardinalities) {
      ICard ic;
      ic.lower = c.lower;
      ic.upper = c.upper;
      for (const auto& l : c.elements) ic.elems.push_back(index_.at(l));
      for (const auto& l : c.guard_pos) ic.gpos.push_back(index_.at(l));
      for (const auto& l : c.guard_neg) ic.gneg.push_back(index_.at(l));
      cards_.push_back(std::move(ic));
    }
  }

  std::set<BeliefSet> run() {
    std::vector<signed char> v(atoms_.size(), UNDEF);
    nodes_ = 0;
    results_.clear();
    dfs(v);
    return results_;
  }

 private:
  enum : signed char { UNDEF = 0, TRUE = 1, FALSE = 2 };
  struct IRule {
    std::vector<int> head, pos, neg;
  };
  struct ICard {
    long long lower, upper;
    std::vector<int> elems, gpos, gneg;
  };

  bool propagate(std::vector<signed char>& v) const {
    for (;;) {
      bool changed = false;
      for (const IRule& r : rules_) {
        bool sat = true;
        for (int i : r.pos)
          if (v[i] != TRUE) { sat = false; break; }
        if (sat)
          for (int i : r.neg)
            if (v[i] != FALSE) { sat = false; break; }
        if (!sat) continue;
        int undef = -1, nundef = 0;
        bool head_true = false;
        for (int h : r.head) {
          if (v[h] == TRUE) head_true = true;
          if (v[h] == UNDEF) { undef = h; ++nundef; }
        }
        if (head_true) continue;
        if (nundef == 0) return false;  // body fires, head all false
        if (nundef == 1) {
          v[undef] = TRUE;
          changed = true;
        }
      }
      for (const ICard& c : cards_) {
        bool g = true;
        for (int i : c.gpos)
          if (v[i] != TRUE) { g = false; break; }
        if (g)
          for (int i : c.gneg)
            if (v[i] != FALSE) { g = false; break; }
        if (!g) continue;
        long long nt = 0, nu = 0;
        for (int i : c.elems) {
          if (v[i] == TRUE) ++nt;
          if (v[i] == UNDEF) ++nu;
        }
        if (nt > c.upper || nt + nu < c.lower) return false;
        if (nt == c.upper && nu > 0) {
          for (int i : c.elems)
            if (v[i] == UNDEF) v[i] = FALSE;
          changed = true;
        } else if (nt + nu == c.lower && nu > 0) {
          for (int i : c.elems)
            if (v[i] == UNDEF) v[i] = TRUE;
          changed = true;
        }
      }
      for (std::size_t i = 0; i < comp_.size(); ++i)
        if (comp_[i] >= 0 && v[i] == TRUE && v[comp_[i]] == TRUE) return false;
      if (changed) continue;

      // least fixpoint of the positive reduct under the current assignment:
      // atoms outside it cannot appear in any completing answer set
      std::vector<char> possible(atoms_.size(), 0);
      bool grow = true;
      while (grow) {
        grow = false;
        for (const IRule& r : rules_) {
          bool usable = true;
          for (int i : r.pos)
            if (v[i] == FALSE || !possible[i]) { usable = false; break; }
          if (usable)
            for (int i : r.neg)
              if (v[i] == TRUE) { usable = false; break; }
          if (!usable) continue;
          for (int h : r.head)
            if (v[h] != FALSE && !possible[h]) {
              possible[h] = 1;
              grow = true;
            }
        }
      }
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (possible[i]) continue;
        if (v[i] == TRUE) return false;
        if (v[i] == UNDEF) {
          v[i] = FALSE;
          changed = true;
        }
      }
      if (!changed) return true;
    }
  }

  void dfs(std::vector<signed char> v) {
    if (++nodes_ > lim_.node_budget)
      throw ResourceLimitError("answer set search exceeded " +
                               std::to_string(lim_.node_budget) + " nodes");
    if (!propagate(v)) return;
    int pick = -1;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == UNDEF) { pick = static_cast<int>(i); break; }
    if (pick < 0) {
      BeliefSet x;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == TRUE) x.insert(atoms_[i]);
      if (is_answer_set(prog_, x, lim_)) results_.insert(std::move(x));
      return;
    }
    std::vector<signed char> vf = v;
    vf[pick] = FALSE;
    dfs(std::move(vf));
    v[pick] = TRUE;
    dfs(std::move(v));
  }

  const GroundAspProgram& prog_;
  SolveLimits lim_;
  std::vector<ObjectiveLiteral> atoms_;
  std::map<ObjectiveLiteral, std::size_t> index_;
  std::vector<int> comp_;
  std::vector<IRule> rules_;
  std::vector<ICard> cards_;
  long long nodes_ = 0;
  std::set<BeliefSet> results_;
};

inline BeliefSet strip_choice_aux(const BeliefSet& x) {
  BeliefSet out;
  for (const auto& l : x)
    if (!is_choice_aux(l)) out.insert(l);
  return out;
}

}  // namespace detail

// All answer sets of P. Choice-compilation aux atoms are hidden from the
// result unless keep_aux is set.
inline std::set<BeliefSet> answer_sets(const GroundAspProgram& p,
                                       const SolveLimits& lim = {},
                                       bool keep_aux = false) {
  detail::AspSearch search(p, lim);
  std::set<BeliefSet> raw = search.run();
  if (keep_aux) return raw;
  std::set<BeliefSet> out;
  for (const auto& x : raw) out.insert(detail::strip_choice_aux(x));
  return out;
}

inline std::set<BeliefSet> answer_sets(const Program& subjective_free,
                                       const SolveLimits& lim = {},
                                       bool keep_aux = false) {
  return answer_sets(compile(subjective_free), lim, keep_aux);
}

// ---- external solver adapter ----
//
// Command template with an {input} placeholder; expected output is one answer
// set per line, literals whitespace-separated, classical negation as a '-'
// prefix. Each reported set is verified with is_answer_set; a rejected result
// falls back to the built-in solver. Process or parse failures raise
// ExternalSolverError.
inline std::set<BeliefSet> external_answer_sets(const Program& p,
                                                const std::string& command,
                                                const SolveLimits& lim = {}) {
  namespace fs = std::filesystem;
  static int counter = 0;
  fs::path input = fs::temp_directory_path() /
                   ("esolve_ext_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++) + ".es");
  {
    std::ofstream out(input);
    out << to_string(p);
  }
  std::string cmd = command;
  if (auto pos = cmd.find("{input}"); pos != std::string::npos)
    cmd.replace(pos, 7, input.string());
  std::string output;
  {
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
      fs::remove(input);
      throw ExternalSolverError("failed to launch '" + cmd + "'");
    }
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
      output.append(buf, n);
    int status = ::pclose(pipe);
    fs::remove(input);
    if (status < 0 || !WIFEXITED(status) || WEXITSTATUS(status) == 126 ||
        WEXITSTATUS(status) == 127)
      throw ExternalSolverError("process failure running '" + cmd + "'");
  }

  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : output) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  std::set<BeliefSet> sets;
  for (const std::string& line : lines) {
    BeliefSet x;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
      try {
        Program one = parse(tok + ".");
        if (one.rules.size() != 1 || !one.rules[0].is_fact())
          throw ExternalSolverError("unparseable literal '" + tok + "'");
        x.insert(one.rules[0].head[0]);
      } catch (const ParseError&) {
        throw ExternalSolverError("unparseable literal '" + tok + "'");
      }
    }
    sets.insert(std::move(x));
  }

  // verify: extend with the deterministic choice aux atoms, then check
  GroundAspProgram compiled = compile(p);
  for (const BeliefSet& x : sets) {
    BeliefSet full = x;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
      const Rule& r = p.rules[i];
      if (!r.choice) continue;
      bool guard = detail::rule_body_sat(r, x);
      if (!guard) continue;
      for (std::size_t j = 0; j < r.choice->elements.size(); ++j)
        if (!x.count(r.choice->elements[j].literal))
          full.insert(lit(choice_aux_name(i, j)));
    }
    if (!is_answer_set(compiled, full, lim))
      return answer_sets(compiled, lim);  // rejected, fall back
  }
  return sets;
}

}  // namespace esolve
