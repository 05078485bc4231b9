#pragma once

// World-view computation: satisfaction of subjective literals, epistemic
// reducts, assignment enumeration, the lower-bound operator with partial-model
// preprocessing, the combined solver, and two brute-force semantic oracles.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>

#include "esolve/asp.hpp"
#include "esolve/ast.hpp"
#include "esolve/transform.hpp"

namespace esolve {

struct SolveOptions {
  int jobs = 1;
  SolveLimits limits;
  std::string external_solver;  // command template; empty = built-in
};

// A guessed partition of EL: S believed true in every belief set, S' not.
struct Assignment {
  BeliefSet s;
  BeliefSet s_prime;
};

using PartialModel = Assignment;

namespace detail {

inline void require_core(const Program& p) {
  for (const Rule& r : p.rules)
    for (const auto& s : r.body_subj)
      if (!s.core())
        throw std::logic_error("non-core subjective literal '" + to_string(s) +
                               "' in the world-view engine");
}

}  // namespace detail

// EL: the objective literals under K or -K in a core-form program.
inline std::set<ObjectiveLiteral> epistemic_literals(const Program& p) {
  detail::require_core(p);
  std::set<ObjectiveLiteral> out;
  for (const Rule& r : p.rules)
    for (const auto& s : r.body_subj) out.insert(s.literal);
  return out;
}

inline std::set<ObjectiveLiteral> epistemic_literals(const CoreProgram& p) {
  return epistemic_literals(p.program);
}

// K l holds iff l is in every belief set; -K l iff it is missing from some.
inline bool satisfies(const WorldView& w, const SubjectiveLiteral& s) {
  if (!s.core())
    throw std::logic_error("satisfaction is defined on core literals only");
  if (w.empty()) throw std::logic_error("world views are non-empty");
  bool in_all = std::all_of(w.begin(), w.end(), [&](const BeliefSet& b) {
    return b.count(s.literal) > 0;
  });
  return s.modality == Modality::K ? in_all : !in_all;
}

// Reduct laws: drop rules with unsatisfied subjective literals, drop -K l,
// replace K l by l.
inline Program epistemic_reduct(const Program& p, const WorldView& w) {
  detail::require_core(p);
  Program out;
  out.constants = p.constants;
  for (const Rule& r : p.rules) {
    bool keep = std::all_of(r.body_subj.begin(), r.body_subj.end(),
                            [&](const auto& s) { return satisfies(w, s); });
    if (!keep) continue;
    Rule nr = r;
    nr.body_subj.clear();
    for (const auto& s : r.body_subj)
      if (s.modality == Modality::K) nr.body_pos.push_back(s.literal);
    out.rules.push_back(std::move(nr));
  }
  return out;
}

inline bool is_world_view(const Program& p, const WorldView& w,
                          const SolveLimits& lim = {}) {
  if (w.empty()) throw std::logic_error("world views are non-empty");
  return answer_sets(epistemic_reduct(p, w), lim) == w;
}

inline bool is_world_view(const CoreProgram& p, const WorldView& w,
                          const SolveLimits& lim = {}) {
  return is_world_view(p.program, w, lim);
}

// The assignment reduct: drop rules guessed wrong (K l with l in S', -K l
// with l in S), drop remaining -K, replace remaining K l by l.
inline Program assignment_reduct(const Program& p, const Assignment& a) {
  detail::require_core(p);
  Program out;
  out.constants = p.constants;
  for (const Rule& r : p.rules) {
    bool drop = false;
    for (const auto& s : r.body_subj) {
      if (s.modality == Modality::K && a.s_prime.count(s.literal)) drop = true;
      if (s.modality == Modality::NotK && a.s.count(s.literal)) drop = true;
    }
    if (drop) continue;
    Rule nr = r;
    nr.body_subj.clear();
    for (const auto& s : r.body_subj)
      if (s.modality == Modality::K) nr.body_pos.push_back(s.literal);
    out.rules.push_back(std::move(nr));
  }
  return out;
}

// W satisfies (S, S'): S inside the intersection of all belief sets, S'
// disjoint from it. Empty collections never qualify.
inline bool assignment_consistent(const std::set<BeliefSet>& w,
                                  const Assignment& a) {
  if (w.empty()) return false;
  BeliefSet inter = *w.begin();
  for (const BeliefSet& b : w) {
    BeliefSet next;
    for (const auto& l : inter)
      if (b.count(l)) next.insert(l);
    inter = std::move(next);
  }
  for (const auto& l : a.s)
    if (!inter.count(l)) return false;
  for (const auto& l : a.s_prime)
    if (inter.count(l)) return false;
  return true;
}

// ---- partial-model preprocessing ----

namespace detail {

inline BeliefSet body_plus(const Rule& r) {
  BeliefSet out(r.body_pos.begin(), r.body_pos.end());
  for (const auto& s : r.body_subj)
    if (s.modality == Modality::K) out.insert(s.literal);
  return out;
}

inline BeliefSet body_minus(const Rule& r) {
  BeliefSet out(r.body_neg.begin(), r.body_neg.end());
  for (const auto& s : r.body_subj)
    if (s.modality == Modality::NotK) out.insert(s.literal);
  return out;
}

inline bool defeated(const Rule& r, const PartialModel& pm) {
  for (const auto& l : body_plus(r))
    if (pm.s_prime.count(l)) return true;
  for (const auto& l : body_minus(r))
    if (pm.s.count(l)) return true;
  return false;
}

}  // namespace detail

// One application of the lower-bound operator. Returns nullopt when the two
// components collide, meaning no world view is compatible with pm.
inline std::optional<PartialModel> lower_bound(const Program& p,
                                               const PartialModel& pm) {
  detail::require_core(p);
  PartialModel next;
  for (const Rule& r : p.rules) {
    if (r.choice || r.head.size() != 1) continue;
    BeliefSet plus = detail::body_plus(r);
    BeliefSet minus = detail::body_minus(r);
    bool fire = std::all_of(plus.begin(), plus.end(),
                            [&](const auto& l) { return pm.s.count(l) > 0; }) &&
                std::all_of(minus.begin(), minus.end(), [&](const auto& l) {
                  return pm.s_prime.count(l) > 0;
                });
    if (fire) next.s.insert(r.head[0]);
  }
  for (const auto& l : program_literals(p)) {
    bool all_defeated = true;
    for (const Rule& r : p.rules) {
      bool heads_l = std::count(r.head.begin(), r.head.end(), l) > 0;
      if (r.choice)
        for (const auto& e : r.choice->elements)
          heads_l = heads_l || e.literal == l;
      if (!heads_l) continue;
      BeliefSet plus = detail::body_plus(r);
      BeliefSet minus = detail::body_minus(r);
      bool dead = std::any_of(plus.begin(), plus.end(),
                              [&](const auto& x) {
                                return pm.s_prime.count(x) > 0;
                              }) ||
                  std::any_of(minus.begin(), minus.end(),
                              [&](const auto& x) { return pm.s.count(x) > 0; });
      if (!dead) {
        all_defeated = false;
        break;
      }
    }
    if (all_defeated) next.s_prime.insert(l);
  }
  for (const auto& l : next.s)
    if (next.s_prime.count(l)) return std::nullopt;
  return next;
}

// The program simplification under a partial model: defeated rules removed,
// decided occurrences erased, facts and constraints added.
inline Program simplify(const Program& p, const PartialModel& pm) {
  detail::require_core(p);
  Program out;
  out.constants = p.constants;
  for (const Rule& r : p.rules) {
    if (detail::defeated(r, pm)) continue;
    Rule nr = r;
    std::erase_if(nr.body_pos,
                  [&](const auto& l) { return pm.s.count(l) > 0; });
    std::erase_if(nr.body_neg,
                  [&](const auto& l) { return pm.s_prime.count(l) > 0; });
    std::erase_if(nr.body_subj, [&](const SubjectiveLiteral& s) {
      if (s.modality == Modality::K) return pm.s.count(s.literal) > 0;
      return pm.s_prime.count(s.literal) > 0;
    });
    out.rules.push_back(std::move(nr));
  }
  for (const auto& l : pm.s) {
    Rule fact;
    fact.head.push_back(l);
    if (std::count(out.rules.begin(), out.rules.end(), fact) == 0)
      out.rules.push_back(std::move(fact));
  }
  for (const auto& l : pm.s_prime) {
    Rule constraint;
    constraint.body_pos.push_back(l);
    out.rules.push_back(std::move(constraint));
  }
  return out;
}

// Alternates the lower-bound operator and simplification from (empty, empty)
// until the pair is stable. nullopt signals a contradiction (no world view).
inline std::optional<std::pair<Program, PartialModel>> preprocess(
    const Program& p) {
  Program cur = p;
  PartialModel pm;
  for (int i = 0; i < 10000; ++i) {
    std::optional<PartialModel> next = lower_bound(cur, pm);
    if (!next) return std::nullopt;
    cur = simplify(cur, *next);
    if (next->s == pm.s && next->s_prime == pm.s_prime)
      return std::make_pair(cur, pm);
    pm = std::move(*next);
  }
  throw std::logic_error("preprocess did not reach a fixpoint");
}

// ---- assignment enumeration ----

namespace detail {

inline std::set<BeliefSet> run_asp(const Program& subjective_free,
                                   const SolveOptions& opts) {
  if (!opts.external_solver.empty())
    return external_answer_sets(subjective_free, opts.external_solver,
                                opts.limits);
  return answer_sets(subjective_free, opts.limits);
}

// Enumerates the 2^|EL| assignments in canonical subset order (bit i of the
// mask puts the i-th literal into S) and collects the consistent world views.
inline std::set<WorldView> enumerate_assignments(const Program& p,
                                                 const SolveOptions& opts,
                                                 bool inner_preprocess) {
  std::vector<ObjectiveLiteral> el;
  {
    auto s = epistemic_literals(p);
    el.assign(s.begin(), s.end());
  }
  if (el.size() > 30)
    throw ResourceLimitError("assignment space over " +
                             std::to_string(el.size()) +
                             " subjective literals");
  const std::uint64_t total = 1ull << el.size();

  std::set<WorldView> results;
  std::mutex mtx;
  std::atomic<std::uint64_t> cursor{0};
  std::exception_ptr error;

  auto worker = [&]() {
    try {
      for (;;) {
        std::uint64_t mask = cursor.fetch_add(1);
        if (mask >= total) return;
        Assignment a;
        for (std::size_t i = 0; i < el.size(); ++i) {
          if (mask & (1ull << i))
            a.s.insert(el[i]);
          else
            a.s_prime.insert(el[i]);
        }
        Program reduct = assignment_reduct(p, a);
        if (inner_preprocess) {
          auto pre = preprocess(reduct);
          if (!pre) continue;  // contradiction: no answer sets
          reduct = std::move(pre->first);
        }
        std::set<BeliefSet> w = run_asp(reduct, opts);
        if (!assignment_consistent(w, a)) continue;
        std::lock_guard<std::mutex> lock(mtx);
        results.insert(WorldView(w.begin(), w.end()));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mtx);
      if (!error) error = std::current_exception();
      cursor = total;  // stop the other workers
    }
  };

  int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace detail

// Algorithm 1: plain generate-and-test over all assignments of EL.
inline std::set<WorldView> solve_basic(const CoreProgram& p,
                                       const SolveOptions& opts = {}) {
  return detail::enumerate_assignments(p.program, opts, false);
}

// Algorithm 3: preprocess, then generate-and-test over the reduced EL with an
// inner preprocessing pass per assignment reduct.
inline std::set<WorldView> solve(const CoreProgram& p,
                                 const SolveOptions& opts = {}) {
  auto pre = preprocess(p.program);
  if (!pre) return {};
  return detail::enumerate_assignments(pre->first, opts, true);
}

// ---- brute-force semantic oracles ----
//
// A self-contained bitmask model enumerator, deliberately separate from the
// search-based solver so the two paths can check each other.

struct OracleCapError : std::runtime_error {
  explicit OracleCapError(const std::string& msg)
      : std::runtime_error("oracle cap exceeded: " + msg) {}
};

namespace oracle_detail {

struct MRule {
  std::uint32_t head = 0;  // empty = constraint
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  bool disjunctive = false;
};

struct MaskProgram {
  int n = 0;
  std::vector<MRule> rules;
  std::vector<std::pair<int, int>> complements;
  bool any_disjunctive = false;
};

inline bool mask_consistent(const MaskProgram& p, std::uint32_t x) {
  for (auto [i, j] : p.complements)
    if ((x >> i & 1) && (x >> j & 1)) return false;
  return true;
}

inline bool mask_model(const MaskProgram& p, std::uint32_t x) {
  for (const MRule& r : p.rules) {
    if ((r.pos & x) != r.pos || (r.neg & x)) continue;
    if (!(r.head & x)) return false;
  }
  return true;
}

inline bool mask_is_answer_set(const MaskProgram& p, std::uint32_t x) {
  if (!mask_consistent(p, x) || !mask_model(p, x)) return false;
  if (!p.any_disjunctive) {
    // least model of the GL reduct
    std::uint32_t m = 0;
    bool grow = true;
    while (grow) {
      grow = false;
      for (const MRule& r : p.rules) {
        if (r.neg & x) continue;
        if (!r.head) continue;
        if ((r.pos & m) == r.pos && (r.head & m) != r.head) {
          m |= r.head;
          grow = true;
        }
      }
    }
    return m == x;
  }
  // minimality: no proper submodel of the reduct
  for (std::uint32_t y = (x - 1) & x;; y = (y - 1) & x) {
    bool model = true;
    for (const MRule& r : p.rules) {
      if (r.neg & x) continue;  // dropped by the reduct
      if ((r.pos & y) != r.pos) continue;
      if (!(r.head & y)) {
        model = false;
        break;
      }
    }
    if (model) return false;
    if (y == 0) break;
  }
  return true;
}

inline std::vector<std::uint32_t> mask_answer_sets(const MaskProgram& p) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < (1u << p.n); ++x)
    if (mask_is_answer_set(p, x)) out.push_back(x);
  return out;
}

}  // namespace oracle_detail

// Definition 1 / Definition 2 applied literally: every non-empty collection of
// consistent subsets of Lit is tested, with belief sets extended by the forced
// fresh literals of the core translation. AN(reduct) is memoized per
// satisfaction pattern of the subjective literals.
inline std::set<WorldView> brute_force_world_views(const Program& p,
                                                   int cap = 4) {
  using namespace oracle_detail;
  for (const Rule& r : p.rules)
    if (r.choice)
      throw OracleCapError("choice rules are not supported by the oracle");

  std::set<ObjectiveLiteral> lit_set = program_literals(p);
  if (static_cast<int>(lit_set.size()) > cap)
    throw OracleCapError(std::to_string(lit_set.size()) + " literals > cap " +
                         std::to_string(cap));
  CoreProgram core = to_core(p);

  // full universe: original literals then fresh ones
  std::vector<ObjectiveLiteral> uni(lit_set.begin(), lit_set.end());
  const int norig = static_cast<int>(uni.size());
  for (const auto& [l, f] : core.fresh_map) uni.push_back(f);
  std::map<ObjectiveLiteral, int> index;
  for (std::size_t i = 0; i < uni.size(); ++i)
    index[uni[i]] = static_cast<int>(i);

  MaskProgram base;
  base.n = static_cast<int>(uni.size());
  for (int i = 0; i < base.n; ++i) {
    auto it = index.find(uni[i].complement());
    if (it != index.end() && it->second > i)
      base.complements.push_back({i, it->second});
  }

  // candidate belief sets: consistent subsets of Lit, extended with the
  // fresh literal of every l they do not contain
  std::vector<std::uint32_t> cand;
  for (std::uint32_t s = 0; s < (1u << norig); ++s) {
    std::uint32_t x = s;
    bool ok = true;
    for (auto [i, j] : base.complements)
      if (i < norig && j < norig && (s >> i & 1) && (s >> j & 1)) ok = false;
    if (!ok) continue;
    for (const auto& [l, f] : core.fresh_map)
      if (!(s >> index.at(l) & 1)) x |= 1u << index.at(f);
    cand.push_back(x);
  }
  if (cand.size() > 16)
    throw OracleCapError("candidate space too large");

  // distinct core subjective literals and, per literal, the candidate sets
  // violating K (those missing the literal)
  std::vector<SubjectiveLiteral> subj;
  {
    std::set<SubjectiveLiteral> s;
    for (const Rule& r : core.program.rules)
      for (const auto& sl : r.body_subj) s.insert(sl);
    subj.assign(s.begin(), s.end());
  }
  std::vector<std::uint32_t> missing(subj.size(), 0);
  for (std::size_t j = 0; j < subj.size(); ++j)
    for (std::size_t c = 0; c < cand.size(); ++c)
      if (!(cand[c] >> index.at(subj[j].literal) & 1))
        missing[j] |= 1u << c;

  // memo: satisfaction pattern -> collection mask of AN(reduct), or invalid
  std::map<std::uint32_t, std::optional<std::uint32_t>> memo;
  auto collection_for = [&](std::uint32_t phi) -> std::optional<std::uint32_t> {
    auto it = memo.find(phi);
    if (it != memo.end()) return it->second;
    MaskProgram reduct = base;
    bool valid = true;
    for (const Rule& r : core.program.rules) {
      bool keep = true;
      MRule mr;
      for (const auto& sl : r.body_subj) {
        std::size_t j = std::lower_bound(subj.begin(), subj.end(), sl) -
                        subj.begin();
        bool k_sat = (phi >> j & 1);
        bool sat = sl.modality == Modality::K ? k_sat : !k_sat;
        if (!sat) keep = false;
        if (sl.modality == Modality::K)
          mr.pos |= 1u << index.at(sl.literal);
      }
      if (!keep) continue;
      for (const auto& l : r.head) mr.head |= 1u << index.at(l);
      for (const auto& l : r.body_pos) mr.pos |= 1u << index.at(l);
      for (const auto& l : r.body_neg) mr.neg |= 1u << index.at(l);
      mr.disjunctive = r.head.size() > 1;
      reduct.any_disjunctive |= mr.disjunctive;
      reduct.rules.push_back(mr);
    }
    std::vector<std::uint32_t> an = mask_answer_sets(reduct);
    std::uint32_t coll = 0;
    for (std::uint32_t x : an) {
      auto it2 = std::find(cand.begin(), cand.end(), x);
      if (it2 == cand.end()) {
        valid = false;
        break;
      }
      coll |= 1u << (it2 - cand.begin());
    }
    std::optional<std::uint32_t> res;
    if (valid && coll) res = coll;
    memo[phi] = res;
    return res;
  };

  std::set<WorldView> out;
  const std::uint32_t ncoll = 1u << cand.size();
  for (std::uint32_t c = 1; c < ncoll; ++c) {
    std::uint32_t phi = 0;
    for (std::size_t j = 0; j < subj.size(); ++j)
      if (!(c & missing[j])) phi |= 1u << j;  // K holds: no member misses it
    std::optional<std::uint32_t> expect = collection_for(phi);
    if (!expect || *expect != c) continue;
    WorldView w;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (c >> i & 1) {
        BeliefSet b;
        for (int k = 0; k < norig; ++k)
          if (cand[i] >> k & 1) b.insert(uni[k]);
        w.insert(std::move(b));
      }
    out.insert(std::move(w));
  }
  return out;
}

// The 2010s-definition oracle: reduct applied directly on programs in the
// K l / -K l / K not l / -K not l / M l fragment, candidate collections
// enumerated the same way.
inline std::set<WorldView> gelfond_world_views_oracle(const Program& p,
                                                      int cap = 4) {
  using namespace oracle_detail;
  for (const Rule& r : p.rules) {
    if (r.choice)
      throw OracleCapError("choice rules are not supported by the oracle");
    for (const auto& s : r.body_subj) {
      bool ok = s.modality == Modality::K || s.modality == Modality::NotK ||
                (s.modality == Modality::M && !s.inner_negated);
      if (!ok)
        throw TransformError("subjective literal '" + to_string(s) +
                             "' is outside the K/-K/K not/-K not/M fragment");
    }
  }

  std::set<ObjectiveLiteral> lit_set = program_literals(p);
  if (static_cast<int>(lit_set.size()) > cap)
    throw OracleCapError(std::to_string(lit_set.size()) + " literals > cap " +
                         std::to_string(cap));
  std::vector<ObjectiveLiteral> uni(lit_set.begin(), lit_set.end());
  std::map<ObjectiveLiteral, int> index;
  for (std::size_t i = 0; i < uni.size(); ++i)
    index[uni[i]] = static_cast<int>(i);

  MaskProgram base;
  base.n = static_cast<int>(uni.size());
  for (int i = 0; i < base.n; ++i) {
    auto it = index.find(uni[i].complement());
    if (it != index.end() && it->second > i)
      base.complements.push_back({i, it->second});
  }

  std::vector<std::uint32_t> cand;
  for (std::uint32_t s = 0; s < (1u << base.n); ++s)
    if (mask_consistent(base, s)) cand.push_back(s);
  if (cand.size() > 16) throw OracleCapError("candidate space too large");

  // normalize M l to -K not l, then collect distinct subjective literals as
  // (inner_negated, literal) pairs under K; phi bit j = "K (not)? l holds"
  auto normalize = [](const SubjectiveLiteral& s) {
    SubjectiveLiteral n = s;
    if (n.modality == Modality::M) {
      n.modality = Modality::NotK;
      n.inner_negated = true;
    }
    return n;
  };
  std::vector<SubjectiveLiteral> subj;  // stored with modality K (the positive form)
  {
    std::set<SubjectiveLiteral> set;
    for (const Rule& r : p.rules)
      for (const auto& sl : r.body_subj) {
        SubjectiveLiteral n = normalize(sl);
        n.modality = Modality::K;
        set.insert(n);
      }
    subj.assign(set.begin(), set.end());
  }
  // per positive form: candidate sets where the member breaks "for all":
  // K l broken by sets missing l; K not l broken by sets containing l
  std::vector<std::uint32_t> breaking(subj.size(), 0);
  for (std::size_t j = 0; j < subj.size(); ++j)
    for (std::size_t c = 0; c < cand.size(); ++c) {
      bool contains = cand[c] >> index.at(subj[j].literal) & 1;
      if (subj[j].inner_negated ? contains : !contains)
        breaking[j] |= 1u << c;
    }

  std::map<std::uint32_t, std::optional<std::uint32_t>> memo;
  auto collection_for = [&](std::uint32_t phi) -> std::optional<std::uint32_t> {
    auto it = memo.find(phi);
    if (it != memo.end()) return it->second;
    MaskProgram reduct = base;
    for (const Rule& r : p.rules) {
      bool keep = true;
      MRule mr;
      for (const auto& sl : r.body_subj) {
        SubjectiveLiteral n = normalize(sl);
        SubjectiveLiteral key = n;
        key.modality = Modality::K;
        std::size_t j = std::lower_bound(subj.begin(), subj.end(), key) -
                        subj.begin();
        bool k_sat = (phi >> j & 1);
        bool sat = n.modality == Modality::K ? k_sat : !k_sat;
        if (!sat) keep = false;
        if (n.modality == Modality::K) {
          if (n.inner_negated)  // K not l  ->  not l
            mr.neg |= 1u << index.at(n.literal);
          else  // K l  ->  l
            mr.pos |= 1u << index.at(n.literal);
        }
      }
      if (!keep) continue;
      for (const auto& l : r.head) mr.head |= 1u << index.at(l);
      for (const auto& l : r.body_pos) mr.pos |= 1u << index.at(l);
      for (const auto& l : r.body_neg) mr.neg |= 1u << index.at(l);
      mr.disjunctive = r.head.size() > 1;
      reduct.any_disjunctive |= mr.disjunctive;
      reduct.rules.push_back(mr);
    }
    std::vector<std::uint32_t> an = mask_answer_sets(reduct);
    std::uint32_t coll = 0;
    bool valid = true;
    for (std::uint32_t x : an) {
      auto it2 = std::find(cand.begin(), cand.end(), x);
      if (it2 == cand.end()) {
        valid = false;
        break;
      }
      coll |= 1u << (it2 - cand.begin());
    }
    std::optional<std::uint32_t> res;
    if (valid && coll) res = coll;
    memo[phi] = res;
    return res;
  };

  std::set<WorldView> out;
  const std::uint32_t ncoll = 1u << cand.size();
  for (std::uint32_t c = 1; c < ncoll; ++c) {
    std::uint32_t phi = 0;
    for (std::size_t j = 0; j < subj.size(); ++j)
      if (!(c & breaking[j])) phi |= 1u << j;
    std::optional<std::uint32_t> expect = collection_for(phi);
    if (!expect || *expect != c) continue;
    WorldView w;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (c >> i & 1) {
        BeliefSet b;
        for (int k = 0; k < base.n; ++k)
          if (cand[i] >> k & 1) b.insert(uni[k]);
        w.insert(std::move(b));
      }
    out.insert(std::move(w));
  }
  return out;
}

}  // namespace esolve
