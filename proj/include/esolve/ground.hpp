#pragma once

// Grounding: #const substitution, interval expansion, safety checking, and
// domain-restricted instantiation driven by a derivable-atom closure.
//
// Candidate substitutions come from matching positive body literals (and
// choice-element conditions) against the set of possibly derivable atoms,
// which is grown bottom-up from facts and rule heads. Rules that arrive
// already ground pass through unchanged, so grounding is the identity on
// ground input.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "esolve/ast.hpp"

namespace esolve {

struct GroundError : std::runtime_error {
  explicit GroundError(const std::string& msg)
      : std::runtime_error("ground error: " + msg) {}
};

namespace detail {

using Substitution = std::map<std::string, Term>;

inline bool term_ground(const Term& t) {
  if (t.kind == TermKind::Variable) return false;
  for (const Term& a : t.args)
    if (!term_ground(a)) return false;
  return true;
}

inline bool atom_ground(const Atom& a) {
  for (const Term& t : a.args)
    if (!term_ground(t)) return false;
  return true;
}

inline bool rule_ground(const Rule& r) {
  auto lits_ground = [](const std::vector<ObjectiveLiteral>& ls) {
    return std::all_of(ls.begin(), ls.end(),
                       [](const auto& l) { return atom_ground(l.atom); });
  };
  if (!lits_ground(r.head) || !lits_ground(r.body_pos) ||
      !lits_ground(r.body_neg))
    return false;
  for (const auto& s : r.body_subj)
    if (!atom_ground(s.literal.atom)) return false;
  for (const auto& c : r.body_cmp)
    if (!term_ground(c.lhs) || !term_ground(c.rhs)) return false;
  if (r.choice)
    for (const auto& e : r.choice->elements) {
      if (!atom_ground(e.literal.atom)) return false;
      if (!lits_ground(e.condition)) return false;
    }
  return true;
}

inline Term subst_term(const Term& t, const Substitution& s) {
  if (t.kind == TermKind::Variable) {
    auto it = s.find(t.name);
    return it != s.end() ? it->second : t;
  }
  Term out = t;
  for (Term& a : out.args) a = subst_term(a, s);
  return out;
}

inline Atom subst_atom(const Atom& a, const Substitution& s) {
  Atom out = a;
  for (Term& t : out.args) t = subst_term(t, s);
  return out;
}

inline ObjectiveLiteral subst_lit(const ObjectiveLiteral& l,
                                  const Substitution& s) {
  return {subst_atom(l.atom, s), l.negated};
}

// Evaluates + and - over integers; throws on symbolic operands.
inline Term eval_term(const Term& t) {
  if (t.kind == TermKind::Arith) {
    Term lhs = eval_term(t.args[0]);
    Term rhs = eval_term(t.args[1]);
    if (lhs.kind != TermKind::Integer || rhs.kind != TermKind::Integer)
      throw GroundError("arithmetic on non-integer in '" + to_string(t) + "'");
    return Term::integer(t.name == "+" ? lhs.value + rhs.value
                                       : lhs.value - rhs.value);
  }
  Term out = t;
  for (Term& a : out.args) a = eval_term(a);
  return out;
}

inline Atom eval_atom(const Atom& a) {
  Atom out = a;
  for (Term& t : out.args) t = eval_term(t);
  return out;
}

inline ObjectiveLiteral eval_lit(const ObjectiveLiteral& l) {
  return {eval_atom(l.atom), l.negated};
}

inline bool eval_comparison(const Comparison& c) {
  Term lhs = eval_term(c.lhs);
  Term rhs = eval_term(c.rhs);
  if (lhs.kind != TermKind::Integer || rhs.kind != TermKind::Integer)
    throw GroundError("comparison on non-integer in '" + to_string(c) + "'");
  switch (c.op) {
    case CompareOp::Lt: return lhs.value < rhs.value;
    case CompareOp::Le: return lhs.value <= rhs.value;
    case CompareOp::Gt: return lhs.value > rhs.value;
    case CompareOp::Ge: return lhs.value >= rhs.value;
    case CompareOp::Eq: return lhs.value == rhs.value;
    case CompareOp::Ne: return lhs.value != rhs.value;
  }
  return false;
}

// Unification of a (possibly non-ground) term against a ground term.
inline bool match_term(const Term& pat, const Term& ground, Substitution& s) {
  if (pat.kind == TermKind::Variable) {
    auto it = s.find(pat.name);
    if (it != s.end()) return it->second == ground;
    s[pat.name] = ground;
    return true;
  }
  if (pat.kind == TermKind::Arith || pat.kind == TermKind::Interval)
    return false;  // arithmetic never binds
  if (pat.kind != ground.kind) return false;
  if (pat.kind == TermKind::Integer) return pat.value == ground.value;
  if (pat.name != ground.name || pat.args.size() != ground.args.size())
    return false;
  for (std::size_t i = 0; i < pat.args.size(); ++i)
    if (!match_term(pat.args[i], ground.args[i], s)) return false;
  return true;
}

inline bool match_lit(const ObjectiveLiteral& pat, const ObjectiveLiteral& g,
                      Substitution& s) {
  if (pat.negated != g.negated || pat.atom.predicate != g.atom.predicate ||
      pat.atom.args.size() != g.atom.args.size())
    return false;
  for (std::size_t i = 0; i < pat.atom.args.size(); ++i)
    if (!match_term(pat.atom.args[i], g.atom.args[i], s)) return false;
  return true;
}

inline void collect_vars(const Term& t, std::set<std::string>& out,
                         bool in_arith = false) {
  if (t.kind == TermKind::Variable) {
    if (!in_arith) out.insert(t.name);
    return;
  }
  bool arith = in_arith || t.kind == TermKind::Arith;
  for (const Term& a : t.args) collect_vars(a, out, arith);
}

// Folds arithmetic subterms whose operands are already integers.
inline Term partial_eval(const Term& t) {
  Term out = t;
  for (Term& a : out.args) a = partial_eval(a);
  if (out.kind == TermKind::Arith && out.args[0].kind == TermKind::Integer &&
      out.args[1].kind == TermKind::Integer)
    return Term::integer(out.name == "+" ? out.args[0].value + out.args[1].value
                                         : out.args[0].value - out.args[1].value);
  return out;
}

inline ObjectiveLiteral partial_eval(const ObjectiveLiteral& l) {
  ObjectiveLiteral out = l;
  for (Term& t : out.atom.args) t = partial_eval(t);
  return out;
}

inline bool has_arith(const Term& t) {
  if (t.kind == TermKind::Arith) return true;
  for (const Term& a : t.args)
    if (has_arith(a)) return true;
  return false;
}

inline bool has_arith(const ObjectiveLiteral& l) {
  for (const Term& t : l.atom.args)
    if (has_arith(t)) return true;
  return false;
}

inline void collect_all_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Variable) {
    out.insert(t.name);
    return;
  }
  for (const Term& a : t.args) collect_all_vars(a, out);
}

inline void collect_all_vars(const ObjectiveLiteral& l,
                             std::set<std::string>& out) {
  for (const Term& t : l.atom.args) collect_all_vars(t, out);
}

inline bool has_interval(const Term& t) {
  if (t.kind == TermKind::Interval) return true;
  for (const Term& a : t.args)
    if (has_interval(a)) return true;
  return false;
}

}  // namespace detail

// Grounds a source program into a variable-free one. Throws GroundError on
// unsafe rules, unbound constants, or non-integer arithmetic.
inline Program ground(const Program& src) {
  using namespace detail;

  // 1. #const substitution
  Program p;
  p.rules = src.rules;
  {
    struct ConstSub {
      const std::map<std::string, long long>& consts;
      Term operator()(const Term& t) const {
        if (t.kind == TermKind::Symbol) {
          auto it = consts.find(t.name);
          if (it != consts.end()) return Term::integer(it->second);
          return t;
        }
        Term out = t;
        for (Term& a : out.args) a = (*this)(a);
        return out;
      }
    } sub{src.constants};
    for (Rule& r : p.rules) {
      for (auto& l : r.head)
        for (auto& t : l.atom.args) t = sub(t);
      for (auto& l : r.body_pos)
        for (auto& t : l.atom.args) t = sub(t);
      for (auto& l : r.body_neg)
        for (auto& t : l.atom.args) t = sub(t);
      for (auto& s : r.body_subj)
        for (auto& t : s.literal.atom.args) t = sub(t);
      for (auto& c : r.body_cmp) {
        c.lhs = sub(c.lhs);
        c.rhs = sub(c.rhs);
      }
      if (r.choice)
        for (auto& e : r.choice->elements) {
          for (auto& t : e.literal.atom.args) t = sub(t);
          for (auto& cl : e.condition)
            for (auto& t : cl.atom.args) t = sub(t);
        }
    }
  }

  // 2. interval expansion (facts only)
  {
    std::vector<Rule> expanded;
    for (const Rule& r : p.rules) {
      bool iv = false;
      auto check_no_interval = [&](const Term& t, const char* where) {
        if (has_interval(t))
          throw GroundError(std::string("interval term outside a fact (") +
                            where + "): " + to_string(t));
      };
      for (const auto& l : r.body_pos)
        for (const auto& t : l.atom.args) check_no_interval(t, "body");
      for (const auto& l : r.body_neg)
        for (const auto& t : l.atom.args) check_no_interval(t, "body");
      for (const auto& s : r.body_subj)
        for (const auto& t : s.literal.atom.args) check_no_interval(t, "body");
      if (r.choice)
        for (const auto& e : r.choice->elements) {
          for (const auto& t : e.literal.atom.args) check_no_interval(t, "choice");
          for (const auto& c : e.condition)
            for (const auto& t : c.atom.args) check_no_interval(t, "choice");
        }
      for (const auto& l : r.head)
        for (const auto& t : l.atom.args) iv = iv || has_interval(t);
      if (!iv) {
        expanded.push_back(r);
        continue;
      }
      if (!r.is_fact())
        throw GroundError("interval term outside a fact: " + to_string(r));
      // cartesian expansion of every interval argument
      std::vector<Atom> frontier = {r.head[0].atom};
      bool again = true;
      while (again) {
        again = false;
        std::vector<Atom> nxt;
        for (const Atom& a : frontier) {
          int iv_idx = -1;
          for (std::size_t i = 0; i < a.args.size(); ++i)
            if (has_interval(a.args[i])) iv_idx = static_cast<int>(i);
          if (iv_idx < 0) {
            nxt.push_back(a);
            continue;
          }
          again = true;
          const Term& t = a.args[iv_idx];
          if (t.kind != TermKind::Interval)
            throw GroundError("nested interval term: " + to_string(t));
          Term lo = eval_term(t.args[0]);
          Term hi = eval_term(t.args[1]);
          if (lo.kind != TermKind::Integer || hi.kind != TermKind::Integer)
            throw GroundError("interval bounds must be integers: " +
                              to_string(t));
          for (long long v = lo.value; v <= hi.value; ++v) {
            Atom b = a;
            b.args[iv_idx] = Term::integer(v);
            nxt.push_back(b);
          }
        }
        frontier = std::move(nxt);
      }
      for (const Atom& a : frontier) {
        Rule f;
        f.head.push_back({a, r.head[0].negated});
        expanded.push_back(f);
      }
    }
    p.rules = std::move(expanded);
  }

  // 3. safety: every variable must occur in a positive body literal outside
  // arithmetic, or (for choice-element variables) in the element's condition
  for (const Rule& r : p.rules) {
    std::set<std::string> all, bound;
    for (const auto& l : r.head) collect_all_vars(l, all);
    for (const auto& l : r.body_pos) collect_all_vars(l, all);
    for (const auto& l : r.body_neg) collect_all_vars(l, all);
    for (const auto& s : r.body_subj) collect_all_vars(s.literal, all);
    for (const auto& c : r.body_cmp) {
      collect_all_vars(c.lhs, all);
      collect_all_vars(c.rhs, all);
    }
    for (const auto& l : r.body_pos)
      for (const auto& t : l.atom.args) collect_vars(t, bound);
    if (r.choice)
      for (const auto& e : r.choice->elements) {
        std::set<std::string> evars, cvars;
        collect_all_vars(e.literal, evars);
        for (const auto& c : e.condition) {
          collect_all_vars(c, evars);
          for (const auto& t : c.atom.args) collect_vars(t, cvars);
        }
        for (const auto& v : evars)
          if (!cvars.count(v)) all.insert(v);
        // condition-bound variables are local to the element
      }
    for (const auto& v : all)
      if (!bound.count(v))
        throw GroundError("unsafe rule, variable '" + v +
                          "' not bound by a positive body literal: " +
                          to_string(r));
  }

  // 4. instantiation by derivable-atom closure
  std::set<ObjectiveLiteral> possible;
  auto body_possible = [&](const Rule& r) {
    for (const auto& l : r.body_pos)
      if (!possible.count(eval_lit(l))) return false;
    return true;
  };
  auto add_heads = [&](const Rule& r) {
    bool changed = false;
    for (const auto& l : r.head) changed |= possible.insert(eval_lit(l)).second;
    if (r.choice)
      for (const auto& e : r.choice->elements)
        changed |= possible.insert(eval_lit(e.literal)).second;
    return changed;
  };

  struct Slot {
    bool was_ground;
    Rule rule;                 // original (ground rules kept verbatim)
    std::set<Rule> instances;  // ground instances of non-ground rules
  };
  std::vector<Slot> slots;
  for (const Rule& r : p.rules) slots.push_back({rule_ground(r), r, {}});

  // finishes one substitution: evaluates arithmetic and comparisons, expands
  // choice conditions, returns false if a comparison fails
  auto finish = [&](const Rule& r, const Substitution& s,
                    std::optional<Rule>& out) {
    Rule g;
    for (const auto& c : r.body_cmp) {
      Comparison cc{c.op, subst_term(c.lhs, s), subst_term(c.rhs, s)};
      if (!eval_comparison(cc)) return false;
    }
    for (const auto& l : r.head) g.head.push_back(eval_lit(subst_lit(l, s)));
    for (const auto& l : r.body_pos)
      g.body_pos.push_back(eval_lit(subst_lit(l, s)));
    for (const auto& l : r.body_neg)
      g.body_neg.push_back(eval_lit(subst_lit(l, s)));
    for (const auto& sl : r.body_subj)
      g.body_subj.push_back(
          {sl.modality, sl.inner_negated, eval_lit(subst_lit(sl.literal, s))});
    if (r.choice) {
      ChoiceHead ch;
      ch.lower = r.choice->lower;
      ch.upper = r.choice->upper;
      std::set<ObjectiveLiteral> elems;
      for (const auto& e : r.choice->elements) {
        if (e.condition.empty()) {
          elems.insert(eval_lit(subst_lit(e.literal, s)));
          continue;
        }
        // expand the element over bindings of its condition
        std::vector<Substitution> frontier = {s};
        for (const auto& c : e.condition) {
          std::vector<Substitution> nxt;
          for (const auto& sub : frontier) {
            ObjectiveLiteral pat = subst_lit(c, sub);
            if (atom_ground(pat.atom)) {
              if (possible.count(eval_lit(pat))) nxt.push_back(sub);
              continue;
            }
            for (const auto& cand : possible) {
              Substitution s2 = sub;
              if (match_lit(pat, cand, s2)) nxt.push_back(std::move(s2));
            }
          }
          frontier = std::move(nxt);
        }
        for (const auto& sub : frontier)
          elems.insert(eval_lit(subst_lit(e.literal, sub)));
      }
      for (const auto& l : elems) ch.elements.push_back({l, {}});
      if (ch.elements.empty()) return false;  // no instantiable element
      g.choice = std::move(ch);
    }
    out = std::move(g);
    return true;
  };

  // backtracking match of body_pos against the derivable set; literals whose
  // arithmetic is not yet resolved under the current substitution are
  // deferred until other literals bind their variables
  auto instantiate = [&](const Rule& r) {
    std::set<Rule> out;
    std::vector<std::pair<Substitution, std::vector<ObjectiveLiteral>>> stack;
    std::vector<ObjectiveLiteral> body(r.body_pos.begin(), r.body_pos.end());
    stack.push_back({{}, std::move(body)});
    while (!stack.empty()) {
      auto [s, remaining] = std::move(stack.back());
      stack.pop_back();
      if (remaining.empty()) {
        std::optional<Rule> g;
        if (finish(r, s, g)) out.insert(std::move(*g));
        continue;
      }
      std::size_t pick = 0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        ObjectiveLiteral pat = partial_eval(subst_lit(remaining[i], s));
        if (atom_ground(pat.atom) || !has_arith(pat)) {
          pick = i;
          break;
        }
      }
      ObjectiveLiteral pat = partial_eval(subst_lit(remaining[pick], s));
      std::vector<ObjectiveLiteral> rest;
      for (std::size_t i = 0; i < remaining.size(); ++i)
        if (i != pick) rest.push_back(remaining[i]);
      if (atom_ground(pat.atom)) {
        if (possible.count(eval_lit(pat))) stack.push_back({std::move(s), rest});
        continue;
      }
      for (const auto& cand : possible) {
        Substitution s2 = s;
        if (match_lit(pat, cand, s2)) stack.push_back({std::move(s2), rest});
      }
    }
    return out;
  };

  // iterate to a fixpoint; instances are recomputed per pass because choice
  // elements and body matches depend on the growing derivable set
  bool changed = true;
  int guard = 0;
  while (changed) {
    if (++guard > 10000)
      throw GroundError("grounding did not reach a fixpoint");
    changed = false;
    for (Slot& slot : slots) {
      if (slot.was_ground) {
        if (body_possible(slot.rule)) changed |= add_heads(slot.rule);
      } else {
        std::set<Rule> fresh = instantiate(slot.rule);
        if (fresh != slot.instances) {
          slot.instances = std::move(fresh);
          changed = true;
          for (const Rule& g : slot.instances) add_heads(g);
        }
      }
    }
  }

  // 5. assemble, evaluating arithmetic/comparisons of ground rules in place
  Program out;
  for (Slot& slot : slots) {
    if (slot.was_ground) {
      std::optional<Rule> g;
      if (finish(slot.rule, {}, g)) out.rules.push_back(std::move(*g));
    } else {
      for (const Rule& g : slot.instances) out.rules.push_back(g);
    }
  }
  return out;
}

}  // namespace esolve
