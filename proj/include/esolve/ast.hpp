#pragma once

// Abstract syntax for epistemic specifications: terms, literals, rules,
// programs, and the canonical ordering used for deterministic output.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace esolve {

enum class TermKind { Integer, Symbol, Variable, Function, Arith, Interval };

struct Term {
  TermKind kind = TermKind::Symbol;
  std::string name;        // Symbol/Variable/Function name; Arith: "+" or "-"
  long long value = 0;     // Integer
  std::vector<Term> args;  // Function args; Arith/Interval operands

  static Term integer(long long v) {
    Term t;
    t.kind = TermKind::Integer;
    t.value = v;
    return t;
  }
  static Term symbol(std::string s) {
    Term t;
    t.kind = TermKind::Symbol;
    t.name = std::move(s);
    return t;
  }
  static Term variable(std::string s) {
    Term t;
    t.kind = TermKind::Variable;
    t.name = std::move(s);
    return t;
  }
  static Term function(std::string s, std::vector<Term> a) {
    Term t;
    t.kind = TermKind::Function;
    t.name = std::move(s);
    t.args = std::move(a);
    return t;
  }
  static Term arith(std::string op, Term lhs, Term rhs) {
    Term t;
    t.kind = TermKind::Arith;
    t.name = std::move(op);
    t.args = {std::move(lhs), std::move(rhs)};
    return t;
  }
  static Term interval(Term lo, Term hi) {
    Term t;
    t.kind = TermKind::Interval;
    t.args = {std::move(lo), std::move(hi)};
    return t;
  }
};

inline int compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.kind == TermKind::Integer)
    return a.value < b.value ? -1 : a.value > b.value ? 1 : 0;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i])) return c;
  return 0;
}

inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

struct Atom {
  std::string predicate;
  std::vector<Term> args;
};

inline int compare(const Atom& a, const Atom& b) {
  if (int c = a.predicate.compare(b.predicate)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i])) return c;
  return 0;
}

inline bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
inline bool operator!=(const Atom& a, const Atom& b) { return compare(a, b) != 0; }
inline bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }

// An atom or its classical negation. Ordering puts the negation flag last so
// p < -p < q.
struct ObjectiveLiteral {
  Atom atom;
  bool negated = false;

  ObjectiveLiteral complement() const { return {atom, !negated}; }
};

inline ObjectiveLiteral lit(std::string pred, std::vector<Term> args = {},
                            bool negated = false) {
  return {{std::move(pred), std::move(args)}, negated};
}

inline int compare(const ObjectiveLiteral& a, const ObjectiveLiteral& b) {
  if (int c = compare(a.atom, b.atom)) return c;
  if (a.negated != b.negated) return a.negated ? 1 : -1;
  return 0;
}

inline bool operator==(const ObjectiveLiteral& a, const ObjectiveLiteral& b) {
  return compare(a, b) == 0;
}
inline bool operator!=(const ObjectiveLiteral& a, const ObjectiveLiteral& b) {
  return compare(a, b) != 0;
}
inline bool operator<(const ObjectiveLiteral& a, const ObjectiveLiteral& b) {
  return compare(a, b) < 0;
}

inline ObjectiveLiteral complement(const ObjectiveLiteral& l) {
  return l.complement();
}

enum class Modality { K, NotK, M, NotM };

// K l, -K l, M l, -M l, and their inner-negated forms (K not l, ...).
// Core form means modality K/NotK with inner_negated false.
struct SubjectiveLiteral {
  Modality modality = Modality::K;
  bool inner_negated = false;
  ObjectiveLiteral literal;

  bool core() const {
    return !inner_negated &&
           (modality == Modality::K || modality == Modality::NotK);
  }
};

inline SubjectiveLiteral subj(Modality m, ObjectiveLiteral l,
                              bool inner_negated = false) {
  return {m, inner_negated, std::move(l)};
}

inline int compare(const SubjectiveLiteral& a, const SubjectiveLiteral& b) {
  if (a.modality != b.modality) return a.modality < b.modality ? -1 : 1;
  if (a.inner_negated != b.inner_negated) return a.inner_negated ? 1 : -1;
  return compare(a.literal, b.literal);
}

inline bool operator==(const SubjectiveLiteral& a, const SubjectiveLiteral& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const SubjectiveLiteral& a, const SubjectiveLiteral& b) {
  return compare(a, b) < 0;
}

struct ChoiceElement {
  ObjectiveLiteral literal;
  std::vector<ObjectiveLiteral> condition;  // empty after grounding
};

inline int compare(const ChoiceElement& a, const ChoiceElement& b) {
  if (int c = compare(a.literal, b.literal)) return c;
  if (a.condition.size() != b.condition.size())
    return a.condition.size() < b.condition.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.condition.size(); ++i)
    if (int c = compare(a.condition[i], b.condition[i])) return c;
  return 0;
}

inline bool operator==(const ChoiceElement& a, const ChoiceElement& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const ChoiceElement& a, const ChoiceElement& b) {
  return compare(a, b) < 0;
}

// L{e1, ..., en}U cardinality choice head.
struct ChoiceHead {
  long long lower = 0;
  long long upper = 0;
  std::vector<ChoiceElement> elements;
};

inline int compare(const ChoiceHead& a, const ChoiceHead& b) {
  if (a.lower != b.lower) return a.lower < b.lower ? -1 : 1;
  if (a.upper != b.upper) return a.upper < b.upper ? -1 : 1;
  if (a.elements.size() != b.elements.size())
    return a.elements.size() < b.elements.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    if (int c = compare(a.elements[i], b.elements[i])) return c;
  return 0;
}

enum class CompareOp { Lt, Le, Gt, Ge, Eq, Ne };

struct Comparison {
  CompareOp op = CompareOp::Lt;
  Term lhs;
  Term rhs;
};

inline int compare(const Comparison& a, const Comparison& b) {
  if (a.op != b.op) return a.op < b.op ? -1 : 1;
  if (int c = compare(a.lhs, b.lhs)) return c;
  return compare(a.rhs, b.rhs);
}

struct Rule {
  std::vector<ObjectiveLiteral> head;  // disjunction; empty = constraint
  std::optional<ChoiceHead> choice;
  std::vector<ObjectiveLiteral> body_pos;
  std::vector<ObjectiveLiteral> body_neg;
  std::vector<SubjectiveLiteral> body_subj;
  std::vector<Comparison> body_cmp;  // evaluated away by grounding

  bool is_constraint() const { return head.empty() && !choice; }
  bool is_fact() const {
    return head.size() == 1 && !choice && body_pos.empty() &&
           body_neg.empty() && body_subj.empty() && body_cmp.empty();
  }
};

inline int compare(const Rule& a, const Rule& b) {
  auto cmp_vec = [](const auto& x, const auto& y) -> int {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (int c = compare(x[i], y[i])) return c;
    return 0;
  };
  if (int c = cmp_vec(a.head, b.head)) return c;
  if (a.choice.has_value() != b.choice.has_value())
    return a.choice.has_value() ? 1 : -1;
  if (a.choice)
    if (int c = compare(*a.choice, *b.choice)) return c;
  if (int c = cmp_vec(a.body_pos, b.body_pos)) return c;
  if (int c = cmp_vec(a.body_neg, b.body_neg)) return c;
  if (int c = cmp_vec(a.body_subj, b.body_subj)) return c;
  return cmp_vec(a.body_cmp, b.body_cmp);
}

inline bool operator==(const Rule& a, const Rule& b) { return compare(a, b) == 0; }
inline bool operator<(const Rule& a, const Rule& b) { return compare(a, b) < 0; }

struct Program {
  std::vector<Rule> rules;
  std::map<std::string, long long> constants;  // #const bindings
};

inline bool operator==(const Program& a, const Program& b) {
  return a.rules == b.rules && a.constants == b.constants;
}

// Lit of a program: every objective literal occurring in heads, bodies, and
// inside subjective literals.
inline std::set<ObjectiveLiteral> program_literals(const Program& p) {
  std::set<ObjectiveLiteral> out;
  for (const Rule& r : p.rules) {
    for (const auto& l : r.head) out.insert(l);
    if (r.choice)
      for (const auto& e : r.choice->elements) {
        out.insert(e.literal);
        for (const auto& c : e.condition) out.insert(c);
      }
    for (const auto& l : r.body_pos) out.insert(l);
    for (const auto& l : r.body_neg) out.insert(l);
    for (const auto& s : r.body_subj) out.insert(s.literal);
  }
  return out;
}

using BeliefSet = std::set<ObjectiveLiteral>;
using WorldView = std::set<BeliefSet>;

inline bool consistent(const BeliefSet& s) {
  for (const auto& l : s)
    if (l.negated && s.count(l.complement())) return false;
  return true;
}

// ---- printing (.es surface syntax) ----

inline std::string to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Integer:
      return std::to_string(t.value);
    case TermKind::Symbol:
    case TermKind::Variable:
      return t.name;
    case TermKind::Function: {
      std::string s = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += to_string(t.args[i]);
      }
      return s + ")";
    }
    case TermKind::Arith:
      return to_string(t.args[0]) + t.name + to_string(t.args[1]);
    case TermKind::Interval:
      return to_string(t.args[0]) + ".." + to_string(t.args[1]);
  }
  return {};
}

inline std::string to_string(const Atom& a) {
  std::string s = a.predicate;
  if (!a.args.empty()) {
    s += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ",";
      s += to_string(a.args[i]);
    }
    s += ")";
  }
  return s;
}

inline std::string to_string(const ObjectiveLiteral& l) {
  return (l.negated ? "-" : "") + to_string(l.atom);
}

inline std::string to_string(const SubjectiveLiteral& s) {
  std::string out;
  switch (s.modality) {
    case Modality::K: out = "K"; break;
    case Modality::NotK: out = "-K"; break;
    case Modality::M: out = "M"; break;
    case Modality::NotM: out = "-M"; break;
  }
  out += " ";
  if (s.inner_negated) out += "not ";
  return out + to_string(s.literal);
}

inline std::string to_string(const Comparison& c) {
  const char* op = "";
  switch (c.op) {
    case CompareOp::Lt: op = "<"; break;
    case CompareOp::Le: op = "<="; break;
    case CompareOp::Gt: op = ">"; break;
    case CompareOp::Ge: op = ">="; break;
    case CompareOp::Eq: op = "="; break;
    case CompareOp::Ne: op = "!="; break;
  }
  return to_string(c.lhs) + op + to_string(c.rhs);
}

inline std::string to_string(const ChoiceHead& ch) {
  std::string s = std::to_string(ch.lower) + "{";
  for (std::size_t i = 0; i < ch.elements.size(); ++i) {
    if (i) s += ", ";
    s += to_string(ch.elements[i].literal);
    for (const auto& c : ch.elements[i].condition) s += ":" + to_string(c);
  }
  return s + "}" + std::to_string(ch.upper);
}

inline std::string to_string(const Rule& r) {
  std::string s;
  if (r.choice) {
    s = to_string(*r.choice);
  } else {
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      if (i) s += " or ";
      s += to_string(r.head[i]);
    }
  }
  std::vector<std::string> body;
  for (const auto& l : r.body_pos) body.push_back(to_string(l));
  for (const auto& c : r.body_cmp) body.push_back(to_string(c));
  for (const auto& sl : r.body_subj) body.push_back(to_string(sl));
  for (const auto& l : r.body_neg) body.push_back("not " + to_string(l));
  if (!body.empty()) {
    s += " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) s += ", ";
      s += body[i];
    }
  } else if (r.is_constraint()) {
    s += ":- ";
  }
  return s + ".";
}

inline std::string to_string(const Program& p) {
  std::string s;
  for (const auto& [name, v] : p.constants)
    s += "#const " + name + "=" + std::to_string(v) + ".\n";
  for (const Rule& r : p.rules) s += to_string(r) + "\n";
  return s;
}

inline std::string to_string(const BeliefSet& b) {
  std::string s = "{ ";
  bool first = true;
  for (const auto& l : b) {
    if (!first) s += ", ";
    first = false;
    s += to_string(l);
  }
  return s + (b.empty() ? "}" : " }");
}

}  // namespace esolve
