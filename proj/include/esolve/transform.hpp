#pragma once

// Rewriting arbitrary subjective literals into core form (K l / -K l only)
// and projecting world views back to the original literals.
//
// One fresh literal l' per objective literal l, shared across every
// occurrence and every form that needs it, with the defining rule
// l' :- not l appended once.

#include <map>
#include <set>
#include <string>

#include "esolve/ast.hpp"

namespace esolve {

struct TransformError : std::runtime_error {
  explicit TransformError(const std::string& msg)
      : std::runtime_error("transform error: " + msg) {}
};

struct CoreProgram {
  Program program;
  std::map<ObjectiveLiteral, ObjectiveLiteral> fresh_map;
  std::set<ObjectiveLiteral> original_lits;
};

namespace detail {

inline ObjectiveLiteral fresh_literal(const ObjectiveLiteral& l) {
  Atom a;
  a.predicate = std::string("aux_k_") + (l.negated ? "n_" : "") +
                l.atom.predicate;
  a.args = l.atom.args;
  return {std::move(a), false};
}

// true when the form requires the fresh literal l' (first four table rows)
inline bool needs_fresh(const SubjectiveLiteral& s) {
  if (s.inner_negated)
    return s.modality == Modality::K || s.modality == Modality::NotK;
  return s.modality == Modality::M || s.modality == Modality::NotM;
}

inline SubjectiveLiteral rewrite(const SubjectiveLiteral& s,
                                 const ObjectiveLiteral& fresh) {
  if (s.core()) return s;
  if (s.inner_negated) {
    switch (s.modality) {
      case Modality::K:     // K not l  ->  K l'
        return {Modality::K, false, fresh};
      case Modality::NotK:  // -K not l ->  -K l'
        return {Modality::NotK, false, fresh};
      case Modality::M:     // M not l  ->  -K l
        return {Modality::NotK, false, s.literal};
      case Modality::NotM:  // -M not l ->  K l
        return {Modality::K, false, s.literal};
    }
  }
  switch (s.modality) {
    case Modality::M:     // M l  ->  -K l'
      return {Modality::NotK, false, fresh};
    case Modality::NotM:  // -M l ->  K l'
      return {Modality::K, false, fresh};
    default:
      return s;
  }
}

inline CoreProgram to_core_impl(const Program& p) {
  CoreProgram out;
  out.original_lits = program_literals(p);
  for (const Rule& r : p.rules)
    for (const auto& s : r.body_subj)
      if (needs_fresh(s))
        out.fresh_map.emplace(s.literal, fresh_literal(s.literal));
  out.program.constants = p.constants;
  for (const Rule& r : p.rules) {
    Rule nr = r;
    for (auto& s : nr.body_subj) {
      auto it = out.fresh_map.find(s.literal);
      s = rewrite(s, it != out.fresh_map.end() ? it->second : s.literal);
    }
    out.program.rules.push_back(std::move(nr));
  }
  for (const auto& [l, fresh] : out.fresh_map) {
    Rule def;
    def.head.push_back(fresh);
    def.body_neg.push_back(l);
    out.program.rules.push_back(std::move(def));
  }
  return out;
}

}  // namespace detail

// Rewrites a ground program with arbitrary subjective literals into core form.
inline CoreProgram to_core(const Program& p) { return detail::to_core_impl(p); }

// Same rewriting, restricted to the K l / -K l / K not l / -K not l / M l
// fragment; any other modality is rejected.
inline CoreProgram gelfond_to_core(const Program& p) {
  for (const Rule& r : p.rules)
    for (const auto& s : r.body_subj) {
      bool ok = s.modality == Modality::K || s.modality == Modality::NotK ||
                (s.modality == Modality::M && !s.inner_negated);
      if (!ok)
        throw TransformError("subjective literal '" + to_string(s) +
                             "' is outside the K/-K/K not/-K not/M fragment");
    }
  return detail::to_core_impl(p);
}

// Definition-2 projection: each belief set intersected with Lit.
inline std::set<WorldView> project(const std::set<WorldView>& views,
                                   const std::set<ObjectiveLiteral>& lits) {
  std::set<WorldView> out;
  for (const WorldView& w : views) {
    WorldView pw;
    for (const BeliefSet& b : w) {
      BeliefSet pb;
      for (const auto& l : b)
        if (lits.count(l)) pb.insert(l);
      pw.insert(std::move(pb));
    }
    out.insert(std::move(pw));
  }
  return out;
}

inline WorldView project(const WorldView& w,
                         const std::set<ObjectiveLiteral>& lits) {
  std::set<WorldView> s = project(std::set<WorldView>{w}, lits);
  return *s.begin();
}

}  // namespace esolve
