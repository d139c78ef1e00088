#pragma once

// Shared helpers for the test binaries: seeded random guarded
// specifications and one-step unfolding, used by the recursion-principle
// and round-trip suites.

#include <string>
#include <vector>

#include "mwb/rng.hpp"
#include "mwb/thread.hpp"

namespace mwb::testutil {

inline ActionId random_action(SplitMix64& rng) {
  switch (rng.below(4)) {
    case 0: return ActionId("a");
    case 1: return ActionId("b");
    case 2: return ActionId::tau();
    default: return ActionId("op", static_cast<std::uint32_t>(rng.below(3)));
  }
}

// A branch body: constants, variables, or a nested postconditional.
inline TermPtr random_branch(SplitMix64& rng, std::size_t n_vars, int depth) {
  const std::uint64_t pick = rng.below(depth > 0 ? 5 : 4);
  switch (pick) {
    case 0: return ThreadTerm::stop();
    case 1: return ThreadTerm::dead();
    case 2:
    case 3: return ThreadTerm::var("X" + std::to_string(rng.below(n_vars)));
    default:
      return ThreadTerm::post(random_action(rng),
                              random_branch(rng, n_vars, depth - 1),
                              random_branch(rng, n_vars, depth - 1));
  }
}

// Guarded by construction: no right-hand side is a bare variable.
inline RecSpec random_spec(SplitMix64& rng, std::size_t max_equations = 4) {
  const std::size_t n = 1 + rng.below(max_equations);
  RecSpec spec;
  for (std::size_t i = 0; i < n; ++i) {
    TermPtr rhs;
    switch (rng.below(6)) {
      case 0: rhs = ThreadTerm::stop(); break;
      case 1: rhs = ThreadTerm::dead(); break;
      default:
        rhs = ThreadTerm::post(random_action(rng), random_branch(rng, n, 2),
                               random_branch(rng, n, 2));
    }
    spec.equations.emplace_back("X" + std::to_string(i), std::move(rhs));
  }
  return spec;
}

inline TermPtr substitute_once(const TermPtr& t, const RecSpec& spec) {
  switch (t->kind()) {
    case TermKind::var: return *spec.find(t->var_name());
    case TermKind::post:
      return ThreadTerm::post(t->action(),
                              substitute_once(t->then_branch(), spec),
                              substitute_once(t->else_branch(), spec));
    default: return t;
  }
}

// One-step unfolding: every variable occurrence is replaced by its defining
// right-hand side. Keeps guardedness, preserves the solution.
inline RecSpec unfold_once(const RecSpec& spec) {
  RecSpec out;
  out.root = spec.root;
  for (const auto& [name, rhs] : spec.equations) {
    out.equations.emplace_back(name, substitute_once(rhs, spec));
  }
  return out;
}

// The same equations in a rotated order, root pinned to the original.
inline RecSpec rotate_equations(const RecSpec& spec, std::size_t by) {
  RecSpec out;
  out.root = spec.root_name();
  const std::size_t n = spec.equations.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.equations.push_back(spec.equations[(i + by) % n]);
  }
  return out;
}

inline bool equal_specs(const RecSpec& a, const RecSpec& b) {
  if (a.equations.size() != b.equations.size()) return false;
  if (a.root_name() != b.root_name()) return false;
  for (std::size_t i = 0; i < a.equations.size(); ++i) {
    if (a.equations[i].first != b.equations[i].first) return false;
    if (!equal_terms(a.equations[i].second, b.equations[i].second)) {
      return false;
    }
  }
  return true;
}

}  // namespace mwb::testutil
