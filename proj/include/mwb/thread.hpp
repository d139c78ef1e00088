#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mwb/action.hpp"
#include "mwb/error.hpp"

namespace mwb {

// ---------------------------------------------------------------------------
// Thread terms
//
// The basic thread algebra has two constants and one composition:
//   S                  -- successful termination
//   D                  -- deadlock
//   x <| a |> y        -- perform a, continue as x on reply T, as y on reply F
// Action prefixing a ; x abbreviates x <| a |> x. Terms may also mention
// recursion variables, which are bound by a recursive specification.
// ---------------------------------------------------------------------------

enum class TermKind : std::uint8_t { stop, dead, var, post };

class ThreadTerm;
using TermPtr = std::shared_ptr<const ThreadTerm>;

class ThreadTerm {
 public:
  TermKind kind() const { return kind_; }

  const ActionId& action() const { return action_; }        // post only
  const TermPtr& then_branch() const { return then_; }      // post only
  const TermPtr& else_branch() const { return else_; }      // post only
  const std::string& var_name() const { return name_; }     // var only

  static TermPtr stop();
  static TermPtr dead();
  static TermPtr var(std::string name);
  static TermPtr post(ActionId action, TermPtr then_b, TermPtr else_b);
  // a ; x == x <| a |> x
  static TermPtr prefix(ActionId action, TermPtr next) {
    return post(std::move(action), next, next);
  }

 private:
  ThreadTerm() = default;
  TermKind kind_ = TermKind::stop;
  ActionId action_;
  TermPtr then_;
  TermPtr else_;
  std::string name_;
};

// Structural equality of terms (not bisimilarity).
bool equal_terms(const ThreadTerm& a, const ThreadTerm& b);
bool equal_terms(const TermPtr& a, const TermPtr& b);

// ---------------------------------------------------------------------------
// Recursive specifications
// ---------------------------------------------------------------------------

struct RecSpec {
  // Equation order is meaningful: printers preserve it, and the default root
  // is the first equation.
  std::vector<std::pair<std::string, TermPtr>> equations;
  std::string root;  // empty means "first equation"

  const std::string& root_name() const;
  const TermPtr* find(std::string_view name) const;

  bool operator==(const RecSpec& other) const;
};

// Malformed specification: duplicate or missing equations, undeclared
// variables, a reserved name used as a variable, or an unknown root.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Thrown by solve() when the specification is unguarded.
class GuardednessViolation : public Error {
 public:
  explicit GuardednessViolation(std::string variable)
      : Error("unguarded recursion through variable '" + variable + "'"),
        variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// Throws SpecError unless every referenced variable is declared exactly once,
// no variable is named S, D or tau, and the root (if set) is declared.
void validate_spec(const RecSpec& spec);

// A specification is guarded when every variable occurrence sits under a
// postconditional; a bare variable as a right-hand side is unguarded, even
// when its target equation is itself guarded (no unfolding through alias
// chains). Returns the first offending variable in declaration order.
// Pre: validate_spec(spec) passed.
std::optional<std::string> find_unguarded_variable(const RecSpec& spec);

// ---------------------------------------------------------------------------
// Thread graphs: the finite solutions of guarded specifications
// ---------------------------------------------------------------------------

struct ThreadGraph {
  enum class NodeKind : std::uint8_t { stop, dead, post };

  struct Node {
    NodeKind kind = NodeKind::stop;
    ActionId action;               // post only
    std::uint32_t then_next = 0;   // post only
    std::uint32_t else_next = 0;   // post only
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;
  std::uint32_t entry = 0;

  static ThreadGraph stop();
  static ThreadGraph dead();

  // Structural identity (same numbering), not bisimilarity.
  bool operator==(const ThreadGraph&) const = default;
};

// Unique solution of a guarded specification: one node per distinct
// subterm, unreachable nodes pruned, nodes renumbered in BFS order from the
// root (then-branch before else-branch), so equal behaviours solved from
// syntactically equal specs produce identical graphs.
// Throws SpecError / GuardednessViolation.
ThreadGraph solve(const RecSpec& spec);

// Residual threads of p: every behaviour reachable from p by finite action
// sequences, p itself included; D counts when reachable. For a solved graph
// these are exactly its nodes.
std::vector<std::uint32_t> residual_states(const ThreadGraph& g);
std::size_t residual_count(const ThreadGraph& g);

// Bisimilarity of the behaviours rooted at the two entries. With
// identify_tau set, the silent action always replies T, i.e. the else-branch
// of a tau node is identified with its then-branch before comparing.
bool bisimilar(const ThreadGraph& a, const ThreadGraph& b,
               bool identify_tau = false);

// Quotient of g by bisimilarity, restricted to reachable nodes and
// renumbered in BFS order from the entry. The result is the unique minimal
// representative of g's bisimulation class: minimize(a) == minimize(b) iff
// bisimilar(a, b).
ThreadGraph minimize(const ThreadGraph& g);

// Enumerates, canonically and without duplicates, every regular thread over
// the given alphabet with at most max_states residual states (the two
// constants included). Yields minimized BFS-canonical graphs in order of
// increasing size. The alphabet must be duplicate-free.
void enumerate_threads(std::span<const ActionId> alphabet,
                       std::size_t max_states,
                       const std::function<void(const ThreadGraph&)>& yield);
std::vector<ThreadGraph> enumerate_threads(std::span<const ActionId> alphabet,
                                           std::size_t max_states);

}  // namespace mwb
