#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwb/machine.hpp"
#include "mwb/thread.hpp"

namespace mwb {

// Result of applying a thread to a machine state: either a final state or
// the undefined outcome (written x . h = up-arrow): reached deadlock, or the
// run never converges.
class ApplyResult {
 public:
  static ApplyResult undefined() { return ApplyResult(std::nullopt); }
  static ApplyResult defined(MachineState s) {
    return ApplyResult(std::move(s));
  }

  bool is_defined() const { return state_.has_value(); }
  const MachineState& state() const {
    if (!state_) throw Error("undefined apply result has no state");
    return *state_;
  }

 private:
  explicit ApplyResult(std::optional<MachineState> s) : state_(std::move(s)) {}
  std::optional<MachineState> state_;
};

// A thread step mentions an unknown basic action. tau is always known: it
// leaves the state unchanged and replies T.
class UnknownActionError : public Error {
 public:
  explicit UnknownActionError(const ActionId& a)
      : Error("machine defines no operation for action '" + a.str() + "'"),
        action_(a) {}
  const ActionId& action() const { return action_; }

 private:
  ActionId action_;
};

// Apply semantics:
//   S . s       = s
//   D . s       = undefined
//   (x <|a|> y) . s = x . O_a(s)  if the reply cell of a reads T afterwards,
//                     y . O_a(s)  otherwise
//   x . undefined   = undefined
// A run that revisits a (thread node, machine state) configuration repeats
// forever and is therefore exactly divergent: undefined, no step bound
// involved.
ApplyResult apply(const ThreadGraph& p, const MaurerMachine& h,
                  const MachineState& s);
ApplyResult apply(const ThreadGraph& p, const MaurerMachine& h,
                  const ApplyResult& s);

struct ApplyOutcome {
  ApplyResult result;
  std::uint64_t steps = 0;  // post steps performed (tau included)
};
ApplyOutcome apply_with_stats(const ThreadGraph& p, const MaurerMachine& h,
                              const MachineState& s);

// Step-by-step variant for inspection.
struct TraceStep {
  std::uint32_t node = 0;   // thread node that acted
  ActionId action;
  bool reply = false;       // reply cell after the operation (tau: always T)
  MachineState state;       // machine state after the operation
};

enum class TraceOutcome : std::uint8_t {
  defined,    // reached S
  undefined,  // reached D or revisited a configuration
  truncated,  // max_steps exhausted first
};

struct TraceResult {
  std::vector<TraceStep> steps;
  TraceOutcome outcome = TraceOutcome::truncated;
  std::optional<MachineState> final_state;  // set iff outcome == defined
};

TraceResult trace(const ThreadGraph& p, const MaurerMachine& h,
                  const MachineState& s, std::uint64_t max_steps);

}  // namespace mwb
