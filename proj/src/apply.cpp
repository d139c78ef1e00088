#include "mwb/apply.hpp"

#include <set>
#include <utility>

namespace mwb {

namespace {

struct RunResult {
  ApplyResult result;
  std::uint64_t steps;
  TraceOutcome outcome;
};

// Shared stepper behind apply and trace. Divergence detection is exact:
// both the thread and the state set are finite, so a run either terminates
// or revisits a (node, state) configuration and loops forever.
RunResult run(const ThreadGraph& p, const MaurerMachine& h,
              const MachineState& start, std::uint64_t max_steps,
              std::vector<TraceStep>* record) {
  if (p.nodes.empty()) throw Error("empty thread graph");
  if (!h.layout || !(*h.layout == start.layout())) {
    throw Error("state does not live on the machine's layout");
  }
  // Validate up front so an unknown action is an error even on branches the
  // run would never take from this particular state.
  for (const auto& node : p.nodes) {
    if (node.kind != ThreadGraph::NodeKind::post) continue;
    if (node.action.is_tau()) continue;
    if (!h.find_operation(node.action)) throw UnknownActionError(node.action);
    const MemoryElementId* reply = h.find_reply_cell(node.action);
    if (!reply) throw UnknownActionError(node.action);
    const auto idx = h.layout->try_index_of(*reply);
    if (!idx || !h.layout->domain(*idx).flag) {
      throw Error("action '" + node.action.str() +
                  "' has no two-valued reply cell");
    }
  }

  std::set<std::pair<std::uint32_t, std::uint64_t>> seen;
  std::uint32_t node = p.entry;
  MachineState state = start;
  std::uint64_t steps = 0;
  while (true) {
    const ThreadGraph::Node& n = p.nodes[node];
    if (n.kind == ThreadGraph::NodeKind::stop) {
      return {ApplyResult::defined(std::move(state)), steps,
              TraceOutcome::defined};
    }
    if (n.kind == ThreadGraph::NodeKind::dead) {
      return {ApplyResult::undefined(), steps, TraceOutcome::undefined};
    }
    if (!seen.emplace(node, state.index()).second) {
      return {ApplyResult::undefined(), steps, TraceOutcome::undefined};
    }
    if (steps >= max_steps) {
      return {ApplyResult::undefined(), steps, TraceOutcome::truncated};
    }
    bool reply = true;
    if (!n.action.is_tau()) {
      const Operation& op = *h.find_operation(n.action);
      MachineState next = op.eval(state);
      if (!(next.layout() == *h.layout)) {
        throw Error("operation '" + op.name + "' changed the layout");
      }
      reply = next.get(*h.find_reply_cell(n.action)) == 1;
      state = std::move(next);
    }
    ++steps;
    if (record) record->push_back({node, n.action, reply, state});
    node = reply ? n.then_next : n.else_next;
  }
}

}  // namespace

ApplyResult apply(const ThreadGraph& p, const MaurerMachine& h,
                  const MachineState& s) {
  return run(p, h, s, ~0ull, nullptr).result;
}

ApplyResult apply(const ThreadGraph& p, const MaurerMachine& h,
                  const ApplyResult& s) {
  if (!s.is_defined()) return ApplyResult::undefined();
  return apply(p, h, s.state());
}

ApplyOutcome apply_with_stats(const ThreadGraph& p, const MaurerMachine& h,
                              const MachineState& s) {
  RunResult r = run(p, h, s, ~0ull, nullptr);
  return {std::move(r.result), r.steps};
}

TraceResult trace(const ThreadGraph& p, const MaurerMachine& h,
                  const MachineState& s, std::uint64_t max_steps) {
  TraceResult out;
  RunResult r = run(p, h, s, max_steps, &out.steps);
  out.outcome = r.outcome;
  if (r.outcome == TraceOutcome::defined) out.final_state = r.result.state();
  return out;
}

}  // namespace mwb
