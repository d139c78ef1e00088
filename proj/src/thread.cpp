#include "mwb/thread.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace mwb {

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

TermPtr ThreadTerm::stop() {
  static const TermPtr shared = [] {
    auto t = std::shared_ptr<ThreadTerm>(new ThreadTerm());
    t->kind_ = TermKind::stop;
    return TermPtr(t);
  }();
  return shared;
}

TermPtr ThreadTerm::dead() {
  static const TermPtr shared = [] {
    auto t = std::shared_ptr<ThreadTerm>(new ThreadTerm());
    t->kind_ = TermKind::dead;
    return TermPtr(t);
  }();
  return shared;
}

TermPtr ThreadTerm::var(std::string name) {
  auto t = std::shared_ptr<ThreadTerm>(new ThreadTerm());
  t->kind_ = TermKind::var;
  t->name_ = std::move(name);
  return t;
}

TermPtr ThreadTerm::post(ActionId action, TermPtr then_b, TermPtr else_b) {
  if (!then_b || !else_b) {
    throw Error("postconditional composition requires both branches");
  }
  auto t = std::shared_ptr<ThreadTerm>(new ThreadTerm());
  t->kind_ = TermKind::post;
  t->action_ = std::move(action);
  t->then_ = std::move(then_b);
  t->else_ = std::move(else_b);
  return t;
}

bool equal_terms(const ThreadTerm& a, const ThreadTerm& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::stop:
    case TermKind::dead:
      return true;
    case TermKind::var:
      return a.var_name() == b.var_name();
    case TermKind::post:
      return a.action() == b.action() &&
             equal_terms(*a.then_branch(), *b.then_branch()) &&
             equal_terms(*a.else_branch(), *b.else_branch());
  }
  return false;
}

bool equal_terms(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal_terms(*a, *b);
}

// ---------------------------------------------------------------------------
// Specifications
// ---------------------------------------------------------------------------

const std::string& RecSpec::root_name() const {
  if (!root.empty()) return root;
  if (equations.empty()) {
    throw SpecError("specification has no equations");
  }
  return equations.front().first;
}

const TermPtr* RecSpec::find(std::string_view name) const {
  for (const auto& [lhs, rhs] : equations) {
    if (lhs == name) return &rhs;
  }
  return nullptr;
}

bool RecSpec::operator==(const RecSpec& other) const {
  if (equations.size() != other.equations.size()) return false;
  for (std::size_t i = 0; i < equations.size(); ++i) {
    if (equations[i].first != other.equations[i].first) return false;
    if (!equal_terms(equations[i].second, other.equations[i].second)) {
      return false;
    }
  }
  if (equations.empty()) return true;
  return root_name() == other.root_name();
}

namespace {

bool reserved_name(const std::string& name) {
  return name == "S" || name == "D" || name == "tau";
}

void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind()) {
    case TermKind::stop:
    case TermKind::dead:
      return;
    case TermKind::var:
      out.insert(t->var_name());
      return;
    case TermKind::post:
      collect_vars(t->then_branch(), out);
      collect_vars(t->else_branch(), out);
      return;
  }
}

}  // namespace

void validate_spec(const RecSpec& spec) {
  if (spec.equations.empty()) {
    throw SpecError("specification has no equations");
  }
  std::set<std::string> declared;
  for (const auto& [name, rhs] : spec.equations) {
    if (name.empty()) throw SpecError("equation with empty variable name");
    if (reserved_name(name)) {
      throw SpecError("'" + name + "' is reserved and cannot name a variable");
    }
    if (!declared.insert(name).second) {
      throw SpecError("duplicate equation for variable '" + name + "'");
    }
    if (!rhs) throw SpecError("equation for '" + name + "' has no right-hand side");
  }
  std::set<std::string> used;
  for (const auto& [name, rhs] : spec.equations) collect_vars(rhs, used);
  for (const auto& v : used) {
    if (!declared.count(v)) {
      throw SpecError("variable '" + v + "' is used but never declared");
    }
  }
  if (!spec.root.empty() && !declared.count(spec.root)) {
    throw SpecError("root variable '" + spec.root + "' is not declared");
  }
}

std::optional<std::string> find_unguarded_variable(const RecSpec& spec) {
  // Every right-hand side in this grammar is S, D, a postconditional, or a
  // bare variable; variables under a postconditional sit behind an action,
  // so the only unguarded shape is the bare-variable equation.
  for (const auto& [name, rhs] : spec.equations) {
    if (rhs->kind() == TermKind::var) return name;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

ThreadGraph ThreadGraph::stop() {
  ThreadGraph g;
  g.nodes.push_back({NodeKind::stop, {}, 0, 0});
  return g;
}

ThreadGraph ThreadGraph::dead() {
  ThreadGraph g;
  g.nodes.push_back({NodeKind::dead, {}, 0, 0});
  return g;
}

namespace {

// BFS renumbering from the entry, then-branch before else-branch. Drops
// unreachable nodes; the entry becomes node 0.
ThreadGraph bfs_canonical(const std::vector<ThreadGraph::Node>& nodes,
                          std::uint32_t entry) {
  std::vector<std::int64_t> renum(nodes.size(), -1);
  std::vector<std::uint32_t> order;
  order.reserve(nodes.size());
  std::deque<std::uint32_t> queue;
  renum[entry] = 0;
  order.push_back(entry);
  queue.push_back(entry);
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop_front();
    const auto& n = nodes[u];
    if (n.kind != ThreadGraph::NodeKind::post) continue;
    for (std::uint32_t next : {n.then_next, n.else_next}) {
      if (renum[next] < 0) {
        renum[next] = static_cast<std::int64_t>(order.size());
        order.push_back(next);
        queue.push_back(next);
      }
    }
  }
  ThreadGraph g;
  g.nodes.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    ThreadGraph::Node n = nodes[order[i]];
    if (n.kind == ThreadGraph::NodeKind::post) {
      n.then_next = static_cast<std::uint32_t>(renum[n.then_next]);
      n.else_next = static_cast<std::uint32_t>(renum[n.else_next]);
    }
    g.nodes[i] = std::move(n);
  }
  g.entry = 0;
  return g;
}

}  // namespace

ThreadGraph solve(const RecSpec& spec) {
  validate_spec(spec);
  if (auto offender = find_unguarded_variable(spec)) {
    throw GuardednessViolation(*offender);
  }

  std::map<std::string, std::uint32_t> eq_index;
  for (std::size_t i = 0; i < spec.equations.size(); ++i) {
    eq_index[spec.equations[i].first] = static_cast<std::uint32_t>(i);
  }

  // One node per equation up front; interior subterms are hash-consed so
  // structurally equal subterms share a node.
  std::vector<ThreadGraph::Node> nodes(spec.equations.size());
  using Key = std::tuple<int, ActionId, std::uint32_t, std::uint32_t>;
  std::map<Key, std::uint32_t> interned;

  auto intern = [&](ThreadGraph::Node node) -> std::uint32_t {
    Key key{static_cast<int>(node.kind), node.action, node.then_next,
            node.else_next};
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(std::move(node));
    interned.emplace(std::move(key), idx);
    return idx;
  };

  std::function<std::uint32_t(const TermPtr&)> build =
      [&](const TermPtr& t) -> std::uint32_t {
    switch (t->kind()) {
      case TermKind::var:
        return eq_index.at(t->var_name());
      case TermKind::stop:
        return intern({ThreadGraph::NodeKind::stop, {}, 0, 0});
      case TermKind::dead:
        return intern({ThreadGraph::NodeKind::dead, {}, 0, 0});
      case TermKind::post: {
        const std::uint32_t then_idx = build(t->then_branch());
        const std::uint32_t else_idx = build(t->else_branch());
        return intern(
            {ThreadGraph::NodeKind::post, t->action(), then_idx, else_idx});
      }
    }
    throw Error("corrupt term");
  };

  for (std::size_t i = 0; i < spec.equations.size(); ++i) {
    const TermPtr& rhs = spec.equations[i].second;
    switch (rhs->kind()) {
      case TermKind::stop:
        nodes[i] = {ThreadGraph::NodeKind::stop, {}, 0, 0};
        break;
      case TermKind::dead:
        nodes[i] = {ThreadGraph::NodeKind::dead, {}, 0, 0};
        break;
      case TermKind::post:
        nodes[i] = {ThreadGraph::NodeKind::post, rhs->action(),
                    build(rhs->then_branch()), build(rhs->else_branch())};
        break;
      case TermKind::var:
        throw GuardednessViolation(spec.equations[i].first);
    }
  }

  return bfs_canonical(nodes, eq_index.at(spec.root_name()));
}

std::vector<std::uint32_t> residual_states(const ThreadGraph& g) {
  if (g.nodes.empty()) throw Error("empty thread graph");
  std::vector<bool> seen(g.nodes.size(), false);
  std::deque<std::uint32_t> queue{g.entry};
  seen[g.entry] = true;
  while (!queue.empty()) {
    const auto& n = g.nodes[queue.front()];
    queue.pop_front();
    if (n.kind != ThreadGraph::NodeKind::post) continue;
    for (std::uint32_t next : {n.then_next, n.else_next}) {
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

std::size_t residual_count(const ThreadGraph& g) {
  return residual_states(g).size();
}

bool bisimilar(const ThreadGraph& a, const ThreadGraph& b, bool identify_tau) {
  if (a.nodes.empty() || b.nodes.empty()) throw Error("empty thread graph");
  // Coinductive check: assume the pair equivalent, verify successors. A
  // failure unwinds the whole call immediately, so stale assumptions are
  // never consulted after a refutation.
  std::set<std::pair<std::uint32_t, std::uint32_t>> assumed;
  auto else_of = [&](const ThreadGraph::Node& n) {
    return (identify_tau && n.action.is_tau()) ? n.then_next : n.else_next;
  };
  std::function<bool(std::uint32_t, std::uint32_t)> eq =
      [&](std::uint32_t u, std::uint32_t v) -> bool {
    if (!assumed.insert({u, v}).second) return true;
    const auto& x = a.nodes[u];
    const auto& y = b.nodes[v];
    if (x.kind != y.kind) return false;
    if (x.kind != ThreadGraph::NodeKind::post) return true;
    if (x.action != y.action) return false;
    return eq(x.then_next, y.then_next) && eq(else_of(x), else_of(y));
  };
  return eq(a.entry, b.entry);
}

ThreadGraph minimize(const ThreadGraph& g) {
  if (g.nodes.empty()) throw Error("empty thread graph");
  const std::vector<std::uint32_t> reach = residual_states(g);

  // Partition refinement. Start from observations (kind + action), split by
  // successor blocks until stable; for deterministic graphs the fixpoint is
  // exactly bisimilarity.
  std::vector<std::uint32_t> block(g.nodes.size(), 0);
  {
    std::map<std::pair<int, ActionId>, std::uint32_t> ids;
    for (std::uint32_t n : reach) {
      const auto& node = g.nodes[n];
      std::pair<int, ActionId> key{static_cast<int>(node.kind),
                                   node.kind == ThreadGraph::NodeKind::post
                                       ? node.action
                                       : ActionId{}};
      auto [it, inserted] =
          ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
      block[n] = it->second;
    }
  }

  // Signatures include the node's own block, so blocks only ever split;
  // the partition is stable exactly when the block count stops growing.
  std::size_t block_count = 0;
  {
    std::set<std::uint32_t> distinct;
    for (std::uint32_t n : reach) distinct.insert(block[n]);
    block_count = distinct.size();
  }
  while (true) {
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>,
             std::uint32_t>
        ids;
    std::vector<std::uint32_t> next(g.nodes.size(), 0);
    for (std::uint32_t n : reach) {
      const auto& node = g.nodes[n];
      std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> key{
          block[n], 0, 0};
      if (node.kind == ThreadGraph::NodeKind::post) {
        key = {block[n], block[node.then_next] + 1, block[node.else_next] + 1};
      }
      auto [it, inserted] =
          ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
      next[n] = it->second;
    }
    block = std::move(next);
    if (ids.size() == block_count) break;
    block_count = ids.size();
  }

  // Quotient graph: one node per block, represented by its first reachable
  // member (any member works once the partition is stable).
  std::map<std::uint32_t, std::uint32_t> rep;
  for (std::uint32_t n : reach) rep.emplace(block[n], n);
  std::vector<ThreadGraph::Node> quotient(rep.size());
  std::map<std::uint32_t, std::uint32_t> block_to_idx;
  {
    std::uint32_t i = 0;
    for (const auto& [b, n] : rep) block_to_idx[b] = i++;
  }
  for (const auto& [b, n] : rep) {
    ThreadGraph::Node node = g.nodes[n];
    if (node.kind == ThreadGraph::NodeKind::post) {
      node.then_next = block_to_idx.at(block[node.then_next]);
      node.else_next = block_to_idx.at(block[node.else_next]);
    }
    quotient[block_to_idx.at(b)] = std::move(node);
  }
  return bfs_canonical(quotient, block_to_idx.at(block[g.entry]));
}

void enumerate_threads(std::span<const ActionId> alphabet,
                       std::size_t max_states,
                       const std::function<void(const ThreadGraph&)>& yield) {
  {
    std::set<ActionId> uniq(alphabet.begin(), alphabet.end());
    if (uniq.size() != alphabet.size()) {
      throw Error("enumeration alphabet contains duplicates");
    }
  }
  struct Choice {
    ThreadGraph::NodeKind kind;
    ActionId action;
    std::uint32_t then_next = 0, else_next = 0;
  };
  for (std::size_t n = 1; n <= max_states; ++n) {
    std::vector<Choice> choices;
    choices.push_back({ThreadGraph::NodeKind::stop, {}, 0, 0});
    choices.push_back({ThreadGraph::NodeKind::dead, {}, 0, 0});
    for (const ActionId& a : alphabet) {
      for (std::uint32_t t = 0; t < n; ++t) {
        for (std::uint32_t e = 0; e < n; ++e) {
          choices.push_back({ThreadGraph::NodeKind::post, a, t, e});
        }
      }
    }
    const std::size_t base = choices.size();
    std::vector<std::size_t> digit(n, 0);
    while (true) {
      ThreadGraph g;
      g.nodes.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Choice& c = choices[digit[i]];
        g.nodes[i] = {c.kind, c.action, c.then_next, c.else_next};
      }
      g.entry = 0;
      // Canonical representatives only: fully reachable and equal to their
      // own minimization (which is BFS-numbered), so each bisimulation class
      // appears exactly once, at its minimal size.
      if (residual_count(g) == n && minimize(g) == g) {
        yield(g);
      }
      std::size_t slot = n;
      bool wrapped = true;
      while (slot > 0) {
        --slot;
        if (++digit[slot] < base) {
          wrapped = false;
          break;
        }
        digit[slot] = 0;
      }
      if (wrapped) break;
    }
  }
}

std::vector<ThreadGraph> enumerate_threads(std::span<const ActionId> alphabet,
                                           std::size_t max_states) {
  std::vector<ThreadGraph> out;
  enumerate_threads(alphabet, max_states,
                    [&](const ThreadGraph& g) { out.push_back(g); });
  return out;
}

}  // namespace mwb
