#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mwb/action.hpp"
#include "mwb/error.hpp"

namespace mwb {

// ---------------------------------------------------------------------------
// Memory layouts
//
// A machine's memory is a finite set of named cells grouped into regions;
// each cell ranges over a finite value domain. The full state set is the
// product of the cell domains, so the two closure conditions on state sets
// (patching one memory's contents into another, and finite differences
// between states) hold by construction.
// ---------------------------------------------------------------------------

struct ValueDomain {
  std::uint64_t size = 2;  // values are 0 .. size-1
  bool flag = false;       // true: the two values print as F/T

  bool operator==(const ValueDomain&) const = default;
};

struct MemoryElementId {
  std::string region;
  std::uint32_t offset = 0;

  std::string str() const { return region + std::to_string(offset); }
  friend auto operator<=>(const MemoryElementId&,
                          const MemoryElementId&) = default;
};

struct Region {
  std::string name;
  std::uint32_t count = 1;
  ValueDomain domain;
};

class MemoryLayout;
using LayoutPtr = std::shared_ptr<const MemoryLayout>;

class MemoryLayout {
 public:
  // Regions keep their declaration order; cells are numbered region-major.
  // Throws Error on empty/duplicate region names, zero counts, or domains
  // smaller than one value (flag domains must have exactly two).
  explicit MemoryLayout(std::vector<Region> regions);

  static LayoutPtr make(std::vector<Region> regions) {
    return std::make_shared<const MemoryLayout>(std::move(regions));
  }

  const std::vector<Region>& regions() const { return regions_; }
  const Region* find_region(const std::string& name) const;

  std::size_t cell_count() const { return cells_.size(); }
  const MemoryElementId& cell(std::size_t index) const { return cells_[index]; }
  const ValueDomain& domain(std::size_t index) const { return domains_[index]; }

  // Throws Error for unknown cells.
  std::size_t index_of(const MemoryElementId& id) const;
  std::optional<std::size_t> try_index_of(const MemoryElementId& id) const;

  // Cell indices sorted by (region name, offset): the order used for
  // printing, digests and state indexing.
  const std::vector<std::size_t>& canonical_order() const {
    return canonical_;
  }

  // Number of states; throws StateSpaceTooLarge if it exceeds cap.
  std::uint64_t state_count(std::uint64_t cap) const;

  bool operator==(const MemoryLayout& other) const;

 private:
  std::vector<Region> regions_;
  std::vector<MemoryElementId> cells_;
  std::vector<ValueDomain> domains_;
  std::vector<std::size_t> canonical_;
  std::map<std::string, std::pair<std::size_t, std::uint32_t>> region_base_;
};

constexpr std::uint64_t kDefaultStateCap = 1ull << 24;

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

class MachineState {
 public:
  // All cells at 0 (the minimum of their domains).
  explicit MachineState(LayoutPtr layout);

  // Mixed-radix decoding; the first cell in canonical order is the least
  // significant digit. index must be < state_count.
  static MachineState from_index(LayoutPtr layout, std::uint64_t index);
  std::uint64_t index() const;

  std::uint64_t get(std::size_t cell) const { return values_[cell]; }
  std::uint64_t get(const MemoryElementId& id) const;
  // Throws Error when the value does not fit the cell's domain.
  void set(std::size_t cell, std::uint64_t value);
  void set(const MemoryElementId& id, std::uint64_t value);

  const MemoryLayout& layout() const { return *layout_; }
  const LayoutPtr& layout_ptr() const { return layout_; }
  std::span<const std::uint64_t> values() const { return values_; }

  // FNV-1a over the values in canonical order; stable across platforms.
  std::uint64_t digest() const;

  bool operator==(const MachineState& other) const;

 private:
  LayoutPtr layout_;
  std::vector<std::uint64_t> values_;
};

// Cells on which the two states differ (canonical order).
std::vector<std::size_t> differing_cells(const MachineState& a,
                                         const MachineState& b);

// ---------------------------------------------------------------------------
// Operations and machines
// ---------------------------------------------------------------------------

struct Operation {
  std::string name;
  // Total function on the layout's state set.
  std::function<MachineState(const MachineState&)> eval;
  // Optional analytic region declarations. When present they must contain
  // the computed regions (checked by validate_strictness and the tests);
  // they let large machines skip exhaustive region computation.
  std::optional<std::set<MemoryElementId>> declared_input;
  std::optional<std::set<MemoryElementId>> declared_output;
};

// A machine: memory layout, named basic operations, and for every action a
// reply cell read after the operation to steer the issuing thread.
struct MaurerMachine {
  LayoutPtr layout;
  std::map<ActionId, Operation> operations;
  std::map<ActionId, MemoryElementId> reply_cell;

  const Operation* find_operation(const ActionId& a) const;
  const MemoryElementId* find_reply_cell(const ActionId& a) const;
};

struct MachineDiagnostic {
  int condition = 0;        // 1: state-set closure, 2: finite differences,
                            // 3: reply cell shape
  std::string subject;      // action name for per-action checks
  bool satisfied = false;
  std::string note;
};

// Evaluates the machine well-formedness checklist. Conditions 1 and 2 hold
// by construction for product-form layouts and are reported as satisfied;
// condition 3 (every action has a reply cell, present in the layout, with a
// two-valued T/F domain) is checked per action.
std::vector<MachineDiagnostic> validate_machine(const MaurerMachine& m);
bool all_satisfied(const std::vector<MachineDiagnostic>& diags);

// ---------------------------------------------------------------------------
// Input and output regions
//
// The output region OR(O) is the set of cells O can change in some state;
// the input region IR(O) is the set of cells some pair of states differing
// only there can be steered by, observed on OR(O). Both are computed by
// exhaustive enumeration of the (micro-scale) state set.
// ---------------------------------------------------------------------------

struct OperationRegions {
  std::set<MemoryElementId> input;
  std::set<MemoryElementId> output;
};

std::set<MemoryElementId> output_region(const Operation& op,
                                        const LayoutPtr& layout,
                                        std::uint64_t cap = kDefaultStateCap);
std::set<MemoryElementId> input_region(const Operation& op,
                                       const LayoutPtr& layout,
                                       std::uint64_t cap = kDefaultStateCap);
OperationRegions compute_regions(const Operation& op, const LayoutPtr& layout,
                                 std::uint64_t cap = kDefaultStateCap);

// Builds an operation from an explicit (input state, output state) table.
// The table must cover the whole state set exactly once per input.
// Throws Error on duplicate or missing inputs (naming the first missing
// state's index), StateSpaceTooLarge beyond cap.
Operation tabulate_operation(std::string name,
                             const std::vector<std::pair<MachineState,
                                                         MachineState>>& table,
                             const LayoutPtr& layout,
                             std::uint64_t cap = kDefaultStateCap);

}  // namespace mwb
