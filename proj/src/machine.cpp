#include "mwb/machine.hpp"

#include <algorithm>

namespace mwb {

// ---------------------------------------------------------------------------
// MemoryLayout
// ---------------------------------------------------------------------------

MemoryLayout::MemoryLayout(std::vector<Region> regions)
    : regions_(std::move(regions)) {
  if (regions_.empty()) throw Error("memory layout has no regions");
  for (const Region& r : regions_) {
    if (r.name.empty()) throw Error("region with empty name");
    if (r.count == 0) throw Error("region '" + r.name + "' has no cells");
    if (r.domain.size < 1) {
      throw Error("region '" + r.name + "' has an empty value domain");
    }
    if (r.domain.flag && r.domain.size != 2) {
      throw Error("region '" + r.name + "' is flagged but not two-valued");
    }
    if (region_base_.count(r.name)) {
      throw Error("duplicate region name '" + r.name + "'");
    }
    region_base_[r.name] = {cells_.size(), r.count};
    for (std::uint32_t i = 0; i < r.count; ++i) {
      cells_.push_back({r.name, i});
      domains_.push_back(r.domain);
    }
  }
  canonical_.resize(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) canonical_[i] = i;
  std::sort(canonical_.begin(), canonical_.end(),
            [&](std::size_t a, std::size_t b) { return cells_[a] < cells_[b]; });
}

const Region* MemoryLayout::find_region(const std::string& name) const {
  for (const Region& r : regions_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::optional<std::size_t> MemoryLayout::try_index_of(
    const MemoryElementId& id) const {
  auto it = region_base_.find(id.region);
  if (it == region_base_.end()) return std::nullopt;
  if (id.offset >= it->second.second) return std::nullopt;
  return it->second.first + id.offset;
}

std::size_t MemoryLayout::index_of(const MemoryElementId& id) const {
  if (auto idx = try_index_of(id)) return *idx;
  throw Error("unknown memory element '" + id.str() + "'");
}

std::uint64_t MemoryLayout::state_count(std::uint64_t cap) const {
  unsigned __int128 product = 1;
  for (const ValueDomain& d : domains_) {
    product *= d.size;
    if (product > cap) {
      throw StateSpaceTooLarge(
          "state set exceeds the cap of " + std::to_string(cap) + " states");
    }
  }
  return static_cast<std::uint64_t>(product);
}

bool MemoryLayout::operator==(const MemoryLayout& other) const {
  if (regions_.size() != other.regions_.size()) return false;
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].name != other.regions_[i].name ||
        regions_[i].count != other.regions_[i].count ||
        regions_[i].domain != other.regions_[i].domain) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// MachineState
// ---------------------------------------------------------------------------

MachineState::MachineState(LayoutPtr layout) : layout_(std::move(layout)) {
  if (!layout_) throw Error("state requires a layout");
  values_.assign(layout_->cell_count(), 0);
}

MachineState MachineState::from_index(LayoutPtr layout, std::uint64_t index) {
  MachineState s(std::move(layout));
  for (std::size_t cell : s.layout_->canonical_order()) {
    const std::uint64_t size = s.layout_->domain(cell).size;
    s.values_[cell] = index % size;
    index /= size;
  }
  if (index != 0) throw Error("state index out of range");
  return s;
}

std::uint64_t MachineState::index() const {
  unsigned __int128 acc = 0;
  unsigned __int128 weight = 1;
  for (std::size_t cell : layout_->canonical_order()) {
    acc += weight * values_[cell];
    weight *= layout_->domain(cell).size;
    if (acc > ~0ull) throw Error("state index exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t MachineState::get(const MemoryElementId& id) const {
  return values_[layout_->index_of(id)];
}

void MachineState::set(std::size_t cell, std::uint64_t value) {
  if (value >= layout_->domain(cell).size) {
    throw Error("value " + std::to_string(value) + " out of range for cell '" +
                layout_->cell(cell).str() + "'");
  }
  values_[cell] = value;
}

void MachineState::set(const MemoryElementId& id, std::uint64_t value) {
  set(layout_->index_of(id), value);
}

std::uint64_t MachineState::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  for (std::size_t cell : layout_->canonical_order()) mix(values_[cell]);
  return h;
}

bool MachineState::operator==(const MachineState& other) const {
  return *layout_ == *other.layout_ && values_ == other.values_;
}

std::vector<std::size_t> differing_cells(const MachineState& a,
                                         const MachineState& b) {
  if (!(a.layout() == b.layout())) {
    throw Error("states live on different layouts");
  }
  std::vector<std::size_t> out;
  for (std::size_t cell : a.layout().canonical_order()) {
    if (a.get(cell) != b.get(cell)) out.push_back(cell);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

const Operation* MaurerMachine::find_operation(const ActionId& a) const {
  auto it = operations.find(a);
  return it == operations.end() ? nullptr : &it->second;
}

const MemoryElementId* MaurerMachine::find_reply_cell(const ActionId& a) const {
  auto it = reply_cell.find(a);
  return it == reply_cell.end() ? nullptr : &it->second;
}

std::vector<MachineDiagnostic> validate_machine(const MaurerMachine& m) {
  std::vector<MachineDiagnostic> diags;
  if (!m.layout) throw Error("machine has no layout");
  diags.push_back({1, "", true,
                   "state set is the full product of the cell domains, so "
                   "patching any region of one state into another stays in "
                   "the set"});
  diags.push_back({2, "", true,
                   "memory is finite, so any two states differ in finitely "
                   "many cells"});
  for (const auto& [action, op] : m.operations) {
    MachineDiagnostic d{3, action.str(), false, ""};
    const MemoryElementId* cell = m.find_reply_cell(action);
    if (!cell) {
      d.note = "no reply cell declared";
    } else if (auto idx = m.layout->try_index_of(*cell); !idx) {
      d.note = "reply cell '" + cell->str() + "' is not in the layout";
    } else if (!m.layout->domain(*idx).flag) {
      d.note = "reply cell '" + cell->str() + "' is not two-valued T/F";
    } else {
      d.satisfied = true;
      d.note = "replies via '" + cell->str() + "'";
    }
    diags.push_back(std::move(d));
  }
  for (const auto& [action, cell] : m.reply_cell) {
    if (!m.operations.count(action)) {
      diags.push_back({3, action.str(), false,
                       "reply cell declared for an unknown operation"});
    }
  }
  return diags;
}

bool all_satisfied(const std::vector<MachineDiagnostic>& diags) {
  return std::all_of(diags.begin(), diags.end(),
                     [](const MachineDiagnostic& d) { return d.satisfied; });
}

// ---------------------------------------------------------------------------
// Regions
// ---------------------------------------------------------------------------

std::set<MemoryElementId> output_region(const Operation& op,
                                        const LayoutPtr& layout,
                                        std::uint64_t cap) {
  const std::uint64_t total = layout->state_count(cap);
  std::set<MemoryElementId> out;
  for (std::uint64_t i = 0; i < total; ++i) {
    const MachineState s = MachineState::from_index(layout, i);
    const MachineState t = op.eval(s);
    for (std::size_t cell : differing_cells(s, t)) {
      out.insert(layout->cell(cell));
    }
    if (out.size() == layout->cell_count()) break;
  }
  return out;
}

std::set<MemoryElementId> input_region(const Operation& op,
                                       const LayoutPtr& layout,
                                       std::uint64_t cap) {
  return compute_regions(op, layout, cap).input;
}

OperationRegions compute_regions(const Operation& op, const LayoutPtr& layout,
                                 std::uint64_t cap) {
  OperationRegions r;
  r.output = output_region(op, layout, cap);
  std::vector<std::size_t> out_cells;
  for (const MemoryElementId& id : r.output) {
    out_cells.push_back(layout->index_of(id));
  }
  auto restricted = [&](const MachineState& s) {
    std::vector<std::uint64_t> vals;
    vals.reserve(out_cells.size());
    for (std::size_t c : out_cells) vals.push_back(s.get(c));
    return vals;
  };
  // A cell feeds the operation iff flipping it alone can change the result
  // on the output region. Comparing every value against the cell's base
  // value suffices: if two alternatives disagreed, one of them would
  // already disagree with the base.
  const std::uint64_t total = layout->state_count(cap);
  for (std::uint64_t i = 0; i < total; ++i) {
    MachineState s = MachineState::from_index(layout, i);
    std::vector<std::uint64_t> base;
    bool base_ready = false;
    for (std::size_t cell = 0; cell < layout->cell_count(); ++cell) {
      if (s.get(cell) != 0) continue;  // each unordered pair probed once
      if (r.input.count(layout->cell(cell))) continue;
      for (std::uint64_t v = 1; v < layout->domain(cell).size; ++v) {
        if (!base_ready) {
          base = restricted(op.eval(s));
          base_ready = true;
        }
        MachineState probe = s;
        probe.set(cell, v);
        if (restricted(op.eval(probe)) != base) {
          r.input.insert(layout->cell(cell));
          break;
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Tabulated operations
// ---------------------------------------------------------------------------

Operation tabulate_operation(
    std::string name,
    const std::vector<std::pair<MachineState, MachineState>>& table,
    const LayoutPtr& layout, std::uint64_t cap) {
  const std::uint64_t total = layout->state_count(cap);
  std::vector<std::uint64_t> out_index(total, ~0ull);
  std::vector<bool> covered(total, false);
  for (const auto& [in, out] : table) {
    if (!(in.layout() == *layout) || !(out.layout() == *layout)) {
      throw Error("tabulated entry for '" + name +
                  "' uses a different layout");
    }
    const std::uint64_t i = in.index();
    if (covered[i]) {
      throw Error("operation '" + name + "' maps state " + std::to_string(i) +
                  " twice");
    }
    covered[i] = true;
    out_index[i] = out.index();
  }
  for (std::uint64_t i = 0; i < total; ++i) {
    if (!covered[i]) {
      throw Error("operation '" + name + "' is not total: state " +
                  std::to_string(i) + " is unmapped");
    }
  }
  Operation op;
  op.name = std::move(name);
  op.eval = [layout, outs = std::move(out_index)](const MachineState& s) {
    return MachineState::from_index(layout, outs.at(s.index()));
  };
  OperationRegions regions = compute_regions(op, layout, cap);
  op.declared_input = std::move(regions.input);
  op.declared_output = std::move(regions.output);
  return op;
}

}  // namespace mwb
