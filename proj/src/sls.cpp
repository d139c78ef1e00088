#include "mwb/sls.hpp"

#include <algorithm>
#include <cctype>

namespace mwb {

namespace {

bool valid_op_name(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

void SlsParams::validate() const {
  if (l < 1 || l > 32) throw Error("word width l must be in 1..32");
  if (k > 20) throw Error("address width k must be in 0..20");
  if (m > (1u << 22)) throw Error("operating unit size m is too large");
  if (u < 1 || u > 65536) throw Error("load register count u must be in 1..65536");
  if (v < 1 || v > 65536) throw Error("store register count v must be in 1..65536");
}

MemoryElementId data_cell(std::uint32_t i) { return {"data", i}; }
MemoryElementId ou_cell(std::uint32_t i) { return {"ou", i}; }
MemoryElementId ld_cell(std::uint32_t i) { return {"ld", i}; }
MemoryElementId sd_cell(std::uint32_t i) { return {"sd", i}; }
MemoryElementId la_cell(std::uint32_t i) { return {"la", i}; }
MemoryElementId sa_cell(std::uint32_t i) { return {"sa", i}; }
MemoryElementId rr_cell() { return {"rr", 0}; }

LayoutPtr make_sls_layout(const SlsParams& p) {
  p.validate();
  const ValueDomain word{1ull << p.l, false};
  const ValueDomain address{1ull << p.k, false};
  const ValueDomain bit{2, false};
  std::vector<Region> regions;
  regions.push_back({"data", static_cast<std::uint32_t>(p.data_cells()), word});
  if (p.m > 0) regions.push_back({"ou", p.m, bit});
  regions.push_back({"ld", p.u, word});
  regions.push_back({"sd", p.v, word});
  regions.push_back({"la", p.u, address});
  regions.push_back({"sa", p.v, address});
  regions.push_back({"rr", 1, {2, true}});
  return MemoryLayout::make(std::move(regions));
}

SlsMachine build_sls(const SlsParams& params, std::vector<DataOp> data_ops) {
  SlsMachine out;
  out.params = params;
  out.machine.layout = make_sls_layout(params);
  const LayoutPtr& layout = out.machine.layout;
  const std::size_t data_base = layout->index_of(data_cell(0));
  const std::size_t rr = layout->index_of(rr_cell());

  std::set<MemoryElementId> data_region;
  for (std::uint32_t i = 0; i < params.data_cells(); ++i) {
    data_region.insert(data_cell(i));
  }

  for (std::uint32_t n = 0; n < params.u; ++n) {
    const std::size_t la = layout->index_of(la_cell(n));
    const std::size_t ld = layout->index_of(ld_cell(n));
    Operation op;
    op.name = ActionId::load(n).str();
    op.eval = [layout, data_base, la, ld, rr](const MachineState& s) {
      MachineState t = s;
      t.set(ld, s.get(data_base + s.get(la)));
      t.set(rr, 1);
      return t;
    };
    op.declared_input = data_region;
    op.declared_input->insert(la_cell(n));
    op.declared_output = {ld_cell(n), rr_cell()};
    out.machine.operations.emplace(ActionId::load(n), std::move(op));
    out.machine.reply_cell.emplace(ActionId::load(n), rr_cell());
  }

  for (std::uint32_t n = 0; n < params.v; ++n) {
    const std::size_t sa = layout->index_of(sa_cell(n));
    const std::size_t sd = layout->index_of(sd_cell(n));
    Operation op;
    op.name = ActionId::store(n).str();
    op.eval = [layout, data_base, sa, sd, rr](const MachineState& s) {
      MachineState t = s;
      t.set(data_base + s.get(sa), s.get(sd));
      t.set(rr, 1);
      return t;
    };
    // Untouched data cells pass through into the output region, which makes
    // them part of the input region in the dependency sense.
    op.declared_input = data_region;
    op.declared_input->insert(sa_cell(n));
    op.declared_input->insert(sd_cell(n));
    op.declared_output = data_region;
    op.declared_output->insert(rr_cell());
    out.machine.operations.emplace(ActionId::store(n), std::move(op));
    out.machine.reply_cell.emplace(ActionId::store(n), rr_cell());
  }

  for (DataOp& d : data_ops) {
    if (!valid_op_name(d.name) || d.name == "load" || d.name == "store" ||
        d.name == "tau" || d.name == "S" || d.name == "D") {
      throw Error("invalid data operation name '" + d.name + "'");
    }
    const ActionId action(d.name);
    if (out.machine.operations.count(action)) {
      throw Error("duplicate operation name '" + d.name + "'");
    }
    if (!d.eval) throw Error("data operation '" + d.name + "' has no evaluator");
    Operation op;
    op.name = d.name;
    op.eval = std::move(d.eval);
    op.declared_input = std::move(d.declared_input);
    op.declared_output = std::move(d.declared_output);
    out.machine.operations.emplace(action, std::move(op));
    out.machine.reply_cell.emplace(action, rr_cell());
    out.data_ops.push_back(action);
  }
  return out;
}

namespace {

std::set<MemoryElementId> region_cells(const MemoryLayout& layout,
                                       std::initializer_list<const char*> names) {
  std::set<MemoryElementId> out;
  for (const char* name : names) {
    if (const Region* r = layout.find_region(name)) {
      for (std::uint32_t i = 0; i < r->count; ++i) out.insert({name, i});
    }
  }
  return out;
}

std::string set_diff_note(const std::set<MemoryElementId>& got,
                          const std::set<MemoryElementId>& allowed) {
  for (const MemoryElementId& id : got) {
    if (!allowed.count(id)) return "contains '" + id.str() + "'";
  }
  return "";
}

}  // namespace

std::vector<StrictnessIssue> validate_strictness(const SlsMachine& m,
                                                 std::uint64_t cap) {
  std::vector<StrictnessIssue> issues;
  const LayoutPtr& layout = m.layout();
  const SlsParams& p = m.params;

  const std::set<MemoryElementId> in_allowed =
      region_cells(*layout, {"ou", "ld"});
  std::set<MemoryElementId> out_allowed =
      region_cells(*layout, {"ou", "sd", "la", "sa"});
  out_allowed.insert(rr_cell());

  bool exhaustive = true;
  std::uint64_t total = 0;
  try {
    total = layout->state_count(cap);
  } catch (const StateSpaceTooLarge&) {
    exhaustive = false;
  }

  const std::size_t data_base = layout->index_of(data_cell(0));
  const std::size_t rr = layout->index_of(rr_cell());

  if (exhaustive) {
    // Frame + value conditions for the generated family, per state.
    for (std::uint32_t n = 0; n < p.u; ++n) {
      const ActionId a = ActionId::load(n);
      const Operation& op = *m.machine.find_operation(a);
      const std::size_t la = layout->index_of(la_cell(n));
      const std::size_t ld = layout->index_of(ld_cell(n));
      const std::size_t before = issues.size();
      for (std::uint64_t i = 0; i < total && issues.size() < before + 8; ++i) {
        const MachineState s = MachineState::from_index(layout, i);
        const MachineState t = op.eval(s);
        for (std::size_t cell : differing_cells(s, t)) {
          if (cell != ld && cell != rr) {
            issues.push_back({a, "changes '" + layout->cell(cell).str() +
                                     "' outside ld[" + std::to_string(n) +
                                     "]+rr"});
          }
        }
        if (t.get(ld) != s.get(data_base + s.get(la))) {
          issues.push_back({a, "loaded value is not data[la[" +
                                   std::to_string(n) + "]]"});
        }
        if (t.get(rr) != 1) issues.push_back({a, "reply is not T"});
      }
    }
    for (std::uint32_t n = 0; n < p.v; ++n) {
      const ActionId a = ActionId::store(n);
      const Operation& op = *m.machine.find_operation(a);
      const std::size_t sa = layout->index_of(sa_cell(n));
      const std::size_t sd = layout->index_of(sd_cell(n));
      const std::size_t before = issues.size();
      for (std::uint64_t i = 0; i < total && issues.size() < before + 8; ++i) {
        const MachineState s = MachineState::from_index(layout, i);
        const MachineState t = op.eval(s);
        const std::size_t target = data_base + s.get(sa);
        for (std::size_t cell : differing_cells(s, t)) {
          if (cell != target && cell != rr) {
            issues.push_back({a, "changes '" + layout->cell(cell).str() +
                                     "' outside data[sa[" + std::to_string(n) +
                                     "]]+rr"});
          }
        }
        if (t.get(target) != s.get(sd)) {
          issues.push_back({a, "stored value is not sd[" + std::to_string(n) +
                                   "]"});
        }
        if (t.get(rr) != 1) issues.push_back({a, "reply is not T"});
      }
    }
    // Region containment for the data manipulation instructions.
    for (const ActionId& a : m.data_ops) {
      const Operation& op = *m.machine.find_operation(a);
      const OperationRegions regions = compute_regions(op, layout, cap);
      if (std::string note = set_diff_note(regions.input, in_allowed);
          !note.empty()) {
        issues.push_back({a, "input region " + note + " outside ou+ld"});
      }
      if (std::string note = set_diff_note(regions.output, out_allowed);
          !note.empty()) {
        issues.push_back({a, "output region " + note +
                                 " outside ou+sd+la+sa+rr"});
      }
      // The declared output region, when present, must cover the computed
      // one. (The declared input region is a table-column set: it may omit
      // cells that only pass through, so no containment is required.)
      if (op.declared_output) {
        for (const MemoryElementId& id : regions.output) {
          if (!op.declared_output->count(id)) {
            issues.push_back({a, "declared output region omits '" + id.str() +
                                     "'"});
          }
        }
      }
    }
  } else {
    // Too large to sweep: fall back to the declared regions.
    for (const ActionId& a : m.data_ops) {
      const Operation& op = *m.machine.find_operation(a);
      if (!op.declared_input || !op.declared_output) {
        issues.push_back({a, "state set exceeds the cap and no declared "
                             "regions are present"});
        continue;
      }
      if (std::string note = set_diff_note(*op.declared_input, in_allowed);
          !note.empty()) {
        issues.push_back({a, "declared input region " + note +
                                 " outside ou+ld"});
      }
      if (std::string note = set_diff_note(*op.declared_output, out_allowed);
          !note.empty()) {
        issues.push_back({a, "declared output region " + note +
                                 " outside ou+sd+la+sa+rr"});
      }
    }
  }
  return issues;
}

MachineState pack_data(const SlsMachine& m, std::span<const std::uint64_t> words,
                       const MachineState& base) {
  if (words.size() != m.params.data_cells()) {
    throw Error("expected " + std::to_string(m.params.data_cells()) +
                " data words, got " + std::to_string(words.size()));
  }
  MachineState s = base;
  const std::size_t data_base = m.layout()->index_of(data_cell(0));
  for (std::size_t i = 0; i < words.size(); ++i) {
    s.set(data_base + i, words[i]);
  }
  return s;
}

std::vector<std::uint64_t> unpack_data(const SlsMachine& m,
                                       const MachineState& s) {
  std::vector<std::uint64_t> words(m.params.data_cells());
  const std::size_t data_base = m.layout()->index_of(data_cell(0));
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = s.get(data_base + i);
  }
  return words;
}

}  // namespace mwb
