#include "mwb/machine_text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

#include "mwb/rng.hpp"

namespace mwb {

namespace {

std::uint32_t bit_width(std::uint64_t domain_size) {
  std::uint32_t w = 0;
  while ((1ull << w) < domain_size) ++w;
  return std::max<std::uint32_t>(w, 1);
}

struct Cursor {
  std::size_t line = 1;
  std::size_t column = 1;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
  throw ParseError(at.line, at.column, msg);
}

std::uint64_t parse_value(const MemoryLayout& layout, std::size_t cell,
                          const std::string& text, const Cursor& at) {
  const ValueDomain& dom = layout.domain(cell);
  if (dom.flag) {
    if (text == "T") return 1;
    if (text == "F") return 0;
    fail(at, "expected T or F for cell '" + layout.cell(cell).str() + "'");
  }
  if (text.empty()) fail(at, "empty value");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      fail(at, "values are binary; unexpected '" + std::string(1, c) + "'");
    }
    if (v >> 63) fail(at, "value too wide");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  if (v >= dom.size) {
    fail(at, "value " + text + " out of range for cell '" +
                 layout.cell(cell).str() + "'");
  }
  return v;
}

MemoryElementId parse_cell_label(const MemoryLayout& layout,
                                 const std::string& label, const Cursor& at) {
  std::size_t split = label.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(label[split - 1]))) {
    --split;
  }
  const std::string region = label.substr(0, split);
  const std::string digits = label.substr(split);
  const Region* r = layout.find_region(region);
  if (!r) fail(at, "unknown cell '" + label + "'");
  std::uint32_t offset = 0;
  if (digits.empty()) {
    if (r->count != 1) {
      fail(at, "region '" + region + "' has " + std::to_string(r->count) +
                   " cells; use an explicit offset");
    }
  } else {
    if (digits.size() > 9) fail(at, "cell offset too large");
    offset = static_cast<std::uint32_t>(std::stoul(digits));
    if (offset >= r->count) fail(at, "cell '" + label + "' is out of range");
  }
  return {region, offset};
}

// One tabulated instruction: fixed input columns, per-valuation writes.
struct OpTable {
  std::vector<std::size_t> lhs_cells;  // sorted by cell id
  std::map<std::vector<std::uint64_t>, std::vector<std::pair<std::size_t, std::uint64_t>>>
      lines;
};

std::function<MachineState(const MachineState&)> make_table_eval(
    LayoutPtr layout, std::shared_ptr<const OpTable> table, std::string name) {
  return [layout = std::move(layout), table = std::move(table),
          name = std::move(name)](const MachineState& s) {
    std::vector<std::uint64_t> key;
    key.reserve(table->lhs_cells.size());
    for (std::size_t c : table->lhs_cells) key.push_back(s.get(c));
    auto it = table->lines.find(key);
    if (it == table->lines.end()) {
      throw Error("table for operation '" + name +
                  "' has no line for the current state");
    }
    MachineState out = s;
    for (const auto& [cell, value] : it->second) out.set(cell, value);
    return out;
  };
}

std::vector<std::size_t> sorted_cells(const MemoryLayout& layout,
                                      const std::set<MemoryElementId>& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const MemoryElementId& id : ids) out.push_back(layout.index_of(id));
  return out;  // std::set iterates in id order already
}

std::uint64_t valuation_product(const MemoryLayout& layout,
                                const std::vector<std::size_t>& cells,
                                std::uint64_t cap, const std::string& op_name) {
  unsigned __int128 product = 1;
  for (std::size_t c : cells) {
    product *= layout.domain(c).size;
    if (product > cap) {
      throw StateSpaceTooLarge("table for operation '" + op_name +
                               "' exceeds the cap of " + std::to_string(cap) +
                               " lines");
    }
  }
  return static_cast<std::uint64_t>(product);
}

MachineState random_state(const LayoutPtr& layout, SplitMix64& rng) {
  MachineState s(layout);
  for (std::size_t c = 0; c < layout->cell_count(); ++c) {
    s.set(c, rng.below(layout->domain(c).size));
  }
  return s;
}

}  // namespace

std::string cell_label(const MemoryLayout& layout, const MemoryElementId& id) {
  const Region* r = layout.find_region(id.region);
  if (!r) throw Error("unknown region '" + id.region + "'");
  return r->count == 1 ? id.region : id.str();
}

std::string format_value(const ValueDomain& domain, std::uint64_t value) {
  if (domain.flag) return value ? "T" : "F";
  const std::uint32_t width = bit_width(domain.size);
  std::string out(width, '0');
  for (std::uint32_t i = 0; i < width; ++i) {
    if ((value >> i) & 1) out[width - 1 - i] = '1';
  }
  return out;
}

std::string format_state(const MachineState& s) {
  const MemoryLayout& layout = s.layout();
  std::string out;
  for (std::size_t cell : layout.canonical_order()) {
    if (!out.empty()) out += ",";
    out += cell_label(layout, layout.cell(cell));
    out += "=";
    out += format_value(layout.domain(cell), s.get(cell));
  }
  return out;
}

MachineState parse_state(const LayoutPtr& layout, std::string_view text) {
  MachineState s(layout);
  std::vector<bool> seen(layout->cell_count(), false);
  Cursor at;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(pos, end - pos));
    at.column = pos + 1;
    // trim
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) {
      // A blank tail (or an all-blank literal) is fine; a blank segment
      // followed by more assignments is not.
      if (end != text.size()) fail(at, "empty assignment");
      break;
    }
    item = item.substr(first, last - first + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) fail(at, "expected cell=value");
    const std::string label = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const MemoryElementId id = parse_cell_label(*layout, label, at);
    const std::size_t cell = layout->index_of(id);
    if (seen[cell]) fail(at, "cell '" + label + "' assigned twice");
    seen[cell] = true;
    s.set(cell, parse_value(*layout, cell, value, at));
    pos = end + (end < text.size() ? 1 : 0);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

std::string write_machine(const SlsMachine& m) {
  const LayoutPtr& layout = m.layout();
  std::ostringstream out;
  const SlsParams& p = m.params;
  out << "[params] k=" << p.k << " l=" << p.l << " m=" << p.m << " u=" << p.u
      << " v=" << p.v << "\n";

  for (const ActionId& action : m.data_ops) {
    const Operation& op = *m.machine.find_operation(action);
    if (!op.declared_input || !op.declared_output) {
      throw Error("operation '" + op.name +
                  "' has no declared regions; cannot tabulate");
    }
    const std::vector<std::size_t> lhs = sorted_cells(*layout, *op.declared_input);
    const std::vector<std::size_t> rhs = sorted_cells(*layout, *op.declared_output);
    std::vector<bool> in_lhs(layout->cell_count(), false);
    std::vector<bool> in_rhs(layout->cell_count(), false);
    for (std::size_t c : lhs) in_lhs[c] = true;
    for (std::size_t c : rhs) in_rhs[c] = true;
    const std::uint64_t lines = valuation_product(*layout, lhs,
                                                  kDefaultStateCap, op.name);
    for (std::size_t c = 0; c < layout->cell_count(); ++c) {
      if (!in_lhs[c] && layout->domain(c).size > 65536) {
        throw Error("cell '" + layout->cell(c).str() +
                    "' has too large a domain to probe for tabulation");
      }
    }

    out << "[op " << op.name << "]\n";
    for (std::uint64_t line = 0; line < lines; ++line) {
      MachineState base(layout);
      {
        std::uint64_t rest = line;
        for (std::size_t c : lhs) {
          const std::uint64_t size = layout->domain(c).size;
          base.set(c, rest % size);
          rest /= size;
        }
      }
      const MachineState out_base = op.eval(base);
      for (std::size_t c : differing_cells(base, out_base)) {
        if (!in_rhs[c]) {
          throw Error("operation '" + op.name + "' changes '" +
                      layout->cell(c).str() +
                      "' outside its declared output region");
        }
      }

      // Classify every declared output cell for this input valuation:
      // input cells are fully determined; other cells are probed over
      // their own domain to split pass-through from constant writes, and
      // every probe re-checks the remaining outputs for hidden inputs.
      enum class Mode { fixed, pass, constant };
      std::map<std::size_t, std::pair<Mode, std::uint64_t>> plan;
      for (std::size_t c : rhs) {
        if (in_lhs[c]) plan[c] = {Mode::fixed, out_base.get(c)};
      }
      for (std::size_t probe_cell = 0; probe_cell < layout->cell_count();
           ++probe_cell) {
        if (in_lhs[probe_cell]) continue;
        const std::uint64_t dom = layout->domain(probe_cell).size;
        bool self_pass = true;
        bool self_const = true;
        std::uint64_t self_value = out_base.get(probe_cell);
        for (std::uint64_t v = 1; v < dom; ++v) {
          MachineState probe = base;
          probe.set(probe_cell, v);
          const MachineState got = op.eval(probe);
          for (std::size_t c : differing_cells(probe, got)) {
            if (!in_rhs[c]) {
              throw Error("operation '" + op.name + "' changes '" +
                          layout->cell(c).str() +
                          "' outside its declared output region");
            }
          }
          // The probe only changed probe_cell's input, so every other
          // output must match the base line (pass-through cells included:
          // their input did not move). A deviation means probe_cell feeds
          // that output without being a declared input.
          for (std::size_t c : rhs) {
            if (c == probe_cell) continue;
            if (got.get(c) != out_base.get(c)) {
              throw Error("operation '" + op.name + "': cell '" +
                          layout->cell(probe_cell).str() +
                          "' feeds output '" + layout->cell(c).str() +
                          "' but is not in the declared input region");
            }
          }
          if (in_rhs[probe_cell]) {
            if (got.get(probe_cell) != v) self_pass = false;
            if (got.get(probe_cell) != self_value) self_const = false;
          }
        }
        if (in_rhs[probe_cell]) {
          if (self_pass && out_base.get(probe_cell) == base.get(probe_cell)) {
            plan[probe_cell] = {Mode::pass, 0};
          } else if (self_const) {
            plan[probe_cell] = {Mode::constant, self_value};
          } else {
            throw Error("operation '" + op.name + "': output '" +
                        layout->cell(probe_cell).str() +
                        "' depends on its own previous value; add it to the "
                        "declared input region");
          }
        }
      }

      bool first = true;
      for (std::size_t c : lhs) {
        if (!first) out << ", ";
        first = false;
        out << cell_label(*layout, layout->cell(c)) << "="
            << format_value(layout->domain(c), base.get(c));
      }
      out << (lhs.empty() ? "->" : " ->");
      first = true;
      for (std::size_t c : rhs) {
        const auto it = plan.find(c);
        if (it == plan.end() || it->second.first == Mode::pass) continue;
        out << (first ? " " : ", ");
        first = false;
        out << cell_label(*layout, layout->cell(c)) << "="
            << format_value(layout->domain(c), it->second.second);
      }
      out << "\n";
    }
  }

  // Cross-check the written table against the live machine on a
  // deterministic state sample (exhaustive checks live in the test suites).
  const std::string text = out.str();
  const SlsMachine reread = read_machine(text);
  SplitMix64 rng(0x6d77620a);
  for (int i = 0; i < 256; ++i) {
    const MachineState s =
        i == 0 ? MachineState(layout) : random_state(layout, rng);
    for (const ActionId& action : m.data_ops) {
      const MachineState want = m.machine.find_operation(action)->eval(s);
      const MachineState got = reread.machine.find_operation(action)->eval(
          MachineState::from_index(reread.layout(), s.index()));
      if (got.index() != want.index()) {
        throw Error("written table for '" + action.str() +
                    "' does not reproduce the operation");
      }
    }
  }
  return text;
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

SlsMachine read_machine(std::string_view text, std::uint64_t table_cap) {
  struct RawOp {
    std::string name;
    std::size_t line = 0;
    std::vector<std::size_t> lhs_cells;
    std::map<std::vector<std::uint64_t>,
             std::vector<std::pair<std::size_t, std::uint64_t>>>
        lines;
    std::set<MemoryElementId> rhs_union;
  };

  std::optional<SlsParams> params;
  LayoutPtr layout;
  std::vector<RawOp> ops;
  RawOp* current = nullptr;

  std::istringstream in{std::string(text)};
  std::string raw;
  Cursor at;
  for (std::size_t lineno = 1; std::getline(in, raw); ++lineno) {
    at = {lineno, 1};
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw = raw.substr(0, hash);
    }
    while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' ||
                            raw.back() == '\t')) {
      raw.pop_back();
    }
    std::size_t start = raw.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    at.column = start + 1;
    std::string line = raw.substr(start);

    if (line.rfind("[params]", 0) == 0) {
      if (params) fail(at, "duplicate [params] header");
      SlsParams p;
      bool got_k = false, got_l = false, got_m = false, got_u = false,
           got_v = false;
      std::istringstream rest(line.substr(8));
      std::string tok;
      while (rest >> tok) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) fail(at, "expected key=value in [params]");
        const std::string key = tok.substr(0, eq);
        std::uint64_t value = 0;
        try {
          value = std::stoull(tok.substr(eq + 1));
        } catch (const std::exception&) {
          fail(at, "bad number in [params]");
        }
        if (key == "k") { p.k = static_cast<std::uint32_t>(value); got_k = true; }
        else if (key == "l") { p.l = static_cast<std::uint32_t>(value); got_l = true; }
        else if (key == "m") { p.m = static_cast<std::uint32_t>(value); got_m = true; }
        else if (key == "u") { p.u = static_cast<std::uint32_t>(value); got_u = true; }
        else if (key == "v") { p.v = static_cast<std::uint32_t>(value); got_v = true; }
        else fail(at, "unknown parameter '" + key + "'");
      }
      if (!(got_k && got_l && got_m && got_u && got_v)) {
        fail(at, "[params] must set k, l, m, u and v");
      }
      try {
        p.validate();
        layout = make_sls_layout(p);
      } catch (const Error& e) {
        fail(at, e.what());
      }
      params = p;
      continue;
    }

    if (line.rfind("[op ", 0) == 0) {
      if (!params) fail(at, "[op] section before [params]");
      if (line.back() != ']') fail(at, "unterminated [op ...] header");
      const std::string name = line.substr(4, line.size() - 5);
      for (const RawOp& existing : ops) {
        if (existing.name == name) fail(at, "duplicate section for '" + name + "'");
      }
      ops.push_back(RawOp{name, lineno, {}, {}, {}});
      current = &ops.back();
      continue;
    }

    if (line.front() == '[') fail(at, "unknown section header");
    if (!current) fail(at, "table line outside an [op] section");

    const std::size_t arrow = line.find("->");
    if (arrow == std::string::npos) fail(at, "table line needs '->'");
    auto parse_side = [&](std::string side, bool is_lhs) {
      std::vector<std::pair<std::size_t, std::uint64_t>> entries;
      std::istringstream ss(side);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
          if (entries.empty() && side.find_first_not_of(" \t") ==
                                     std::string::npos) {
            break;
          }
          fail(at, "empty assignment in table line");
        }
        const auto last = item.find_last_not_of(" \t");
        item = item.substr(first, last - first + 1);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail(at, "expected cell=value");
        const MemoryElementId id =
            parse_cell_label(*layout, item.substr(0, eq), at);
        const std::size_t cell = layout->index_of(id);
        const std::uint64_t value =
            parse_value(*layout, cell, item.substr(eq + 1), at);
        for (const auto& [c, v] : entries) {
          if (c == cell) fail(at, "cell '" + id.str() + "' assigned twice");
        }
        entries.emplace_back(cell, value);
        if (!is_lhs) current->rhs_union.insert(id);
      }
      return entries;
    };
    auto lhs_entries = parse_side(line.substr(0, arrow), true);
    auto rhs_entries = parse_side(line.substr(arrow + 2), false);

    std::sort(lhs_entries.begin(), lhs_entries.end());
    std::vector<std::size_t> lhs_cells;
    std::vector<std::uint64_t> lhs_values;
    for (const auto& [c, v] : lhs_entries) {
      lhs_cells.push_back(c);
      lhs_values.push_back(v);
    }
    if (current->lines.empty() && current->lhs_cells.empty()) {
      current->lhs_cells = lhs_cells;
    } else if (lhs_cells != current->lhs_cells) {
      fail(at, "input columns differ from the first line of this section");
    }
    std::sort(rhs_entries.begin(), rhs_entries.end());
    if (!current->lines.emplace(std::move(lhs_values), std::move(rhs_entries))
             .second) {
      fail(at, "duplicate table line for this input valuation");
    }
  }

  if (!params) throw ParseError(1, 1, "missing [params] header");

  std::vector<DataOp> data_ops;
  for (RawOp& raw_op : ops) {
    const std::uint64_t expect =
        valuation_product(*layout, raw_op.lhs_cells, table_cap, raw_op.name);
    if (raw_op.lines.size() != expect) {
      throw ParseError(raw_op.line, 1,
                       "table for '" + raw_op.name + "' has " +
                           std::to_string(raw_op.lines.size()) + " lines, " +
                           "expected " + std::to_string(expect) +
                           " (one per input valuation)");
    }
    auto table = std::make_shared<OpTable>();
    table->lhs_cells = raw_op.lhs_cells;
    table->lines = std::move(raw_op.lines);
    DataOp d;
    d.name = raw_op.name;
    d.eval = make_table_eval(layout, table, raw_op.name);
    for (std::size_t c : table->lhs_cells) {
      d.declared_input.insert(layout->cell(c));
    }
    d.declared_output = std::move(raw_op.rhs_union);
    data_ops.push_back(std::move(d));
  }
  return build_sls(*params, std::move(data_ops));
}

}  // namespace mwb
