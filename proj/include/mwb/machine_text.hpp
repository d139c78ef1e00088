#pragma once

#include <string>
#include <string_view>

#include "mwb/sls.hpp"

namespace mwb {

// Machine files describe a strict load-store machine: a parameter header
// followed by one table section per data manipulation instruction (the
// load/store family is implied by the parameters and regenerated on read):
//
//   [params] k=1 l=1 m=4 u=1 v=1
//   [op xform]
//   ou0=0, ou1=0 -> ou0=1, ou1=0, ou2=0, ou3=0, rr=T
//   ...
//
// Each table line is `inputs -> outputs`. The input cells are the
// instruction's declared input region, identical on every line; a table is
// total when every valuation of those cells appears exactly once. Output
// cells may differ per line; cells not written pass through unchanged.
// Values are binary, most significant bit first; the reply register reads
// and writes as T/F. Cells of one-cell regions go by the bare region name
// ('rr', and e.g. 'ld' when u = 1); '#' starts a comment.
//
// Writing requires declared regions on every data op and that they cover
// the true regions: the writer probes each non-input output cell over its
// domain to split pass-through from constant writes and errors when a cell
// visibly feeds the result without being a declared input. A deterministic
// state sample cross-checks the written table against the live evaluator.
std::string write_machine(const SlsMachine& m);
SlsMachine read_machine(std::string_view text,
                        std::uint64_t table_cap = kDefaultStateCap);

// State literals: `cell=value` pairs, comma separated, in any order;
// unmentioned cells hold 0 (F). format_state lists every cell in canonical
// order.
std::string format_state(const MachineState& s);
MachineState parse_state(const LayoutPtr& layout, std::string_view text);

std::string cell_label(const MemoryLayout& layout, const MemoryElementId& id);
std::string format_value(const ValueDomain& domain, std::uint64_t value);

}  // namespace mwb
