#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mwb/machine.hpp"

namespace mwb {

// ---------------------------------------------------------------------------
// Strict load-store instruction set architectures
//
// Memory is split into fixed regions over an address width k and a word
// width l:
//   data  2^k cells of l-bit words     main memory
//   ou    m single-bit cells           operating unit
//   ld    u l-bit cells                load data registers
//   sd    v l-bit cells                store data registers
//   la    u k-bit cells                load address registers
//   sa    v k-bit cells                store address registers
//   rr    one T/F cell                 reply register
// (a region with zero cells is simply absent). The instruction set is
// load:n / store:n for each register plus a finite family of data
// manipulation instructions whose input region stays inside ou+ld and whose
// output region stays inside ou+sd+la+sa+rr.
// ---------------------------------------------------------------------------

struct SlsParams {
  std::uint32_t k = 0;  // address width: 2^k data cells
  std::uint32_t l = 1;  // word width in bits, l >= 1
  std::uint32_t m = 0;  // operating-unit size in bits
  std::uint32_t u = 1;  // load registers, u >= 1
  std::uint32_t v = 1;  // store registers, v >= 1

  std::uint64_t data_cells() const { return 1ull << k; }
  std::uint64_t word_values() const { return 1ull << l; }

  // Number of bits of the whole data memory / its external first half.
  std::uint64_t data_bits() const { return data_cells() * l; }
  std::uint64_t external_bits() const { return (data_cells() / 2) * l; }

  // Throws Error on out-of-range widths (k, l capped so cell domains and
  // state indices stay in 64 bits).
  void validate() const;
};

// A data manipulation instruction supplied to build_sls: name + evaluator
// over the full layout, with analytic region declarations. declared_input
// lists the table columns: the cells that, together, determine every output
// cell up to per-cell pass-through. It may be smaller than the input region
// in the dependency sense, which also counts cells that merely pass through
// into the output region. declared_output must cover every cell the
// operation can change.
struct DataOp {
  std::string name;
  std::function<MachineState(const MachineState&)> eval;
  std::set<MemoryElementId> declared_input;
  std::set<MemoryElementId> declared_output;
};

struct SlsMachine {
  SlsParams params;
  MaurerMachine machine;
  std::vector<ActionId> data_ops;  // declaration order

  const LayoutPtr& layout() const { return machine.layout; }
};

// Cell ids for the fixed regions.
MemoryElementId data_cell(std::uint32_t i);
MemoryElementId ou_cell(std::uint32_t i);
MemoryElementId ld_cell(std::uint32_t i);
MemoryElementId sd_cell(std::uint32_t i);
MemoryElementId la_cell(std::uint32_t i);
MemoryElementId sa_cell(std::uint32_t i);
MemoryElementId rr_cell();

LayoutPtr make_sls_layout(const SlsParams& params);

// Assembles the machine: the load/store family is generated
//   load:n   ld[n]  := data[la[n]],  rr := T
//   store:n  data[sa[n]] := sd[n],   rr := T
// and every data op replies through rr. Throws Error on name clashes with
// the generated family or tau, or on missing evaluators.
SlsMachine build_sls(const SlsParams& params, std::vector<DataOp> data_ops);

// Strictness checklist. Exhaustive when the state set fits the cap: frame
// conditions per state for load/store (only ld[n]+rr / data[sa[n]]+rr may
// change, and the loaded value is the addressed word) and computed-region
// containment for data ops. Beyond the cap the declared regions are checked
// instead (and load/store are trusted as generated). Returns violations;
// empty means strict.
struct StrictnessIssue {
  ActionId action;
  std::string constraint;
};
std::vector<StrictnessIssue> validate_strictness(
    const SlsMachine& m, std::uint64_t cap = kDefaultStateCap);

// Data-memory contents <-> state, for driving transformations. pack writes
// the words into data[], leaving every other region of base untouched;
// unpack reads them back. words.size() must be 2^k; values < 2^l.
MachineState pack_data(const SlsMachine& m, std::span<const std::uint64_t> words,
                       const MachineState& base);
std::vector<std::uint64_t> unpack_data(const SlsMachine& m,
                                       const MachineState& s);

}  // namespace mwb
