#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwb/apply.hpp"
#include "mwb/sls.hpp"
#include "mwb/thread.hpp"

namespace mwb {

// ---------------------------------------------------------------------------
// Transformations of the data memory
//
// A transformation is a total map on the 2^k-word data memory contents
// (words of l bits). Tables are indexed by the mixed-radix encoding of the
// input words, word 0 least significant.
// ---------------------------------------------------------------------------

class TransformationTable {
 public:
  // Identity transformation; throws StateSpaceTooLarge when the input
  // space (2^l)^(2^k) exceeds the cap.
  TransformationTable(std::uint32_t k, std::uint32_t l,
                      std::uint64_t cap = 1ull << 26);

  std::uint32_t k() const { return k_; }
  std::uint32_t l() const { return l_; }
  std::uint64_t word_count() const { return 1ull << k_; }
  std::uint64_t input_count() const { return inputs_; }

  static std::uint64_t index_of(std::span<const std::uint64_t> words,
                                std::uint32_t k, std::uint32_t l);
  static std::vector<std::uint64_t> words_at(std::uint64_t index,
                                             std::uint32_t k, std::uint32_t l);

  std::span<const std::uint64_t> output(std::uint64_t input_index) const;
  void set_output(std::uint64_t input_index,
                  std::span<const std::uint64_t> words);

  bool operator==(const TransformationTable&) const = default;

 private:
  std::uint32_t k_ = 0, l_ = 1;
  std::uint64_t inputs_ = 0;
  std::vector<std::uint64_t> flat_;  // inputs_ * 2^k words
};

// Text form:
//   k=1 l=1
//   0,0 -> 1,0
//   ...
// one line per input (decimal words, any row order, full cover required).
std::string write_transformation(const TransformationTable& t);
TransformationTable read_transformation(std::string_view text,
                                        std::uint64_t cap = 1ull << 26);

// ---------------------------------------------------------------------------
// Membership in a thread-powered function class
//
// A transformation t belongs to the class with parameters
// (k, l, m, d, e, f) when some strict load-store machine with exactly d
// data manipulation instructions and some thread with at most e residual
// states compute t on the data memory from EVERY initial state: on the
// whole data memory when f is false, on its external first half (the first
// 2^(k-1) words) when f is true. A witness is such a machine/thread pair.
// ---------------------------------------------------------------------------

struct TpfcParams {
  std::uint32_t k = 0, l = 1;
  std::uint32_t m = 0;
  std::uint32_t d = 0;       // data manipulation instruction budget
  std::uint64_t e = 0;       // residual state budget
  bool f = false;            // restrict to the external half
  std::uint32_t u = 1, v = 1;

  // Throws Error: l,d,e >= 1; u,v >= 1; f requires k >= 1.
  void validate() const;
};

struct Witness {
  SlsMachine machine;
  ThreadGraph thread;
  RecSpec spec;  // the defining specification (solve(spec) == thread)
};

struct StateSample {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

struct CheckOptions {
  std::uint64_t state_cap = kDefaultStateCap;
  // When set, sweep a uniform state sample instead of every state (only
  // meaningful beyond the cap; the result is then marked sampled and does
  // not certify membership).
  std::optional<StateSample> sample;
};

struct MembershipResult {
  bool accepted = false;
  std::string reason;  // empty when accepted
  std::optional<MachineState> counterexample;
  std::uint64_t states_checked = 0;
  bool sampled = false;
  std::map<std::uint64_t, std::uint64_t> trace_lengths;  // steps -> states
};

// Checks the witness against every TpfcParams clause for transformation t:
// instruction count, residual budget (bisimulation classes of the thread's
// residuals), and the full state sweep. Throws Error when the witness'
// machine parameters disagree with (k, l, m, u, v) or t's shape, and
// StateSpaceTooLarge when the sweep exceeds the cap without a sample.
MembershipResult check_membership(const TransformationTable& t,
                                  const TpfcParams& params, const Witness& w,
                                  const CheckOptions& options = {});

// ---------------------------------------------------------------------------
// Witness synthesis
// ---------------------------------------------------------------------------

// Mirror construction: one load and one store register, operating unit of
// dms + k + 1 bits (a full mirror of the data memory plus a cursor wide
// enough to hold 2^k), and five instructions
//   init      zero the cursor
//   preload   publish the cursor as the load address (F when done)
//   postload  copy ld into the mirror word under the cursor, advance
//   xform     rewrite the mirror through t, reset the cursor
//   prestore  publish cursor address + mirror word for the store (F when
//             done)
// The thread loads all words, transforms, and stores all words back:
// 6 + u + v residual states. Certifies (k, l, dms+k+1, 5, 6+u+v, f).
Witness synthesize_lean(const TransformationTable& t, bool f);

// Register-file construction for the external half (f true, k >= 1):
// u = 2^k load registers, v = 2^(k-1) store registers, ou of ems + k bits
// kept entirely idle, and five instructions: init presets every load/store
// address, xform maps the loaded registers straight to the store registers,
// plus three reply-only fillers to reach the five-instruction format.
// Certifies (k, l, ems+k, 5, 6+u+v, T) — the thread itself uses 3 + u + v
// residual states.
Witness synthesize_wide(const TransformationTable& t);

// The exact transformation a witness computes, extracted by sweeping every
// state (cap-guarded). Throws Error if the witness is undefined on some
// state or computes different data results from two states with equal data
// contents (naming both in the message).
TransformationTable induced_transformation(const Witness& w,
                                           std::uint64_t cap = kDefaultStateCap);

// ---------------------------------------------------------------------------
// Completeness sweeps
// ---------------------------------------------------------------------------

enum class SynthKind : std::uint8_t { lean, wide };

struct SweepMode {
  bool exhaustive = true;
  std::uint64_t samples = 0;  // when not exhaustive
  std::uint64_t seed = 0;
};

struct VerifyOptions {
  std::uint64_t transform_cap = 1ull << 20;  // exhaustive sweep size limit
  std::uint64_t state_cap = kDefaultStateCap;
  std::uint64_t state_samples = 4096;  // per witness, beyond the state cap
  std::uint64_t state_seed = 1;
};

struct CompletenessReport {
  std::uint32_t k = 0, l = 0;
  bool f = false;
  SynthKind synth = SynthKind::lean;
  SweepMode mode;
  TpfcParams certified;
  std::uint64_t total = 0;
  std::uint64_t accepted = 0;
  bool states_sampled = false;
  std::vector<std::pair<std::uint64_t, std::string>> failures;  // ordinal, why
  std::map<std::uint64_t, std::uint64_t> trace_lengths;

  bool complete() const { return total > 0 && accepted == total; }
  std::string to_text() const;
};

// Synthesizes and checks a witness for every transformation in the sweep:
// all (2^l)^(2^k) of them (f false), all effective maps onto the external
// half (f true), or `samples` seeded random tables. Exhaustive in the state
// dimension whenever the witness state set fits the cap, else falls back to
// a per-transformation deterministic state sample and flags the report.
CompletenessReport verify_completeness(std::uint32_t k, std::uint32_t l,
                                       bool f, SynthKind synth,
                                       const SweepMode& mode,
                                       const VerifyOptions& options = {});

}  // namespace mwb
