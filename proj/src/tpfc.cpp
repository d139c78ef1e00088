#include "mwb/tpfc.hpp"

#include <algorithm>
#include <sstream>

#include "mwb/machine_text.hpp"
#include "mwb/rng.hpp"

namespace mwb {

// ---------------------------------------------------------------------------
// TransformationTable
// ---------------------------------------------------------------------------

TransformationTable::TransformationTable(std::uint32_t k, std::uint32_t l,
                                         std::uint64_t cap)
    : k_(k), l_(l) {
  if (l < 1 || l > 32 || k > 20) throw Error("transformation widths out of range");
  const std::uint64_t words = 1ull << k;
  unsigned __int128 inputs = 1;
  for (std::uint64_t i = 0; i < words; ++i) {
    inputs *= (1ull << l);
    if (inputs > cap) {
      throw StateSpaceTooLarge("transformation table exceeds the cap of " +
                               std::to_string(cap) + " inputs");
    }
  }
  inputs_ = static_cast<std::uint64_t>(inputs);
  flat_.resize(inputs_ * words);
  for (std::uint64_t i = 0; i < inputs_; ++i) {
    const std::vector<std::uint64_t> w = words_at(i, k, l);
    std::copy(w.begin(), w.end(), flat_.begin() + i * words);
  }
}

std::uint64_t TransformationTable::index_of(std::span<const std::uint64_t> words,
                                            std::uint32_t k, std::uint32_t l) {
  if (words.size() != (1ull << k)) throw Error("wrong word count");
  std::uint64_t index = 0;
  for (std::size_t i = words.size(); i-- > 0;) {
    if (words[i] >> l) throw Error("word value out of range");
    index = (index << l) | words[i];
  }
  return index;
}

std::vector<std::uint64_t> TransformationTable::words_at(std::uint64_t index,
                                                         std::uint32_t k,
                                                         std::uint32_t l) {
  std::vector<std::uint64_t> words(1ull << k);
  const std::uint64_t mask = (l == 64) ? ~0ull : (1ull << l) - 1;
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i] = index & mask;
    index >>= l;
  }
  if (index != 0) throw Error("transformation input index out of range");
  return words;
}

std::span<const std::uint64_t> TransformationTable::output(
    std::uint64_t input_index) const {
  if (input_index >= inputs_) throw Error("transformation input index out of range");
  const std::uint64_t words = word_count();
  return {flat_.data() + input_index * words, words};
}

void TransformationTable::set_output(std::uint64_t input_index,
                                     std::span<const std::uint64_t> words) {
  if (input_index >= inputs_) throw Error("transformation input index out of range");
  if (words.size() != word_count()) throw Error("wrong word count");
  for (std::uint64_t w : words) {
    if (w >> l_) throw Error("word value out of range");
  }
  std::copy(words.begin(), words.end(),
            flat_.begin() + input_index * word_count());
}

std::string write_transformation(const TransformationTable& t) {
  std::ostringstream out;
  out << "k=" << t.k() << " l=" << t.l() << "\n";
  for (std::uint64_t i = 0; i < t.input_count(); ++i) {
    const std::vector<std::uint64_t> in = TransformationTable::words_at(
        i, t.k(), t.l());
    const auto emit = [&](std::span<const std::uint64_t> words) {
      for (std::size_t j = 0; j < words.size(); ++j) {
        if (j) out << ",";
        out << words[j];
      }
    };
    emit(in);
    out << " -> ";
    emit(t.output(i));
    out << "\n";
  }
  return out.str();
}

TransformationTable read_transformation(std::string_view text,
                                        std::uint64_t cap) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::optional<TransformationTable> table;
  std::vector<bool> covered;
  std::size_t lineno = 0;
  std::uint32_t k = 0, l = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw = raw.substr(0, hash);
    }
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = raw.find_last_not_of(" \t\r");
    std::string line = raw.substr(first, last - first + 1);

    if (!table) {
      // Header: k=<n> l=<n>
      std::istringstream header(line);
      std::string tok;
      bool got_k = false, got_l = false;
      while (header >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
          throw ParseError(lineno, first + 1, "expected k=<n> l=<n> header");
        }
        std::uint64_t value = 0;
        try {
          value = std::stoull(tok.substr(eq + 1));
        } catch (const std::exception&) {
          throw ParseError(lineno, first + 1, "bad number in header");
        }
        const std::string key = tok.substr(0, eq);
        if (key == "k") { k = static_cast<std::uint32_t>(value); got_k = true; }
        else if (key == "l") { l = static_cast<std::uint32_t>(value); got_l = true; }
        else throw ParseError(lineno, first + 1, "unknown header key '" + key + "'");
      }
      if (!got_k || !got_l) {
        throw ParseError(lineno, first + 1, "header must set k and l");
      }
      try {
        table.emplace(k, l, cap);
      } catch (const Error& e) {
        throw ParseError(lineno, first + 1, e.what());
      }
      covered.assign(table->input_count(), false);
      continue;
    }

    const auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw ParseError(lineno, first + 1, "transformation line needs '->'");
    }
    auto parse_words = [&](std::string side) {
      std::vector<std::uint64_t> words;
      std::istringstream ss(side);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) {
          throw ParseError(lineno, first + 1, "empty word");
        }
        const auto e = item.find_last_not_of(" \t");
        try {
          words.push_back(std::stoull(item.substr(b, e - b + 1)));
        } catch (const std::exception&) {
          throw ParseError(lineno, first + 1, "bad word value");
        }
      }
      if (words.size() != table->word_count()) {
        throw ParseError(lineno, first + 1,
                         "expected " + std::to_string(table->word_count()) +
                             " words per side");
      }
      for (std::uint64_t w : words) {
        if (w >> l) {
          throw ParseError(lineno, first + 1, "word value out of range");
        }
      }
      return words;
    };
    const std::vector<std::uint64_t> in_words = parse_words(line.substr(0, arrow));
    const std::vector<std::uint64_t> out_words = parse_words(line.substr(arrow + 2));
    const std::uint64_t idx = TransformationTable::index_of(in_words, k, l);
    if (covered[idx]) {
      throw ParseError(lineno, first + 1, "duplicate row for this input");
    }
    covered[idx] = true;
    table->set_output(idx, out_words);
  }
  if (!table) throw ParseError(1, 1, "missing k=<n> l=<n> header");
  const std::size_t have =
      static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
  if (have != covered.size()) {
    throw ParseError(lineno == 0 ? 1 : lineno, 1,
                     "table covers " + std::to_string(have) + " of " +
                         std::to_string(covered.size()) + " inputs");
  }
  return *table;
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

void TpfcParams::validate() const {
  if (l < 1) throw Error("word width l must be at least 1");
  if (d < 1) throw Error("instruction budget d must be at least 1");
  if (e < 1) throw Error("residual budget e must be at least 1");
  if (u < 1 || v < 1) throw Error("register counts u and v must be at least 1");
  if (f && k < 1) throw Error("the external-half clause needs k >= 1");
  SlsParams{k, l, m, u, v}.validate();
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

MembershipResult check_membership(const TransformationTable& t,
                                  const TpfcParams& params, const Witness& w,
                                  const CheckOptions& options) {
  params.validate();
  if (t.k() != params.k || t.l() != params.l) {
    throw Error("transformation widths disagree with the class parameters");
  }
  const SlsParams& mp = w.machine.params;
  if (mp.k != params.k || mp.l != params.l || mp.m != params.m ||
      mp.u != params.u || mp.v != params.v) {
    throw Error("witness machine parameters disagree with the class");
  }

  MembershipResult result;

  // Clause 1: exactly d data manipulation instructions.
  if (w.machine.data_ops.size() != params.d) {
    result.reason = "instruction count: machine has " +
                    std::to_string(w.machine.data_ops.size()) +
                    " data instructions, the class requires exactly " +
                    std::to_string(params.d);
    return result;
  }

  // Clause 2: at most e residual threads (distinct behaviours, so the
  // count is taken on the bisimulation quotient).
  const std::size_t residuals = minimize(w.thread).nodes.size();
  if (residuals > params.e) {
    result.reason = "residual budget: thread has " +
                    std::to_string(residuals) + " residual threads, budget is " +
                    std::to_string(params.e);
    return result;
  }

  // Clause 3: from every initial state the thread drives the machine to a
  // defined final state whose data memory is the transform of the initial
  // one (restricted to the external half when f is set).
  const LayoutPtr& layout = w.machine.layout();
  const std::uint64_t compare_words =
      params.f ? (1ull << params.k) / 2 : (1ull << params.k);

  auto check_state = [&](const MachineState& s) -> bool {
    const ApplyOutcome outcome = apply_with_stats(w.thread, w.machine.machine, s);
    ++result.states_checked;
    if (!outcome.result.is_defined()) {
      result.reason = "undefined on an initial state";
      result.counterexample = s;
      return false;
    }
    ++result.trace_lengths[outcome.steps];
    const std::vector<std::uint64_t> in_words = unpack_data(w.machine, s);
    const std::vector<std::uint64_t> got =
        unpack_data(w.machine, outcome.result.state());
    const auto want = t.output(TransformationTable::index_of(
        in_words, params.k, params.l));
    for (std::uint64_t i = 0; i < compare_words; ++i) {
      if (got[i] != want[i]) {
        result.reason = "wrong data word " + std::to_string(i) +
                        ": expected " + std::to_string(want[i]) + ", got " +
                        std::to_string(got[i]);
        result.counterexample = s;
        return false;
      }
    }
    return true;
  };

  if (options.sample) {
    result.sampled = true;
    SplitMix64 rng(options.sample->seed);
    for (std::uint64_t i = 0; i < options.sample->count; ++i) {
      MachineState s(layout);
      for (std::size_t c = 0; c < layout->cell_count(); ++c) {
        s.set(c, rng.below(layout->domain(c).size));
      }
      if (!check_state(s)) return result;
    }
  } else {
    const std::uint64_t total = layout->state_count(options.state_cap);
    for (std::uint64_t i = 0; i < total; ++i) {
      if (!check_state(MachineState::from_index(layout, i))) return result;
    }
  }
  result.accepted = true;
  return result;
}

// ---------------------------------------------------------------------------
// Lean (mirror) construction
// ---------------------------------------------------------------------------

namespace {

struct LeanCells {
  std::vector<std::size_t> mirror;   // dms cells, bit j of word w at w*l+j
  std::vector<std::size_t> counter;  // k+1 cells, little endian
  std::size_t ld0, sd0, la0, sa0, rr;
};

LeanCells lean_cells(const LayoutPtr& layout, std::uint32_t k, std::uint32_t l) {
  LeanCells c{};
  const std::uint64_t dms = (1ull << k) * l;
  for (std::uint64_t i = 0; i < dms; ++i) {
    c.mirror.push_back(layout->index_of(ou_cell(static_cast<std::uint32_t>(i))));
  }
  for (std::uint32_t i = 0; i <= k; ++i) {
    c.counter.push_back(
        layout->index_of(ou_cell(static_cast<std::uint32_t>(dms + i))));
  }
  c.ld0 = layout->index_of(ld_cell(0));
  c.sd0 = layout->index_of(sd_cell(0));
  c.la0 = layout->index_of(la_cell(0));
  c.sa0 = layout->index_of(sa_cell(0));
  c.rr = layout->index_of(rr_cell());
  return c;
}

std::uint64_t read_bits(const MachineState& s, const std::vector<std::size_t>& cells) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    v |= s.get(cells[i]) << i;
  }
  return v;
}

void write_bits(MachineState& s, const std::vector<std::size_t>& cells,
                std::uint64_t v) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    s.set(cells[i], (v >> i) & 1);
  }
}

std::uint64_t read_mirror_word(const MachineState& s, const LeanCells& c,
                               std::uint64_t word, std::uint32_t l) {
  std::uint64_t v = 0;
  for (std::uint32_t j = 0; j < l; ++j) {
    v |= s.get(c.mirror[word * l + j]) << j;
  }
  return v;
}

void write_mirror_word(MachineState& s, const LeanCells& c, std::uint64_t word,
                       std::uint32_t l, std::uint64_t v) {
  for (std::uint32_t j = 0; j < l; ++j) {
    s.set(c.mirror[word * l + j], (v >> j) & 1);
  }
}

std::set<MemoryElementId> ids_of(const LayoutPtr& layout,
                                 const std::vector<std::size_t>& cells) {
  std::set<MemoryElementId> out;
  for (std::size_t c : cells) out.insert(layout->cell(c));
  return out;
}

}  // namespace

Witness synthesize_lean(const TransformationTable& t, bool f) {
  const std::uint32_t k = t.k(), l = t.l();
  if (f && k < 1) throw Error("the external-half clause needs k >= 1");
  const std::uint64_t words = 1ull << k;
  const std::uint64_t dms = words * l;
  SlsParams params{k, l, static_cast<std::uint32_t>(dms + k + 1), 1, 1};
  params.validate();
  const LayoutPtr layout = make_sls_layout(params);
  const LeanCells cells = lean_cells(layout, k, l);
  // Operations must be total: a cursor holding a junk value >= 2^k (never
  // reached in a run, but a legal state) replies F from the publishers and
  // freezes postload's mirror write. The publishers still overwrite their
  // registers (cursor masked to k bits) on such states: leaving a register
  // untouched would let its old value pass through, putting it in the
  // instruction's input region, which must stay inside ou + ld.
  const std::uint64_t limit = words;
  const std::uint64_t addr_mask = words - 1;

  auto table = std::make_shared<TransformationTable>(t);

  std::vector<DataOp> ops(5);
  ops[0].name = "init";
  ops[0].eval = [cells](const MachineState& s) {
    MachineState out = s;
    write_bits(out, cells.counter, 0);
    out.set(cells.rr, 1);
    return out;
  };
  ops[0].declared_input = {};
  ops[0].declared_output = ids_of(layout, cells.counter);
  ops[0].declared_output.insert(rr_cell());

  ops[1].name = "preload";
  ops[1].eval = [cells, limit, addr_mask](const MachineState& s) {
    MachineState out = s;
    const std::uint64_t c = read_bits(s, cells.counter);
    out.set(cells.la0, c & addr_mask);
    out.set(cells.rr, c < limit ? 1 : 0);
    return out;
  };
  ops[1].declared_input = ids_of(layout, cells.counter);
  ops[1].declared_output = {layout->cell(cells.la0), rr_cell()};

  ops[2].name = "postload";
  ops[2].eval = [cells, limit, l](const MachineState& s) {
    MachineState out = s;
    const std::uint64_t c = read_bits(s, cells.counter);
    if (c < limit) {
      write_mirror_word(out, cells, c, l, s.get(cells.ld0));
      write_bits(out, cells.counter, c + 1);
    }
    out.set(cells.rr, 1);
    return out;
  };
  ops[2].declared_input = ids_of(layout, cells.counter);
  ops[2].declared_input.insert(layout->cell(cells.ld0));
  ops[2].declared_output = ids_of(layout, cells.mirror);
  for (std::size_t c : cells.counter) {
    ops[2].declared_output.insert(layout->cell(c));
  }
  ops[2].declared_output.insert(rr_cell());

  ops[3].name = "xform";
  ops[3].eval = [cells, table, words, k, l](const MachineState& s) {
    MachineState out = s;
    std::vector<std::uint64_t> in(words);
    for (std::uint64_t w = 0; w < words; ++w) {
      in[w] = read_mirror_word(s, cells, w, l);
    }
    const auto mapped = table->output(TransformationTable::index_of(in, k, l));
    for (std::uint64_t w = 0; w < words; ++w) {
      write_mirror_word(out, cells, w, l, mapped[w]);
    }
    write_bits(out, cells.counter, 0);
    out.set(cells.rr, 1);
    return out;
  };
  ops[3].declared_input = ids_of(layout, cells.mirror);
  ops[3].declared_output = ids_of(layout, cells.mirror);
  for (std::size_t c : cells.counter) {
    ops[3].declared_output.insert(layout->cell(c));
  }
  ops[3].declared_output.insert(rr_cell());

  ops[4].name = "prestore";
  ops[4].eval = [cells, limit, addr_mask, l](const MachineState& s) {
    MachineState out = s;
    const std::uint64_t c = read_bits(s, cells.counter);
    out.set(cells.sa0, c & addr_mask);
    out.set(cells.sd0, read_mirror_word(s, cells, c & addr_mask, l));
    if (c < limit) {
      write_bits(out, cells.counter, c + 1);
      out.set(cells.rr, 1);
    } else {
      out.set(cells.rr, 0);
    }
    return out;
  };
  ops[4].declared_input = ids_of(layout, cells.counter);
  for (std::size_t c : cells.mirror) {
    ops[4].declared_input.insert(layout->cell(c));
  }
  ops[4].declared_output = ids_of(layout, cells.counter);
  ops[4].declared_output.insert(layout->cell(cells.sa0));
  ops[4].declared_output.insert(layout->cell(cells.sd0));
  ops[4].declared_output.insert(rr_cell());

  Witness w;
  w.machine = build_sls(params, std::move(ops));
  w.spec.equations = {
      {"X1", ThreadTerm::prefix(ActionId("init"), ThreadTerm::var("X2"))},
      {"X2", ThreadTerm::post(ActionId("preload"), ThreadTerm::var("X3"),
                              ThreadTerm::var("X5"))},
      {"X3", ThreadTerm::prefix(ActionId::load(0), ThreadTerm::var("X4"))},
      {"X4", ThreadTerm::prefix(ActionId("postload"), ThreadTerm::var("X2"))},
      {"X5", ThreadTerm::prefix(ActionId("xform"), ThreadTerm::var("X6"))},
      {"X6", ThreadTerm::post(ActionId("prestore"), ThreadTerm::var("X7"),
                              ThreadTerm::stop())},
      {"X7", ThreadTerm::prefix(ActionId::store(0), ThreadTerm::var("X6"))},
  };
  w.thread = solve(w.spec);
  return w;
}

// ---------------------------------------------------------------------------
// Wide (register-file) construction
// ---------------------------------------------------------------------------

Witness synthesize_wide(const TransformationTable& t) {
  const std::uint32_t k = t.k(), l = t.l();
  if (k < 1) throw Error("the register-file construction needs k >= 1");
  const std::uint32_t u = static_cast<std::uint32_t>(1u << k);
  const std::uint32_t v = u / 2;
  const std::uint64_t ems = (1ull << (k - 1)) * l;
  SlsParams params{k, l, static_cast<std::uint32_t>(ems + k), u, v};
  params.validate();
  const LayoutPtr layout = make_sls_layout(params);
  const std::size_t rr = layout->index_of(rr_cell());

  std::vector<std::size_t> la_cells(u), sa_cells(v), ld_cells(u), sd_cells(v);
  for (std::uint32_t i = 0; i < u; ++i) {
    la_cells[i] = layout->index_of(la_cell(i));
    ld_cells[i] = layout->index_of(ld_cell(i));
  }
  for (std::uint32_t i = 0; i < v; ++i) {
    sa_cells[i] = layout->index_of(sa_cell(i));
    sd_cells[i] = layout->index_of(sd_cell(i));
  }

  auto table = std::make_shared<TransformationTable>(t);

  std::vector<DataOp> ops(5);
  ops[0].name = "init";
  ops[0].eval = [la_cells, sa_cells, rr](const MachineState& s) {
    MachineState out = s;
    for (std::size_t i = 0; i < la_cells.size(); ++i) out.set(la_cells[i], i);
    for (std::size_t i = 0; i < sa_cells.size(); ++i) out.set(sa_cells[i], i);
    out.set(rr, 1);
    return out;
  };
  ops[0].declared_input = {};
  ops[0].declared_output = ids_of(layout, la_cells);
  for (std::size_t c : sa_cells) ops[0].declared_output.insert(layout->cell(c));
  ops[0].declared_output.insert(rr_cell());

  ops[1].name = "xform";
  ops[1].eval = [ld_cells, sd_cells, table, k, l, rr](const MachineState& s) {
    MachineState out = s;
    std::vector<std::uint64_t> in(ld_cells.size());
    for (std::size_t i = 0; i < ld_cells.size(); ++i) in[i] = s.get(ld_cells[i]);
    const auto mapped = table->output(TransformationTable::index_of(in, k, l));
    for (std::size_t i = 0; i < sd_cells.size(); ++i) {
      out.set(sd_cells[i], mapped[i]);
    }
    out.set(rr, 1);
    return out;
  };
  ops[1].declared_input = ids_of(layout, ld_cells);
  ops[1].declared_output = ids_of(layout, sd_cells);
  ops[1].declared_output.insert(rr_cell());

  for (int i = 0; i < 3; ++i) {
    DataOp& pad = ops[2 + i];
    pad.name = "pad" + std::to_string(i);
    pad.eval = [rr](const MachineState& s) {
      MachineState out = s;
      out.set(rr, 1);
      return out;
    };
    pad.declared_input = {};
    pad.declared_output = {rr_cell()};
  }

  Witness w;
  w.machine = build_sls(params, std::move(ops));
  auto var = [](const std::string& n) { return ThreadTerm::var(n); };
  w.spec.equations.emplace_back(
      "Init", ThreadTerm::prefix(ActionId("init"), var("Load0")));
  for (std::uint32_t i = 0; i < u; ++i) {
    const std::string next =
        (i + 1 < u) ? "Load" + std::to_string(i + 1) : "Xform";
    w.spec.equations.emplace_back(
        "Load" + std::to_string(i),
        ThreadTerm::prefix(ActionId::load(i), var(next)));
  }
  w.spec.equations.emplace_back(
      "Xform", ThreadTerm::prefix(ActionId("xform"), var("Store0")));
  for (std::uint32_t i = 0; i < v; ++i) {
    const TermPtr next = (i + 1 < v) ? var("Store" + std::to_string(i + 1))
                                     : ThreadTerm::stop();
    w.spec.equations.emplace_back(
        "Store" + std::to_string(i),
        ThreadTerm::prefix(ActionId::store(i), next));
  }
  w.thread = solve(w.spec);
  return w;
}

// ---------------------------------------------------------------------------
// Induced transformation
// ---------------------------------------------------------------------------

TransformationTable induced_transformation(const Witness& w,
                                           std::uint64_t cap) {
  const SlsParams& p = w.machine.params;
  const LayoutPtr& layout = w.machine.layout();
  const std::uint64_t total = layout->state_count(cap);
  TransformationTable t(p.k, p.l);
  std::vector<std::int64_t> seen(t.input_count(), -1);   // representative state
  std::vector<std::uint64_t> out_of(t.input_count(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    const MachineState s = MachineState::from_index(layout, i);
    const ApplyResult r = apply(w.thread, w.machine.machine, s);
    if (!r.is_defined()) {
      throw Error("witness is undefined on state " + format_state(s));
    }
    const std::uint64_t in_idx = TransformationTable::index_of(
        unpack_data(w.machine, s), p.k, p.l);
    const std::uint64_t out_idx = TransformationTable::index_of(
        unpack_data(w.machine, r.state()), p.k, p.l);
    if (seen[in_idx] < 0) {
      seen[in_idx] = static_cast<std::int64_t>(i);
      out_of[in_idx] = out_idx;
    } else if (out_of[in_idx] != out_idx) {
      const MachineState other = MachineState::from_index(
          layout, static_cast<std::uint64_t>(seen[in_idx]));
      throw Error(
          "witness does not induce a function on the data memory: states '" +
          format_state(other) + "' and '" + format_state(s) +
          "' share data contents but end differently");
    }
  }
  for (std::uint64_t i = 0; i < t.input_count(); ++i) {
    t.set_output(i, TransformationTable::words_at(out_of[i], p.k, p.l));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Completeness sweeps
// ---------------------------------------------------------------------------

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t ordinal) {
  SplitMix64 rng(seed ^ (0x9e3779b97f4a7c15ull * (ordinal + 1)));
  return rng.next();
}

}  // namespace

std::string CompletenessReport::to_text() const {
  std::ostringstream out;
  out << "class: k=" << certified.k << " l=" << certified.l << " m="
      << certified.m << " d=" << certified.d << " e=" << certified.e
      << " f=" << (certified.f ? "T" : "F") << " (u=" << certified.u
      << " v=" << certified.v << ")\n";
  out << "construction: "
      << (synth == SynthKind::lean ? "mirror operating unit"
                                   : "register file")
      << "\n";
  if (mode.exhaustive) {
    out << "sweep: exhaustive, " << total << " transformations\n";
  } else {
    out << "sweep: " << total << " transformations sampled with seed "
        << mode.seed << "\n";
  }
  out << "states: "
      << (states_sampled ? "sampled per witness" : "exhaustive per witness")
      << "\n";
  out << accepted << "/" << total << " realized\n";
  out << "trace lengths:";
  for (const auto& [len, count] : trace_lengths) {
    out << " " << len << "x" << count;
  }
  out << "\n";
  for (const auto& [ordinal, why] : failures) {
    out << "failure at transformation " << ordinal << ": " << why << "\n";
  }
  out << "result: " << (complete() ? "COMPLETE" : "NOT CERTIFIED") << "\n";
  return out.str();
}

CompletenessReport verify_completeness(std::uint32_t k, std::uint32_t l,
                                       bool f, SynthKind synth,
                                       const SweepMode& mode,
                                       const VerifyOptions& options) {
  if (synth == SynthKind::wide && !f) {
    throw Error("the register-file construction certifies only the "
                "external-half clause");
  }
  CompletenessReport report;
  report.k = k;
  report.l = l;
  report.f = f;
  report.synth = synth;
  report.mode = mode;

  const std::uint64_t dms = (1ull << k) * l;
  const std::uint64_t w = (synth == SynthKind::lean)
                              ? 2
                              : (1ull << k) + (1ull << (k - 1));
  TpfcParams certified;
  certified.k = k;
  certified.l = l;
  certified.f = f;
  certified.d = 5;
  certified.e = 6 + w;
  if (synth == SynthKind::lean) {
    certified.m = static_cast<std::uint32_t>(dms + k + 1);
    certified.u = certified.v = 1;
  } else {
    certified.m = static_cast<std::uint32_t>((1ull << (k - 1)) * l + k);
    certified.u = static_cast<std::uint32_t>(1u << k);
    certified.v = certified.u / 2;
  }
  certified.validate();
  report.certified = certified;

  // The sweep sizes: (2^dms)^(2^dms) transformations, or (2^ems)^(2^dms)
  // effective maps onto the external half.
  std::uint64_t sweep_total = 0;
  const std::uint64_t ems = dms / 2;
  if (mode.exhaustive) {
    const std::uint64_t out_bits = f ? ems : dms;
    const std::uint64_t log2_total = out_bits << dms;
    if (log2_total >= 63 || (1ull << log2_total) > options.transform_cap) {
      throw StateSpaceTooLarge(
          "transformation space too large for an exhaustive sweep");
    }
    sweep_total = 1ull << log2_total;
  } else {
    if (mode.samples == 0) throw Error("sample count must be positive");
    sweep_total = mode.samples;
  }

  SplitMix64 sample_rng(mode.seed);
  const std::uint64_t words = 1ull << k;
  const std::uint64_t word_values = 1ull << l;

  for (std::uint64_t ordinal = 0; ordinal < sweep_total; ++ordinal) {
    TransformationTable t(k, l);
    if (!mode.exhaustive) {
      std::vector<std::uint64_t> out(words);
      for (std::uint64_t i = 0; i < t.input_count(); ++i) {
        for (std::uint64_t j = 0; j < words; ++j) {
          out[j] = sample_rng.below(word_values);
        }
        t.set_output(i, out);
      }
    } else if (!f) {
      // ordinal digits in base 2^dms pick each input's output.
      for (std::uint64_t i = 0; i < t.input_count(); ++i) {
        const std::uint64_t digit = (ordinal >> (i * dms)) & ((1ull << dms) - 1);
        t.set_output(i, TransformationTable::words_at(digit, k, l));
      }
    } else {
      // Effective maps: digits in base 2^ems pick the external half; the
      // internal half of the image is immaterial and left zero.
      std::vector<std::uint64_t> out(words, 0);
      for (std::uint64_t i = 0; i < t.input_count(); ++i) {
        const std::uint64_t digit = (ordinal >> (i * ems)) & ((1ull << ems) - 1);
        const std::vector<std::uint64_t> ext =
            TransformationTable::words_at(digit, k - 1, l);
        std::copy(ext.begin(), ext.end(), out.begin());
        std::fill(out.begin() + ext.size(), out.end(), 0);
        t.set_output(i, out);
      }
    }

    const Witness witness =
        synth == SynthKind::lean ? synthesize_lean(t, f) : synthesize_wide(t);

    CheckOptions check;
    check.state_cap = options.state_cap;
    bool fits = true;
    try {
      witness.machine.layout()->state_count(options.state_cap);
    } catch (const StateSpaceTooLarge&) {
      fits = false;
    }
    if (!fits) {
      check.sample = StateSample{options.state_samples,
                                 mix_seed(options.state_seed, ordinal)};
      report.states_sampled = true;
    }

    const MembershipResult r = check_membership(t, certified, witness, check);
    ++report.total;
    if (r.accepted) {
      ++report.accepted;
    } else if (report.failures.size() < 32) {
      std::string why = r.reason;
      if (r.counterexample) {
        why += " [state " + format_state(*r.counterexample) + "]";
      }
      report.failures.emplace_back(ordinal, std::move(why));
    }
    for (const auto& [len, count] : r.trace_lengths) {
      report.trace_lengths[len] += count;
    }
  }
  return report;
}

}  // namespace mwb
