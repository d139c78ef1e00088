#include "mwb/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "mwb/apply.hpp"
#include "mwb/counting.hpp"
#include "mwb/machine_text.hpp"
#include "mwb/thread_text.hpp"
#include "mwb/tpfc.hpp"

namespace mwb {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

ActionId parse_action_name(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) return ActionId(name);
  std::uint32_t index = 0;
  try {
    index = static_cast<std::uint32_t>(std::stoul(name.substr(colon + 1)));
  } catch (const std::exception&) {
    throw Error("bad action index in '" + name + "'");
  }
  return ActionId(name.substr(0, colon), index);
}

bool flag_is_true(const std::string& tf) { return tf == "T"; }

struct Args {
  std::string thread_file, machine_file, transform_file, out_dir;
  std::string state_literal;
  std::string op_name;
  std::string mode = "lean";
  std::string sweep = "exhaustive";
  std::string f = "F";
  bool f_given = false;
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::uint32_t k = 0, l = 1, m = 0, u = 1, v = 1;
  std::uint64_t d = 1, e = 1, w = 1, ems = 2, ims = 0;
  bool exact = false;
};

int run_parse(const Args& a, std::ostream& out) {
  const RecSpec spec = parse_threads(read_file(a.thread_file));
  out << print_threads(spec);
  return 0;
}

int run_apply(const Args& a, std::ostream& out) {
  const SlsMachine machine = read_machine(read_file(a.machine_file));
  const RecSpec spec = parse_threads(read_file(a.thread_file));
  const ThreadGraph thread = solve(spec);
  const MachineState start = parse_state(machine.layout(), a.state_literal);
  const TraceResult run = trace(thread, machine.machine, start, a.max_steps);
  switch (run.outcome) {
    case TraceOutcome::defined:
      out << "defined in " << run.steps.size() << " steps\n"
          << format_state(*run.final_state) << "\n";
      return 0;
    case TraceOutcome::undefined:
      out << "undefined (↑)\n";
      return 0;
    case TraceOutcome::truncated:
      out << "truncated after " << run.steps.size() << " steps\n";
      return 1;
  }
  return 1;
}

int run_regions(const Args& a, std::ostream& out) {
  const SlsMachine machine = read_machine(read_file(a.machine_file));
  const ActionId action = parse_action_name(a.op_name);
  const Operation* op = machine.machine.find_operation(action);
  if (!op) throw Error("unknown operation '" + action.str() + "'");
  const OperationRegions regions = compute_regions(*op, machine.layout());
  auto emit = [&](const char* label, const std::set<MemoryElementId>& cells) {
    out << label << ":";
    for (const MemoryElementId& id : cells) {
      out << " " << cell_label(*machine.layout(), id);
    }
    out << "\n";
  };
  emit("input", regions.input);
  emit("output", regions.output);
  return 0;
}

int run_synthesize(const Args& a, std::ostream& out) {
  const TransformationTable t = read_transformation(read_file(a.transform_file));
  const bool wide = a.mode == "wide";
  // The register-file construction stores back the external half only, so
  // its witness certifies the f=T class no matter what the flag says.
  if (wide && a.f_given && !flag_is_true(a.f)) {
    throw Error(
        "the register-file construction realizes the external half only; "
        "it certifies f=T");
  }
  const bool f = wide || flag_is_true(a.f);
  const Witness w = wide ? synthesize_wide(t) : synthesize_lean(t, f);
  std::filesystem::create_directories(a.out_dir);
  const std::string machine_path =
      (std::filesystem::path(a.out_dir) / "machine.txt").string();
  const std::string thread_path =
      (std::filesystem::path(a.out_dir) / "thread.txt").string();
  write_file(machine_path, write_machine(w.machine));
  write_file(thread_path, print_threads(w.spec));
  const SlsParams& p = w.machine.params;
  out << "certified class: k=" << p.k << " l=" << p.l << " m=" << p.m
      << " d=" << w.machine.data_ops.size() << " e=" << 6 + p.u + p.v
      << " f=" << (f ? 'T' : 'F') << "\n";
  out << "machine: " << machine_path << "\n";
  out << "thread: " << thread_path << "\n";
  return 0;
}

int run_verify(const Args& a, std::ostream& out) {
  SweepMode mode;
  mode.exhaustive = a.sweep == "exhaustive";
  mode.samples = a.samples;
  mode.seed = a.seed;
  const SynthKind synth =
      a.mode == "lean" ? SynthKind::lean : SynthKind::wide;
  const CompletenessReport report =
      verify_completeness(a.k, a.l, flag_is_true(a.f), synth, mode);
  out << report.to_text();
  return report.complete() ? 0 : 1;
}

int run_count_lemma1(const Args& a, std::ostream& out) {
  const bool holds = counting_inequality_holds(a.ems);
  if (a.ems % 2 == 0) {
    out << "lhs=" << reachable_transformation_bound(a.ems).str()
        << " rhs=" << all_transformations(a.ems).str()
        << " holds=" << (holds ? "true" : "false") << "\n";
  } else {
    out << "holds=" << (holds ? "true" : "false")
        << " (symbolic; the exact form needs even ems)\n";
  }
  return holds ? 0 : 1;
}

int run_count_threads(const Args& a, std::ostream& out) {
  const Count bound = thread_count_bound(a.d, a.w, a.e);
  out << "bound=" << bound.str() << "\n";
  if (!a.exact) return 0;
  const Count exact = exact_thread_count(
      static_cast<std::uint32_t>(a.d + a.w), static_cast<std::uint32_t>(a.e));
  out << "exact=" << exact.str() << "\n";
  if (exact > bound) {
    out << "bound violated\n";
    return 1;
  }
  out << "exact within bound\n";
  return 0;
}

int run_classify(const Args& a, std::ostream& out) {
  RegimeParams p;
  p.k = a.k;
  p.l = a.l;
  p.m = a.m;
  p.d = a.d;
  p.e = a.e;
  p.f = flag_is_true(a.f);
  p.u = a.u;
  p.v = a.v;
  p.ims = a.ims;
  const RegimeVerdict verdict = classify_regime(p);
  out << verdict.to_text();
  return verdict.complete() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Workbench for strict load-store machines: guarded recursive "
               "threads, exhaustive machine semantics, transformation "
               "witness synthesis, and exact counting bounds."};
  app.require_subcommand(1);
  Args a;

  const CLI::Validator tf = CLI::IsMember({"T", "F"});

  CLI::App* parse_cmd = app.add_subcommand(
      "parse", "Check the syntax of a recursive thread specification "
               "and print its canonical form (guardedness is checked "
               "when a thread is solved, not here)");
  parse_cmd->add_option("threadfile", a.thread_file, "thread specification file")
      ->required();

  CLI::App* apply_cmd = app.add_subcommand(
      "apply", "Run a thread against a machine from an initial state; "
               "prints the final state, or reports the undefined state "
               "when the run deadlocks or diverges");
  apply_cmd->add_option("--machine", a.machine_file, "machine file")->required();
  apply_cmd->add_option("--thread", a.thread_file, "thread specification file")
      ->required();
  apply_cmd
      ->add_option("--state", a.state_literal,
                   "initial state as cell=value pairs (e.g. data0=1,rr=T); "
                   "unmentioned cells hold their minimum value")
      ->required();
  apply_cmd->add_option("--max-steps", a.max_steps,
                        "step budget before reporting truncation");

  CLI::App* regions_cmd = app.add_subcommand(
      "regions", "Print the input and output regions of one operation, "
                 "computed by exhaustive state sweep");
  regions_cmd->add_option("--machine", a.machine_file, "machine file")
      ->required();
  regions_cmd->add_option("--op", a.op_name, "operation name, e.g. load:0")
      ->required();

  CLI::App* synth_cmd = app.add_subcommand(
      "synthesize", "Build a machine and thread realizing a data-memory "
                    "transformation, and write both to a directory");
  synth_cmd->add_option("--mode", a.mode, "construction: lean (mirror the "
                        "memory in the operating unit) or wide (hold it in "
                        "the registers)")
      ->check(CLI::IsMember({"lean", "wide"}));
  synth_cmd->add_option("--transform", a.transform_file, "transformation file")
      ->required();
  CLI::Option* synth_f =
      synth_cmd->add_option("--f", a.f, "restrict to the external half (T|F)")
          ->check(tf);
  synth_cmd->add_option("--out", a.out_dir, "output directory")->required();

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Synthesize and check witnesses for a whole sweep of "
                "transformations; exit 0 only when every one is realized");
  verify_cmd->add_option("--k", a.k, "address width: 2^k data cells")
      ->required();
  verify_cmd->add_option("--l", a.l, "word width in bits")->required();
  verify_cmd->add_option("--f", a.f, "restrict to the external half (T|F)")
      ->check(tf);
  verify_cmd->add_option("--synth", a.mode, "construction: lean or wide")
      ->check(CLI::IsMember({"lean", "wide"}));
  verify_cmd->add_option("--mode", a.sweep, "exhaustive or sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  verify_cmd->add_option("--samples", a.samples,
                         "transformation count in sample mode");
  verify_cmd->add_option("--seed", a.seed, "sample mode seed");

  CLI::App* count_cmd = app.add_subcommand(
      "count", "Exact counting bounds on transformations and threads");
  count_cmd->require_subcommand(1);
  CLI::App* lemma_cmd = count_cmd->add_subcommand(
      "lemma1", "Compare the reachable-transformation bound "
                "2^((ems/2)*2^ems+ems) against all (2^ems)^(2^ems) "
                "transformations of an ems-bit external memory");
  lemma_cmd->add_option("--ems", a.ems, "external memory size in bits")
      ->required();
  CLI::App* threads_cmd = count_cmd->add_subcommand(
      "threads", "Evaluate the thread-count bound ((d+w)*e^2+2)^e, "
                 "optionally against exhaustive enumeration");
  threads_cmd->add_option("--d", a.d, "data instruction count")->required();
  threads_cmd->add_option("--w", a.w, "load/store instruction count")
      ->required();
  threads_cmd->add_option("--e", a.e, "thread state budget")->required();
  threads_cmd->add_flag("--exact", a.exact,
                        "also count threads exactly by enumeration");

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "Classify class parameters as certified complete, "
                  "certified incomplete, or unknown, with the premise "
                  "checklist");
  classify_cmd->add_option("--k", a.k, "address width")->required();
  classify_cmd->add_option("--l", a.l, "word width in bits")->required();
  classify_cmd->add_option("--m", a.m, "operating unit size in bits")
      ->required();
  classify_cmd->add_option("--d", a.d, "data instruction budget")->required();
  classify_cmd->add_option("--e", a.e, "thread state budget")->required();
  classify_cmd->add_option("--f", a.f, "external-half flag (T|F)")
      ->required()
      ->check(tf);
  classify_cmd->add_option("--u", a.u, "load register count");
  classify_cmd->add_option("--v", a.v, "store register count");
  classify_cmd->add_option("--ims", a.ims,
                           "used internal data memory size in bits");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mwb");
  for (const std::string& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  a.f_given = synth_f->count() > 0;

  try {
    if (*parse_cmd) return run_parse(a, out);
    if (*apply_cmd) return run_apply(a, out);
    if (*regions_cmd) return run_regions(a, out);
    if (*synth_cmd) return run_synthesize(a, out);
    if (*verify_cmd) return run_verify(a, out);
    if (*lemma_cmd) return run_count_lemma1(a, out);
    if (*threads_cmd) return run_count_threads(a, out);
    if (*classify_cmd) return run_classify(a, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace mwb
