#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mwb/apply.hpp"
#include "mwb/counting.hpp"
#include "mwb/machine_text.hpp"
#include "mwb/thread_text.hpp"
#include "mwb/tpfc.hpp"

namespace py = pybind11;

namespace {

mwb::Witness witness_from_text(const std::string& machine_text,
                               const std::string& thread_text) {
  mwb::Witness w;
  w.machine = mwb::read_machine(machine_text);
  w.spec = mwb::parse_threads(thread_text);
  w.thread = mwb::solve(w.spec);
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Strict load-store machine workbench: guarded recursive "
            "threads, machine semantics, transformation witness synthesis, "
            "and exact counting bounds.";

  py::register_exception<mwb::Error>(m, "Error", PyExc_RuntimeError);

  m.def("canonical_form",
        [](const std::string& text) {
          return mwb::print_threads(mwb::parse_threads(text));
        },
        py::arg("text"),
        "Parse and validate a thread specification; return its canonical "
        "printed form.");

  m.def("residual_count",
        [](const std::string& text) {
          return mwb::residual_count(mwb::solve(mwb::parse_threads(text)));
        },
        py::arg("text"),
        "Number of residual thread states of the specification's solution.");

  m.def("bisimilar",
        [](const std::string& a, const std::string& b, bool identify_tau) {
          return mwb::bisimilar(mwb::solve(mwb::parse_threads(a)),
                                mwb::solve(mwb::parse_threads(b)),
                                identify_tau);
        },
        py::arg("a"), py::arg("b"), py::arg("identify_tau") = false,
        "Whether two specifications solve to bisimilar threads.");

  m.def("apply_thread",
        [](const std::string& machine_text, const std::string& thread_text,
           const std::string& state, std::uint64_t max_steps) {
          const mwb::SlsMachine machine = mwb::read_machine(machine_text);
          const mwb::ThreadGraph thread =
              mwb::solve(mwb::parse_threads(thread_text));
          const mwb::TraceResult run =
              mwb::trace(thread, machine.machine,
                         mwb::parse_state(machine.layout(), state), max_steps);
          py::dict out;
          out["steps"] = run.steps.size();
          switch (run.outcome) {
            case mwb::TraceOutcome::defined:
              out["outcome"] = "defined";
              out["state"] = mwb::format_state(*run.final_state);
              break;
            case mwb::TraceOutcome::undefined:
              out["outcome"] = "undefined";
              out["state"] = py::none();
              break;
            case mwb::TraceOutcome::truncated:
              out["outcome"] = "truncated";
              out["state"] = py::none();
              break;
          }
          return out;
        },
        py::arg("machine"), py::arg("thread"), py::arg("state") = "",
        py::arg("max_steps") = 1'000'000,
        "Run a thread against a machine from an initial state literal.");

  m.def("validate_strictness",
        [](const std::string& machine_text) {
          std::vector<std::string> out;
          const mwb::SlsMachine machine = mwb::read_machine(machine_text);
          for (const mwb::StrictnessIssue& issue :
               mwb::validate_strictness(machine)) {
            out.push_back(issue.action.str() + ": " + issue.constraint);
          }
          return out;
        },
        py::arg("machine"),
        "Strictness violations of a machine file; empty means strict.");

  m.def("synthesize",
        [](const std::string& transform_text, const std::string& mode,
           bool f) {
          const mwb::TransformationTable t =
              mwb::read_transformation(transform_text);
          const mwb::Witness w = mode == "wide" ? mwb::synthesize_wide(t)
                                                : mwb::synthesize_lean(t, f);
          return py::make_tuple(mwb::write_machine(w.machine),
                                mwb::print_threads(w.spec));
        },
        py::arg("transform"), py::arg("mode") = "lean", py::arg("f") = false,
        "Synthesize a witness for a transformation; returns (machine file, "
        "thread file).");

  m.def("induced_transformation",
        [](const std::string& machine_text, const std::string& thread_text) {
          return mwb::write_transformation(mwb::induced_transformation(
              witness_from_text(machine_text, thread_text)));
        },
        py::arg("machine"), py::arg("thread"),
        "The exact transformation a machine/thread pair computes, as a "
        "transformation file.");

  m.def("verify_completeness",
        [](std::uint32_t k, std::uint32_t l, bool f, const std::string& synth,
           bool exhaustive, std::uint64_t samples, std::uint64_t seed) {
          mwb::SweepMode mode;
          mode.exhaustive = exhaustive;
          mode.samples = samples;
          mode.seed = seed;
          const mwb::CompletenessReport report = mwb::verify_completeness(
              k, l, f,
              synth == "wide" ? mwb::SynthKind::wide : mwb::SynthKind::lean,
              mode);
          py::dict out;
          out["complete"] = report.complete();
          out["total"] = report.total;
          out["accepted"] = report.accepted;
          out["text"] = report.to_text();
          return out;
        },
        py::arg("k"), py::arg("l"), py::arg("f") = false,
        py::arg("synth") = "lean", py::arg("exhaustive") = true,
        py::arg("samples") = 0, py::arg("seed") = 0,
        "Sweep transformations, synthesizing and checking a witness for "
        "each.");

  m.def("count_lemma1",
        [](std::uint64_t ems) {
          py::dict out;
          out["holds"] = mwb::counting_inequality_holds(ems);
          if (ems % 2 == 0) {
            out["lhs"] = mwb::reachable_transformation_bound(ems).str();
            out["rhs"] = mwb::all_transformations(ems).str();
          } else {
            out["lhs"] = py::none();
            out["rhs"] = py::none();
          }
          return out;
        },
        py::arg("ems"),
        "The counting inequality at external memory size ems.");

  m.def("thread_count_bound",
        [](std::uint64_t d, std::uint64_t w, std::uint64_t e) {
          return mwb::thread_count_bound(d, w, e).str();
        },
        py::arg("d"), py::arg("w"), py::arg("e"),
        "((d+w)*e^2+2)^e as a decimal string.");

  m.def("exact_thread_count",
        [](std::uint32_t alphabet_size, std::uint32_t e) {
          return mwb::exact_thread_count(alphabet_size, e).str();
        },
        py::arg("alphabet_size"), py::arg("e"),
        "Exact thread count up to bisimilarity, by enumeration.");

  m.def("classify",
        [](std::uint32_t k, std::uint32_t l, std::uint32_t m_, std::uint64_t d,
           std::uint64_t e, bool f, std::uint32_t u, std::uint32_t v,
           std::uint64_t ims) {
          mwb::RegimeParams p;
          p.k = k;
          p.l = l;
          p.m = m_;
          p.d = d;
          p.e = e;
          p.f = f;
          p.u = u;
          p.v = v;
          p.ims = ims;
          const mwb::RegimeVerdict verdict = mwb::classify_regime(p);
          std::vector<std::tuple<std::string, std::string, bool>> checklist;
          for (const mwb::PremiseCheck& c : verdict.checklist) {
            checklist.emplace_back(c.rule, c.premise, c.holds);
          }
          py::dict out;
          out["verdict"] = std::string(mwb::regime_name(verdict.regime));
          out["complete"] = verdict.complete();
          out["checklist"] = checklist;
          return out;
        },
        py::arg("k"), py::arg("l"), py::arg("m"), py::arg("d"), py::arg("e"),
        py::arg("f"), py::arg("u") = 1, py::arg("v") = 1, py::arg("ims") = 0,
        "Classify class parameters with the premise checklist.");
}
