#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sakit/cone.hpp"
#include "sakit/emptiness.hpp"
#include "sakit/gallery.hpp"
#include "sakit/normalform.hpp"
#include "sakit/text_format.hpp"

namespace py = pybind11;
using namespace sakit;

namespace {

Word parse_input(const SetAutomaton& sa, const std::string& text) { return sa.input_alphabet().parse_word(text); }

std::string verdict_name(DsaVerdict v) {
  switch (v) {
    case DsaVerdict::Accept: return "accept";
    case DsaVerdict::Reject: return "reject";
    case DsaVerdict::BudgetExceeded: return "budget_exceeded";
  }
  return "";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Set automata: simulation, normal forms, protocol-based decisions";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Error>(m, "SakitError", PyExc_RuntimeError);

  py::class_<SetAutomaton>(m, "SetAutomaton")
      .def_property_readonly("num_states", &SetAutomaton::num_states)
      .def_property_readonly("input_alphabet", [](const SetAutomaton& s) { return s.input_alphabet().names(); })
      .def_property_readonly("work_alphabet", [](const SetAutomaton& s) { return s.work_alphabet().names(); })
      .def_property_readonly("uses_endmarker", &SetAutomaton::uses_endmarker)
      .def("is_deterministic", &SetAutomaton::is_deterministic)
      .def("has_eps_loops", &SetAutomaton::has_eps_loops)
      .def("to_text", [](const SetAutomaton& s) { return serialize_sa(s); })
      .def("__eq__", [](const SetAutomaton& a, const SetAutomaton& b) { return a == b; });

  m.def("parse_sa", [](const std::string& text) { return parse_sa(text); }, py::arg("text"));

  m.def(
      "run",
      [](const SetAutomaton& sa, const std::string& word, std::size_t budget) {
        const DsaResult r = run_dsa(sa, parse_input(sa, word), budget, false);
        return py::make_tuple(verdict_name(r.verdict), r.steps);
      },
      py::arg("sa"), py::arg("word"), py::arg("budget") = kDefaultBudget,
      "Runs a deterministic automaton; returns (verdict, steps).");

  m.def(
      "member",
      [](const SetAutomaton& sa, const std::string& word) { return member_via_protocols(sa, parse_input(sa, word)); },
      py::arg("sa"), py::arg("word"), "Exact membership through the protocol language.");

  m.def(
      "emptiness",
      [](const SetAutomaton& sa) -> py::object {
        const EmptinessResult r = sa_emptiness(sa);
        if (r.empty) return py::none();
        return py::make_tuple(serialize_protocol(r.witness.protocol), sa.input_alphabet().format_word(r.input));
      },
      py::arg("sa"), "None if the language is empty, else (witness protocol, input word).");

  m.def(
      "check_protocol",
      [](const std::string& text, const std::vector<std::string>& gamma) {
        const CorrectnessResult r = check_correct(parse_protocol(text, Alphabet(gamma)));
        return py::make_tuple(r.correct, r.violating_block);
      },
      py::arg("protocol"), py::arg("gamma") = std::vector<std::string>{"a", "b"},
      "Returns (correct, 1-based ordinal of the first violating block or 0).");

  m.def(
      "nrr",
      [](const std::string& nfa_text) -> py::object {
        const NrrResult r = nrr_decide(parse_nfa(nfa_text));
        if (!r.nonempty) return py::none();
        return py::str(serialize_protocol(r.witness.protocol));
      },
      py::arg("nfa_text"), "A correct protocol accepted by the NFA, or None.");

  m.def("normalize", [](const SetAutomaton& sa) { return normalize_requirements(sa); });
  m.def("to_anf", [](const SetAutomaton& sa) { return to_anf(sa); });
  m.def("remove_eps_loops", [](const SetAutomaton& sa) { return remove_eps_loops(sa); });

  m.def("per_k", &build_perk_dsa, py::arg("k"));
  m.def("nonprimes", &build_nonprimes_nsa);
  m.def("sacvp", &build_sacvp_dsa);
  m.def("sasat", &build_sasat_nsa);
  m.def("cvp_word", [](const std::string& program) {
    return sacvp_input_alphabet().format_word(cvp_to_sacvp(parse_cvp(program)));
  });
  m.def("cvp_eval", [](const std::string& program) { return cvp_eval(parse_cvp(program)); });
  m.def("membership_to_emptiness", [](const SetAutomaton& sa, const std::string& word) {
    return membership_to_emptiness(sa, parse_input(sa, word));
  });
}
