#pragma once

#include <optional>
#include <vector>

#include "sakit/set_automaton.hpp"

namespace sakit {

/// Binary work alphabet, no endmarker, and every accepting run ends with a
/// query: no rule that enters an accepting state is a write, and the initial
/// state is not accepting.
bool satisfies_requirements(const SetAutomaton& sa);

/// Equivalent automaton satisfying the requirements. Each step is applied
/// only when its requirement fails; the result is nondeterministic whenever
/// the endmarker is removed or a dummy final test is added.
SetAutomaton normalize_requirements(const SetAutomaton& sa);

/// Action normal form: every state has a unique incoming mark
/// (write, in, out, test+, test-) and the initial state has no incoming rules.
SetAutomaton to_anf(const SetAutomaton& sa);

/// The empty moves form an acyclic graph.
bool eps_graph_acyclic(const SetAutomaton& sa);

struct EpsLoopRemoval {
  SetAutomaton dsa;
  /// Words queried on empty-move chains started with an empty tape. Their
  /// membership lives in the finite control, never in the set.
  std::vector<Word> tracked;
  /// Per result state: original state (kNoState for bridge states) and the
  /// membership vector over `tracked`.
  std::vector<State> origin;
  std::vector<std::vector<bool>> membership;
};

EpsLoopRemoval remove_eps_loops_detailed(const SetAutomaton& dsa);

/// Equivalent deterministic automaton whose empty moves are acyclic.
SetAutomaton remove_eps_loops(const SetAutomaton& dsa);

}  // namespace sakit
