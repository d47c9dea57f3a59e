#pragma once

#include "sakit/fst.hpp"
#include "sakit/set_automaton.hpp"

namespace sakit {

/// Transducer T_M with w in L(M) iff T_M(w) contains a correct protocol.
/// Requires satisfies_requirements(sa). State 0 is the auxiliary initial
/// state; states 1..n mirror the automaton, and the accepting states are
/// final copies reached by the last query.
Fst build_extractor(const SetAutomaton& sa);

/// Exact membership via the protocol language; normalizes internally.
bool member_via_protocols(const SetAutomaton& sa, const Word& w);

/// Automaton for { w : t(w) contains a correct protocol }, where t writes
/// over a protocol alphabet: the product of t with the protocol checker.
SetAutomaton cone_generate(const Fst& t);

}  // namespace sakit
