#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sakit/fst.hpp"
#include "sakit/gallery.hpp"
#include "sakit/set_automaton.hpp"

namespace sakit {

// All loaders throw ParseError with a line number on malformed input.
// Comments run from ';' to the end of the line (from '#' for CVP, TM, CNF 'c').

SetAutomaton parse_sa(std::string_view text);
std::string serialize_sa(const SetAutomaton& sa);

Nfa parse_nfa(std::string_view text);
std::string serialize_nfa(const Nfa& a);

Fst parse_fst(std::string_view text);
std::string serialize_fst(const Fst& t);

CvpProgram parse_cvp(std::string_view text);
std::string serialize_cvp(const CvpProgram& p);

/// DIMACS clauses plus an optional `v <vars> 0` list line.
struct CnfInstance {
  CnfFormula phi;
  std::optional<std::vector<std::string>> list;  // binary codes
};
CnfInstance parse_cnf(std::string_view text);

TmDescription parse_tm(std::string_view text);
std::string serialize_tm(const TmDescription& tm);

}  // namespace sakit
