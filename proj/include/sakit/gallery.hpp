#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sakit/set_automaton.hpp"

namespace sakit {

/// Deterministic automaton for { (w#)^n : w over {0..k-1}, n >= 1 }.
SetAutomaton build_perk_dsa(std::size_t k);

/// Nondeterministic automaton over {a} accepting a^n for n = 0, 1, or composite.
SetAutomaton build_nonprimes_nsa();

// ---------------------------------------------------------------------------
// Circuit value programs

struct CvpAssignment {
  enum class Kind { And, Or, Not, One, Zero };
  Kind kind;
  std::size_t target;
  std::size_t lhs = 0;  // And, Or, Not
  std::size_t rhs = 0;  // And, Or
  bool operator==(const CvpAssignment&) const = default;
};

struct CvpProgram {
  std::vector<CvpAssignment> assignments;
  bool operator==(const CvpProgram&) const = default;
};

/// Binary code of a variable index, without leading zeros.
std::string variable_code(std::size_t index);

/// Sequential evaluation; unassigned variables read as 0. Value of the last assignment.
bool cvp_eval(const CvpProgram& p);

Alphabet sacvp_input_alphabet();
/// Encoding: '#' then `j#AND#k#i#`, `j#OR#k#i#`,
/// `NOT#k#i#`, `ONE#i#`, `ZERO#i#` per assignment.
Word cvp_to_sacvp(const CvpProgram& p);
SetAutomaton build_sacvp_dsa();

// ---------------------------------------------------------------------------
// Satisfiability

struct Literal {
  std::string var;  // binary code
  bool negated = false;
  bool operator==(const Literal&) const = default;
};
using Clause = std::vector<Literal>;

struct CnfFormula {
  std::vector<Clause> clauses;
  bool operator==(const CnfFormula&) const = default;
};

/// Satisfiability of the formula derived from (list, phi): clauses with a
/// variable listed at least twice are dropped, unlisted variables are 0.
bool phi_prime_sat(const std::vector<std::string>& list, const CnfFormula& phi);

Alphabet sasat_input_alphabet();
/// `x1#...#xn##` followed by clauses `(lit,lit,lit)`, lit = +code | -code.
Word sasat_word(const std::vector<std::string>& list, const CnfFormula& phi);
/// Lists every variable of phi exactly once, in first-occurrence order.
Word threesat_to_sasat(const CnfFormula& phi);
SetAutomaton build_sasat_nsa();

// ---------------------------------------------------------------------------
// Turing machines

struct TmMove {
  int write;
  std::size_t next;
  int dir;  // -1, 0, +1
  bool operator==(const TmMove&) const = default;
};

struct TmDescription {
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::set<std::size_t> accepting;
  std::map<std::pair<int, std::size_t>, TmMove> delta;  // (symbol, state)
  bool operator==(const TmDescription&) const = default;
};

/// Deterministic automaton with only empty moves over the unary work
/// alphabet {|}; the empty word is accepted iff the machine accepts on a
/// blank tape of 2N cells with the head starting on cell N.
SetAutomaton tm_to_unary_dsa(const TmDescription& tm, std::size_t n);

// ---------------------------------------------------------------------------

/// Automaton for {w} minus L(sa); sa must be deterministic.
SetAutomaton membership_to_emptiness(const SetAutomaton& sa, const Word& w);

}  // namespace sakit
