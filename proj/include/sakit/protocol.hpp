#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sakit/alphabet.hpp"

namespace sakit {

class SetAutomaton;

/// Operation with the set, as recorded in a protocol. Tests carry their result.
enum class Op { In, Out, TestPlus, TestMinus };

std::string_view op_token(Op op);
bool is_test(Op op);

struct QueryBlock {
  Word word;
  Op op;
  bool operator==(const QueryBlock&) const = default;
};

/// Sequence of query blocks `#u#op`; the block position is its index.
struct Protocol {
  Alphabet gamma;
  std::vector<QueryBlock> blocks;
  bool operator==(const Protocol&) const = default;
};

/// The binary work alphabet {a, b}.
Alphabet binary_gamma();

/// Gamma followed by the five reserved protocol tokens.
struct ProtocolAlphabet {
  Alphabet symbols;
  std::size_t gamma_size = 0;
  Symbol hash = 0;
  Symbol in = 0;
  Symbol out = 0;
  Symbol test_plus = 0;
  Symbol test_minus = 0;

  explicit ProtocolAlphabet(const Alphabet& gamma);
  Symbol op_symbol(Op op) const;
  bool is_gamma(Symbol s) const { return s < gamma_size; }
  Alphabet gamma() const;
};

/// Reserved names that may not appear in a work alphabet.
bool is_reserved_work_symbol(std::string_view name);

Protocol parse_protocol(std::string_view text, const Alphabet& gamma = binary_gamma());
std::string serialize_protocol(const Protocol& p);

/// The protocol as a word over the protocol alphabet, and back.
Word protocol_to_word(const Protocol& p, const ProtocolAlphabet& pa);
Protocol protocol_from_word(const Word& w, const ProtocolAlphabet& pa);

struct CorrectnessResult {
  bool correct = true;
  /// 1-based ordinal of the first violating block when !correct.
  std::size_t violating_block = 0;
};

/// Support-relation check: every test+ supported, every test- supported or standalone.
CorrectnessResult check_correct(const Protocol& p);

/// Direct simulation of the set; true iff every recorded test result matches.
bool replay_correct(const Protocol& p);

/// Set contents S_1..S_t after each block (in/out applied; tests leave it unchanged).
std::vector<std::set<Word>> replay_sets(const Protocol& p);

/// Deterministic set automaton over the protocol alphabet accepting exactly
/// the correct protocols over `gamma`.
SetAutomaton build_mprot(const Alphabet& gamma = binary_gamma());

}  // namespace sakit
