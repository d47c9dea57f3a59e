#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sakit/alphabet.hpp"

namespace sakit {

inline constexpr State kNoState = std::numeric_limits<State>::max();

/// Deterministic automaton with a partial transition table. State 0 is the
/// start state; a missing move (kNoState) is a rejecting sink.
struct Dfa {
  std::size_t alphabet_size = 0;
  std::vector<State> next;  // num_states * alphabet_size
  std::vector<bool> accepting;

  std::size_t num_states() const { return accepting.size(); }
  State step(State s, Symbol a) const { return next[s * alphabet_size + a]; }
  bool accepts(const Word& w) const;
};

/// Saturating count of accepted words: returns min(|L|, cap).
std::size_t dfa_count_capped(const Dfa& d, std::size_t cap);

/// Up to `k` accepted words in length-lexicographic order.
std::vector<Word> dfa_first_words(const Dfa& d, std::size_t k);

struct NfaTransition {
  State src;
  Symbol label;  // kEpsilon for an empty move
  State dst;
  auto operator<=>(const NfaTransition&) const = default;
};

/// Nondeterministic finite automaton with empty moves. Immutable once built;
/// the subset construction is computed on first use and shared by copies.
class Nfa {
 public:
  Nfa() : Nfa(Alphabet{}, 0, {}, {}, {}) {}
  Nfa(Alphabet alphabet, std::size_t num_states, std::vector<NfaTransition> transitions,
      std::vector<State> initial, std::vector<State> accepting,
      std::vector<std::string> state_names = {});

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return num_states_; }
  const std::vector<NfaTransition>& transitions() const { return transitions_; }
  const std::vector<State>& initial() const { return initial_; }
  const std::vector<State>& accepting() const { return accepting_; }
  bool is_accepting(State s) const { return accepting_mask_[s]; }
  std::string state_name(State s) const;
  const std::vector<std::string>& state_names() const { return state_names_; }

  /// Outgoing transitions of `s`, sorted by (label, dst).
  std::span<const NfaTransition> out(State s) const {
    return {transitions_.data() + offsets_[s], transitions_.data() + offsets_[s + 1]};
  }

  /// Sorted epsilon closure.
  std::vector<State> closure(std::vector<State> states) const;
  std::vector<State> post(const std::vector<State>& closed, Symbol a) const;
  bool accepts(const Word& w) const;

  const Dfa& determinized() const;

  static Nfa single_word(const Alphabet& alphabet, const Word& w);
  static Nfa from_words(const Alphabet& alphabet, const std::vector<Word>& words);
  static Nfa universal(const Alphabet& alphabet);
  static Nfa empty_language(const Alphabet& alphabet);
  static Nfa from_dfa(const Alphabet& alphabet, const Dfa& d);

  bool operator==(const Nfa& other) const;

 private:
  struct DetCache {
    std::once_flag once;
    Dfa dfa;
  };

  Alphabet alphabet_;
  std::size_t num_states_;
  std::vector<NfaTransition> transitions_;
  std::vector<std::size_t> offsets_;
  std::vector<State> initial_;
  std::vector<State> accepting_;
  std::vector<bool> accepting_mask_;
  std::vector<std::string> state_names_;
  std::shared_ptr<DetCache> det_;
};

/// Intersection over a shared alphabet; keeps only reachable pairs.
Nfa nfa_product(const Nfa& a, const Nfa& b);
/// Complement relative to alphabet*, via the subset construction.
Nfa nfa_complement(const Nfa& a);
/// True iff the language is empty.
bool nfa_emptiness(const Nfa& a);
/// True iff the language has at least k words.
bool nfa_count_at_least(const Nfa& a, std::size_t k);
std::vector<Word> nfa_first_words(const Nfa& a, std::size_t k);
std::optional<Word> nfa_shortest_word(const Nfa& a);
/// Equivalent automaton without empty moves (same state numbering).
Nfa nfa_remove_epsilon(const Nfa& a);
/// Restriction to states that are both reachable and co-reachable.
Nfa nfa_trim(const Nfa& a);

}  // namespace sakit
