#pragma once

#include <string>
#include <vector>

#include "sakit/nfa.hpp"

namespace sakit {

/// One move of a normalized transducer: reads at most one symbol and writes
/// at most one symbol (kEpsilon for none).
struct FstTransition {
  State src;
  Symbol read;
  Symbol write;
  State dst;
  auto operator<=>(const FstTransition&) const = default;
};

/// Finite-state transducer with a single initial state.
class Fst {
 public:
  Fst(Alphabet input, Alphabet output, std::size_t num_states, std::vector<FstTransition> transitions,
      State initial, std::vector<State> accepting, std::vector<std::string> state_names = {});

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }
  std::size_t num_states() const { return num_states_; }
  const std::vector<FstTransition>& transitions() const { return transitions_; }
  State initial() const { return initial_; }
  const std::vector<State>& accepting() const { return accepting_; }
  bool is_accepting(State s) const;
  std::string state_name(State s) const;
  const std::vector<std::string>& state_names() const { return state_names_; }

  bool operator==(const Fst& other) const;

 private:
  Alphabet input_;
  Alphabet output_;
  std::size_t num_states_;
  std::vector<FstTransition> transitions_;
  State initial_;
  std::vector<State> accepting_;
  std::vector<std::string> state_names_;
};

/// Accumulates word-labelled moves and splits them into normalized ones
/// through fresh intermediate states.
class FstBuilder {
 public:
  FstBuilder(Alphabet input, Alphabet output);

  State add_state(std::string name = {});
  void add(State src, const Word& read, const Word& write, State dst);
  void set_initial(State s) { initial_ = s; }
  void add_accepting(State s) { accepting_.push_back(s); }
  std::size_t num_states() const { return names_.size(); }
  Fst build() const;

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<std::string> names_;
  std::vector<FstTransition> transitions_;
  State initial_ = 0;
  std::vector<State> accepting_;
};

/// NFA over the output alphabet recognizing T(w).
Nfa fst_apply(const Fst& t, const Word& w);
/// Transducer for the inverse relation (read and write swapped).
Fst fst_inverse(const Fst& t);
/// NFA over the output alphabet recognizing T(input*).
Nfa fst_range(const Fst& t);

}  // namespace sakit
