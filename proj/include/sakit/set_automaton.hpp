#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sakit/nfa.hpp"
#include "sakit/protocol.hpp"

namespace sakit {

enum class RuleKind { Write, In, Out, Test };

/// One transition. `sym` is an input symbol, kEpsilon, or kEndmarker.
/// Test rules branch to `dst` when the tape word is in the set and to
/// `dst_minus` otherwise.
struct TransitionRule {
  RuleKind kind = RuleKind::Write;
  State src = 0;
  Symbol sym = kEpsilon;
  State dst = 0;
  State dst_minus = kNoState;
  Word word;  // Write only

  bool is_query() const { return kind != RuleKind::Write; }
  bool operator==(const TransitionRule&) const = default;
};

class SetAutomaton {
 public:
  SetAutomaton(std::vector<std::string> state_names, Alphabet input, Alphabet work,
               bool uses_endmarker, std::vector<TransitionRule> rules, State initial,
               std::vector<State> accepting);

  std::size_t num_states() const { return state_names_.size(); }
  const std::string& state_name(State s) const { return state_names_.at(s); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& work_alphabet() const { return work_; }
  bool uses_endmarker() const { return uses_endmarker_; }
  const std::vector<TransitionRule>& rules() const { return rules_; }
  const TransitionRule& rule(std::size_t i) const { return rules_.at(i); }
  /// Indices of the rules leaving `s`, in declaration order.
  std::span<const std::size_t> rules_from(State s) const {
    return {by_src_.data() + offsets_[s], by_src_.data() + offsets_[s + 1]};
  }
  State initial() const { return initial_; }
  const std::vector<State>& accepting() const { return accepting_; }
  bool is_accepting(State s) const { return accepting_mask_[s]; }

  /// At most one rule per (state, symbol), and a state with an empty move
  /// has no other moves.
  bool is_deterministic() const;
  /// A cycle of empty moves exists.
  bool has_eps_loops() const;

  bool operator==(const SetAutomaton& other) const;

 private:
  std::vector<std::string> state_names_;
  Alphabet input_;
  Alphabet work_;
  bool uses_endmarker_;
  std::vector<TransitionRule> rules_;
  std::vector<std::size_t> by_src_;
  std::vector<std::size_t> offsets_;
  State initial_;
  std::vector<State> accepting_;
  std::vector<bool> accepting_mask_;
};

/// Incremental construction by state name.
class SaBuilder {
 public:
  SaBuilder(Alphabet input, Alphabet work, bool uses_endmarker = false);

  State state(const std::string& name);
  void set_initial(const std::string& name) { initial_ = state(name); }
  void accept(const std::string& name);

  /// `sym` is an input symbol name, "eps", or "end".
  void write(const std::string& src, const std::string& sym, const Word& word,
             const std::string& dst);
  void write(const std::string& src, const std::string& sym, const std::string& word,
             const std::string& dst);
  void in(const std::string& src, const std::string& sym, const std::string& dst);
  void out(const std::string& src, const std::string& sym, const std::string& dst);
  void test(const std::string& src, const std::string& sym, const std::string& plus,
            const std::string& minus);
  void add(TransitionRule r) { rules_.push_back(std::move(r)); }

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& work_alphabet() const { return work_; }
  Symbol symbol(const std::string& sym) const;
  SetAutomaton build() const;

 private:
  Alphabet input_;
  Alphabet work_;
  bool uses_endmarker_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, State> index_;
  std::vector<TransitionRule> rules_;
  State initial_ = 0;
  std::vector<State> accepting_;
};

struct Configuration {
  State state = 0;
  Word remaining;  // may end with kEndmarker
  Word tape;
  std::set<Word> set;
  bool operator==(const Configuration&) const = default;
};

Configuration initial_configuration(const SetAutomaton& sa, const Word& w);
bool is_accepting(const SetAutomaton& sa, const Configuration& c);
bool rule_enabled(const SetAutomaton& sa, const Configuration& c, const TransitionRule& rule);
/// Applies one transition. Throws Error when the rule is not enabled.
Configuration step(const SetAutomaton& sa, const Configuration& c, const TransitionRule& rule);

/// One entry of a run certificate. `test_positive` is checked for test rules.
struct RuleStep {
  std::size_t rule = 0;
  bool test_positive = false;
  bool operator==(const RuleStep&) const = default;
};
using RunCertificate = std::vector<RuleStep>;

struct RunTrace {
  bool accepted = false;
  RunCertificate steps;
  std::vector<QueryBlock> blocks;
};

enum class DsaVerdict { Accept, Reject, BudgetExceeded };

struct DsaResult {
  DsaVerdict verdict = DsaVerdict::Reject;
  std::size_t steps = 0;
  RunTrace trace;
};

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Simulates the unique run of a deterministic automaton. A repeated full
/// configuration is proven divergence and rejects.
DsaResult run_dsa(const SetAutomaton& sa, const Word& w, std::size_t budget = kDefaultBudget,
                  bool record_trace = true);

struct NsaResult {
  bool found = false;
  /// Every configuration reachable from the start was explored, so a
  /// negative answer is definitive.
  bool exhausted = false;
  RunCertificate certificate;
  RunTrace trace;
};

/// Breadth-first search over runs of length <= budget.
NsaResult run_nsa_bounded(const SetAutomaton& sa, const Word& w, std::size_t budget);

bool verify_certificate(const SetAutomaton& sa, const Word& w, const RunCertificate& cert);

/// Replays a certificate and returns the trace it induces (accepted is false
/// when the certificate does not verify).
RunTrace replay_certificate(const SetAutomaton& sa, const Word& w, const RunCertificate& cert);

/// Query blocks of an accepting run, as a protocol over the work alphabet.
Protocol extract_run_protocol(const SetAutomaton& sa, const RunTrace& trace);

}  // namespace sakit
