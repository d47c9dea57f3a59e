#include "sakit/fst.hpp"

#include <algorithm>
#include <map>

namespace sakit {

Fst::Fst(Alphabet input, Alphabet output, std::size_t num_states,
         std::vector<FstTransition> transitions, State initial, std::vector<State> accepting,
         std::vector<std::string> state_names)
    : input_(std::move(input)),
      output_(std::move(output)),
      num_states_(num_states),
      transitions_(std::move(transitions)),
      initial_(initial),
      accepting_(std::move(accepting)),
      state_names_(std::move(state_names)) {
  if (num_states_ == 0) throw Error("transducer needs at least one state");
  if (initial_ >= num_states_) throw Error("transducer initial state is not a declared state");
  for (const auto& t : transitions_) {
    if (t.src >= num_states_ || t.dst >= num_states_)
      throw Error("transducer transition endpoint is not a declared state");
    if (t.read != kEpsilon && t.read >= input_.size())
      throw Error("transducer reads a symbol outside its input alphabet");
    if (t.write != kEpsilon && t.write >= output_.size())
      throw Error("transducer writes a symbol outside its output alphabet");
  }
  for (State s : accepting_)
    if (s >= num_states_) throw Error("transducer accepting state is not a declared state");
  if (!state_names_.empty() && state_names_.size() != num_states_)
    throw Error("transducer state name count does not match state count");
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  std::sort(accepting_.begin(), accepting_.end());
  accepting_.erase(std::unique(accepting_.begin(), accepting_.end()), accepting_.end());
}

bool Fst::is_accepting(State s) const {
  return std::binary_search(accepting_.begin(), accepting_.end(), s);
}

std::string Fst::state_name(State s) const {
  if (!state_names_.empty()) return state_names_.at(s);
  return "t" + std::to_string(s);
}

bool Fst::operator==(const Fst& other) const {
  if (!(input_ == other.input_) || !(output_ == other.output_) ||
      num_states_ != other.num_states_ || transitions_ != other.transitions_ ||
      initial_ != other.initial_ || accepting_ != other.accepting_)
    return false;
  for (State s = 0; s < num_states_; ++s)
    if (state_name(s) != other.state_name(s)) return false;
  return true;
}

FstBuilder::FstBuilder(Alphabet input, Alphabet output)
    : input_(std::move(input)), output_(std::move(output)) {}

State FstBuilder::add_state(std::string name) {
  State s = static_cast<State>(names_.size());
  names_.push_back(name.empty() ? "t" + std::to_string(s) : std::move(name));
  return s;
}

void FstBuilder::add(State src, const Word& read, const Word& write, State dst) {
  const std::size_t steps = std::max<std::size_t>({read.size(), write.size(), 1});
  State cur = src;
  for (std::size_t i = 0; i < steps; ++i) {
    State next = (i + 1 == steps) ? dst : add_state();
    transitions_.push_back({cur, i < read.size() ? read[i] : kEpsilon,
                            i < write.size() ? write[i] : kEpsilon, next});
    cur = next;
  }
}

Fst FstBuilder::build() const {
  return Fst(input_, output_, names_.size(), transitions_, initial_, accepting_, names_);
}

Nfa fst_apply(const Fst& t, const Word& w) {
  for (Symbol a : w)
    if (a >= t.input_alphabet().size()) throw Error("fst_apply: symbol outside input alphabet");
  std::vector<std::vector<const FstTransition*>> by_src(t.num_states());
  for (const auto& tr : t.transitions()) by_src[tr.src].push_back(&tr);

  const std::size_t width = w.size() + 1;
  std::map<std::size_t, State> index;
  std::vector<std::size_t> keys;
  auto intern = [&](State q, std::size_t i) {
    std::size_t key = static_cast<std::size_t>(q) * width + i;
    auto [it, inserted] = index.emplace(key, static_cast<State>(keys.size()));
    if (inserted) keys.push_back(key);
    return it->second;
  };
  std::vector<NfaTransition> ts;
  intern(t.initial(), 0);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    State q = static_cast<State>(keys[k] / width);
    std::size_t i = keys[k] % width;
    for (const FstTransition* tr : by_src[q]) {
      if (tr->read == kEpsilon) {
        ts.push_back({static_cast<State>(k), tr->write, intern(tr->dst, i)});
      } else if (i < w.size() && w[i] == tr->read) {
        ts.push_back({static_cast<State>(k), tr->write, intern(tr->dst, i + 1)});
      }
    }
  }
  std::vector<State> accepting;
  for (std::size_t k = 0; k < keys.size(); ++k)
    if (keys[k] % width == w.size() && t.is_accepting(static_cast<State>(keys[k] / width)))
      accepting.push_back(static_cast<State>(k));
  return nfa_trim(Nfa(t.output_alphabet(), keys.size(), std::move(ts), {0}, std::move(accepting)));
}

Fst fst_inverse(const Fst& t) {
  std::vector<FstTransition> ts;
  ts.reserve(t.transitions().size());
  for (const auto& tr : t.transitions()) ts.push_back({tr.src, tr.write, tr.read, tr.dst});
  std::vector<std::string> names;
  for (State s = 0; s < t.num_states(); ++s) names.push_back(t.state_name(s));
  return Fst(t.output_alphabet(), t.input_alphabet(), t.num_states(), std::move(ts), t.initial(),
             t.accepting(), std::move(names));
}

Nfa fst_range(const Fst& t) {
  std::vector<NfaTransition> ts;
  for (const auto& tr : t.transitions()) ts.push_back({tr.src, tr.write, tr.dst});
  std::vector<std::string> names;
  for (State s = 0; s < t.num_states(); ++s) names.push_back(t.state_name(s));
  return Nfa(t.output_alphabet(), t.num_states(), std::move(ts), {t.initial()}, t.accepting(),
             std::move(names));
}

}  // namespace sakit
