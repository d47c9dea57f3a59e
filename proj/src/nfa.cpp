#include "sakit/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace sakit {

namespace {

std::vector<bool> useful_states(const Dfa& d) {
  const std::size_t n = d.num_states();
  std::vector<bool> reach(n, false), coreach(n, false);
  if (n == 0) return reach;
  std::vector<State> stack{0};
  reach[0] = true;
  std::vector<std::vector<State>> rev(n);
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (Symbol a = 0; a < d.alphabet_size; ++a) {
      State t = d.step(s, a);
      if (t == kNoState) continue;
      rev[t].push_back(s);
      if (!reach[t]) {
        reach[t] = true;
        stack.push_back(t);
      }
    }
  }
  for (State s = 0; s < n; ++s) {
    if (reach[s] && d.accepting[s]) {
      coreach[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : rev[s]) {
      if (!coreach[p]) {
        coreach[p] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<bool> out(n);
  for (State s = 0; s < n; ++s) out[s] = reach[s] && coreach[s];
  return out;
}

// Topological order of the useful part, or nullopt when it has a cycle.
std::optional<std::vector<State>> useful_topo_order(const Dfa& d, const std::vector<bool>& useful) {
  const std::size_t n = d.num_states();
  std::vector<std::size_t> indeg(n, 0);
  for (State s = 0; s < n; ++s) {
    if (!useful[s]) continue;
    for (Symbol a = 0; a < d.alphabet_size; ++a) {
      State t = d.step(s, a);
      if (t != kNoState && useful[t]) ++indeg[t];
    }
  }
  std::vector<State> order, queue;
  for (State s = 0; s < n; ++s)
    if (useful[s] && indeg[s] == 0) queue.push_back(s);
  while (!queue.empty()) {
    State s = queue.back();
    queue.pop_back();
    order.push_back(s);
    for (Symbol a = 0; a < d.alphabet_size; ++a) {
      State t = d.step(s, a);
      if (t != kNoState && useful[t] && --indeg[t] == 0) queue.push_back(t);
    }
  }
  std::size_t useful_count = std::count(useful.begin(), useful.end(), true);
  if (order.size() != useful_count) return std::nullopt;
  return order;
}

}  // namespace

bool Dfa::accepts(const Word& w) const {
  if (num_states() == 0) return false;
  State s = 0;
  for (Symbol a : w) {
    if (a >= alphabet_size) return false;
    s = step(s, a);
    if (s == kNoState) return false;
  }
  return accepting[s];
}

std::size_t dfa_count_capped(const Dfa& d, std::size_t cap) {
  auto useful = useful_states(d);
  if (d.num_states() == 0 || !useful[0]) return 0;
  auto order = useful_topo_order(d, useful);
  if (!order) return cap;  // a useful cycle pumps infinitely many words
  std::vector<std::size_t> paths(d.num_states(), 0);
  paths[0] = 1;
  std::size_t total = 0;
  for (State s : *order) {
    if (d.accepting[s]) total = std::min(cap, total + paths[s]);
    for (Symbol a = 0; a < d.alphabet_size; ++a) {
      State t = d.step(s, a);
      if (t != kNoState && useful[t]) paths[t] = std::min(cap, paths[t] + paths[s]);
    }
  }
  return std::min(total, cap);
}

std::vector<Word> dfa_first_words(const Dfa& d, std::size_t k) {
  std::vector<Word> out;
  if (k == 0 || d.num_states() == 0) return out;
  auto useful = useful_states(d);
  if (!useful[0]) return out;
  const bool finite = useful_topo_order(d, useful).has_value();
  const std::size_t n = d.num_states();
  const std::size_t useful_count = std::count(useful.begin(), useful.end(), true);

  // exact[r][s]: an accepting state is reachable from s in exactly r steps.
  std::vector<std::vector<bool>> exact;
  exact.push_back(d.accepting);
  for (std::size_t len = 0;; ++len) {
    if (finite && len >= useful_count) break;
    while (exact.size() <= len) {
      const auto& prev = exact.back();
      std::vector<bool> cur(n, false);
      for (State s = 0; s < n; ++s) {
        if (!useful[s]) continue;
        for (Symbol a = 0; a < d.alphabet_size && !cur[s]; ++a) {
          State t = d.step(s, a);
          if (t != kNoState && prev[t]) cur[s] = true;
        }
      }
      exact.push_back(std::move(cur));
    }
    if (!exact[len][0]) continue;
    Word w;
    // Depth-first in symbol order yields words of this length lexicographically.
    auto dfs = [&](auto&& self, State s) -> void {
      if (out.size() >= k) return;
      if (w.size() == len) {
        out.push_back(w);
        return;
      }
      std::size_t remaining = len - w.size() - 1;
      for (Symbol a = 0; a < d.alphabet_size; ++a) {
        State t = d.step(s, a);
        if (t == kNoState || !exact[remaining][t]) continue;
        w.push_back(a);
        self(self, t);
        w.pop_back();
        if (out.size() >= k) return;
      }
    };
    dfs(dfs, 0);
    if (out.size() >= k) break;
  }
  return out;
}

Nfa::Nfa(Alphabet alphabet, std::size_t num_states, std::vector<NfaTransition> transitions,
         std::vector<State> initial, std::vector<State> accepting,
         std::vector<std::string> state_names)
    : alphabet_(std::move(alphabet)),
      num_states_(num_states),
      transitions_(std::move(transitions)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      state_names_(std::move(state_names)),
      det_(std::make_shared<DetCache>()) {
  for (const auto& t : transitions_) {
    if (t.src >= num_states_ || t.dst >= num_states_)
      throw Error("NFA transition endpoint is not a declared state");
    if (t.label != kEpsilon && t.label >= alphabet_.size())
      throw Error("NFA transition label is not a declared symbol");
  }
  for (State s : initial_)
    if (s >= num_states_) throw Error("NFA initial state is not a declared state");
  for (State s : accepting_)
    if (s >= num_states_) throw Error("NFA accepting state is not a declared state");
  if (!state_names_.empty() && state_names_.size() != num_states_)
    throw Error("NFA state name count does not match state count");

  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
  std::sort(accepting_.begin(), accepting_.end());
  accepting_.erase(std::unique(accepting_.begin(), accepting_.end()), accepting_.end());

  offsets_.assign(num_states_ + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.src + 1];
  for (std::size_t i = 0; i < num_states_; ++i) offsets_[i + 1] += offsets_[i];
  accepting_mask_.assign(num_states_, false);
  for (State s : accepting_) accepting_mask_[s] = true;
}

std::string Nfa::state_name(State s) const {
  if (!state_names_.empty()) return state_names_.at(s);
  return "q" + std::to_string(s);
}

std::vector<State> Nfa::closure(std::vector<State> states) const {
  std::vector<bool> seen(num_states_, false);
  std::vector<State> stack;
  for (State s : states) {
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  states.clear();
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    states.push_back(s);
    auto range = out(s);
    // kEpsilon is the largest label, so empty moves sort last.
    auto it = std::lower_bound(range.begin(), range.end(), NfaTransition{s, kEpsilon, 0});
    for (; it != range.end(); ++it) {
      const auto& t = *it;
      if (!seen[t.dst]) {
        seen[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

std::vector<State> Nfa::post(const std::vector<State>& closed, Symbol a) const {
  std::vector<State> next;
  for (State s : closed) {
    auto range = out(s);
    auto it = std::lower_bound(range.begin(), range.end(), NfaTransition{s, a, 0});
    for (; it != range.end() && it->label == a; ++it) next.push_back(it->dst);
  }
  return closure(std::move(next));
}

bool Nfa::accepts(const Word& w) const {
  auto cur = closure(initial_);
  for (Symbol a : w) {
    if (a >= alphabet_.size()) return false;
    cur = post(cur, a);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](State s) { return accepting_mask_[s]; });
}

const Dfa& Nfa::determinized() const {
  std::call_once(det_->once, [this] {
    Dfa& d = det_->dfa;
    d.alphabet_size = alphabet_.size();
    std::map<std::vector<State>, State> index;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> set) -> State {
      auto [it, inserted] = index.emplace(set, static_cast<State>(subsets.size()));
      if (inserted) {
        subsets.push_back(std::move(set));
        d.next.resize(subsets.size() * d.alphabet_size, kNoState);
      }
      return it->second;
    };
    intern(closure(initial_));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      for (Symbol a = 0; a < d.alphabet_size; ++a) {
        auto next = post(subsets[i], a);
        if (next.empty()) continue;
        State t = intern(std::move(next));
        d.next[i * d.alphabet_size + a] = t;
      }
    }
    d.accepting.resize(subsets.size());
    for (std::size_t i = 0; i < subsets.size(); ++i)
      d.accepting[i] = std::any_of(subsets[i].begin(), subsets[i].end(),
                                   [&](State s) { return accepting_mask_[s]; });
  });
  return det_->dfa;
}

Nfa Nfa::single_word(const Alphabet& alphabet, const Word& w) {
  std::vector<NfaTransition> ts;
  for (std::size_t i = 0; i < w.size(); ++i)
    ts.push_back({static_cast<State>(i), w[i], static_cast<State>(i + 1)});
  return Nfa(alphabet, w.size() + 1, std::move(ts), {0}, {static_cast<State>(w.size())});
}

Nfa Nfa::from_words(const Alphabet& alphabet, const std::vector<Word>& words) {
  // Trie over the words.
  std::vector<NfaTransition> ts;
  std::vector<std::map<Symbol, State>> children(1);
  std::vector<State> accepting;
  for (const auto& w : words) {
    State s = 0;
    for (Symbol a : w) {
      auto it = children[s].find(a);
      if (it == children[s].end()) {
        State t = static_cast<State>(children.size());
        children.emplace_back();
        children[s][a] = t;
        ts.push_back({s, a, t});
        s = t;
      } else {
        s = it->second;
      }
    }
    accepting.push_back(s);
  }
  return Nfa(alphabet, children.size(), std::move(ts), {0}, std::move(accepting));
}

Nfa Nfa::universal(const Alphabet& alphabet) {
  std::vector<NfaTransition> ts;
  for (Symbol a = 0; a < alphabet.size(); ++a) ts.push_back({0, a, 0});
  return Nfa(alphabet, 1, std::move(ts), {0}, {0});
}

Nfa Nfa::empty_language(const Alphabet& alphabet) { return Nfa(alphabet, 1, {}, {0}, {}); }

Nfa Nfa::from_dfa(const Alphabet& alphabet, const Dfa& d) {
  std::vector<NfaTransition> ts;
  std::vector<State> accepting;
  for (State s = 0; s < d.num_states(); ++s) {
    for (Symbol a = 0; a < d.alphabet_size; ++a) {
      State t = d.step(s, a);
      if (t != kNoState) ts.push_back({s, a, t});
    }
    if (d.accepting[s]) accepting.push_back(s);
  }
  std::vector<State> initial;
  if (d.num_states() > 0) initial.push_back(0);
  return Nfa(alphabet, d.num_states(), std::move(ts), std::move(initial), std::move(accepting));
}

bool Nfa::operator==(const Nfa& other) const {
  if (!(alphabet_ == other.alphabet_) || num_states_ != other.num_states_ ||
      transitions_ != other.transitions_ || initial_ != other.initial_ ||
      accepting_ != other.accepting_)
    return false;
  for (State s = 0; s < num_states_; ++s)
    if (state_name(s) != other.state_name(s)) return false;
  return true;
}

Nfa nfa_product(const Nfa& a, const Nfa& b) {
  if (!(a.alphabet() == b.alphabet())) throw Error("nfa_product: alphabet mismatch");
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> pairs;
  std::vector<NfaTransition> ts;
  auto intern = [&](State p, State q) {
    auto [it, inserted] = index.emplace(std::make_pair(p, q), static_cast<State>(pairs.size()));
    if (inserted) pairs.emplace_back(p, q);
    return it->second;
  };
  std::vector<State> initial;
  for (State p : a.initial())
    for (State q : b.initial()) initial.push_back(intern(p, q));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    State src = static_cast<State>(i);
    auto oa = a.out(p);
    auto ob = b.out(q);
    for (const auto& t : oa)
      if (t.label == kEpsilon) ts.push_back({src, kEpsilon, intern(t.dst, q)});
    for (const auto& t : ob)
      if (t.label == kEpsilon) ts.push_back({src, kEpsilon, intern(p, t.dst)});
    for (const auto& ta : oa) {
      if (ta.label == kEpsilon) continue;
      auto lo = std::lower_bound(ob.begin(), ob.end(), NfaTransition{q, ta.label, 0});
      for (; lo != ob.end() && lo->label == ta.label; ++lo)
        ts.push_back({src, ta.label, intern(ta.dst, lo->dst)});
    }
  }
  std::vector<State> accepting;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (a.is_accepting(pairs[i].first) && b.is_accepting(pairs[i].second))
      accepting.push_back(static_cast<State>(i));
  if (pairs.empty()) return Nfa::empty_language(a.alphabet());
  return Nfa(a.alphabet(), pairs.size(), std::move(ts), std::move(initial), std::move(accepting));
}

Nfa nfa_complement(const Nfa& a) {
  const Dfa& d = a.determinized();
  Dfa c;
  c.alphabet_size = d.alphabet_size;
  const std::size_t n = d.num_states();
  const State sink = static_cast<State>(n);
  c.next.assign((n + 1) * c.alphabet_size, sink);
  for (State s = 0; s < n; ++s)
    for (Symbol x = 0; x < c.alphabet_size; ++x) {
      State t = d.step(s, x);
      c.next[s * c.alphabet_size + x] = (t == kNoState) ? sink : t;
    }
  c.accepting.assign(n + 1, true);
  for (State s = 0; s < n; ++s) c.accepting[s] = !d.accepting[s];
  return Nfa::from_dfa(a.alphabet(), c);
}

bool nfa_emptiness(const Nfa& a) {
  std::vector<bool> seen(a.num_states(), false);
  std::vector<State> stack;
  for (State s : a.initial()) {
    if (!seen[s]) {
      seen[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    if (a.is_accepting(s)) return false;
    for (const auto& t : a.out(s)) {
      if (!seen[t.dst]) {
        seen[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }
  return true;
}

bool nfa_count_at_least(const Nfa& a, std::size_t k) {
  if (k == 0) throw Error("nfa_count_at_least: k must be positive");
  return dfa_count_capped(a.determinized(), k) >= k;
}

std::vector<Word> nfa_first_words(const Nfa& a, std::size_t k) {
  return dfa_first_words(a.determinized(), k);
}

std::optional<Word> nfa_shortest_word(const Nfa& a) {
  auto words = nfa_first_words(a, 1);
  if (words.empty()) return std::nullopt;
  return words.front();
}

Nfa nfa_remove_epsilon(const Nfa& a) {
  std::vector<NfaTransition> ts;
  std::vector<State> accepting;
  for (State s = 0; s < a.num_states(); ++s) {
    auto cl = a.closure({s});
    bool acc = false;
    for (State c : cl) {
      acc = acc || a.is_accepting(c);
      for (const auto& t : a.out(c))
        if (t.label != kEpsilon) ts.push_back({s, t.label, t.dst});
    }
    if (acc) accepting.push_back(s);
  }
  return Nfa(a.alphabet(), a.num_states(), std::move(ts), a.initial(), std::move(accepting),
             a.state_names());
}

Nfa nfa_trim(const Nfa& a) {
  const std::size_t n = a.num_states();
  std::vector<bool> reach(n, false), coreach(n, false);
  std::vector<std::vector<State>> rev(n);
  std::vector<State> stack;
  for (State s : a.initial())
    if (!reach[s]) {
      reach[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (const auto& t : a.out(s)) {
      if (!reach[t.dst]) {
        reach[t.dst] = true;
        stack.push_back(t.dst);
      }
    }
  }
  for (const auto& t : a.transitions()) rev[t.dst].push_back(t.src);
  for (State s : a.accepting())
    if (reach[s]) {
      coreach[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : rev[s])
      if (!coreach[p]) {
        coreach[p] = true;
        stack.push_back(p);
      }
  }
  std::vector<State> renum(n, kNoState);
  std::vector<std::string> names;
  State next = 0;
  for (State s = 0; s < n; ++s)
    if (reach[s] && coreach[s]) {
      renum[s] = next++;
      names.push_back(a.state_name(s));
    }
  std::vector<NfaTransition> ts;
  for (const auto& t : a.transitions())
    if (renum[t.src] != kNoState && renum[t.dst] != kNoState)
      ts.push_back({renum[t.src], t.label, renum[t.dst]});
  std::vector<State> initial, accepting;
  for (State s : a.initial())
    if (renum[s] != kNoState) initial.push_back(renum[s]);
  for (State s : a.accepting())
    if (renum[s] != kNoState) accepting.push_back(renum[s]);
  return Nfa(a.alphabet(), next, std::move(ts), std::move(initial), std::move(accepting),
             std::move(names));
}

}  // namespace sakit
