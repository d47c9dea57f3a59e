#include "sakit/normalform.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace sakit {

namespace {

class NameTable {
 public:
  explicit NameTable(const std::vector<std::string>& taken)
      : used_(taken.begin(), taken.end()) {}
  std::string fresh(std::string base) {
    while (used_.contains(base)) base += '\'';
    used_.insert(base);
    return base;
  }

 private:
  std::unordered_set<std::string> used_;
};

bool is_binary(const Alphabet& g) {
  return g.size() == 2 && g.name(0) == "a" && g.name(1) == "b";
}

bool final_requirement(const SetAutomaton& sa) {
  if (sa.is_accepting(sa.initial())) return false;
  for (const auto& r : sa.rules())
    if (r.kind == RuleKind::Write && sa.is_accepting(r.dst)) return false;
  return true;
}

SetAutomaton drop_endmarker(const SetAutomaton& sa) {
  const auto n = static_cast<State>(sa.num_states());
  std::vector<std::string> names = sa.state_names();
  NameTable table(names);
  for (State s = 0; s < n; ++s) names.push_back(table.fresh(sa.state_name(s) + "'"));
  auto late = [n](State s) { return s == kNoState ? kNoState : s + n; };
  std::vector<TransitionRule> rules;
  for (const auto& r : sa.rules()) {
    if (r.sym == kEndmarker) {
      TransitionRule e = r;
      e.sym = kEpsilon;
      e.dst = late(r.dst);
      e.dst_minus = late(r.dst_minus);
      rules.push_back(e);
      continue;
    }
    rules.push_back(r);
    if (r.sym == kEpsilon) {
      TransitionRule e = r;
      e.src = late(r.src);
      e.dst = late(r.dst);
      e.dst_minus = late(r.dst_minus);
      rules.push_back(e);
    }
  }
  std::vector<State> acc;
  for (State s : sa.accepting()) acc.push_back(late(s));
  return SetAutomaton(std::move(names), sa.input_alphabet(), sa.work_alphabet(), false,
                      std::move(rules), sa.initial(), std::move(acc));
}

SetAutomaton binary_encode(const SetAutomaton& sa) {
  const Symbol a = 0, b = 1;
  std::vector<TransitionRule> rules = sa.rules();
  for (auto& r : rules) {
    Word enc;
    for (Symbol g : r.word) {
      enc.push_back(b);
      enc.insert(enc.end(), g + 1, a);
      enc.push_back(b);
    }
    r.word = std::move(enc);
  }
  return SetAutomaton(sa.state_names(), sa.input_alphabet(), binary_gamma(), sa.uses_endmarker(),
                      std::move(rules), sa.initial(), sa.accepting());
}

SetAutomaton final_dummy_test(const SetAutomaton& sa) {
  std::vector<std::string> names = sa.state_names();
  NameTable table(names);
  const auto f = static_cast<State>(names.size());
  names.push_back(table.fresh("accept"));
  std::vector<TransitionRule> rules = sa.rules();
  for (State s : sa.accepting()) rules.push_back({RuleKind::Test, s, kEpsilon, f, f, {}});
  return SetAutomaton(std::move(names), sa.input_alphabet(), sa.work_alphabet(),
                      sa.uses_endmarker(), std::move(rules), sa.initial(), {f});
}

}  // namespace

bool satisfies_requirements(const SetAutomaton& sa) {
  return !sa.uses_endmarker() && is_binary(sa.work_alphabet()) && final_requirement(sa);
}

SetAutomaton normalize_requirements(const SetAutomaton& sa) {
  SetAutomaton out = sa;
  if (out.uses_endmarker()) out = drop_endmarker(out);
  if (!is_binary(out.work_alphabet())) out = binary_encode(out);
  if (!final_requirement(out)) out = final_dummy_test(out);
  return out;
}

SetAutomaton to_anf(const SetAutomaton& sa) {
  enum Mark { kWrite, kIn, kOut, kTestPlus, kTestMinus, kInit };
  static constexpr const char* kMarkName[] = {"write", "in", "out", "test+", "test-"};
  std::map<std::pair<State, int>, State> index;
  std::vector<std::pair<State, int>> keys;
  std::vector<std::string> names;
  auto node = [&](State s, int mark) {
    auto [it, inserted] = index.emplace(std::pair{s, mark}, static_cast<State>(keys.size()));
    if (inserted) keys.push_back({s, mark});
    return it->second;
  };
  node(sa.initial(), kInit);
  std::vector<TransitionRule> rules;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    State s = keys[k].first;
    for (std::size_t ri : sa.rules_from(s)) {
      TransitionRule r = sa.rule(ri);
      r.src = static_cast<State>(k);
      switch (r.kind) {
        case RuleKind::Write: r.dst = node(r.dst, kWrite); break;
        case RuleKind::In: r.dst = node(r.dst, kIn); break;
        case RuleKind::Out: r.dst = node(r.dst, kOut); break;
        case RuleKind::Test:
          r.dst = node(r.dst, kTestPlus);
          r.dst_minus = node(r.dst_minus, kTestMinus);
          break;
      }
      rules.push_back(std::move(r));
    }
  }
  NameTable table({});
  std::vector<State> acc;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto [s, mark] = keys[k];
    names.push_back(table.fresh(mark == kInit ? "init" : sa.state_name(s) + "/" + kMarkName[mark]));
    if (sa.is_accepting(s)) acc.push_back(static_cast<State>(k));
  }
  return SetAutomaton(std::move(names), sa.input_alphabet(), sa.work_alphabet(),
                      sa.uses_endmarker(), std::move(rules), 0, std::move(acc));
}

bool eps_graph_acyclic(const SetAutomaton& sa) { return !sa.has_eps_loops(); }

namespace {

// Rewrites a deterministic automaton so that tracked words are handled in the
// finite control. Every node is (state, membership of tracked words, tape),
// the tape being exact while it is a prefix of a tracked word.
class EpsLoopRemover {
 public:
  explicit EpsLoopRemover(const SetAutomaton& sa) : sa_(sa) {
    eps_rule_.assign(sa.num_states(), SIZE_MAX);
    for (std::size_t i = 0; i < sa.rules().size(); ++i)
      if (sa.rule(i).sym == kEpsilon) eps_rule_[sa.rule(i).src] = i;
    collect_tracked();
  }

  EpsLoopRemoval run() {
    node({sa_.initial(), std::vector<bool>(tracked_.size(), false), Word{}});
    for (std::size_t k = 0; k < nodes_.size(); ++k) expand(k);
    EpsLoopRemoval out{
        SetAutomaton(names_, sa_.input_alphabet(), sa_.work_alphabet(), sa_.uses_endmarker(),
                     rules_, 0, accepting_),
        tracked_, origin_, membership_};
    return out;
  }

 private:
  using Tape = std::optional<Word>;  // nullopt: not a prefix of any tracked word
  struct Node {
    State state;
    std::vector<bool> member;
    Tape tape;
    auto operator<=>(const Node&) const = default;
  };

  void collect_tracked() {
    std::set<State> starts{sa_.initial()};
    for (const auto& r : sa_.rules())
      if (r.is_query()) {
        starts.insert(r.dst);
        if (r.kind == RuleKind::Test) starts.insert(r.dst_minus);
      }
    std::set<Word> words;
    for (State s : starts) {
      Word y;
      std::set<State> seen;
      State cur = s;
      while (eps_rule_[cur] != SIZE_MAX && seen.insert(cur).second) {
        const auto& r = sa_.rule(eps_rule_[cur]);
        if (r.is_query()) {
          words.insert(y);
          break;
        }
        y.insert(y.end(), r.word.begin(), r.word.end());
        cur = r.dst;
      }
    }
    tracked_.assign(words.begin(), words.end());
    for (const auto& w : tracked_)
      for (std::size_t i = 0; i <= w.size(); ++i) prefixes_.insert(Word(w.begin(), w.begin() + i));
  }

  Tape extend(const Tape& t, const Word& y) const {
    if (!t) return std::nullopt;
    Word w = *t;
    w.insert(w.end(), y.begin(), y.end());
    if (!prefixes_.contains(w)) return std::nullopt;
    return w;
  }

  std::optional<std::size_t> tracked_index(const Tape& t) const {
    if (!t) return std::nullopt;
    auto it = std::lower_bound(tracked_.begin(), tracked_.end(), *t);
    if (it == tracked_.end() || *it != *t) return std::nullopt;
    return static_cast<std::size_t>(it - tracked_.begin());
  }

  State node(const Node& n) {
    auto [it, inserted] = index_.emplace(n, static_cast<State>(nodes_.size()));
    if (inserted) {
      nodes_.push_back(n);
      std::string name = sa_.state_name(n.state) + "[";
      for (bool b : n.member) name += b ? '1' : '0';
      name += '|';
      name += n.tape ? (n.tape->empty() ? std::string("-") : sa_.work_alphabet().format_word(*n.tape))
                     : std::string("*");
      name += ']';
      names_.push_back(std::move(name));
      origin_.push_back(n.state);
      membership_.push_back(n.member);
    }
    return it->second;
  }

  State bridge() {
    auto s = static_cast<State>(names_.size());
    names_.push_back("bridge" + std::to_string(bridges_++));
    origin_.push_back(kNoState);
    membership_.push_back({});
    // keeps nodes_ aligned with state ids
    nodes_.push_back({kNoState, {}, std::nullopt});
    return s;
  }

  // Resolves a query on a tracked word: returns the successor state and updates membership.
  State resolve(const TransitionRule& r, std::size_t idx, std::vector<bool>& member) const {
    switch (r.kind) {
      case RuleKind::In: member[idx] = true; return r.dst;
      case RuleKind::Out: member[idx] = false; return r.dst;
      case RuleKind::Test: return member[idx] ? r.dst : r.dst_minus;
      case RuleKind::Write: break;
    }
    return r.dst;
  }

  void add_rule(RuleKind kind, State src, Symbol sym, State dst, State dst_minus, Word word) {
    rules_.push_back({kind, src, sym, dst, dst_minus, std::move(word)});
  }

  // Emits the rule of a query applied in node `src`, exact on tracked words.
  void emit_query(State src, Symbol sym, const TransitionRule& r, const Node& n) {
    if (auto idx = tracked_index(n.tape)) {
      auto member = n.member;
      State to = node({resolve(r, *idx, member), member, Word{}});
      add_rule(RuleKind::Test, src, sym, to, to, {});
      return;
    }
    if (r.kind == RuleKind::Test) {
      State plus = node({r.dst, n.member, Word{}});
      State minus = node({r.dst_minus, n.member, Word{}});
      add_rule(RuleKind::Test, src, sym, plus, minus, {});
    } else {
      add_rule(r.kind, src, sym, node({r.dst, n.member, Word{}}), kNoState, {});
    }
  }

  void expand(std::size_t k) {
    const Node n = nodes_[k];
    if (n.state == kNoState) return;  // bridge, rules already emitted
    const auto src = static_cast<State>(k);
    if (eps_rule_[n.state] == SIZE_MAX) {
      if (sa_.is_accepting(n.state)) accepting_.push_back(src);
      for (std::size_t ri : sa_.rules_from(n.state)) {
        const auto& r = sa_.rule(ri);
        if (r.kind == RuleKind::Write)
          add_rule(RuleKind::Write, src, r.sym, node({r.dst, n.member, extend(n.tape, r.word)}),
                   kNoState, r.word);
        else
          emit_query(src, r.sym, r, n);
      }
      return;
    }
    walk(src, n);
  }

  // Follows the unique chain of empty moves from `n` abstractly.
  void walk(State src, const Node& n) {
    State cur = n.state;
    std::vector<bool> member = n.member;
    Tape tape = n.tape;
    Word pending;
    bool collapsed = false;
    bool accepting = false;
    bool moved = false;
    std::set<Node> seen;
    while (true) {
      accepting = accepting || sa_.is_accepting(cur);
      if (eps_rule_[cur] == SIZE_MAX) break;
      if (!seen.insert({cur, member, tape}).second) {
        if (accepting) accepting_.push_back(src);
        return;  // divergence: no move
      }
      const auto& r = sa_.rule(eps_rule_[cur]);
      if (r.kind == RuleKind::Write) {
        tape = extend(tape, r.word);
        pending.insert(pending.end(), r.word.begin(), r.word.end());
        cur = r.dst;
        moved = true;
        continue;
      }
      auto idx = tracked_index(tape);
      if (!idx) {
        // Only possible before the first query: the tape predates this chain.
        if (accepting) accepting_.push_back(src);
        if (!moved) {
          emit_query(src, kEpsilon, r, n);
        } else {
          add_rule(RuleKind::Write, src, kEpsilon, node({cur, member, tape}), kNoState, pending);
        }
        return;
      }
      cur = resolve(r, *idx, member);
      tape = Word{};
      pending.clear();
      collapsed = true;
    }
    if (accepting) accepting_.push_back(src);
    State target = node({cur, member, tape});
    if (!collapsed) {
      add_rule(RuleKind::Write, src, kEpsilon, target, kNoState, pending);
    } else if (pending.empty()) {
      add_rule(RuleKind::Test, src, kEpsilon, target, target, {});
    } else {
      State via = bridge();
      add_rule(RuleKind::Test, src, kEpsilon, via, via, {});
      add_rule(RuleKind::Write, via, kEpsilon, target, kNoState, pending);
    }
  }

  const SetAutomaton& sa_;
  std::vector<std::size_t> eps_rule_;
  std::vector<Word> tracked_;
  std::set<Word> prefixes_;
  std::map<Node, State> index_;
  std::vector<Node> nodes_;
  std::vector<std::string> names_;
  std::vector<State> origin_;
  std::vector<std::vector<bool>> membership_;
  std::vector<TransitionRule> rules_;
  std::vector<State> accepting_;
  std::size_t bridges_ = 0;
};

}  // namespace

EpsLoopRemoval remove_eps_loops_detailed(const SetAutomaton& dsa) {
  if (!dsa.is_deterministic()) throw Error("remove_eps_loops requires a deterministic automaton");
  if (!dsa.has_eps_loops()) {
    std::vector<State> origin(dsa.num_states());
    for (State s = 0; s < origin.size(); ++s) origin[s] = s;
    return {dsa, {}, std::move(origin), std::vector<std::vector<bool>>(dsa.num_states())};
  }
  return EpsLoopRemover(dsa).run();
}

SetAutomaton remove_eps_loops(const SetAutomaton& dsa) {
  return remove_eps_loops_detailed(dsa).dsa;
}

}  // namespace sakit
