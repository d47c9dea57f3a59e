#include "sakit/set_automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace sakit {

SetAutomaton::SetAutomaton(std::vector<std::string> state_names, Alphabet input, Alphabet work,
                           bool uses_endmarker, std::vector<TransitionRule> rules, State initial,
                           std::vector<State> accepting)
    : state_names_(std::move(state_names)),
      input_(std::move(input)),
      work_(std::move(work)),
      uses_endmarker_(uses_endmarker),
      rules_(std::move(rules)),
      initial_(initial),
      accepting_(std::move(accepting)) {
  const std::size_t n = state_names_.size();
  if (n == 0) throw Error("set automaton needs at least one state");
  if (initial_ >= n) throw Error("initial state is not a declared state");
  for (const auto& name : input_.names())
    if (name == "eps" || name == "end")
      throw Error("input symbol '" + name + "' is reserved");
  for (const auto& name : work_.names())
    if (is_reserved_work_symbol(name))
      throw Error("work symbol '" + name + "' is reserved");
  for (const auto& r : rules_) {
    if (r.src >= n || r.dst >= n) throw Error("rule endpoint is not a declared state");
    if (r.kind == RuleKind::Test) {
      if (r.dst_minus >= n) throw Error("test rule negative branch is not a declared state");
    } else if (r.dst_minus != kNoState) {
      throw Error("only test rules have a negative branch");
    }
    if (r.sym == kEndmarker) {
      if (!uses_endmarker_) throw Error("endmarker rule in an automaton without endmarker");
    } else if (r.sym != kEpsilon && r.sym >= input_.size()) {
      throw Error("rule reads a symbol outside the input alphabet");
    }
    if (r.kind != RuleKind::Write && !r.word.empty())
      throw Error("only write rules carry a word");
    for (Symbol g : r.word)
      if (g >= work_.size()) throw Error("rule writes a symbol outside the work alphabet");
  }
  std::sort(accepting_.begin(), accepting_.end());
  accepting_.erase(std::unique(accepting_.begin(), accepting_.end()), accepting_.end());
  accepting_mask_.assign(n, false);
  for (State s : accepting_) {
    if (s >= n) throw Error("accepting state is not a declared state");
    accepting_mask_[s] = true;
  }
  offsets_.assign(n + 1, 0);
  for (const auto& r : rules_) ++offsets_[r.src + 1];
  for (std::size_t s = 0; s < n; ++s) offsets_[s + 1] += offsets_[s];
  by_src_.resize(rules_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < rules_.size(); ++i) by_src_[fill[rules_[i].src]++] = i;
}

bool SetAutomaton::is_deterministic() const {
  for (State s = 0; s < num_states(); ++s) {
    auto idx = rules_from(s);
    bool has_eps = false;
    std::vector<Symbol> syms;
    for (std::size_t i : idx) {
      if (rules_[i].sym == kEpsilon) has_eps = true;
      syms.push_back(rules_[i].sym);
    }
    if (has_eps && syms.size() > 1) return false;
    std::sort(syms.begin(), syms.end());
    if (std::adjacent_find(syms.begin(), syms.end()) != syms.end()) return false;
  }
  return true;
}

bool SetAutomaton::has_eps_loops() const {
  const std::size_t n = num_states();
  std::vector<int> color(n, 0);
  for (State root = 0; root < n; ++root) {
    if (color[root]) continue;
    // iterative DFS over empty moves: (state, next rule slot, branch)
    std::vector<std::pair<State, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [s, k] = stack.back();
      auto idx = rules_from(s);
      // each test rule contributes two successors, encoded as slots 2i and 2i+1
      if (k >= 2 * idx.size()) {
        color[s] = 2;
        stack.pop_back();
        continue;
      }
      const auto& r = rules_[idx[k / 2]];
      bool second = k % 2 == 1;
      ++k;
      if (r.sym != kEpsilon) continue;
      if (second && r.kind != RuleKind::Test) continue;
      State t = second ? r.dst_minus : r.dst;
      if (color[t] == 1) return true;
      if (color[t] == 0) {
        color[t] = 1;
        stack.push_back({t, 0});
      }
    }
  }
  return false;
}

bool SetAutomaton::operator==(const SetAutomaton& o) const {
  return state_names_ == o.state_names_ && input_ == o.input_ && work_ == o.work_ &&
         uses_endmarker_ == o.uses_endmarker_ && rules_ == o.rules_ && initial_ == o.initial_ &&
         accepting_ == o.accepting_;
}

SaBuilder::SaBuilder(Alphabet input, Alphabet work, bool uses_endmarker)
    : input_(std::move(input)), work_(std::move(work)), uses_endmarker_(uses_endmarker) {}

State SaBuilder::state(const std::string& name) {
  auto [it, inserted] = index_.emplace(name, static_cast<State>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

void SaBuilder::accept(const std::string& name) { accepting_.push_back(state(name)); }

Symbol SaBuilder::symbol(const std::string& sym) const {
  if (sym == "eps") return kEpsilon;
  if (sym == "end") return kEndmarker;
  return input_.id(sym);
}

void SaBuilder::write(const std::string& src, const std::string& sym, const Word& word,
                      const std::string& dst) {
  rules_.push_back({RuleKind::Write, state(src), symbol(sym), state(dst), kNoState, word});
}

void SaBuilder::write(const std::string& src, const std::string& sym, const std::string& word,
                      const std::string& dst) {
  write(src, sym, work_.parse_word(word), dst);
}

void SaBuilder::in(const std::string& src, const std::string& sym, const std::string& dst) {
  rules_.push_back({RuleKind::In, state(src), symbol(sym), state(dst), kNoState, {}});
}

void SaBuilder::out(const std::string& src, const std::string& sym, const std::string& dst) {
  rules_.push_back({RuleKind::Out, state(src), symbol(sym), state(dst), kNoState, {}});
}

void SaBuilder::test(const std::string& src, const std::string& sym, const std::string& plus,
                     const std::string& minus) {
  State s = state(src);
  Symbol a = symbol(sym);
  State p = state(plus);
  State m = state(minus);
  rules_.push_back({RuleKind::Test, s, a, p, m, {}});
}

SetAutomaton SaBuilder::build() const {
  if (names_.empty()) throw Error("builder has no states");
  return SetAutomaton(names_, input_, work_, uses_endmarker_, rules_, initial_, accepting_);
}

Configuration initial_configuration(const SetAutomaton& sa, const Word& w) {
  for (Symbol a : w)
    if (a >= sa.input_alphabet().size()) throw Error("input symbol outside the input alphabet");
  Configuration c;
  c.state = sa.initial();
  c.remaining = w;
  if (sa.uses_endmarker()) c.remaining.push_back(kEndmarker);
  return c;
}

bool is_accepting(const SetAutomaton& sa, const Configuration& c) {
  return c.remaining.empty() && sa.is_accepting(c.state);
}

bool rule_enabled(const SetAutomaton&, const Configuration& c, const TransitionRule& r) {
  if (r.src != c.state) return false;
  if (r.sym == kEpsilon) return true;
  return !c.remaining.empty() && c.remaining.front() == r.sym;
}

namespace {

// Applies an enabled rule in place; returns the taken test branch.
bool apply(const TransitionRule& r, State& state, Word& tape, std::set<Word>& set,
           std::vector<QueryBlock>* blocks) {
  bool positive = false;
  switch (r.kind) {
    case RuleKind::Write:
      tape.insert(tape.end(), r.word.begin(), r.word.end());
      state = r.dst;
      return false;
    case RuleKind::In:
      if (blocks) blocks->push_back({tape, Op::In});
      set.insert(tape);
      state = r.dst;
      break;
    case RuleKind::Out:
      if (blocks) blocks->push_back({tape, Op::Out});
      set.erase(tape);
      state = r.dst;
      break;
    case RuleKind::Test:
      positive = set.contains(tape);
      if (blocks) blocks->push_back({tape, positive ? Op::TestPlus : Op::TestMinus});
      state = positive ? r.dst : r.dst_minus;
      break;
  }
  tape.clear();
  return positive;
}

Word with_endmarker(const SetAutomaton& sa, const Word& w) {
  for (Symbol a : w)
    if (a >= sa.input_alphabet().size()) throw Error("input symbol outside the input alphabet");
  Word in = w;
  if (sa.uses_endmarker()) in.push_back(kEndmarker);
  return in;
}

struct Snapshot {
  State state;
  std::size_t pos;
  Word tape;
  std::set<Word> set;
  bool operator==(const Snapshot&) const = default;
};

}  // namespace

Configuration step(const SetAutomaton& sa, const Configuration& c, const TransitionRule& r) {
  if (r.src != c.state) throw Error("rule source does not match the current state");
  if (r.sym != kEpsilon && (c.remaining.empty() || c.remaining.front() != r.sym))
    throw Error("rule symbol does not match the next input symbol");
  (void)sa;
  Configuration next = c;
  if (r.sym != kEpsilon) next.remaining.erase(next.remaining.begin());
  apply(r, next.state, next.tape, next.set, nullptr);
  return next;
}

DsaResult run_dsa(const SetAutomaton& sa, const Word& w, std::size_t budget, bool record_trace) {
  if (!sa.is_deterministic()) throw Error("run_dsa requires a deterministic set automaton");
  const Word input = with_endmarker(sa, w);
  const std::size_t width = sa.input_alphabet().size() + 2;  // symbols, endmarker, epsilon
  auto column = [&](Symbol a) -> std::size_t {
    if (a == kEpsilon) return width - 1;
    if (a == kEndmarker) return width - 2;
    return a;
  };
  std::vector<std::size_t> table(sa.num_states() * width, SIZE_MAX);
  for (std::size_t i = 0; i < sa.rules().size(); ++i) {
    const auto& r = sa.rule(i);
    table[r.src * width + column(r.sym)] = i;
  }

  DsaResult res;
  Snapshot cur{sa.initial(), 0, {}, {}};
  Snapshot checkpoint = cur;
  std::size_t power = 1, lam = 0;
  std::vector<QueryBlock>* blocks = record_trace ? &res.trace.blocks : nullptr;
  while (true) {
    if (cur.pos == input.size() && sa.is_accepting(cur.state)) {
      res.verdict = DsaVerdict::Accept;
      res.trace.accepted = true;
      return res;
    }
    std::size_t ri = table[cur.state * width + column(kEpsilon)];
    if (ri == SIZE_MAX && cur.pos < input.size())
      ri = table[cur.state * width + column(input[cur.pos])];
    if (ri == SIZE_MAX) {
      res.verdict = DsaVerdict::Reject;
      return res;
    }
    if (res.steps >= budget) {
      res.verdict = DsaVerdict::BudgetExceeded;
      return res;
    }
    const auto& r = sa.rule(ri);
    bool consumed = r.sym != kEpsilon;
    if (consumed) ++cur.pos;
    bool positive = apply(r, cur.state, cur.tape, cur.set, blocks);
    ++res.steps;
    if (record_trace) res.trace.steps.push_back({ri, positive});

    if (consumed) {
      checkpoint = cur;
      power = 1;
      lam = 0;
      continue;
    }
    // Brent: the run is deterministic, so a repeated configuration cycles forever.
    if (cur.state == checkpoint.state && cur.tape.size() == checkpoint.tape.size() &&
        cur == checkpoint) {
      res.verdict = DsaVerdict::Reject;
      return res;
    }
    if (++lam == power) {
      checkpoint = cur;
      power *= 2;
      lam = 0;
    }
  }
}

namespace {

std::string snapshot_key(const Snapshot& s) {
  std::string key;
  auto put = [&](std::uint64_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
  put(s.state);
  put(s.pos);
  put(s.tape.size());
  for (Symbol g : s.tape) put(g);
  put(s.set.size());
  for (const auto& u : s.set) {
    put(u.size());
    for (Symbol g : u) put(g);
  }
  return key;
}

}  // namespace

NsaResult run_nsa_bounded(const SetAutomaton& sa, const Word& w, std::size_t budget) {
  const Word input = with_endmarker(sa, w);
  struct Node {
    Snapshot snap;
    std::size_t parent;
    RuleStep via;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  NsaResult res;
  res.exhausted = true;

  auto finish = [&](std::size_t idx) {
    RunCertificate cert;
    for (std::size_t i = idx; i != 0; i = nodes[i].parent) cert.push_back(nodes[i].via);
    std::reverse(cert.begin(), cert.end());
    res.found = true;
    res.exhausted = false;
    res.trace = replay_certificate(sa, w, cert);
    res.certificate = std::move(cert);
  };

  nodes.push_back({{sa.initial(), 0, {}, {}}, 0, {}, 0});
  seen.emplace(snapshot_key(nodes[0].snap), 0);
  if (input.empty() && sa.is_accepting(sa.initial())) {
    finish(0);
    return res;
  }
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    const Snapshot here = nodes[idx].snap;
    const std::size_t depth = nodes[idx].depth;
    for (std::size_t ri : sa.rules_from(here.state)) {
      const auto& r = sa.rule(ri);
      bool consume = r.sym != kEpsilon;
      if (consume && (here.pos >= input.size() || input[here.pos] != r.sym)) continue;
      if (depth >= budget) {
        res.exhausted = false;
        break;
      }
      Snapshot next = here;
      if (consume) ++next.pos;
      bool positive = apply(r, next.state, next.tape, next.set, nullptr);
      auto [it, inserted] = seen.emplace(snapshot_key(next), nodes.size());
      if (!inserted) continue;
      bool accept = next.pos == input.size() && sa.is_accepting(next.state);
      nodes.push_back({std::move(next), idx, {ri, positive}, depth + 1});
      if (accept) {
        finish(nodes.size() - 1);
        return res;
      }
      queue.push_back(nodes.size() - 1);
    }
  }
  return res;
}

RunTrace replay_certificate(const SetAutomaton& sa, const Word& w, const RunCertificate& cert) {
  RunTrace trace;
  Word input;
  try {
    input = with_endmarker(sa, w);
  } catch (const Error&) {
    return trace;
  }
  Snapshot cur{sa.initial(), 0, {}, {}};
  for (const auto& st : cert) {
    if (st.rule >= sa.rules().size()) return trace;
    const auto& r = sa.rule(st.rule);
    if (r.src != cur.state) return trace;
    if (r.sym != kEpsilon) {
      if (cur.pos >= input.size() || input[cur.pos] != r.sym) return trace;
      ++cur.pos;
    }
    bool positive = apply(r, cur.state, cur.tape, cur.set, &trace.blocks);
    if (r.kind == RuleKind::Test && positive != st.test_positive) return trace;
    trace.steps.push_back(st);
  }
  trace.accepted = cur.pos == input.size() && sa.is_accepting(cur.state);
  return trace;
}

bool verify_certificate(const SetAutomaton& sa, const Word& w, const RunCertificate& cert) {
  return replay_certificate(sa, w, cert).accepted;
}

Protocol extract_run_protocol(const SetAutomaton& sa, const RunTrace& trace) {
  if (!trace.accepted) throw Error("trace is not from an accepting run");
  return Protocol{sa.work_alphabet(), trace.blocks};
}

}  // namespace sakit
