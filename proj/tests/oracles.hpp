// Independent oracles and seeded generators shared by the unit tests and the
// acceptance runner. Nothing here calls the procedure it is used to check.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sakit/emptiness.hpp"
#include "sakit/gallery.hpp"
#include "sakit/nfa.hpp"
#include "sakit/protocol.hpp"
#include "sakit/set_automaton.hpp"

namespace sakit::oracle {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [lo, hi].
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// text = (w#)^n for one w and n >= 1.
inline bool is_repetition(const std::string& text) {
  if (text.empty() || text.back() != '#') return false;
  const std::size_t first = text.find('#');
  const std::string block = text.substr(0, first + 1);
  for (std::size_t pos = 0; pos < text.size(); pos += block.size())
    if (text.compare(pos, block.size(), block) != 0) return false;
  return text.size() % block.size() == 0;
}

// ---------------------------------------------------------------------------
// Turing machines on a bounded tape

/// Cells 1..2n, head on cell n, blank 0. Falling off the tape, a missing
/// move, or a repeated configuration rejects.
inline bool simulate_tm(const TmDescription& tm, std::size_t n) {
  std::vector<int> tape(2 * n + 1, 0);
  std::size_t head = n, q = tm.initial;
  std::set<std::tuple<std::size_t, std::size_t, std::vector<int>>> seen;
  while (true) {
    if (tm.accepting.count(q)) return true;
    if (!seen.insert({head, q, tape}).second) return false;
    auto it = tm.delta.find({tape[head], q});
    if (it == tm.delta.end()) return false;
    tape[head] = it->second.write;
    q = it->second.next;
    const long long next = static_cast<long long>(head) + it->second.dir;
    if (next < 1 || next > static_cast<long long>(2 * n)) return false;
    head = static_cast<std::size_t>(next);
  }
}

inline TmDescription tm_immediate_accept() {
  TmDescription tm;
  tm.states = {"q0"};
  tm.accepting = {0};
  return tm;
}

/// Writes 1, moves right, moves back left, accepts iff it reads 1.
inline TmDescription tm_read_back() {
  TmDescription tm;
  tm.states = {"w", "r", "c", "acc", "rej"};
  tm.accepting = {3};
  for (int a : {0, 1}) {
    tm.delta[{a, 0}] = {1, 1, +1};
    tm.delta[{a, 1}] = {a, 2, -1};
    tm.delta[{a, 4}] = {a, 4, 0};
  }
  tm.delta[{1, 2}] = {1, 3, 0};
  tm.delta[{0, 2}] = {0, 4, 0};
  return tm;
}

/// Walks right and left forever between two cells.
inline TmDescription tm_loop() {
  TmDescription tm;
  tm.states = {"l", "r", "acc"};
  tm.accepting = {2};
  for (int a : {0, 1}) {
    tm.delta[{a, 0}] = {a, 1, +1};
    tm.delta[{a, 1}] = {a, 0, -1};
  }
  return tm;
}

/// Flips cells while walking right, accepts after the walk would leave a
/// tape of `steps` cells to the right of the start.
inline TmDescription tm_walker(std::size_t steps) {
  TmDescription tm;
  for (std::size_t i = 0; i <= steps; ++i) tm.states.push_back("s" + std::to_string(i));
  tm.accepting = {steps};
  for (std::size_t i = 0; i < steps; ++i)
    for (int a : {0, 1}) tm.delta[{a, i}] = {1 - a, i + 1, +1};
  return tm;
}

inline TmDescription random_tm(Rng& rng, std::size_t states) {
  TmDescription tm;
  for (std::size_t i = 0; i < states; ++i) tm.states.push_back("q" + std::to_string(i));
  tm.accepting = {states - 1};
  for (std::size_t q = 0; q + 1 < states; ++q)
    for (int a : {0, 1})
      tm.delta[{a, q}] = {rng.uniform(0, 1), static_cast<std::size_t>(rng.uniform(0, static_cast<int>(states) - 1)),
                          rng.uniform(-1, 1)};
  return tm;
}

// ---------------------------------------------------------------------------
// Circuit value programs

inline bool cvp_value(const CvpProgram& p) {
  std::vector<int> v(64, 0);
  int last = 0;
  for (const auto& a : p.assignments) {
    switch (a.kind) {
      case CvpAssignment::Kind::And: last = v[a.lhs] & v[a.rhs]; break;
      case CvpAssignment::Kind::Or: last = v[a.lhs] | v[a.rhs]; break;
      case CvpAssignment::Kind::Not: last = 1 - v[a.lhs]; break;
      case CvpAssignment::Kind::One: last = 1; break;
      case CvpAssignment::Kind::Zero: last = 0; break;
    }
    v[a.target] = last;
  }
  return last == 1;
}

/// Up to max_assign assignments over variables 1..max_vars; reassignments and
/// reads of unassigned variables are allowed.
inline CvpProgram random_cvp(Rng& rng, int max_assign = 12, int max_vars = 6) {
  CvpProgram p;
  const int n = rng.uniform(1, max_assign);
  for (int i = 0; i < n; ++i) {
    CvpAssignment a{static_cast<CvpAssignment::Kind>(rng.uniform(0, 4)),
                    static_cast<std::size_t>(rng.uniform(1, max_vars))};
    a.lhs = static_cast<std::size_t>(rng.uniform(1, max_vars));
    a.rhs = static_cast<std::size_t>(rng.uniform(1, max_vars));
    if (a.kind == CvpAssignment::Kind::Not) a.rhs = 0;
    if (a.kind == CvpAssignment::Kind::One || a.kind == CvpAssignment::Kind::Zero) a.lhs = a.rhs = 0;
    p.assignments.push_back(a);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Satisfiability

/// Semantics of the variable-list encoding: each list entry contributes one
/// guessed pair (x, b); a literal holds if the guessed pairs support it.
inline bool sasat_semantics(const std::vector<std::string>& list, const CnfFormula& phi) {
  const std::size_t n = list.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<std::pair<std::string, bool>> pairs;
    for (std::size_t i = 0; i < n; ++i) pairs.insert({list[i], ((mask >> i) & 1u) != 0});
    bool all = true;
    for (const auto& clause : phi.clauses) {
      bool sat = false;
      for (const auto& lit : clause) {
        const bool has_true = pairs.count({lit.var, true}) > 0;
        const bool has_false = pairs.count({lit.var, false}) > 0;
        sat = sat || (lit.negated ? (has_false || !has_true) : has_true);
      }
      all = all && sat;
    }
    if (all) return true;
  }
  return false;
}

struct SatInstance {
  std::vector<std::string> list;
  CnfFormula phi;
};

inline SatInstance random_sat(Rng& rng, int max_vars = 4, int max_clauses = 4) {
  SatInstance s;
  const int nv = rng.uniform(1, max_vars);
  std::vector<std::string> vars;
  for (int v = 1; v <= nv; ++v) vars.push_back(variable_code(static_cast<std::size_t>(v)));
  const int nc = rng.uniform(1, max_clauses);
  for (int c = 0; c < nc; ++c) {
    Clause cl;
    for (int l = 0; l < 3; ++l) cl.push_back({rng.pick(vars), rng.coin()});
    s.phi.clauses.push_back(cl);
  }
  // omissions and duplicates
  for (const auto& v : vars) {
    const int r = rng.uniform(0, 5);
    if (r == 0) continue;
    s.list.push_back(v);
    if (r == 1) s.list.push_back(v);
  }
  std::shuffle(s.list.begin(), s.list.end(), std::mt19937(static_cast<unsigned>(rng.uniform(0, 1 << 20))));
  return s;
}

// ---------------------------------------------------------------------------
// Protocols

inline std::vector<Word> words_up_to(std::size_t alphabet_size, std::size_t len) {
  return all_words(alphabet_size, len);
}

/// Every protocol with exactly `blocks` blocks over the given words.
inline std::vector<Protocol> all_protocols(const Alphabet& gamma, const std::vector<Word>& words,
                                           std::size_t blocks) {
  std::vector<Protocol> out{Protocol{gamma, {}}};
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<Protocol> next;
    for (const auto& p : out)
      for (const auto& w : words)
        for (Op op : {Op::In, Op::Out, Op::TestPlus, Op::TestMinus}) {
          Protocol q = p;
          q.blocks.push_back({w, op});
          next.push_back(std::move(q));
        }
    out = std::move(next);
  }
  return out;
}

/// NFA over the protocol alphabet accepting exactly the given protocols.
inline Nfa protocols_nfa(const ProtocolAlphabet& pa, const std::vector<Protocol>& ps) {
  std::vector<Word> words;
  for (const auto& p : ps) words.push_back(protocol_to_word(p, pa));
  return Nfa::from_words(pa.symbols, words);
}

/// Random NFA over the protocol alphabet of {a,b}. Transitions favour the
/// block shape so that protocols are reasonably likely.
inline Nfa random_protocol_nfa(Rng& rng, std::size_t states) {
  const ProtocolAlphabet pa(binary_gamma());
  std::vector<NfaTransition> ts;
  const int n = static_cast<int>(states);
  const int count = rng.uniform(n, 3 * n + 2);
  for (int i = 0; i < count; ++i) {
    const int r = rng.uniform(0, 9);
    Symbol label;
    if (r < 3)
      label = pa.hash;
    else if (r < 6)
      label = static_cast<Symbol>(rng.uniform(0, 1));
    else
      label = static_cast<Symbol>(pa.in + static_cast<Symbol>(rng.uniform(0, 3)));
    ts.push_back({static_cast<State>(rng.uniform(0, n - 1)), label, static_cast<State>(rng.uniform(0, n - 1))});
  }
  std::vector<State> acc;
  for (State s = 0; s < states; ++s)
    if (rng.coin(0.4)) acc.push_back(s);
  if (acc.empty()) acc.push_back(static_cast<State>(n - 1));
  return Nfa(pa.symbols, states, ts, {0}, acc);
}

/// Random NFA over {a,b} (or a supplied alphabet) with at most `states` states.
inline Nfa random_nfa(Rng& rng, const Alphabet& alphabet, std::size_t states, double density = 0.35) {
  std::vector<NfaTransition> ts;
  for (State s = 0; s < states; ++s)
    for (Symbol a = 0; a < alphabet.size(); ++a)
      for (State d = 0; d < states; ++d)
        if (rng.coin(density)) ts.push_back({s, a, d});
  std::vector<State> acc;
  for (State s = 0; s < states; ++s)
    if (rng.coin(0.4)) acc.push_back(s);
  if (acc.empty()) acc.push_back(static_cast<State>(rng.uniform(0, static_cast<int>(states) - 1)));
  return Nfa(alphabet, states, ts, {0}, acc);
}

/// Family of nonempty random languages over {a,b}.
inline QueryLanguageFamily random_family(Rng& rng, std::size_t n, std::size_t max_states) {
  std::vector<Nfa> langs;
  while (langs.size() < n) {
    Nfa a = random_nfa(rng, binary_gamma(), static_cast<std::size_t>(rng.uniform(1, static_cast<int>(max_states))));
    if (!nfa_emptiness(a)) langs.push_back(std::move(a));
  }
  return QueryLanguageFamily::from_nfas(binary_gamma(), langs);
}

/// Membership by enumeration in the standalone automaton of member i.
inline std::vector<Word> family_words(const QueryLanguageFamily& fam, std::size_t i, std::size_t k) {
  return nfa_first_words(fam.language(i), k);
}

/// A random correct typed protocol: each block picks a language and one of its
/// first few words; test results follow the replayed set.
inline TypedProtocol random_typed_protocol(Rng& rng, const QueryLanguageFamily& fam, std::size_t blocks) {
  TypedProtocol p{Protocol{fam.gamma(), {}}, {}};
  std::set<Word> set;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(fam.size()) - 1));
    const auto words = family_words(fam, i, 4);
    const Word u = rng.pick(words);
    Op op;
    switch (rng.uniform(0, 2)) {
      case 0: op = Op::In; break;
      case 1: op = Op::Out; break;
      default: op = set.count(u) ? Op::TestPlus : Op::TestMinus; break;
    }
    if (op == Op::In) set.insert(u);
    if (op == Op::Out) set.erase(u);
    p.protocol.blocks.push_back({u, op});
    p.types.push_back(i);
  }
  return p;
}

/// min(|L(a_1) ∩ ... ∩ L(a_m)|, cap) by an explicit joint subset
/// construction and per-length path counting. With D subset states, two
/// accepted words (if any) have length below 2D.
inline std::size_t intersection_count(const std::vector<Nfa>& nfas, std::size_t cap) {
  using Joint = std::vector<std::vector<State>>;
  auto closure = [](const Nfa& a, std::vector<State> s) {
    std::set<State> seen(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
      for (const auto& t : a.transitions())
        if (t.src == s[i] && t.label == kEpsilon && seen.insert(t.dst).second) s.push_back(t.dst);
    return std::vector<State>(seen.begin(), seen.end());
  };
  const std::size_t sigma = nfas.front().alphabet().size();
  std::map<Joint, std::size_t> index;
  std::vector<Joint> states;
  std::vector<std::vector<std::optional<std::size_t>>> next;
  auto intern = [&](const Joint& j) {
    auto [it, ins] = index.emplace(j, states.size());
    if (ins) states.push_back(j);
    return it->second;
  };
  Joint start;
  for (const auto& a : nfas) start.push_back(closure(a, a.initial()));
  intern(start);
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::vector<std::optional<std::size_t>> row(sigma);
    for (Symbol c = 0; c < sigma; ++c) {
      Joint j;
      bool dead = false;
      for (std::size_t m = 0; m < nfas.size() && !dead; ++m) {
        std::vector<State> post;
        for (const auto& t : nfas[m].transitions())
          if (t.label == c && std::binary_search(states[k][m].begin(), states[k][m].end(), t.src))
            post.push_back(t.dst);
        post = closure(nfas[m], post);
        dead = post.empty();
        j.push_back(std::move(post));
      }
      if (!dead) row[c] = intern(j);
    }
    next.push_back(std::move(row));
  }
  auto accepting = [&](std::size_t k) {
    for (std::size_t m = 0; m < nfas.size(); ++m) {
      bool any = false;
      for (State s : states[k][m]) any = any || nfas[m].is_accepting(s);
      if (!any) return false;
    }
    return true;
  };
  std::vector<std::size_t> ways(states.size(), 0);
  ways[0] = 1;
  std::size_t total = 0;
  // an infinite language has cap words through one pumped cycle within this length
  for (std::size_t len = 0; len < (cap + 2) * states.size() && total < cap; ++len) {
    for (std::size_t k = 0; k < states.size(); ++k)
      if (accepting(k)) total = std::min(cap, total + ways[k]);
    std::vector<std::size_t> w2(states.size(), 0);
    for (std::size_t k = 0; k < states.size(); ++k)
      for (Symbol c = 0; c < sigma; ++c)
        if (ways[k] && next[k][c]) w2[*next[k][c]] = std::min(cap, w2[*next[k][c]] + ways[k]);
    ways = std::move(w2);
  }
  return std::min(total, cap);
}

}  // namespace sakit::oracle
