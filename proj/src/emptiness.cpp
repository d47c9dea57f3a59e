#include "sakit/emptiness.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "sakit/cone.hpp"
#include "sakit/fst.hpp"
#include "sakit/normalform.hpp"
#include "sakit/set_automaton.hpp"

namespace sakit {

// ---------------------------------------------------------------------------
// Families

QueryLanguageFamily::QueryLanguageFamily(Nfa graph, std::vector<std::vector<State>> origins,
                                         std::vector<Member> members)
    : graph_(std::move(graph)), origins_(std::move(origins)), members_(std::move(members)) {
  for (const auto& t : graph_.transitions())
    if (t.label == kEpsilon) throw Error("query language graph must not have empty moves");
  for (auto& o : origins_) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    for (State s : o)
      if (s >= graph_.num_states()) throw Error("origin state out of range");
  }
  for (auto& m : members_) {
    if (m.origin >= origins_.size()) throw Error("member origin out of range");
    std::sort(m.accepting.begin(), m.accepting.end());
    m.accepting.erase(std::unique(m.accepting.begin(), m.accepting.end()), m.accepting.end());
    for (State s : m.accepting)
      if (s >= graph_.num_states()) throw Error("member accepting state out of range");
  }
  memo_->languages.resize(members_.size());
}

QueryLanguageFamily QueryLanguageFamily::from_nfas(const Alphabet& gamma,
                                                   const std::vector<Nfa>& languages) {
  std::vector<NfaTransition> ts;
  std::vector<std::vector<State>> origins;
  std::vector<Member> members;
  State offset = 0;
  for (const auto& raw : languages) {
    if (!(raw.alphabet() == gamma)) throw Error("family member over a different alphabet");
    Nfa l = nfa_remove_epsilon(raw);
    for (const auto& t : l.transitions()) ts.push_back({t.src + offset, t.label, t.dst + offset});
    std::vector<State> o, acc;
    for (State s : l.initial()) o.push_back(s + offset);
    for (State s : l.accepting()) acc.push_back(s + offset);
    members.push_back({origins.size(), std::move(acc)});
    origins.push_back(std::move(o));
    offset += static_cast<State>(l.num_states());
  }
  return QueryLanguageFamily(Nfa(gamma, offset, std::move(ts), {}, {}), std::move(origins),
                             std::move(members));
}

Nfa QueryLanguageFamily::language(std::size_t i) const {
  const Member& m = members_.at(i);
  {
    std::lock_guard lock(memo_->mu);
    if (memo_->languages[i]) return *memo_->languages[i];
  }
  Nfa l = nfa_trim(Nfa(graph_.alphabet(), graph_.num_states(), graph_.transitions(),
                       origins_[m.origin], m.accepting));
  std::lock_guard lock(memo_->mu);
  memo_->languages[i] = l;
  return l;
}

namespace {

std::vector<State> run_from(const Nfa& g, std::vector<State> cur, const Word& u) {
  for (Symbol a : u) {
    if (cur.empty()) break;
    cur = g.post(cur, a);
  }
  return cur;
}

bool intersects(const std::vector<State>& a, const std::vector<State>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

}  // namespace

bool QueryLanguageFamily::contains(std::size_t i, const Word& u) const {
  const Member& m = members_.at(i);
  return intersects(run_from(graph_, origins_[m.origin], u), m.accepting);
}

std::vector<std::size_t> QueryLanguageFamily::type_of(const Word& u) const {
  std::vector<std::vector<State>> reached(origins_.size());
  for (std::size_t o = 0; o < origins_.size(); ++o) reached[o] = run_from(graph_, origins_[o], u);
  std::vector<std::size_t> type;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (intersects(reached[members_[i].origin], members_[i].accepting)) type.push_back(i);
  return type;
}

// ---------------------------------------------------------------------------
// Query languages of an automaton over a protocol alphabet

ProtocolAlphabet protocol_alphabet_of(const Alphabet& a) {
  std::vector<std::string> gamma;
  std::size_t reserved = 0;
  for (const auto& n : a.names()) {
    if (n == "#" || n == "in" || n == "out" || n == "test+" || n == "test-")
      ++reserved;
    else
      gamma.push_back(n);
  }
  if (reserved != 5) throw Error("automaton alphabet is not a protocol alphabet");
  return ProtocolAlphabet(Alphabet(gamma));
}

namespace {

Nfa relabel_to(const Nfa& a, const ProtocolAlphabet& pa) {
  if (a.alphabet() == pa.symbols) return a;
  std::vector<NfaTransition> ts;
  for (const auto& t : a.transitions())
    ts.push_back({t.src, t.label == kEpsilon ? kEpsilon : pa.symbols.id(a.alphabet().name(t.label)),
                  t.dst});
  return Nfa(pa.symbols, a.num_states(), std::move(ts), a.initial(), a.accepting(),
             a.state_names());
}

bool is_op(const ProtocolAlphabet& pa, Symbol s) { return s >= pa.in && s <= pa.test_minus; }

}  // namespace

QueryLanguages extract_query_languages(const Nfa& input) {
  ProtocolAlphabet pa = protocol_alphabet_of(input.alphabet());
  Nfa a = nfa_trim(nfa_remove_epsilon(relabel_to(input, pa)));
  const std::size_t n = a.num_states();

  std::vector<State> boundary(a.initial().begin(), a.initial().end());
  for (const auto& t : a.transitions())
    if (is_op(pa, t.label)) boundary.push_back(t.dst);
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());

  std::vector<NfaTransition> gts;
  for (const auto& t : a.transitions())
    if (pa.is_gamma(t.label)) gts.push_back(t);
  Nfa graph(pa.gamma(), n, std::move(gts), {}, {});

  // accepting sets per (q', op): states r with r -#-> r2 -op-> q'
  std::map<std::pair<State, Op>, std::vector<State>> closing;
  for (State r = 0; r < n; ++r)
    for (const auto& t1 : a.out(r)) {
      if (t1.label != pa.hash) continue;
      for (const auto& t2 : a.out(t1.dst))
        if (is_op(pa, t2.label)) closing[{t2.dst, static_cast<Op>(t2.label - pa.in)}].push_back(r);
    }

  QueryLanguages out{pa, a, {}, {}, {}};
  std::vector<std::vector<State>> origins;
  std::vector<QueryLanguageFamily::Member> members;
  for (State q : boundary) {
    std::vector<State> start;
    for (const auto& t : a.out(q))
      if (t.label == pa.hash) start.push_back(t.dst);
    if (start.empty()) continue;
    std::vector<bool> reach(n, false);
    std::vector<State> stack = start;
    for (State s : start) reach[s] = true;
    while (!stack.empty()) {
      State s = stack.back();
      stack.pop_back();
      for (const auto& t : graph.out(s))
        if (!reach[t.dst]) {
          reach[t.dst] = true;
          stack.push_back(t.dst);
        }
    }
    const std::size_t origin = origins.size();
    bool used = false;
    for (const auto& [key, acc] : closing) {
      if (std::none_of(acc.begin(), acc.end(), [&](State r) { return reach[r]; })) continue;
      QueryTriple tri{q, key.first, key.second};
      out.index[tri] = out.triples.size();
      out.triples.push_back(tri);
      members.push_back({origin, acc});
      used = true;
    }
    if (used) origins.push_back(std::move(start));
  }
  out.family = QueryLanguageFamily(std::move(graph), std::move(origins), std::move(members));
  return out;
}

// ---------------------------------------------------------------------------
// Elementary languages by product and complement

namespace {

std::vector<std::size_t> normalized_type(const QueryLanguageFamily& fam,
                                         std::vector<std::size_t> type) {
  std::sort(type.begin(), type.end());
  type.erase(std::unique(type.begin(), type.end()), type.end());
  for (std::size_t i : type)
    if (i >= fam.size()) throw Error("type index out of range");
  return type;
}

Nfa minus_words(const Nfa& l, const std::set<Word>& words) {
  if (words.empty()) return l;
  return nfa_product(l, nfa_complement(Nfa::from_words(l.alphabet(), {words.begin(), words.end()})));
}

}  // namespace

std::vector<Word> elementary_representatives(const QueryLanguageFamily& fam,
                                             const std::vector<std::size_t>& raw) {
  auto type = normalized_type(fam, raw);
  auto& memo = fam.memo();
  {
    std::lock_guard lock(memo.mu);
    if (auto it = memo.elementary.find(type); it != memo.elementary.end()) return it->second;
  }
  Nfa acc = Nfa::universal(fam.gamma());
  std::size_t k = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (k < type.size() && type[k] == i) {
      acc = nfa_trim(nfa_product(acc, fam.language(i)));
      ++k;
    } else {
      acc = nfa_trim(nfa_product(acc, nfa_complement(fam.language(i))));
    }
    if (acc.num_states() == 0) break;
  }
  auto words = nfa_first_words(acc, 2);
  std::lock_guard lock(memo.mu);
  memo.elementary[type] = words;
  return words;
}

bool elementary_nonempty(const QueryLanguageFamily& fam, const std::vector<std::size_t>& type) {
  return elementary_representatives(fam, type).size() >= 1;
}

bool elementary_at_least_two(const QueryLanguageFamily& fam, const std::vector<std::size_t>& type) {
  return elementary_representatives(fam, type).size() >= 2;
}

// ---------------------------------------------------------------------------
// Padded perfect shuffle

bool shuffle_at_least_two(const std::vector<Nfa>& nfas) {
  if (nfas.empty()) return true;  // the intersection of no languages is Sigma*
  const Alphabet& sigma = nfas.front().alphabet();
  for (const auto& l : nfas)
    if (!(l.alphabet() == sigma)) throw Error("shuffle_at_least_two: alphabets differ");
  std::vector<std::string> names = sigma.names();
  std::string pad = "<>";
  while (sigma.contains(pad)) pad += '>';
  names.push_back(pad);
  const Alphabet ext(names);
  const auto dia = static_cast<Symbol>(sigma.size());
  const std::size_t k = sigma.size() + 1;

  // B: some position pair differs. States: phase 0 with flag d (0,1); phase 1 remembers the symbol.
  std::vector<NfaTransition> bts;
  auto b_wait = [&](Symbol x, bool d) { return static_cast<State>(2 + x * 2 + (d ? 1 : 0)); };
  for (int d = 0; d < 2; ++d)
    for (Symbol x = 0; x < k; ++x) {
      bts.push_back({static_cast<State>(d), x, b_wait(x, d)});
      for (Symbol y = 0; y < k; ++y)
        bts.push_back({b_wait(x, d), y, static_cast<State>(d || x != y ? 1 : 0)});
    }
  Nfa product(ext, 2 + 2 * k, std::move(bts), {0}, {1});

  for (const auto& raw : nfas) {
    const Nfa l = nfa_remove_epsilon(raw);
    const std::size_t q = l.num_states();
    // state (pu, fu, pv, fv, phase)
    auto id = [&](State pu, bool fu, State pv, bool fv, int phase) {
      return static_cast<State>((((pu * 2 + fu) * q + pv) * 2 + fv) * 2 + phase);
    };
    std::vector<NfaTransition> ts;
    std::vector<State> acc, init;
    for (State pu = 0; pu < q; ++pu)
      for (int fu = 0; fu < 2; ++fu)
        for (State pv = 0; pv < q; ++pv)
          for (int fv = 0; fv < 2; ++fv) {
            bool ok_u = fu || l.is_accepting(pu);
            bool ok_v = fv || l.is_accepting(pv);
            if (ok_u && ok_v) acc.push_back(id(pu, fu, pv, fv, 0));
            // phase 0 reads the u-track
            if (!fu)
              for (const auto& t : l.out(pu)) ts.push_back({id(pu, 0, pv, fv, 0), t.label, id(t.dst, 0, pv, fv, 1)});
            if (ok_u) ts.push_back({id(pu, fu, pv, fv, 0), dia, id(pu, 1, pv, fv, 1)});
            // phase 1 reads the v-track
            if (!fv)
              for (const auto& t : l.out(pv)) ts.push_back({id(pu, fu, pv, 0, 1), t.label, id(pu, fu, t.dst, 0, 0)});
            if (ok_v) ts.push_back({id(pu, fu, pv, fv, 1), dia, id(pu, fu, pv, 1, 0)});
          }
    for (State a : l.initial())
      for (State b : l.initial()) init.push_back(id(a, 0, b, 0, 0));
    Nfa bi(ext, q * q * 8, std::move(ts), std::move(init), std::move(acc));
    product = nfa_trim(nfa_product(product, nfa_trim(bi)));
    if (product.num_states() == 0) return false;
  }
  return !nfa_emptiness(product);
}

// ---------------------------------------------------------------------------
// Joint subset construction over a family

TypeTable::TypeTable(const QueryLanguageFamily& fam, std::size_t state_limit) {
  const Nfa& g = fam.graph();
  const std::size_t sigma = g.alphabet().size();
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> closing;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (State s : fam.member(i).accepting)
      closing[(std::uint64_t{fam.member(i).origin} << 32) | s].push_back(i);

  using Key = std::vector<std::uint64_t>;
  std::map<Key, State> index;
  std::vector<Key> keys;
  auto intern = [&](Key k) {
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    auto [it, inserted] = index.emplace(k, static_cast<State>(keys.size()));
    if (inserted) {
      if (keys.size() >= state_limit) throw Error("type analysis exceeded its state limit");
      keys.push_back(std::move(k));
    }
    return it->second;
  };
  Key start;
  for (std::size_t o = 0; o < fam.origins().size(); ++o)
    for (State s : fam.origins()[o]) start.push_back((std::uint64_t{o} << 32) | s);
  intern(std::move(start));
  joint_.alphabet_size = sigma;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (Symbol a = 0; a < sigma; ++a) {
      Key next;
      for (std::uint64_t p : keys[k]) {
        const auto s = static_cast<State>(p & 0xffffffffu);
        for (const auto& t : g.out(s))
          if (t.label == a) next.push_back((p & ~std::uint64_t{0xffffffffu}) | t.dst);
      }
      State to = intern(std::move(next));
      joint_.next.push_back(to);
    }
  }
  const std::size_t n = keys.size();
  joint_.accepting.assign(n, false);

  state_type_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> type;
    for (std::uint64_t p : keys[k])
      if (auto it = closing.find(p); it != closing.end())
        type.insert(type.end(), it->second.begin(), it->second.end());
    std::sort(type.begin(), type.end());
    type.erase(std::unique(type.begin(), type.end()), type.end());
    auto [it, inserted] = lookup_.emplace(type, types_.size());
    if (inserted) types_.push_back(type);
    state_type_[k] = it->second;
  }

  // saturating word counts per joint state: least fixpoint of
  // cnt[y] = min(2, [y = start] + sum over edges x -> y of cnt[x])
  std::vector<std::vector<State>> preds(n);
  for (std::size_t k = 0; k < n; ++k)
    for (Symbol a = 0; a < sigma; ++a) preds[joint_.next[k * sigma + a]].push_back(static_cast<State>(k));
  std::vector<std::size_t> cnt(n, 0);
  std::deque<State> work;
  std::vector<bool> queued(n, true);
  for (State k = 0; k < n; ++k) work.push_back(k);
  while (!work.empty()) {
    State y = work.front();
    work.pop_front();
    queued[y] = false;
    std::size_t v = y == 0 ? 1 : 0;
    for (State x : preds[y]) {
      v += cnt[x];
      if (v >= 2) break;
    }
    v = std::min<std::size_t>(v, 2);
    if (v == cnt[y]) continue;
    cnt[y] = v;
    for (Symbol a = 0; a < sigma; ++a) {
      State z = joint_.next[y * sigma + a];
      if (!queued[z]) {
        queued[z] = true;
        work.push_back(z);
      }
    }
  }
  counts_.assign(types_.size(), 0);
  for (std::size_t k = 0; k < n; ++k)
    counts_[state_type_[k]] = std::min<std::size_t>(2, counts_[state_type_[k]] + cnt[k]);

  with_.resize(fam.size());
  for (std::size_t t = 0; t < types_.size(); ++t)
    for (std::size_t i : types_[t]) with_[i].push_back(t);
  reps_.resize(types_.size());
}

std::optional<std::size_t> TypeTable::find(const std::vector<std::size_t>& type) const {
  auto it = lookup_.find(type);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Word>& TypeTable::representatives(std::size_t t) const {
  std::lock_guard lock(reps_mu_);
  if (!reps_.at(t)) {
    Dfa d = joint_;
    for (std::size_t k = 0; k < d.num_states(); ++k) d.accepting[k] = state_type_[k] == t;
    reps_[t] = dfa_first_words(d, 2);
  }
  return *reps_[t];
}

// ---------------------------------------------------------------------------
// Regular realizability of correct protocols

void check_typing(const TypedProtocol& p, const QueryLanguageFamily& fam) {
  if (p.types.size() != p.protocol.blocks.size())
    throw Error("type vector length differs from the number of blocks");
  for (std::size_t k = 0; k < p.types.size(); ++k) {
    if (p.types[k] >= fam.size()) throw Error("type index out of range");
    if (!fam.contains(p.types[k], p.protocol.blocks[k].word))
      throw Error("block " + std::to_string(k + 1) + " is not in its typed language");
  }
}

NrrResult nrr_decide(const Nfa& a) {
  QueryLanguages ql = extract_query_languages(a);
  NrrResult res;
  if (ql.family.size() == 0) return res;
  const TypeTable types(ql.family);
  const ProtocolAlphabet& pa = ql.alphabet;

  std::vector<std::vector<std::size_t>> triples_from(ql.automaton.num_states());
  for (std::size_t i = 0; i < ql.triples.size(); ++i) triples_from[ql.triples[i].from].push_back(i);

  struct Node {
    State q;
    std::vector<std::size_t> present;  // sorted type ids
    std::size_t parent;
    std::size_t triple;
    std::size_t type;
  };
  std::vector<Node> nodes;
  std::map<std::pair<State, std::vector<std::size_t>>, std::size_t> seen;
  std::deque<std::size_t> queue;
  for (State q : ql.automaton.initial()) {
    if (seen.emplace(std::pair{q, std::vector<std::size_t>{}}, nodes.size()).second) {
      queue.push_back(nodes.size());
      nodes.push_back({q, {}, SIZE_MAX, 0, 0});
    }
  }

  std::optional<std::size_t> goal;
  auto push = [&](std::size_t parent, State q, std::vector<std::size_t> present, std::size_t tri,
                  std::size_t type) {
    if (ql.automaton.is_accepting(q)) {
      nodes.push_back({q, std::move(present), parent, tri, type});
      goal = nodes.size() - 1;
      return;
    }
    if (!seen.emplace(std::pair{q, present}, nodes.size()).second) return;
    queue.push_back(nodes.size());
    nodes.push_back({q, std::move(present), parent, tri, type});
  };

  while (!queue.empty() && !goal) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    const State q = nodes[cur].q;
    for (std::size_t tri : triples_from[q]) {
      const Op op = ql.triples[tri].op;
      const State to = ql.triples[tri].to;
      for (std::size_t t : types.types_with(tri)) {
        const auto& present = nodes[cur].present;
        const bool has = std::binary_search(present.begin(), present.end(), t);
        const bool many = types.count(t) >= 2;
        switch (op) {
          case Op::In: {
            auto next = present;
            if (!has) next.insert(std::lower_bound(next.begin(), next.end(), t), t);
            push(cur, to, std::move(next), tri, t);
            break;
          }
          case Op::Out:
            if (has) {
              auto next = present;
              next.erase(std::lower_bound(next.begin(), next.end(), t));
              push(cur, to, std::move(next), tri, t);
              if (!goal && many) push(cur, to, present, tri, t);
            } else {
              push(cur, to, present, tri, t);
            }
            break;
          case Op::TestPlus:
            if (has) push(cur, to, present, tri, t);
            break;
          case Op::TestMinus:
            if (!has || many) push(cur, to, present, tri, t);
            break;
        }
        if (goal) break;
      }
      if (goal) break;
    }
  }
  if (!goal) return res;

  std::vector<std::size_t> path;
  for (std::size_t k = *goal; nodes[k].parent != SIZE_MAX; k = nodes[k].parent) path.push_back(k);
  std::reverse(path.begin(), path.end());
  Protocol p{pa.gamma(), {}};
  std::vector<std::size_t> typing;
  for (std::size_t k : path) {
    const Op op = ql.triples[nodes[k].triple].op;
    const auto& reps = types.representatives(nodes[k].type);
    const bool positive = op == Op::In || op == Op::TestPlus;
    const Word& u = (reps.size() >= 2 && !positive) ? reps[1] : reps[0];
    p.blocks.push_back({u, op});
    typing.push_back(nodes[k].triple);
  }
  if (!replay_correct(p) || !ql.automaton.accepts(protocol_to_word(p, pa)))
    throw Error("nrr_decide: reconstructed witness failed validation");
  res.nonempty = true;
  res.witness = {std::move(p), std::move(typing)};
  check_typing(res.witness, ql.family);
  return res;
}

BruteForceResult brute_force_nrr(const Nfa& input, std::size_t max_blocks, std::size_t max_word_len) {
  const ProtocolAlphabet pa = protocol_alphabet_of(input.alphabet());
  const Nfa a = nfa_remove_epsilon(relabel_to(input, pa));
  const std::vector<Word> words = all_words(pa.gamma_size, max_word_len);
  const Op ops[] = {Op::In, Op::Out, Op::TestPlus, Op::TestMinus};

  struct Node {
    std::vector<State> states;
    std::vector<std::size_t> set;  // sorted word indices
    std::size_t parent;
    std::size_t word;
    Op op;
  };
  std::vector<Node> nodes;
  std::set<std::pair<std::vector<State>, std::vector<std::size_t>>> seen;
  std::vector<State> init = a.closure(a.initial());
  nodes.push_back({init, {}, SIZE_MAX, 0, Op::In});
  seen.insert({init, {}});
  std::vector<std::size_t> layer{0};
  BruteForceResult res;

  auto read = [&](std::vector<State> cur, Symbol s) { return cur.empty() ? cur : a.post(cur, s); };
  for (std::size_t depth = 0; depth < max_blocks && !layer.empty(); ++depth) {
    std::vector<std::size_t> next_layer;
    for (std::size_t idx : layer) {
      std::vector<State> after_hash = read(nodes[idx].states, pa.hash);
      if (after_hash.empty()) continue;
      for (std::size_t wi = 0; wi < words.size(); ++wi) {
        std::vector<State> cur = after_hash;
        for (Symbol g : words[wi]) cur = read(cur, g);
        cur = read(cur, pa.hash);
        if (cur.empty()) continue;
        const auto& set = nodes[idx].set;
        const bool has = std::binary_search(set.begin(), set.end(), wi);
        for (Op op : ops) {
          if ((op == Op::TestPlus && !has) || (op == Op::TestMinus && has)) continue;
          std::vector<State> end = read(cur, pa.op_symbol(op));
          if (end.empty()) continue;
          std::vector<std::size_t> nset = set;
          if (op == Op::In && !has) nset.insert(std::lower_bound(nset.begin(), nset.end(), wi), wi);
          if (op == Op::Out && has) nset.erase(std::lower_bound(nset.begin(), nset.end(), wi));
          const bool accept = std::any_of(end.begin(), end.end(), [&](State s) { return a.is_accepting(s); });
          if (!accept && !seen.insert({end, nset}).second) continue;
          nodes.push_back({std::move(end), std::move(nset), idx, wi, op});
          if (accept) {
            Protocol p{pa.gamma(), {}};
            for (std::size_t k = nodes.size() - 1; nodes[k].parent != SIZE_MAX; k = nodes[k].parent)
              p.blocks.push_back({words[nodes[k].word], nodes[k].op});
            std::reverse(p.blocks.begin(), p.blocks.end());
            res.found = true;
            res.witness = std::move(p);
            return res;
          }
          next_layer.push_back(nodes.size() - 1);
        }
      }
    }
    layer = std::move(next_layer);
  }
  return res;
}

EmptinessResult sa_emptiness(const SetAutomaton& sa) {
  const SetAutomaton m = normalize_requirements(sa);
  const Fst t = build_extractor(m);
  NrrResult nrr = nrr_decide(fst_range(t));
  EmptinessResult res;
  if (!nrr.nonempty) return res;
  res.empty = false;
  const ProtocolAlphabet pa(m.work_alphabet());
  auto input = nfa_shortest_word(fst_apply(fst_inverse(t), protocol_to_word(nrr.witness.protocol, pa)));
  if (!input) throw Error("sa_emptiness: witness protocol has no preimage");
  res.input = std::move(*input);
  res.witness = std::move(nrr.witness);
  return res;
}

// ---------------------------------------------------------------------------
// Small/large classification and the two protocol transformations

Classification classify_small_large(const QueryLanguageFamily& fam) {
  const std::size_t n = fam.size();
  Classification c;
  std::vector<bool> small(n, false);
  std::set<Word> w;
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<Word> added;
    for (std::size_t i = 0; i < n; ++i) {
      if (small[i]) continue;
      Nfa rest = minus_words(fam.language(i), w);
      if (nfa_count_at_least(rest, n + 1)) continue;
      small[i] = true;
      changed = true;
      for (auto& u : nfa_first_words(rest, n + 1)) added.insert(std::move(u));
    }
    if (changed) {
      w.insert(added.begin(), added.end());
      ++c.steps;
    }
  }
  for (std::size_t i = 0; i < n; ++i) (small[i] ? c.small : c.large).push_back(i);
  c.stable = std::move(w);
  return c;
}

namespace {

void require_correct_typed(const TypedProtocol& p, const QueryLanguageFamily& fam) {
  if (!replay_correct(p.protocol)) throw Error("protocol is not correct");
  check_typing(p, fam);
}

}  // namespace

TypedProtocol transform_bound_set(const TypedProtocol& p, const QueryLanguageFamily& fam) {
  require_correct_typed(p, fam);
  const Classification cls = classify_small_large(fam);
  const auto& blocks = p.protocol.blocks;
  const std::size_t t = blocks.size();
  const auto sets = replay_sets(p.protocol);
  auto unstable_in = [&](std::size_t i, const Word& u) {
    return !cls.stable.contains(u) && fam.contains(i, u);
  };
  // first[i]: first block whose set content meets R(i) minus the stable words
  std::map<std::size_t, std::size_t> first;
  for (std::size_t i : cls.large) {
    first[i] = t;
    for (std::size_t k = 0; k < t && first[i] == t; ++k)
      for (const auto& u : sets[k])
        if (unstable_in(i, u)) {
          first[i] = k;
          break;
        }
  }
  std::set<Word> critical;
  for (std::size_t k = 0; k < t; ++k) {
    if (blocks[k].op != Op::In || cls.stable.contains(blocks[k].word)) continue;
    for (std::size_t i : cls.large)
      if (fam.contains(i, blocks[k].word) && first[i] == k) critical.insert(blocks[k].word);
  }
  std::set<Word> avoid = cls.stable;
  avoid.insert(critical.begin(), critical.end());
  std::map<std::size_t, Word> fresh;

  TypedProtocol out = p;
  for (std::size_t k = 0; k < t; ++k) {
    const Word& u = blocks[k].word;
    if (cls.stable.contains(u)) continue;
    const std::size_t alpha = p.types[k];
    const Op op = blocks[k].op;
    if (op == Op::In || op == Op::TestPlus) {
      if (critical.contains(u)) continue;
      auto it = first.find(alpha);
      if (it == first.end() || it->second >= k)
        throw Error("transform_bound_set: no critical word for an unstable block");
      out.protocol.blocks[k].word = blocks[it->second].word;
    } else {
      auto it = fresh.find(alpha);
      if (it == fresh.end()) {
        auto ws = nfa_first_words(minus_words(fam.language(alpha), avoid), 1);
        if (ws.empty()) throw Error("transform_bound_set: large language exhausted");
        it = fresh.emplace(alpha, ws.front()).first;
      }
      out.protocol.blocks[k].word = it->second;
    }
  }
  return out;
}

TypedProtocol transform_unique_per_type(const TypedProtocol& p, const QueryLanguageFamily& fam) {
  require_correct_typed(p, fam);
  TypedProtocol out = p;
  for (auto& b : out.protocol.blocks) {
    auto reps = elementary_representatives(fam, fam.type_of(b.word));
    if (reps.size() < 2) continue;
    b.word = (b.op == Op::In || b.op == Op::TestPlus) ? reps[0] : reps[1];
  }
  return out;
}

}  // namespace sakit
