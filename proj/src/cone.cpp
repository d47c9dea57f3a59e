#include "sakit/cone.hpp"

#include <map>

#include "sakit/emptiness.hpp"
#include "sakit/normalform.hpp"

namespace sakit {

Fst build_extractor(const SetAutomaton& sa) {
  if (!satisfies_requirements(sa))
    throw Error("build_extractor: automaton does not satisfy the normal-form requirements");
  ProtocolAlphabet pa(sa.work_alphabet());
  FstBuilder b(sa.input_alphabet(), pa.symbols);
  const State aux = b.add_state("start'");
  std::vector<State> mid(sa.num_states());
  for (State s = 0; s < sa.num_states(); ++s) mid[s] = b.add_state(sa.state_name(s));
  std::map<State, State> fin;
  for (State s : sa.accepting()) {
    fin[s] = b.add_state("fin:" + sa.state_name(s));
    b.add_accepting(fin[s]);
  }
  b.set_initial(aux);
  b.add(aux, {}, {pa.hash}, mid[sa.initial()]);

  auto read = [](Symbol sym) { return sym == kEpsilon ? Word{} : Word{sym}; };
  auto query = [&](State src, Symbol sym, Op op, State dst) {
    const Symbol o = pa.op_symbol(op);
    b.add(mid[src], read(sym), {pa.hash, o, pa.hash}, mid[dst]);
    if (auto it = fin.find(dst); it != fin.end()) b.add(mid[src], read(sym), {pa.hash, o}, it->second);
  };
  for (const auto& r : sa.rules()) {
    switch (r.kind) {
      case RuleKind::Write: b.add(mid[r.src], read(r.sym), r.word, mid[r.dst]); break;
      case RuleKind::In: query(r.src, r.sym, Op::In, r.dst); break;
      case RuleKind::Out: query(r.src, r.sym, Op::Out, r.dst); break;
      case RuleKind::Test:
        query(r.src, r.sym, Op::TestPlus, r.dst);
        query(r.src, r.sym, Op::TestMinus, r.dst_minus);
        break;
    }
  }
  return b.build();
}

bool member_via_protocols(const SetAutomaton& sa, const Word& w) {
  const SetAutomaton m = normalize_requirements(sa);
  const Fst t = build_extractor(m);
  return nrr_decide(fst_apply(t, w)).nonempty;
}

SetAutomaton cone_generate(const Fst& t) {
  const Alphabet& out = t.output_alphabet();
  std::vector<std::string> gamma_names;
  for (const auto& n : out.names())
    if (n != "#" && n != "in" && n != "out" && n != "test+" && n != "test-") gamma_names.push_back(n);
  if (gamma_names.size() + 5 != out.size())
    throw Error("cone_generate: transducer output is not a protocol alphabet");
  const Alphabet gamma(gamma_names);
  const ProtocolAlphabet pa(gamma);
  std::vector<Symbol> to_pa(out.size());
  for (Symbol s = 0; s < out.size(); ++s) to_pa[s] = pa.symbols.id(out.name(s));

  const SetAutomaton mprot = build_mprot(gamma);
  // deterministic: one rule per (state, symbol)
  std::vector<std::map<Symbol, std::size_t>> mrule(mprot.num_states());
  for (std::size_t i = 0; i < mprot.rules().size(); ++i)
    mrule[mprot.rule(i).src][mprot.rule(i).sym] = i;
  std::vector<std::vector<const FstTransition*>> by_src(t.num_states());
  for (const auto& tr : t.transitions()) by_src[tr.src].push_back(&tr);

  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> keys;
  auto node = [&](State q, State m) {
    auto [it, inserted] = index.emplace(std::pair{q, m}, static_cast<State>(keys.size()));
    if (inserted) keys.push_back({q, m});
    return it->second;
  };
  node(t.initial(), mprot.initial());
  std::vector<TransitionRule> rules;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto [q, m] = keys[k];
    const auto src = static_cast<State>(k);
    for (const FstTransition* tr : by_src[q]) {
      if (tr->write == kEpsilon) {
        rules.push_back({RuleKind::Write, src, tr->read, node(tr->dst, m), kNoState, {}});
        continue;
      }
      auto it = mrule[m].find(to_pa[tr->write]);
      if (it == mrule[m].end()) continue;
      const auto& r = mprot.rule(it->second);
      TransitionRule nr{r.kind, src, tr->read, node(tr->dst, r.dst), kNoState, r.word};
      if (r.kind == RuleKind::Test) nr.dst_minus = node(tr->dst, r.dst_minus);
      rules.push_back(std::move(nr));
    }
  }
  std::vector<std::string> names;
  std::vector<State> acc;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto [q, m] = keys[k];
    names.push_back("(" + t.state_name(q) + "," + mprot.state_name(m) + ")");
    if (t.is_accepting(q) && mprot.is_accepting(m)) acc.push_back(static_cast<State>(k));
  }
  return SetAutomaton(std::move(names), t.input_alphabet(), gamma, false, std::move(rules), 0,
                      std::move(acc));
}

}  // namespace sakit
