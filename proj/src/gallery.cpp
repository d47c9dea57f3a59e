#include "sakit/gallery.hpp"

#include <deque>
#include <tuple>

#include "sakit/normalform.hpp"

namespace sakit {

SetAutomaton build_perk_dsa(std::size_t k) {
  if (k == 0) throw Error("build_perk_dsa: k must be at least 1");
  std::vector<std::string> digits;
  for (std::size_t i = 0; i < k; ++i) digits.push_back(std::to_string(i));
  std::vector<std::string> input = digits;
  input.push_back("#");
  SaBuilder b(Alphabet(input), Alphabet(digits), true);
  b.set_initial("copy");
  // copy: first block, inserted. rest/word: later blocks, tested.
  for (const auto& d : digits) {
    b.write("copy", d, d, "copy");
    b.write("rest", d, d, "word");
    b.write("word", d, d, "word");
  }
  b.in("copy", "#", "rest");
  b.test("rest", "#", "rest", "dead");
  b.test("word", "#", "rest", "dead");
  b.write("rest", "end", Word{}, "fin");
  b.accept("fin");
  return b.build();
}

SetAutomaton build_nonprimes_nsa() {
  SaBuilder b(Alphabet({"a"}), Alphabet({"a"}));
  b.set_initial("s0");
  // a^n with n = k*m, k >= 2, m >= 2: guess the divisor k, insert a^k,
  // then test every further block of k letters.
  b.write("s0", "a", "a", "c1");
  b.write("c1", "a", "a", "c");
  b.write("c", "a", "a", "c");
  b.in("c", "eps", "d");
  b.write("d", "a", "a", "e");
  b.write("e", "a", "a", "e");
  b.test("e", "eps", "d'", "sink");
  b.write("d'", "a", "a", "e");
  b.accept("d'");
  // n = 0 and n = 1 end in a dummy test so that acceptance follows a query.
  b.test("s0", "eps", "z", "z");
  b.write("s0", "a", Word{}, "g1");
  b.test("g1", "eps", "z", "z");
  b.accept("z");
  return b.build();
}

// ---------------------------------------------------------------------------

std::string variable_code(std::size_t index) {
  if (index == 0) return "0";
  std::string out;
  for (; index > 0; index >>= 1) out.insert(out.begin(), static_cast<char>('0' + (index & 1)));
  return out;
}

bool cvp_eval(const CvpProgram& p) {
  if (p.assignments.empty()) throw Error("cvp_eval: empty program");
  std::map<std::size_t, bool> val;
  auto get = [&](std::size_t i) {
    auto it = val.find(i);
    return it != val.end() && it->second;
  };
  bool last = false;
  for (const auto& a : p.assignments) {
    using K = CvpAssignment::Kind;
    switch (a.kind) {
      case K::And: last = get(a.lhs) && get(a.rhs); break;
      case K::Or: last = get(a.lhs) || get(a.rhs); break;
      case K::Not: last = !get(a.lhs); break;
      case K::One: last = true; break;
      case K::Zero: last = false; break;
    }
    val[a.target] = last;
  }
  return last;
}

Alphabet sacvp_input_alphabet() {
  return Alphabet({"0", "1", "#", "AND", "OR", "NOT", "ONE", "ZERO"});
}

Word cvp_to_sacvp(const CvpProgram& p) {
  const Alphabet a = sacvp_input_alphabet();
  std::string text = "#";
  auto code = [&](std::size_t i) { text += variable_code(i) + "#"; };
  for (const auto& as : p.assignments) {
    using K = CvpAssignment::Kind;
    switch (as.kind) {
      case K::And:
      case K::Or:
        code(as.lhs);
        text += as.kind == K::And ? "AND#" : "OR#";
        code(as.rhs);
        break;
      case K::Not:
        text += "NOT#";
        code(as.lhs);
        break;
      case K::One: text += "ONE#"; break;
      case K::Zero: text += "ZERO#"; break;
    }
    code(as.target);
  }
  return a.parse_word(text);
}

SetAutomaton build_sacvp_dsa() {
  // Invariant: the code of P is in the set iff P currently holds 1.
  SaBuilder b(sacvp_input_alphabet(), Alphabet({"0", "1"}), true);
  b.set_initial("start");
  b.write("start", "#", Word{}, "B");
  const std::vector<std::string> bits{"0", "1"};
  // Boundary states: B (nothing assigned yet), B0, B1 (value of the last assignment).
  for (const std::string from : {"B", "B0", "B1"}) {
    for (const auto& d : bits) b.write(from, d, d, "J");
    b.write(from, "ONE", Word{}, "const1");
    b.write(from, "ZERO", Word{}, "const0");
    b.write(from, "NOT", Word{}, "not");
  }
  b.write("B1", "end", Word{}, "fin");
  b.accept("fin");

  // Target code: write it, then insert or remove on the closing '#'.
  for (int r : {0, 1}) {
    const std::string rs = std::to_string(r);
    const std::string target = "tgt" + rs, target_more = "tgt" + rs + "+";
    for (const auto& d : bits) {
      b.write(target, d, d, target_more);
      b.write(target_more, d, d, target_more);
    }
    if (r == 1)
      b.in(target_more, "#", "B1");
    else
      b.out(target_more, "#", "B0");
  }
  b.write("const1", "#", Word{}, "tgt1");
  b.write("const0", "#", Word{}, "tgt0");

  // Second operand: tested, result goes straight to the target reader.
  auto second = [&](const std::string& name, int if_one, int if_zero) {
    const std::string more = name + "+";
    for (const auto& d : bits) {
      b.write(name, d, d, more);
      b.write(more, d, d, more);
    }
    b.test(more, "#", "tgt" + std::to_string(if_one), "tgt" + std::to_string(if_zero));
  };
  b.write("not", "#", Word{}, "notk");
  second("notk", 0, 1);

  for (const auto& d : bits) b.write("J", d, d, "J");
  b.test("J", "#", "J1", "J0");
  for (int v : {0, 1}) {
    const std::string vs = std::to_string(v);
    b.write("J" + vs, "AND", Word{}, "and" + vs);
    b.write("J" + vs, "OR", Word{}, "or" + vs);
    b.write("and" + vs, "#", Word{}, "andk" + vs);
    b.write("or" + vs, "#", Word{}, "ork" + vs);
    second("andk" + vs, v, 0);
    second("ork" + vs, 1, v);
  }
  return b.build();
}

// ---------------------------------------------------------------------------

bool phi_prime_sat(const std::vector<std::string>& list, const CnfFormula& phi) {
  std::map<std::string, std::size_t> listed;
  for (const auto& x : list) ++listed[x];
  std::vector<std::string> vars;
  std::map<std::string, std::size_t> var_index;
  std::vector<Clause> reduced;
  for (const auto& clause : phi.clauses) {
    bool dropped = false;
    Clause kept;
    for (const auto& lit : clause) {
      auto it = listed.find(lit.var);
      if (it == listed.end()) {
        if (lit.negated) dropped = true;  // unlisted variables are 0
        continue;
      }
      if (it->second >= 2) dropped = true;
      kept.push_back(lit);
    }
    if (dropped) continue;
    if (kept.empty()) return false;
    for (const auto& lit : kept)
      if (var_index.emplace(lit.var, vars.size()).second) vars.push_back(lit.var);
    reduced.push_back(std::move(kept));
  }
  if (vars.size() > 24) throw Error("phi_prime_sat: too many variables for brute force");
  for (std::uint32_t mask = 0; mask < (1u << vars.size()); ++mask) {
    bool all = true;
    for (const auto& clause : reduced) {
      bool sat = false;
      for (const auto& lit : clause)
        sat = sat || (((mask >> var_index[lit.var]) & 1u) != 0) != lit.negated;
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

Alphabet sasat_input_alphabet() { return Alphabet({"0", "1", "#", "(", ")", ",", "+", "-"}); }

Word sasat_word(const std::vector<std::string>& list, const CnfFormula& phi) {
  auto check_code = [](const std::string& c) {
    if (c.empty() || c.find_first_not_of("01") != std::string::npos)
      throw Error("variable code '" + c + "' is not a binary string");
  };
  std::string text;
  for (const auto& x : list) {
    check_code(x);
    text += x + "#";
  }
  text += "#";
  for (const auto& clause : phi.clauses) {
    if (clause.empty()) throw Error("sasat_word: empty clause");
    text += "(";
    for (std::size_t i = 0; i < clause.size(); ++i) {
      check_code(clause[i].var);
      if (i > 0) text += ",";
      text += (clause[i].negated ? "-" : "+") + clause[i].var;
    }
    text += ")";
  }
  return sasat_input_alphabet().parse_word(text);
}

Word threesat_to_sasat(const CnfFormula& phi) {
  std::vector<std::string> list;
  std::set<std::string> seen;
  for (const auto& clause : phi.clauses)
    for (const auto& lit : clause)
      if (seen.insert(lit.var).second) list.push_back(lit.var);
  return sasat_word(list, phi);
}

SetAutomaton build_sasat_nsa() {
  SaBuilder b(sasat_input_alphabet(), Alphabet({"0", "1", "f", "t"}));
  const std::vector<std::string> bits{"0", "1"};
  b.set_initial("list");
  // Variable list: each entry inserts its code with a guessed value.
  for (const auto& d : bits) {
    b.write("list", d, d, "var");
    b.write("var", d, d, "var");
  }
  b.write("var", "#", "f", "guessed");
  b.write("var", "#", "t", "guessed");
  b.in("guessed", "eps", "list");
  b.write("list", "#", Word{}, "clauses");
  b.accept("clauses");

  // Clause: exactly one literal is checked; chosen0/chosen1 record whether
  // it has been picked yet.
  b.write("clauses", "(", Word{}, "lit0");
  for (const std::string c : {"0", "1"}) {
    const std::string lit = "lit" + c, skip = "skip" + c;
    b.write(lit, "+", Word{}, skip);
    b.write(lit, "-", Word{}, skip);
    for (const auto& d : bits) b.write(skip, d, Word{}, skip);
    b.write(skip, ",", Word{}, lit);
    if (c == "1") b.write(skip, ")", Word{}, "clauses");
  }
  b.write("lit0", "+", Word{}, "pos");
  b.write("lit0", "-", Word{}, "neg");
  for (const auto& d : bits) {
    b.write("pos", d, d, "pos");
    b.write("neg", d, d, "neg");
  }
  for (const auto& [delim, next] : {std::pair{",", "lit1"}, std::pair{")", "clauses"}}) {
    const std::string tp = std::string("has") + delim, tn = std::string("lacks") + delim;
    b.write("pos", delim, "t", tp);
    b.write("neg", delim, "f", tp);
    b.write("neg", delim, "t", tn);
    b.test(tp, "eps", next, "dead");
    b.test(tn, "eps", "dead", next);
  }
  return b.build();
}

// ---------------------------------------------------------------------------

SetAutomaton tm_to_unary_dsa(const TmDescription& tm, std::size_t n) {
  if (n == 0) throw Error("tm_to_unary_dsa: N must be at least 1");
  if (tm.initial >= tm.states.size()) throw Error("tm_to_unary_dsa: bad initial state");
  enum Ctl { Start, Write1, Update, Write2, Reset };
  static const char* kCtl[] = {"start", "write1", "update", "write2", "reset"};
  // (head cell k, scanned bit a, state q, counter, control)
  using Key = std::tuple<std::size_t, int, std::size_t, std::size_t, int>;
  const std::size_t cells = 2 * n;

  SaBuilder b(Alphabet(), Alphabet({"|"}));
  std::set<Key> seen;
  std::deque<Key> queue;
  auto name = [&](const Key& key) {
    auto [k, a, q, c, ctl] = key;
    return "(" + std::to_string(k) + "," + std::to_string(a) + "," + tm.states[q] + "," +
           std::to_string(c) + "," + kCtl[ctl] + ")";
  };
  auto visit = [&](const Key& key) {
    if (seen.insert(key).second) queue.push_back(key);
    return name(key);
  };
  const Key init{n, 0, tm.initial, 0, Start};
  b.set_initial(visit(init));
  const Word tally{0};

  while (!queue.empty()) {
    const Key key = queue.front();
    queue.pop_front();
    auto [k, a, q, c, ctl] = key;
    const std::string src = name(key);
    if (ctl == Start && tm.accepting.count(q)) {
      b.accept(src);
      continue;
    }
    if (ctl == Reset) {
      b.write(src, "eps", Word{}, visit({k, a, q, 0, Start}));
      continue;
    }
    auto it = tm.delta.find({a, q});
    if (it == tm.delta.end()) continue;
    const TmMove& mv = it->second;
    switch (ctl) {
      case Start:
        b.write(src, "eps", tally, visit({k, a, q, 1, Write1}));
        break;
      case Write1:
        // the tape holds p_k = |^k
        if (c < k) {
          b.write(src, "eps", tally, visit({k, a, q, c + 1, Write1}));
        } else if (mv.write == 1) {
          b.in(src, "eps", visit({k, a, q, 0, Update}));
        } else {
          b.out(src, "eps", visit({k, a, q, 0, Update}));
        }
        break;
      case Update: {
        const long long next = static_cast<long long>(k) + mv.dir;
        if (next < 1 || next > static_cast<long long>(cells)) break;  // head leaves the tape
        const auto k2 = static_cast<std::size_t>(next);
        b.write(src, "eps", tally, visit({k2, a, q, 1, Write2}));
        break;
      }
      case Write2:
        if (c < k) {
          b.write(src, "eps", tally, visit({k, a, q, c + 1, Write2}));
        } else {
          b.test(src, "eps", visit({k, 1, mv.next, 0, Reset}), visit({k, 0, mv.next, 0, Reset}));
        }
        break;
      case Reset:
        break;
    }
  }
  return b.build();
}

// ---------------------------------------------------------------------------

SetAutomaton membership_to_emptiness(const SetAutomaton& input, const Word& w) {
  if (!input.is_deterministic()) throw Error("membership_to_emptiness: automaton is not deterministic");
  const SetAutomaton sa = input.has_eps_loops() ? remove_eps_loops(input) : input;
  Word full = w;
  if (sa.uses_endmarker()) full.push_back(kEndmarker);
  const std::size_t len = full.size();

  std::vector<std::string> names;
  std::vector<TransitionRule> rules;
  std::vector<State> accepting;
  std::map<std::pair<State, std::size_t>, State> index;
  std::vector<std::pair<State, std::size_t>> keys;
  auto node = [&](State s, std::size_t i) {
    auto [it, inserted] = index.emplace(std::pair{s, i}, static_cast<State>(names.size()));
    if (inserted) {
      names.push_back(sa.state_name(s) + "@" + std::to_string(i));
      keys.push_back({s, i});
    }
    return it->second;
  };
  // Skip chain: reads the rest of w after the original run got stuck.
  std::vector<State> skip(len + 1, kNoState);
  auto skip_node = [&](std::size_t i) {
    if (skip[i] == kNoState) {
      skip[i] = static_cast<State>(names.size());
      names.push_back("skip@" + std::to_string(i));
      keys.push_back({kNoState, i});
    }
    return skip[i];
  };

  node(sa.initial(), 0);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto [s, i] = keys[k];
    const auto src = static_cast<State>(k);
    if (s == kNoState) {
      if (i == len)
        accepting.push_back(src);
      else
        rules.push_back({RuleKind::Write, src, full[i], skip_node(i + 1), kNoState, {}});
      continue;
    }
    if (i == len && sa.is_accepting(s)) continue;  // the original accepts here
    bool moved = false;
    for (std::size_t ri : sa.rules_from(s)) {
      const auto& r = sa.rule(ri);
      std::size_t j;
      if (r.sym == kEpsilon)
        j = i;
      else if (i < len && r.sym == full[i])
        j = i + 1;
      else
        continue;
      moved = true;
      TransitionRule nr = r;
      nr.src = src;
      nr.dst = node(r.dst, j);
      if (r.kind == RuleKind::Test) nr.dst_minus = node(r.dst_minus, j);
      rules.push_back(std::move(nr));
    }
    if (moved) continue;
    if (i == len)
      accepting.push_back(src);
    else
      rules.push_back({RuleKind::Write, src, full[i], skip_node(i + 1), kNoState, {}});
  }
  return SetAutomaton(std::move(names), sa.input_alphabet(), sa.work_alphabet(),
                      sa.uses_endmarker(), std::move(rules), 0, std::move(accepting));
}

}  // namespace sakit
