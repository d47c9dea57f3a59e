#include "sakit/text_format.hpp"

#include <map>
#include <regex>
#include <sstream>

namespace sakit {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

/// Splits into whitespace-separated tokens; `comment` starts a comment when
/// it begins a token.
std::vector<Line> tokenize(std::string_view text, char comment) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    std::istringstream ls(raw);
    Line line{n, {}};
    for (std::string tok; ls >> tok;) {
      if (tok.front() == comment) break;
      line.tokens.push_back(tok);
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

/// `key:` header; returns the values or nullopt when the line is not that header.
std::optional<std::vector<std::string>> header(const Line& l, std::string_view key) {
  const std::string& t = l.tokens.front();
  if (t.size() == key.size() + 1 && t.compare(0, key.size(), key) == 0 && t.back() == ':')
    return std::vector<std::string>(l.tokens.begin() + 1, l.tokens.end());
  return std::nullopt;
}

Word parse_word_at(const Alphabet& a, const std::string& text, std::size_t line) {
  try {
    return a.parse_word(text);
  } catch (const Error& e) {
    fail(line, e.what());
  }
}

std::string word_text(const Alphabet& a, const Word& w) {
  return w.empty() ? "-" : a.format_word(w);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += " " + s;
  return out;
}

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos || name.front() == ';')
    throw Error("name '" + name + "' cannot be serialized");
}

/// Named states in first-mention order.
struct StateTable {
  std::vector<std::string> names;
  std::map<std::string, State> index;
  State get(const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<State>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

SetAutomaton parse_sa(std::string_view text) {
  std::optional<Alphabet> input, work;
  bool endmarker = false;
  std::optional<std::string> start;
  std::vector<std::string> accept;
  StateTable st;
  struct RawRule {
    std::size_t line;
    std::vector<std::string> tok;
  };
  std::vector<RawRule> raw;
  for (const auto& l : tokenize(text, ';')) {
    try {
      if (auto v = header(l, "input")) {
        input = Alphabet(*v);
      } else if (auto v = header(l, "work")) {
        work = Alphabet(*v);
      } else if (auto v = header(l, "endmarker")) {
        if (v->size() != 1 || ((*v)[0] != "yes" && (*v)[0] != "no"))
          fail(l.number, "endmarker must be yes or no");
        endmarker = (*v)[0] == "yes";
      } else if (auto v = header(l, "states")) {
        for (const auto& s : *v) st.get(s);
      } else if (auto v = header(l, "start")) {
        if (v->size() != 1) fail(l.number, "start needs exactly one state");
        start = (*v)[0];
      } else if (auto v = header(l, "accept")) {
        accept.insert(accept.end(), v->begin(), v->end());
      } else {
        raw.push_back({l.number, l.tokens});
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(l.number, e.what());
    }
  }
  if (!input || !work) throw ParseError("missing input: or work: header");
  if (!start) throw ParseError("missing start: header");
  const State initial = st.get(*start);
  std::vector<TransitionRule> rules;
  for (const auto& [line, tok] : raw) {
    if (tok.size() < 4) fail(line, "transition needs at least four fields");
    TransitionRule r;
    r.src = st.get(tok[0]);
    if (tok[1] == "eps")
      r.sym = kEpsilon;
    else if (tok[1] == "end")
      r.sym = kEndmarker;
    else if (auto s = input->find(tok[1]))
      r.sym = *s;
    else
      fail(line, "unknown input symbol '" + tok[1] + "'");
    const std::string& kind = tok[2];
    if (kind == "write") {
      if (tok.size() != 5) fail(line, "write takes WORD and DST");
      r.kind = RuleKind::Write;
      r.word = parse_word_at(*work, tok[3], line);
      r.dst = st.get(tok[4]);
    } else if (kind == "in" || kind == "out") {
      if (tok.size() != 4) fail(line, kind + " takes DST");
      r.kind = kind == "in" ? RuleKind::In : RuleKind::Out;
      r.dst = st.get(tok[3]);
    } else if (kind == "test") {
      if (tok.size() != 5) fail(line, "test takes DST+ and DST-");
      r.kind = RuleKind::Test;
      r.dst = st.get(tok[3]);
      r.dst_minus = st.get(tok[4]);
    } else {
      fail(line, "unknown rule kind '" + kind + "'");
    }
    rules.push_back(std::move(r));
  }
  std::vector<State> acc;
  for (const auto& a : accept) acc.push_back(st.get(a));
  try {
    return SetAutomaton(st.names, *input, *work, endmarker, std::move(rules), initial, acc);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_sa(const SetAutomaton& sa) {
  for (const auto& n : sa.state_names()) check_name(n);
  std::ostringstream o;
  o << "input:" << join(sa.input_alphabet().names()) << "\n";
  o << "work:" << join(sa.work_alphabet().names()) << "\n";
  o << "endmarker: " << (sa.uses_endmarker() ? "yes" : "no") << "\n";
  o << "states:" << join(sa.state_names()) << "\n";
  o << "start: " << sa.state_name(sa.initial()) << "\n";
  o << "accept:";
  for (State s : sa.accepting()) o << " " << sa.state_name(s);
  o << "\n";
  for (const auto& r : sa.rules()) {
    o << sa.state_name(r.src) << " ";
    if (r.sym == kEpsilon)
      o << "eps";
    else if (r.sym == kEndmarker)
      o << "end";
    else
      o << sa.input_alphabet().name(r.sym);
    switch (r.kind) {
      case RuleKind::Write:
        o << " write " << word_text(sa.work_alphabet(), r.word) << " " << sa.state_name(r.dst);
        break;
      case RuleKind::In: o << " in " << sa.state_name(r.dst); break;
      case RuleKind::Out: o << " out " << sa.state_name(r.dst); break;
      case RuleKind::Test:
        o << " test " << sa.state_name(r.dst) << " " << sa.state_name(r.dst_minus);
        break;
    }
    o << "\n";
  }
  return o.str();
}

// ---------------------------------------------------------------------------

Nfa parse_nfa(std::string_view text) {
  std::optional<Alphabet> alphabet;
  StateTable st;
  std::vector<State> initial, accepting;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> trans;
  for (const auto& l : tokenize(text, ';')) {
    const auto& t = l.tokens;
    if (auto v = header(l, "alphabet")) {
      try {
        alphabet = Alphabet(*v);
      } catch (const Error& e) {
        fail(l.number, e.what());
      }
    } else if (t[0] == "state") {
      for (std::size_t i = 1; i < t.size(); ++i) st.get(t[i]);
    } else if (t[0] == "initial") {
      for (std::size_t i = 1; i < t.size(); ++i) initial.push_back(st.get(t[i]));
    } else if (t[0] == "accept") {
      for (std::size_t i = 1; i < t.size(); ++i) accepting.push_back(st.get(t[i]));
    } else if (t[0] == "trans") {
      if (t.size() != 4) fail(l.number, "trans takes SRC LABEL DST");
      trans.push_back({l.number, t});
    } else {
      fail(l.number, "unknown directive '" + t[0] + "'");
    }
  }
  if (!alphabet) throw ParseError("missing alphabet: header");
  std::vector<NfaTransition> ts;
  for (const auto& [line, t] : trans) {
    Symbol label = kEpsilon;
    if (t[2] != "eps") {
      auto s = alphabet->find(t[2]);
      if (!s) fail(line, "unknown symbol '" + t[2] + "'");
      label = *s;
    }
    ts.push_back({st.get(t[1]), label, st.get(t[3])});
  }
  return Nfa(*alphabet, st.names.size(), std::move(ts), initial, accepting, st.names);
}

std::string serialize_nfa(const Nfa& a) {
  std::ostringstream o;
  o << "alphabet:" << join(a.alphabet().names()) << "\n";
  for (State s = 0; s < a.num_states(); ++s) {
    check_name(a.state_name(s));
    o << "state " << a.state_name(s) << "\n";
  }
  for (State s : a.initial()) o << "initial " << a.state_name(s) << "\n";
  for (State s : a.accepting()) o << "accept " << a.state_name(s) << "\n";
  for (const auto& t : a.transitions())
    o << "trans " << a.state_name(t.src) << " "
      << (t.label == kEpsilon ? std::string("eps") : a.alphabet().name(t.label)) << " "
      << a.state_name(t.dst) << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

Fst parse_fst(std::string_view text) {
  std::optional<Alphabet> input, output;
  StateTable st;
  std::optional<State> initial;
  std::vector<State> accepting;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> trans;
  for (const auto& l : tokenize(text, ';')) {
    const auto& t = l.tokens;
    try {
      if (auto v = header(l, "input")) {
        input = Alphabet(*v);
        continue;
      }
      if (auto v = header(l, "output")) {
        output = Alphabet(*v);
        continue;
      }
    } catch (const Error& e) {
      fail(l.number, e.what());
    }
    if (t[0] == "state") {
      for (std::size_t i = 1; i < t.size(); ++i) st.get(t[i]);
    } else if (t[0] == "initial") {
      if (t.size() != 2) fail(l.number, "initial takes one state");
      initial = st.get(t[1]);
    } else if (t[0] == "accept") {
      for (std::size_t i = 1; i < t.size(); ++i) accepting.push_back(st.get(t[i]));
    } else if (t[0] == "trans") {
      if (t.size() != 6 || t[3] != "/") fail(l.number, "trans takes SRC READ / WRITE DST");
      trans.push_back({l.number, t});
    } else {
      fail(l.number, "unknown directive '" + t[0] + "'");
    }
  }
  if (!input || !output) throw ParseError("missing input: or output: header");
  if (!initial) throw ParseError("missing initial state");
  // Declared states first so that builder-created split states come last.
  for (const auto& [line, t] : trans) {
    st.get(t[1]);
    st.get(t[5]);
  }
  FstBuilder b(*input, *output);
  for (const auto& n : st.names) b.add_state(n);
  for (const auto& [line, t] : trans)
    b.add(st.get(t[1]), parse_word_at(*input, t[2], line), parse_word_at(*output, t[4], line),
          st.get(t[5]));
  b.set_initial(*initial);
  for (State s : accepting) b.add_accepting(s);
  return b.build();
}

std::string serialize_fst(const Fst& t) {
  std::ostringstream o;
  o << "input:" << join(t.input_alphabet().names()) << "\n";
  o << "output:" << join(t.output_alphabet().names()) << "\n";
  for (State s = 0; s < t.num_states(); ++s) {
    check_name(t.state_name(s));
    o << "state " << t.state_name(s) << "\n";
  }
  o << "initial " << t.state_name(t.initial()) << "\n";
  for (State s : t.accepting()) o << "accept " << t.state_name(s) << "\n";
  auto sym = [](const Alphabet& a, Symbol s) { return s == kEpsilon ? std::string("-") : a.name(s); };
  for (const auto& tr : t.transitions())
    o << "trans " << t.state_name(tr.src) << " " << sym(t.input_alphabet(), tr.read) << " / "
      << sym(t.output_alphabet(), tr.write) << " " << t.state_name(tr.dst) << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

CvpProgram parse_cvp(std::string_view text) {
  static const std::regex kAssign(
      R"(^\s*P(\d+)\s*:=\s*(?:([01])|NOT\s*P(\d+)|P(\d+)\s*(AND|OR)\s*P(\d+))\s*$)");
  std::string normalized;
  for (std::size_t i = 0; i < text.size();) {
    // Unicode connectives are accepted as synonyms.
    if (text.compare(i, 3, "∧") == 0) {
      normalized += " AND ";
      i += 3;
    } else if (text.compare(i, 3, "∨") == 0) {
      normalized += " OR ";
      i += 3;
    } else if (text.compare(i, 2, "¬") == 0) {
      normalized += " NOT ";
      i += 2;
    } else {
      normalized += text[i++];
    }
  }
  CvpProgram p;
  std::istringstream in(normalized);
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    if (auto c = raw.find('#'); c != std::string::npos) raw.erase(c);
    std::istringstream parts(raw);
    for (std::string stmt; std::getline(parts, stmt, ';');) {
      if (stmt.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::smatch m;
      if (!std::regex_match(stmt, m, kAssign)) fail(n, "malformed assignment '" + stmt + "'");
      auto num = [&](int g) { return static_cast<std::size_t>(std::stoull(m[g].str())); };
      CvpAssignment a{CvpAssignment::Kind::One, num(1)};
      if (m[2].matched) {
        a.kind = m[2] == "1" ? CvpAssignment::Kind::One : CvpAssignment::Kind::Zero;
      } else if (m[3].matched) {
        a.kind = CvpAssignment::Kind::Not;
        a.lhs = num(3);
      } else {
        a.kind = m[5] == "AND" ? CvpAssignment::Kind::And : CvpAssignment::Kind::Or;
        a.lhs = num(4);
        a.rhs = num(6);
      }
      p.assignments.push_back(a);
    }
  }
  if (p.assignments.empty()) throw ParseError("program has no assignments");
  return p;
}

std::string serialize_cvp(const CvpProgram& p) {
  std::ostringstream o;
  for (const auto& a : p.assignments) {
    o << "P" << a.target << " := ";
    switch (a.kind) {
      case CvpAssignment::Kind::One: o << "1"; break;
      case CvpAssignment::Kind::Zero: o << "0"; break;
      case CvpAssignment::Kind::Not: o << "NOT P" << a.lhs; break;
      case CvpAssignment::Kind::And: o << "P" << a.lhs << " AND P" << a.rhs; break;
      case CvpAssignment::Kind::Or: o << "P" << a.lhs << " OR P" << a.rhs; break;
    }
    o << "\n";
  }
  return o.str();
}

// ---------------------------------------------------------------------------

CnfInstance parse_cnf(std::string_view text) {
  CnfInstance inst;
  Clause current;
  auto var = [](std::size_t line, const std::string& tok) -> long long {
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size()) fail(line, "bad literal '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(line, "bad literal '" + tok + "'");
    }
  };
  for (const auto& l : tokenize(text, '%')) {
    const auto& t = l.tokens;
    if (t[0] == "c" || t[0] == "p") continue;
    if (t[0] == "v") {
      std::vector<std::string> list;
      for (std::size_t i = 1; i < t.size(); ++i) {
        long long v = var(l.number, t[i]);
        if (v == 0) break;
        if (v < 0) fail(l.number, "list entries must be positive");
        list.push_back(variable_code(static_cast<std::size_t>(v)));
      }
      inst.list = std::move(list);
      continue;
    }
    for (const auto& tok : t) {
      long long v = var(l.number, tok);
      if (v == 0) {
        if (current.empty()) fail(l.number, "empty clause");
        inst.phi.clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back({variable_code(static_cast<std::size_t>(v < 0 ? -v : v)), v < 0});
      }
    }
  }
  if (!current.empty()) inst.phi.clauses.push_back(std::move(current));
  return inst;
}

// ---------------------------------------------------------------------------

TmDescription parse_tm(std::string_view text) {
  TmDescription tm;
  std::map<std::string, std::size_t> index;
  auto state = [&](std::size_t line, const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) fail(line, "undeclared state '" + name + "'");
    return it->second;
  };
  std::optional<std::size_t> start;
  bool have_states = false;
  for (const auto& l : tokenize(text, '#')) {
    const auto& t = l.tokens;
    if (auto v = header(l, "states")) {
      for (const auto& s : *v)
        if (index.emplace(s, tm.states.size()).second) tm.states.push_back(s);
      have_states = true;
    } else if (auto v = header(l, "start")) {
      if (v->size() != 1) fail(l.number, "start takes one state");
      start = state(l.number, (*v)[0]);
    } else if (auto v = header(l, "accept")) {
      for (const auto& s : *v) tm.accepting.insert(state(l.number, s));
    } else {
      // q a -> q' a' dir
      if (t.size() != 6 || t[2] != "->") fail(l.number, "expected 'q a -> q2 b L|S|R'");
      auto bit = [&](const std::string& s) {
        if (s != "0" && s != "1") fail(l.number, "tape symbols are 0 and 1");
        return s == "1" ? 1 : 0;
      };
      int dir = 0;
      if (t[5] == "L" || t[5] == "-1")
        dir = -1;
      else if (t[5] == "R" || t[5] == "+1" || t[5] == "1")
        dir = 1;
      else if (t[5] != "S" && t[5] != "0")
        fail(l.number, "direction must be L, S or R");
      const std::size_t q = state(l.number, t[0]);
      const int a = bit(t[1]);
      if (!tm.delta.emplace(std::pair{a, q}, TmMove{bit(t[4]), state(l.number, t[3]), dir}).second)
        fail(l.number, "duplicate transition");
    }
  }
  if (!have_states || !start) throw ParseError("missing states: or start: header");
  tm.initial = *start;
  return tm;
}

std::string serialize_tm(const TmDescription& tm) {
  std::ostringstream o;
  o << "states:" << join(tm.states) << "\n";
  o << "start: " << tm.states.at(tm.initial) << "\n";
  o << "accept:";
  for (auto s : tm.accepting) o << " " << tm.states.at(s);
  o << "\n";
  for (const auto& [key, mv] : tm.delta)
    o << tm.states.at(key.second) << " " << key.first << " -> " << tm.states.at(mv.next) << " "
      << mv.write << " " << (mv.dir < 0 ? "L" : mv.dir > 0 ? "R" : "S") << "\n";
  return o.str();
}

}  // namespace sakit
