#include "sakit/protocol.hpp"

#include <array>

#include "sakit/set_automaton.hpp"

namespace sakit {

namespace {

constexpr std::array<std::string_view, 4> kOpTokens = {"in", "out", "test+", "test-"};

Op parse_op(std::string_view tok) {
  for (std::size_t i = 0; i < kOpTokens.size(); ++i)
    if (kOpTokens[i] == tok) return static_cast<Op>(i);
  throw ParseError("unknown protocol operation '" + std::string(tok) + "'");
}

void check_gamma(const Alphabet& gamma) {
  for (const auto& n : gamma.names())
    if (is_reserved_work_symbol(n))
      throw Error("work symbol '" + n + "' collides with a reserved protocol token");
}

}  // namespace

std::string_view op_token(Op op) { return kOpTokens[static_cast<std::size_t>(op)]; }

bool is_test(Op op) { return op == Op::TestPlus || op == Op::TestMinus; }

Alphabet binary_gamma() { return Alphabet({"a", "b"}); }

bool is_reserved_work_symbol(std::string_view name) {
  if (name.find('#') != std::string_view::npos) return true;
  for (auto tok : kOpTokens)
    if (name == tok) return true;
  return name == "eps" || name == "end" || name == "-";
}

ProtocolAlphabet::ProtocolAlphabet(const Alphabet& g) : gamma_size(g.size()) {
  check_gamma(g);
  std::vector<std::string> names = g.names();
  names.emplace_back("#");
  for (auto tok : kOpTokens) names.emplace_back(tok);
  symbols = Alphabet(std::move(names));
  hash = static_cast<Symbol>(gamma_size);
  in = hash + 1;
  out = hash + 2;
  test_plus = hash + 3;
  test_minus = hash + 4;
}

Symbol ProtocolAlphabet::op_symbol(Op op) const {
  return in + static_cast<Symbol>(op);
}

Alphabet ProtocolAlphabet::gamma() const {
  return Alphabet(std::vector<std::string>(symbols.names().begin(),
                                           symbols.names().begin() + gamma_size));
}

Protocol parse_protocol(std::string_view text, const Alphabet& gamma) {
  check_gamma(gamma);
  Protocol p{gamma, {}};
  if (text.empty() || text.front() != '#')
    throw ParseError("protocol must start with '#'");
  std::vector<std::string_view> parts;
  std::size_t start = 1;
  while (true) {
    std::size_t next = text.find('#', start);
    parts.push_back(text.substr(start, next == std::string_view::npos ? next : next - start));
    if (next == std::string_view::npos) break;
    start = next + 1;
  }
  if (parts.size() % 2 != 0) throw ParseError("protocol block is missing its operation");
  for (std::size_t i = 0; i < parts.size(); i += 2) {
    if (parts[i] == "-") throw ParseError("'-' is not a query word");
    Word u = gamma.parse_word(parts[i]);
    if (parts[i + 1].empty()) throw ParseError("empty protocol operation (trailing '#'?)");
    p.blocks.push_back({std::move(u), parse_op(parts[i + 1])});
  }
  return p;
}

std::string serialize_protocol(const Protocol& p) {
  std::string out;
  for (const auto& b : p.blocks) {
    out += '#';
    out += p.gamma.format_word(b.word);
    out += '#';
    out += op_token(b.op);
  }
  return out;
}

Word protocol_to_word(const Protocol& p, const ProtocolAlphabet& pa) {
  Word w;
  for (const auto& b : p.blocks) {
    w.push_back(pa.hash);
    for (Symbol s : b.word) {
      if (!pa.is_gamma(s)) throw Error("query word symbol outside the work alphabet");
      w.push_back(s);
    }
    w.push_back(pa.hash);
    w.push_back(pa.op_symbol(b.op));
  }
  return w;
}

Protocol protocol_from_word(const Word& w, const ProtocolAlphabet& pa) {
  Protocol p{pa.gamma(), {}};
  std::size_t i = 0;
  if (w.empty()) throw ParseError("empty word is not a protocol");
  while (i < w.size()) {
    if (w[i] != pa.hash) throw ParseError("protocol block must start with '#'");
    ++i;
    Word u;
    while (i < w.size() && pa.is_gamma(w[i])) u.push_back(w[i++]);
    if (i >= w.size() || w[i] != pa.hash) throw ParseError("protocol block is missing '#'");
    ++i;
    if (i >= w.size() || w[i] < pa.in || w[i] > pa.test_minus)
      throw ParseError("protocol block is missing its operation");
    p.blocks.push_back({std::move(u), static_cast<Op>(w[i] - pa.in)});
    ++i;
  }
  return p;
}

CorrectnessResult check_correct(const Protocol& p) {
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const auto& b = p.blocks[i];
    if (!is_test(b.op)) continue;
    const QueryBlock* support = nullptr;
    for (std::size_t j = i; j-- > 0;) {
      const auto& c = p.blocks[j];
      if (!is_test(c.op) && c.word == b.word) {
        support = &c;
        break;
      }
    }
    bool ok = b.op == Op::TestPlus ? (support && support->op == Op::In)
                                   : (!support || support->op == Op::Out);
    if (!ok) return {false, i + 1};
  }
  return {};
}

std::vector<std::set<Word>> replay_sets(const Protocol& p) {
  std::vector<std::set<Word>> out;
  std::set<Word> s;
  for (const auto& b : p.blocks) {
    if (b.op == Op::In) s.insert(b.word);
    if (b.op == Op::Out) s.erase(b.word);
    out.push_back(s);
  }
  return out;
}

bool replay_correct(const Protocol& p) {
  std::set<Word> s;
  for (const auto& b : p.blocks) {
    switch (b.op) {
      case Op::In: s.insert(b.word); break;
      case Op::Out: s.erase(b.word); break;
      case Op::TestPlus:
        if (!s.contains(b.word)) return false;
        break;
      case Op::TestMinus:
        if (s.contains(b.word)) return false;
        break;
    }
  }
  return true;
}

SetAutomaton build_mprot(const Alphabet& gamma) {
  ProtocolAlphabet pa(gamma);
  SaBuilder b(pa.symbols, gamma, false);
  b.set_initial("start");
  b.state("word");
  b.state("op");
  b.accept("after");
  b.state("sink");
  b.write("start", "#", Word{}, "word");
  for (const auto& g : gamma.names()) b.write("word", g, g, "word");
  b.write("word", "#", Word{}, "op");
  b.in("op", "in", "after");
  b.out("op", "out", "after");
  b.test("op", "test+", "after", "sink");
  b.test("op", "test-", "sink", "after");
  b.write("after", "#", Word{}, "word");
  return b.build();
}

}  // namespace sakit
