#include "sakit/alphabet.hpp"

namespace sakit {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty()) throw Error("alphabet symbol must be non-empty");
    if (!index_.emplace(n, static_cast<Symbol>(i)).second)
      throw Error("duplicate alphabet symbol '" + n + "'");
    longest_ = std::max(longest_, n.size());
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::id(std::string_view name) const {
  auto s = find(name);
  if (!s) throw Error("symbol '" + std::string(name) + "' is not in the alphabet");
  return *s;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word out;
  if (text == "-") return out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t take = std::min(longest_, text.size() - pos);
    bool matched = false;
    for (; take > 0; --take) {
      auto it = index_.find(std::string(text.substr(pos, take)));
      if (it != index_.end()) {
        out.push_back(it->second);
        pos += take;
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ParseError("cannot split '" + std::string(text) + "' into alphabet symbols at offset " +
                       std::to_string(pos));
  }
  return out;
}

std::string Alphabet::format_word(const Word& w) const {
  std::string out;
  for (Symbol s : w) out += name(s);
  return out;
}

std::vector<Word> all_words(std::size_t alphabet_size, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (Symbol a = 0; a < alphabet_size; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace sakit
