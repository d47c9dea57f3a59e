#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sakit {

using Symbol = std::uint32_t;
using State = std::uint32_t;
using Word = std::vector<Symbol>;

/// Label of an empty move. Never a valid alphabet index.
inline constexpr Symbol kEpsilon = std::numeric_limits<Symbol>::max();
/// Right endmarker on set-automaton input tapes.
inline constexpr Symbol kEndmarker = std::numeric_limits<Symbol>::max() - 1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the text loaders on malformed input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Ordered finite alphabet. The declaration order is the total symbol order
/// used for length-lexicographic enumeration.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(std::string_view name) const;
  Symbol id(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  /// Splits a concatenated word into symbols, longest match first.
  /// "-" and "" denote the empty word.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
  std::size_t longest_ = 0;
};

/// Length-lexicographic order on words (shorter first, then by symbol id).
inline bool length_lex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct LengthLexLess {
  bool operator()(const Word& a, const Word& b) const { return length_lex_less(a, b); }
};

/// All words over an alphabet of the given size with length <= max_len,
/// in length-lexicographic order.
std::vector<Word> all_words(std::size_t alphabet_size, std::size_t max_len);

}  // namespace sakit
