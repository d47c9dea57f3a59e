#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "sakit/nfa.hpp"
#include "sakit/protocol.hpp"

namespace sakit {

class SetAutomaton;

/// A family of languages over Gamma sharing one empty-move-free graph.
/// Language i is recognized from the start states of its origin to its
/// accepting states. Indices are 0-based.
class QueryLanguageFamily {
 public:
  struct Member {
    std::size_t origin;
    std::vector<State> accepting;  // sorted
  };

  QueryLanguageFamily() = default;
  QueryLanguageFamily(Nfa graph, std::vector<std::vector<State>> origins,
                      std::vector<Member> members);
  /// Disjoint union of independent automata, one origin each.
  static QueryLanguageFamily from_nfas(const Alphabet& gamma, const std::vector<Nfa>& languages);

  std::size_t size() const { return members_.size(); }
  const Alphabet& gamma() const { return graph_.alphabet(); }
  const Nfa& graph() const { return graph_; }
  const std::vector<std::vector<State>>& origins() const { return origins_; }
  const Member& member(std::size_t i) const { return members_.at(i); }
  /// Standalone trimmed automaton for language i.
  Nfa language(std::size_t i) const;
  bool contains(std::size_t i, const Word& u) const;
  /// Type of a word: the sorted indices of the languages containing it.
  std::vector<std::size_t> type_of(const Word& u) const;

  /// Memo for the product-based elementary checks, shared between copies.
  struct Memo {
    std::mutex mu;
    std::map<std::vector<std::size_t>, std::vector<Word>> elementary;
    std::vector<std::optional<Nfa>> languages;
  };
  Memo& memo() const { return *memo_; }

 private:
  Nfa graph_;
  std::vector<std::vector<State>> origins_;
  std::vector<Member> members_;
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

/// Query triple (q, q', op) of an automaton over a protocol alphabet.
struct QueryTriple {
  State from;
  State to;
  Op op;
  auto operator<=>(const QueryTriple&) const = default;
};

struct QueryLanguages {
  ProtocolAlphabet alphabet;
  /// The input automaton with empty moves removed and trimmed.
  Nfa automaton;
  QueryLanguageFamily family;
  std::vector<QueryTriple> triples;  // triples[i] indexes family member i
  std::map<QueryTriple, std::size_t> index;
};

/// Protocol alphabet of an automaton whose alphabet is Gamma + {#, in, out, test+, test-}.
ProtocolAlphabet protocol_alphabet_of(const Alphabet& a);

/// Query languages R(q, q', op) of an automaton over a protocol alphabet;
/// empty languages are dropped.
QueryLanguages extract_query_languages(const Nfa& a);

/// Product/complement decisions for the elementary language of type I.
bool elementary_nonempty(const QueryLanguageFamily& fam, const std::vector<std::size_t>& type);
bool elementary_at_least_two(const QueryLanguageFamily& fam, const std::vector<std::size_t>& type);
/// Up to two length-lexicographically smallest words of R_I.
std::vector<Word> elementary_representatives(const QueryLanguageFamily& fam,
                                             const std::vector<std::size_t>& type);

/// |intersection of L(nfas)| >= 2 through the padded perfect-shuffle
/// construction over Sigma + {pad}.
bool shuffle_at_least_two(const std::vector<Nfa>& nfas);

/// All nonempty elementary languages of a family, found by one joint subset
/// construction. Counts are capped at 2.
class TypeTable {
 public:
  explicit TypeTable(const QueryLanguageFamily& fam, std::size_t state_limit = 1u << 21);

  std::size_t size() const { return types_.size(); }
  const std::vector<std::size_t>& type(std::size_t t) const { return types_[t]; }
  std::size_t count(std::size_t t) const { return counts_[t]; }
  std::optional<std::size_t> find(const std::vector<std::size_t>& type) const;
  /// Types containing family member i.
  const std::vector<std::size_t>& types_with(std::size_t i) const { return with_[i]; }
  /// Up to two smallest words of the type, length-lexicographically.
  const std::vector<Word>& representatives(std::size_t t) const;

 private:
  Dfa joint_;
  std::vector<std::size_t> state_type_;
  std::vector<std::vector<std::size_t>> types_;
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::size_t>> with_;
  std::map<std::vector<std::size_t>, std::size_t> lookup_;
  mutable std::vector<std::optional<std::vector<Word>>> reps_;
  mutable std::mutex reps_mu_;
};

struct TypedProtocol {
  Protocol protocol;
  std::vector<std::size_t> types;  // family index per block
};

/// Throws Error unless every block word lies in its indexed language.
void check_typing(const TypedProtocol& p, const QueryLanguageFamily& fam);

struct NrrResult {
  bool nonempty = false;
  TypedProtocol witness;  // meaningful when nonempty
};

/// Decides whether L(a) contains a correct protocol.
NrrResult nrr_decide(const Nfa& a);

struct BruteForceResult {
  bool found = false;
  Protocol witness;
};

/// Enumerates protocols with at most max_blocks blocks and query words of
/// length <= max_word_len over the automaton's Gamma.
BruteForceResult brute_force_nrr(const Nfa& a, std::size_t max_blocks, std::size_t max_word_len);

struct EmptinessResult {
  bool empty = true;
  /// Protocol over the normalized work alphabet, and an input word whose
  /// extractor image contains it.
  TypedProtocol witness;
  Word input;
};

EmptinessResult sa_emptiness(const SetAutomaton& sa);

struct Classification {
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  std::set<Word> stable;
  std::size_t steps = 0;
};

Classification classify_small_large(const QueryLanguageFamily& fam);

/// First transformation: stable words kept, unstable words redirected to
/// critical words or to fresh words never inserted.
TypedProtocol transform_bound_set(const TypedProtocol& p, const QueryLanguageFamily& fam);

/// Second transformation: words of non-singleton elementary languages
/// replaced by u_I (in, test+) or v_I (out, test-).
TypedProtocol transform_unique_per_type(const TypedProtocol& p, const QueryLanguageFamily& fam);

}  // namespace sakit
