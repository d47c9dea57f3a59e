#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sakit/cone.hpp"
#include "sakit/gallery.hpp"
#include "sakit/normalform.hpp"

using namespace sakit;

namespace {

const Alphabet kX({"x"});

/// x -> write a, then insert and accept.
SetAutomaton one_query() {
  SaBuilder b(kX, binary_gamma());
  b.set_initial("s");
  b.write("s", "x", "a", "t");
  b.in("t", "eps", "f");
  b.accept("f");
  return b.build();
}

/// Reads x* and writes the fixed protocol p once.
Fst constant_transducer(const Protocol& p) {
  const ProtocolAlphabet pa(p.gamma);
  FstBuilder b(kX, pa.symbols);
  const State s = b.add_state("s"), f = b.add_state("f");
  b.add(s, {0}, {}, s);
  b.add(s, {}, protocol_to_word(p, pa), f);
  b.add(f, {0}, {}, f);
  b.set_initial(s);
  b.add_accepting(f);
  return b.build();
}

bool direct_member(const SetAutomaton& sa, const Word& w) {
  if (sa.is_deterministic()) return run_dsa(sa, w, kDefaultBudget, false).verdict == DsaVerdict::Accept;
  const NsaResult r = run_nsa_bounded(sa, w, 5000);
  if (!r.found && !r.exhausted) throw Error("search not exhaustive");
  return r.found;
}

}  // namespace

TEST(Extractor, OneQueryImage) {
  const SetAutomaton m = one_query();
  ASSERT_TRUE(satisfies_requirements(m));
  const Fst t = build_extractor(m);
  const ProtocolAlphabet pa(binary_gamma());
  const Nfa img = fst_apply(t, {0});
  EXPECT_EQ(nfa_first_words(img, 3), (std::vector<Word>{protocol_to_word(parse_protocol("#a#in"), pa)}));
  EXPECT_TRUE(nfa_emptiness(fst_apply(t, {})));
  EXPECT_TRUE(nfa_emptiness(fst_apply(t, {0, 0})));
}

TEST(Extractor, RequiresNormalForm) { EXPECT_THROW(build_extractor(build_perk_dsa(2)), Error); }

TEST(Extractor, NoQueriesMeansEmptyImage) {
  // The accepting state is unreachable, so no protocol is produced.
  SaBuilder b(kX, binary_gamma());
  b.set_initial("s");
  b.write("s", "x", "ab", "t");
  b.state("f");
  b.accept("f");
  const SetAutomaton m = b.build();
  ASSERT_TRUE(satisfies_requirements(m));
  const Fst t = build_extractor(m);
  for (const auto& w : all_words(1, 4)) EXPECT_TRUE(nfa_emptiness(fst_apply(t, w)));
}

TEST(Extractor, ImagesAreProtocolsOfRuns) {
  const SetAutomaton m = normalize_requirements(build_perk_dsa(2));
  const Fst t = build_extractor(m);
  const ProtocolAlphabet pa(m.work_alphabet());
  const auto w = build_perk_dsa(2).input_alphabet().parse_word("1#1#");
  const auto ps = nfa_first_words(fst_apply(t, w), 20);
  ASSERT_FALSE(ps.empty());
  bool some_correct = false;
  for (const auto& p : ps) some_correct = some_correct || check_correct(protocol_from_word(p, pa)).correct;
  EXPECT_TRUE(some_correct);
}

TEST(MemberViaProtocols, AgreesWithDirectRuns) {
  const std::vector<SetAutomaton> gallery{build_perk_dsa(2), build_nonprimes_nsa(), one_query()};
  for (const auto& sa : gallery)
    for (const auto& w : all_words(sa.input_alphabet().size(), 6))
      ASSERT_EQ(member_via_protocols(sa, w), direct_member(sa, w)) << sa.input_alphabet().format_word(w);
}

TEST(MemberViaProtocols, NonPrimesUpToForty) {
  const SetAutomaton np = build_nonprimes_nsa();
  for (std::size_t n = 0; n <= 40; ++n)
    ASSERT_EQ(member_via_protocols(np, Word(n, 0)), n < 2 || !oracle::is_prime(n)) << n;
}

TEST(ConeGenerate, FixedProtocolGivesAllOrNothing) {
  const Protocol good = parse_protocol("#ab#in#b#test-#ab#test+");
  const Protocol bad = parse_protocol("#ab#in#ab#out#ab#test+");
  const SetAutomaton all = cone_generate(constant_transducer(good));
  const SetAutomaton none = cone_generate(constant_transducer(bad));
  for (std::size_t n = 0; n <= 4; ++n) {
    EXPECT_TRUE(member_via_protocols(all, Word(n, 0)));
    EXPECT_FALSE(member_via_protocols(none, Word(n, 0)));
  }
}

TEST(ConeGenerate, RejectsNonProtocolOutput) {
  const Fst t(kX, Alphabet({"a", "b"}), 1, {}, 0, {0});
  EXPECT_THROW(cone_generate(t), Error);
}

TEST(ConeGenerate, RoundTripThroughExtractor) {
  const std::vector<SetAutomaton> gallery{build_perk_dsa(2), build_nonprimes_nsa(), one_query()};
  for (const auto& sa : gallery) {
    const SetAutomaton back = cone_generate(build_extractor(normalize_requirements(sa)));
    for (const auto& w : all_words(sa.input_alphabet().size(), 5))
      ASSERT_EQ(member_via_protocols(back, w), direct_member(sa, w)) << sa.input_alphabet().format_word(w);
  }
}

TEST(ConeGenerate, RandomProtocolTransducers) {
  oracle::Rng rng(41);
  const auto words = oracle::words_up_to(2, 2);
  const auto protocols = oracle::all_protocols(binary_gamma(), words, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const Protocol& p = protocols[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(protocols.size()) - 1))];
    const SetAutomaton c = cone_generate(constant_transducer(p));
    ASSERT_EQ(member_via_protocols(c, {0, 0}), check_correct(p).correct) << serialize_protocol(p);
  }
}
