#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sakit/gallery.hpp"
#include "sakit/set_automaton.hpp"

using namespace sakit;

namespace {

const Alphabet kBits({"0", "1"});

std::size_t rule_index(const SetAutomaton& sa, const std::string& src, Symbol sym) {
  for (std::size_t i = 0; i < sa.rules().size(); ++i)
    if (sa.state_name(sa.rule(i).src) == src && sa.rule(i).sym == sym) return i;
  throw Error("no such rule");
}

Configuration config(State s, Word tape, std::set<Word> set) { return {s, {}, std::move(tape), std::move(set)}; }

/// One state with a single rule of the given kind reading eps.
SetAutomaton one_rule(RuleKind kind) {
  SaBuilder b(Alphabet({"x"}), kBits);
  b.set_initial("s");
  b.state("p");
  b.state("m");
  TransitionRule r{kind, 0, kEpsilon, 1};
  if (kind == RuleKind::Test) r.dst_minus = 2;
  b.add(r);
  return b.build();
}

std::string text(const Word& w, const Alphabet& a) { return a.format_word(w); }

}  // namespace

TEST(Step, InsertRemoveTest) {
  const SetAutomaton in = one_rule(RuleKind::In), out = one_rule(RuleKind::Out),
                     test = one_rule(RuleKind::Test);
  Configuration c = step(in, config(0, {0, 1}, {}), in.rule(0));
  EXPECT_EQ(c.set, (std::set<Word>{{0, 1}}));
  EXPECT_TRUE(c.tape.empty());
  c = step(out, config(0, {0, 1}, {{0, 1}, {1, 0}}), out.rule(0));
  EXPECT_EQ(c.set, (std::set<Word>{{1, 0}}));
  c = step(test, config(0, {0, 1}, {{1, 0}}), test.rule(0));
  EXPECT_EQ(c.state, 2u);
  EXPECT_EQ(c.set, (std::set<Word>{{1, 0}}));
  EXPECT_TRUE(c.tape.empty());
  c = step(test, config(0, {1, 0}, {{1, 0}}), test.rule(0));
  EXPECT_EQ(c.state, 1u);
}

TEST(Step, RejectsDisabledRules) {
  const SetAutomaton p2 = build_perk_dsa(2);
  Configuration c = initial_configuration(p2, {0});
  const auto& r = p2.rule(rule_index(p2, "copy", 1));
  EXPECT_FALSE(rule_enabled(p2, c, r));
  EXPECT_THROW(step(p2, c, r), Error);
}

TEST(SetAutomaton, ValidatesStructure) {
  EXPECT_THROW(SetAutomaton({"s"}, Alphabet({"a"}), Alphabet({"#"}), false, {}, 0, {}), Error);
  EXPECT_THROW(SetAutomaton({"s"}, Alphabet({"a"}), Alphabet({"in"}), false, {}, 0, {}), Error);
  EXPECT_THROW(SetAutomaton({"s"}, Alphabet({"eps"}), kBits, false, {}, 0, {}), Error);
  const TransitionRule end{RuleKind::Write, 0, kEndmarker, 0};
  EXPECT_THROW(SetAutomaton({"s"}, Alphabet({"a"}), kBits, false, {end}, 0, {}), Error);
  const TransitionRule bad{RuleKind::In, 0, kEpsilon, 0, kNoState, {0}};
  EXPECT_THROW(SetAutomaton({"s"}, Alphabet({"a"}), kBits, false, {bad}, 0, {}), Error);
  EXPECT_NO_THROW(SetAutomaton({"s"}, Alphabet({"a"}), kBits, true, {end}, 0, {}));
}

TEST(SetAutomaton, DeterminismCheck) {
  EXPECT_TRUE(build_perk_dsa(2).is_deterministic());
  EXPECT_TRUE(build_sacvp_dsa().is_deterministic());
  EXPECT_FALSE(build_nonprimes_nsa().is_deterministic());
  SaBuilder b(Alphabet({"a"}), kBits);
  b.set_initial("s");
  b.write("s", "a", "0", "s");
  b.in("s", "eps", "t");
  EXPECT_FALSE(b.build().is_deterministic());
}

TEST(RunDsa, PerTwoExamples) {
  const SetAutomaton p2 = build_perk_dsa(2);
  const Alphabet& in = p2.input_alphabet();
  EXPECT_EQ(run_dsa(p2, in.parse_word("01#01#")).verdict, DsaVerdict::Accept);
  EXPECT_EQ(run_dsa(p2, in.parse_word("01#10#")).verdict, DsaVerdict::Reject);
  EXPECT_EQ(run_dsa(p2, {}).verdict, DsaVerdict::Reject);
}

TEST(RunDsa, RequiresDeterminism) { EXPECT_THROW(run_dsa(build_nonprimes_nsa(), {}), Error); }

TEST(RunDsa, PureWriteCycleDiverges) {
  SaBuilder b(Alphabet({"x"}), kBits);
  b.set_initial("s");
  b.write("s", "eps", "0", "s");
  b.accept("never");
  const DsaResult r = run_dsa(b.build(), {}, 5000);
  EXPECT_EQ(r.verdict, DsaVerdict::BudgetExceeded);

  // Write-then-insert loop: the tape resets, so a configuration repeats.
  SaBuilder c(Alphabet({"x"}), kBits);
  c.set_initial("s");
  c.write("s", "eps", "0", "t");
  c.in("t", "eps", "s");
  EXPECT_EQ(run_dsa(c.build(), {}, 5000).verdict, DsaVerdict::Reject);
}

TEST(RunDsa, PerTwoAgreesWithPredicate) {
  const SetAutomaton p2 = build_perk_dsa(2);
  for (const auto& w : all_words(3, 7))
    ASSERT_EQ(run_dsa(p2, w, kDefaultBudget, false).verdict == DsaVerdict::Accept,
              oracle::is_repetition(text(w, p2.input_alphabet())));
}

TEST(RunDsa, PerThree) {
  const SetAutomaton p3 = build_perk_dsa(3);
  const Alphabet& in = p3.input_alphabet();
  EXPECT_EQ(run_dsa(p3, in.parse_word("012#012#")).verdict, DsaVerdict::Accept);
  EXPECT_EQ(run_dsa(p3, in.parse_word("#")).verdict, DsaVerdict::Accept);
  EXPECT_EQ(run_dsa(p3, in.parse_word("2#1#")).verdict, DsaVerdict::Reject);
}

TEST(RunDsa, AtMostOneEnabledRuleOnReachableConfigurations) {
  const SetAutomaton p2 = build_perk_dsa(2);
  for (const auto& w : all_words(3, 5)) {
    Configuration c = initial_configuration(p2, w);
    for (int steps = 0; steps < 50; ++steps) {
      std::vector<std::size_t> enabled;
      for (std::size_t i : p2.rules_from(c.state))
        if (rule_enabled(p2, c, p2.rule(i))) enabled.push_back(i);
      ASSERT_LE(enabled.size(), 1u);
      if (enabled.empty()) break;
      c = step(p2, c, p2.rule(enabled[0]));
    }
  }
}

TEST(RunNsa, NonPrimes) {
  const SetAutomaton np = build_nonprimes_nsa();
  const NsaResult four = run_nsa_bounded(np, Word(4, 0), 32);
  ASSERT_TRUE(four.found);
  EXPECT_TRUE(verify_certificate(np, Word(4, 0), four.certificate));
  for (std::size_t budget : {8u, 32u, 200u}) {
    const NsaResult three = run_nsa_bounded(np, Word(3, 0), budget);
    EXPECT_FALSE(three.found);
  }
  EXPECT_TRUE(run_nsa_bounded(np, Word(3, 0), 200).exhausted);
}

TEST(RunNsa, NoRulesOnEmptyWord) {
  SaBuilder b(Alphabet({"a"}), kBits);
  b.set_initial("s");
  b.write("s", "a", "0", "f");
  b.accept("f");
  const NsaResult r = run_nsa_bounded(b.build(), {}, 100);
  EXPECT_FALSE(r.found);
  EXPECT_TRUE(r.exhausted);
}

TEST(Certificate, RoundTripOnGallery) {
  const std::vector<SetAutomaton> gallery{build_perk_dsa(2), build_nonprimes_nsa()};
  for (const auto& sa : gallery)
    for (const auto& w : all_words(sa.input_alphabet().size(), 5)) {
      const NsaResult r = run_nsa_bounded(sa, w, 64);
      if (r.found) ASSERT_TRUE(verify_certificate(sa, w, r.certificate));
    }
}

TEST(Certificate, HandWrittenPerTwo) {
  const SetAutomaton p2 = build_perk_dsa(2);
  const Alphabet& in = p2.input_alphabet();
  const Symbol z = in.id("0"), o = in.id("1"), h = in.id("#");
  RunCertificate cert{{rule_index(p2, "copy", z), false}, {rule_index(p2, "copy", o), false},
                      {rule_index(p2, "copy", h), false}, {rule_index(p2, "rest", z), false},
                      {rule_index(p2, "word", o), false}, {rule_index(p2, "word", h), true},
                      {rule_index(p2, "rest", kEndmarker), false}};
  EXPECT_TRUE(verify_certificate(p2, in.parse_word("01#01#"), cert));
  EXPECT_FALSE(verify_certificate(p2, in.parse_word("01#01#01#"), cert));  // input left over
  cert[5].test_positive = false;
  EXPECT_FALSE(verify_certificate(p2, in.parse_word("01#01#"), cert));
  cert[5].test_positive = true;
  std::swap(cert[0], cert[1]);  // disabled rule
  EXPECT_FALSE(verify_certificate(p2, in.parse_word("01#01#"), cert));
  EXPECT_FALSE(verify_certificate(p2, in.parse_word("01#01#"), {{999, false}}));
}

TEST(ExtractRunProtocol, PerTwo) {
  const SetAutomaton p2 = build_perk_dsa(2);
  const DsaResult r = run_dsa(p2, p2.input_alphabet().parse_word("01#01#"));
  ASSERT_EQ(r.verdict, DsaVerdict::Accept);
  EXPECT_EQ(serialize_protocol(extract_run_protocol(p2, r.trace)), "#01#in#01#test+");
}

TEST(ExtractRunProtocol, NoQueriesAndRejectedTraces) {
  SaBuilder b(Alphabet({"a"}), kBits);
  b.set_initial("s");
  b.write("s", "a", "01", "f");
  b.accept("f");
  const SetAutomaton sa = b.build();
  const DsaResult r = run_dsa(sa, {0});
  ASSERT_EQ(r.verdict, DsaVerdict::Accept);
  EXPECT_TRUE(extract_run_protocol(sa, r.trace).blocks.empty());
  EXPECT_THROW(extract_run_protocol(sa, run_dsa(sa, {0, 0}).trace), Error);
}

TEST(ExtractRunProtocol, AcceptedRunsAreCorrect) {
  const std::vector<SetAutomaton> gallery{build_perk_dsa(2), build_nonprimes_nsa(), build_sasat_nsa()};
  for (const auto& sa : gallery)
    for (const auto& w : all_words(sa.input_alphabet().size(), 5)) {
      const NsaResult r = run_nsa_bounded(sa, w, 64);
      if (!r.found) continue;
      ASSERT_TRUE(check_correct(extract_run_protocol(sa, r.trace)).correct);
    }
}

TEST(Step, SetChangesOnlyByTheTapeWord) {
  const SetAutomaton np = build_nonprimes_nsa();
  oracle::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    Configuration c = initial_configuration(np, Word(static_cast<std::size_t>(rng.uniform(0, 8)), 0));
    for (int k = 0; k < 20; ++k) {
      std::vector<std::size_t> enabled;
      for (std::size_t i : np.rules_from(c.state))
        if (rule_enabled(np, c, np.rule(i))) enabled.push_back(i);
      if (enabled.empty()) break;
      const auto& r = np.rule(rng.pick(enabled));
      const Configuration d = step(np, c, r);
      std::set<Word> expect = c.set;
      if (r.kind == RuleKind::In) expect.insert(c.tape);
      if (r.kind == RuleKind::Out) expect.erase(c.tape);
      ASSERT_EQ(d.set, expect);
      c = d;
    }
  }
}
