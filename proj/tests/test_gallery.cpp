#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sakit/cone.hpp"
#include "sakit/emptiness.hpp"
#include "sakit/gallery.hpp"
#include "sakit/normalform.hpp"

using namespace sakit;
using oracle::Rng;

namespace {

bool accepts(const SetAutomaton& sa, const std::string& w) {
  return run_dsa(sa, sa.input_alphabet().parse_word(w)).verdict == DsaVerdict::Accept;
}

CvpAssignment op(CvpAssignment::Kind k, std::size_t target, std::size_t lhs = 0, std::size_t rhs = 0) {
  return {k, target, lhs, rhs};
}

Clause clause(std::initializer_list<std::pair<std::size_t, bool>> lits) {
  Clause c;
  for (auto [v, neg] : lits) c.push_back({variable_code(v), neg});
  return c;
}

}  // namespace

TEST(PerK, Examples) {
  const SetAutomaton p2 = build_perk_dsa(2);
  EXPECT_TRUE(accepts(p2, "01#01#01#"));
  EXPECT_FALSE(accepts(p2, "01#0#"));
  EXPECT_FALSE(accepts(p2, ""));
  EXPECT_TRUE(accepts(p2, "#"));
  EXPECT_TRUE(accepts(p2, "##"));
  EXPECT_THROW(build_perk_dsa(0), Error);
}

TEST(PerK, PerThreeAgainstPredicate) {
  const SetAutomaton p3 = build_perk_dsa(3);
  for (const auto& w : all_words(4, 6))
    ASSERT_EQ(run_dsa(p3, w, kDefaultBudget, false).verdict == DsaVerdict::Accept,
              oracle::is_repetition(p3.input_alphabet().format_word(w)));
}

TEST(NonPrimes, SmallLengths) {
  const SetAutomaton np = build_nonprimes_nsa();
  for (std::size_t n = 0; n <= 12; ++n) {
    const NsaResult r = run_nsa_bounded(np, Word(n, 0), 4 * n + 8);
    ASSERT_EQ(r.found, n < 2 || !oracle::is_prime(n)) << n;
    if (r.found) ASSERT_TRUE(verify_certificate(np, Word(n, 0), r.certificate));
  }
}

TEST(Cvp, HandExamples) {
  using K = CvpAssignment::Kind;
  const SetAutomaton m = build_sacvp_dsa();
  ASSERT_TRUE(m.is_deterministic());
  const CvpProgram one{{op(K::One, 1), op(K::And, 2, 1, 1)}};
  EXPECT_TRUE(cvp_eval(one));
  EXPECT_EQ(run_dsa(m, cvp_to_sacvp(one)).verdict, DsaVerdict::Accept);
  const CvpProgram zero{{op(K::Zero, 1)}};
  EXPECT_FALSE(cvp_eval(zero));
  EXPECT_EQ(run_dsa(m, cvp_to_sacvp(zero)).verdict, DsaVerdict::Reject);
  // an unassigned operand reads 0; reassignment overrides
  const CvpProgram reuse{{op(K::One, 1), op(K::Or, 2, 3, 3), op(K::Not, 1, 2), op(K::Or, 4, 1, 2)}};
  EXPECT_TRUE(cvp_eval(reuse));
  EXPECT_EQ(run_dsa(m, cvp_to_sacvp(reuse)).verdict, DsaVerdict::Accept);
  const CvpProgram reuse_and{{op(K::One, 1), op(K::Or, 2, 3, 3), op(K::Not, 1, 2), op(K::And, 4, 1, 2)}};
  EXPECT_FALSE(cvp_eval(reuse_and));
  EXPECT_EQ(run_dsa(m, cvp_to_sacvp(reuse_and)).verdict, DsaVerdict::Reject);
}

TEST(Cvp, EncodingShape) {
  using K = CvpAssignment::Kind;
  const CvpProgram p{{op(K::One, 1), op(K::And, 3, 1, 2), op(K::Not, 2, 3)}};
  EXPECT_EQ(sacvp_input_alphabet().format_word(cvp_to_sacvp(p)), "#ONE#1#1#AND#10#11#NOT#11#10#");
  EXPECT_EQ(variable_code(0), "0");
  EXPECT_EQ(variable_code(6), "110");
}

TEST(Cvp, RandomProgramsAgainstEvaluator) {
  Rng rng(61);
  const SetAutomaton m = build_sacvp_dsa();
  std::map<Word, CvpProgram> seen;
  for (int trial = 0; trial < 200; ++trial) {
    const CvpProgram p = oracle::random_cvp(rng);
    const bool v = oracle::cvp_value(p);
    ASSERT_EQ(cvp_eval(p), v);
    const Word w = cvp_to_sacvp(p);
    ASSERT_EQ(run_dsa(m, w).verdict == DsaVerdict::Accept, v);
    auto [it, fresh] = seen.emplace(w, p);
    if (!fresh) ASSERT_EQ(it->second, p);  // injective
  }
}

TEST(Sat, HandExamples) {
  const SetAutomaton m = build_sasat_nsa();
  const std::vector<std::string> x{variable_code(1)};
  const CnfFormula pos{{clause({{1, false}, {1, false}, {1, false}})}};
  EXPECT_TRUE(phi_prime_sat(x, pos));
  EXPECT_TRUE(member_via_protocols(m, sasat_word(x, pos)));
  CnfFormula both = pos;
  both.clauses.push_back(clause({{1, true}, {1, true}, {1, true}}));
  EXPECT_FALSE(phi_prime_sat(x, both));
  EXPECT_FALSE(member_via_protocols(m, sasat_word(x, both)));
  // listed twice: the clauses are dropped; unlisted: x reads 0
  EXPECT_TRUE(phi_prime_sat({variable_code(1), variable_code(1)}, both));
  EXPECT_FALSE(phi_prime_sat({}, pos));
  EXPECT_TRUE(phi_prime_sat({}, CnfFormula{{clause({{1, true}, {1, true}, {1, true}})}}));
}

TEST(Sat, WordShape) {
  const CnfFormula phi{{clause({{1, false}, {2, true}, {1, false}})}};
  EXPECT_EQ(sasat_input_alphabet().format_word(threesat_to_sasat(phi)), "1#10##(+1,-10,+1)");
}

TEST(Sat, RandomInstancesAgainstOracles) {
  Rng rng(62);
  const SetAutomaton m = build_sasat_nsa();
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = oracle::random_sat(rng);
    const bool expect = phi_prime_sat(inst.list, inst.phi);
    ASSERT_EQ(expect, oracle::sasat_semantics(inst.list, inst.phi));
    ASSERT_EQ(member_via_protocols(m, sasat_word(inst.list, inst.phi)), expect) << trial;
  }
}

TEST(Tm, FixedMachines) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& tm : {oracle::tm_immediate_accept(), oracle::tm_read_back(), oracle::tm_loop()}) {
      const SetAutomaton d = tm_to_unary_dsa(tm, n);
      ASSERT_TRUE(d.is_deterministic());
      ASSERT_EQ(d.input_alphabet().size(), 0u);
      ASSERT_EQ(run_dsa(d, {}, 10'000'000, false).verdict == DsaVerdict::Accept, oracle::simulate_tm(tm, n));
    }
  }
  EXPECT_EQ(run_dsa(tm_to_unary_dsa(oracle::tm_loop(), 3), {}, 10'000'000, false).verdict,
            DsaVerdict::Reject);
  EXPECT_EQ(run_dsa(tm_to_unary_dsa(oracle::tm_immediate_accept(), 2), {}).verdict, DsaVerdict::Accept);
}

TEST(Tm, WalkerFallsOffTheTape) {
  for (std::size_t steps = 1; steps <= 5; ++steps)
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto tm = oracle::tm_walker(steps);
      ASSERT_EQ(run_dsa(tm_to_unary_dsa(tm, n), {}, 10'000'000, false).verdict == DsaVerdict::Accept,
                oracle::simulate_tm(tm, n))
          << steps << " " << n;
    }
}

TEST(Tm, RandomMachines) {
  Rng rng(63);
  for (int trial = 0; trial < 40; ++trial) {
    const auto tm = oracle::random_tm(rng, static_cast<std::size_t>(rng.uniform(1, 4)));
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
    ASSERT_EQ(run_dsa(tm_to_unary_dsa(tm, n), {}, 10'000'000, false).verdict == DsaVerdict::Accept,
              oracle::simulate_tm(tm, n))
        << trial;
  }
}

TEST(MembershipToEmptiness, PerTwoExamples) {
  const SetAutomaton p2 = build_perk_dsa(2);
  const Alphabet& in = p2.input_alphabet();
  const SetAutomaton accepted = membership_to_emptiness(p2, in.parse_word("0#0#"));
  EXPECT_TRUE(sa_emptiness(accepted).empty);
  const Word w = in.parse_word("0#1#");
  const SetAutomaton rejected = membership_to_emptiness(p2, w);
  for (const auto& u : all_words(3, 4)) ASSERT_EQ(member_via_protocols(rejected, u), u == w);
  EXPECT_THROW(membership_to_emptiness(build_nonprimes_nsa(), {}), Error);
}

TEST(MembershipToEmptiness, GalleryDsasAgainstRuns) {
  const std::vector<SetAutomaton> dsas{build_perk_dsa(2), build_sacvp_dsa()};
  for (const auto& sa : dsas)
    for (const auto& w : all_words(sa.input_alphabet().size(), sa.input_alphabet().size() > 3 ? 2 : 4)) {
      const bool member = run_dsa(sa, w).verdict == DsaVerdict::Accept;
      ASSERT_EQ(sa_emptiness(membership_to_emptiness(sa, w)).empty, member);
    }
}

TEST(MembershipToEmptiness, ThroughLoopRemoval) {
  // empty-move loop: inserts "a" repeatedly until a test on "a" succeeds
  SaBuilder b(Alphabet({"x"}), binary_gamma());
  b.set_initial("s");
  b.write("s", "x", "a", "t");
  b.test("t", "eps", "f", "u");
  b.write("u", "eps", "a", "v");
  b.in("v", "eps", "w");
  b.write("w", "eps", "a", "t");
  b.accept("f");
  const SetAutomaton sa = b.build();
  ASSERT_TRUE(sa.has_eps_loops());
  for (std::size_t n = 0; n <= 3; ++n) {
    const bool member = run_dsa(sa, Word(n, 0)).verdict == DsaVerdict::Accept;
    EXPECT_EQ(member, n == 1);
    EXPECT_EQ(sa_emptiness(membership_to_emptiness(sa, Word(n, 0))).empty, member);
  }
}
