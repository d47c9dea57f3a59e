#include "sakit/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sakit/cone.hpp"
#include "sakit/emptiness.hpp"
#include "sakit/gallery.hpp"
#include "sakit/normalform.hpp"
#include "sakit/text_format.hpp"

namespace sakit {
namespace {

constexpr int kPositive = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

std::size_t effective_budget(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SAKIT_BUDGET")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw Error("SAKIT_BUDGET is not a non-negative integer");
  }
  return kDefaultBudget;
}

std::string input_word_text(const SetAutomaton& sa, const Word& w) {
  return w.empty() ? "-" : sa.input_alphabet().format_word(w);
}

struct Verdict {
  int code;
  RunTrace trace;
  std::size_t steps = 0;
};

/// Direct simulation: the unique run of a deterministic automaton, or a
/// bounded search otherwise.
Verdict simulate(const SetAutomaton& sa, const Word& w, std::size_t budget) {
  if (sa.is_deterministic()) {
    DsaResult r = run_dsa(sa, w, budget, true);
    const int code = r.verdict == DsaVerdict::Accept   ? kPositive
                     : r.verdict == DsaVerdict::Reject ? kNegative
                                                       : kBudget;
    return {code, std::move(r.trace), r.steps};
  }
  NsaResult r = run_nsa_bounded(sa, w, budget);
  if (r.found) {
    const std::size_t steps = r.trace.steps.size();
    return {kPositive, std::move(r.trace), steps};
  }
  return {r.exhausted ? kNegative : kBudget, {}, 0};
}

const char* verdict_token(int code) {
  return code == kPositive ? "ACCEPT" : code == kNegative ? "REJECT" : "BUDGET_EXCEEDED";
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Set automata toolkit", "sakit"};
  app.require_subcommand(1);

  std::string sa_path, word_text, method = "direct", form, out_path, gamma_text = "a b";
  std::optional<std::size_t> budget;
  std::size_t cells = 0;
  bool trace = false;

  auto* run = app.add_subcommand("run", "Simulate an automaton on a word");
  run->add_option("sa", sa_path, "SA file")->required();
  run->add_option("--word", word_text, "input word ('-' for the empty word)")->required();
  run->add_option("--budget", budget, "step budget");
  run->add_flag("--trace", trace, "print the protocol of an accepting run");

  auto* member = app.add_subcommand("member", "Decide membership");
  member->add_option("sa", sa_path)->required();
  member->add_option("--word", word_text)->required();
  member->add_option("--method", method)->check(CLI::IsMember({"direct", "protocol"}));
  member->add_option("--budget", budget);

  auto* empty = app.add_subcommand("empty", "Decide emptiness; exits 0 iff the language is empty");
  empty->add_option("sa", sa_path)->required();

  auto* nrr = app.add_subcommand("nrr", "Does an NFA over a protocol alphabet accept a correct protocol");
  nrr->add_option("nfa", sa_path)->required();

  auto* protocol = app.add_subcommand("protocol", "Protocol utilities");
  protocol->require_subcommand(1);
  auto* check = protocol->add_subcommand("check", "Check protocol correctness");
  check->add_option("protocol", word_text)->required();
  check->add_option("--gamma", gamma_text, "space-separated work alphabet");

  auto* extract = app.add_subcommand("extract", "Build the extractor transducer");
  extract->add_option("sa", sa_path)->required();
  extract->add_option("-o", out_path);

  auto* normalize = app.add_subcommand("normalize", "Normal forms");
  normalize->add_option("sa", sa_path)->required();
  normalize->add_option("--form", form)->required()->check(CLI::IsMember({"req", "anf", "noeps"}));
  normalize->add_option("-o", out_path);

  auto* reduce = app.add_subcommand("reduce", "Reductions");
  reduce->require_subcommand(1);
  auto* r_cvp = reduce->add_subcommand("cvp", "CVP program to a word for the SA-CVP automaton");
  r_cvp->add_option("program", sa_path)->required();
  r_cvp->add_option("-o", out_path, "also write the automaton");
  auto* r_sat = reduce->add_subcommand("3sat", "3-CNF to a word for the SA-SAT automaton");
  r_sat->add_option("cnf", sa_path)->required();
  r_sat->add_option("-o", out_path, "also write the automaton");
  auto* r_tm = reduce->add_subcommand("tm", "Turing machine to a unary deterministic SA");
  r_tm->add_option("tm", sa_path)->required();
  r_tm->add_option("--cells", cells)->required()->check(CLI::PositiveNumber);
  r_tm->add_option("-o", out_path);
  auto* r_member = reduce->add_subcommand("member", "Membership to emptiness");
  r_member->add_option("sa", sa_path)->required();
  r_member->add_option("--word", word_text)->required();
  r_member->add_option("-o", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPositive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPositive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*run || *member) {
      const SetAutomaton sa = parse_sa(read_file(sa_path));
      const Word w = sa.input_alphabet().parse_word(word_text);
      if (*member && method == "protocol") {
        const bool acc = member_via_protocols(sa, w);
        out << (acc ? "ACCEPT" : "REJECT") << "\n";
        return acc ? kPositive : kNegative;
      }
      const Verdict v = simulate(sa, w, effective_budget(budget));
      out << verdict_token(v.code) << "\n";
      if (*run && trace && v.code == kPositive) {
        out << "STEPS " << v.steps << "\n";
        out << "PROTOCOL " << serialize_protocol(extract_run_protocol(sa, v.trace)) << "\n";
      }
      if (v.code == kBudget) err << "budget exhausted before a verdict\n";
      return v.code;
    }

    if (*empty) {
      const SetAutomaton sa = parse_sa(read_file(sa_path));
      const EmptinessResult r = sa_emptiness(sa);
      if (r.empty) {
        out << "EMPTY\n";
        return kPositive;
      }
      // Prefer the protocol of a run of the automaton as given; fall back to
      // the witness over the normalized work alphabet.
      std::string proto = serialize_protocol(r.witness.protocol);
      const Verdict v = simulate(sa, r.input, effective_budget(std::nullopt));
      if (v.code == kPositive) proto = serialize_protocol(extract_run_protocol(sa, v.trace));
      out << "NONEMPTY " << proto << "\n";
      out << "WORD " << input_word_text(sa, r.input) << "\n";
      return kNegative;
    }

    if (*nrr) {
      const Nfa a = parse_nfa(read_file(sa_path));
      const NrrResult r = nrr_decide(a);
      if (!r.nonempty) {
        out << "EMPTY\n";
        return kNegative;
      }
      out << "NONEMPTY " << serialize_protocol(r.witness.protocol) << "\n";
      return kPositive;
    }

    if (*check) {
      std::istringstream names(gamma_text);
      std::vector<std::string> syms{std::istream_iterator<std::string>(names), {}};
      const Protocol p = parse_protocol(word_text, Alphabet(syms));
      const CorrectnessResult r = check_correct(p);
      if (r.correct) {
        out << "CORRECT\n";
        return kPositive;
      }
      out << "INCORRECT " << r.violating_block << "\n";
      return kNegative;
    }

    if (*extract) {
      SetAutomaton sa = parse_sa(read_file(sa_path));
      if (!satisfies_requirements(sa)) {
        err << "note: automaton normalized before extraction\n";
        sa = normalize_requirements(sa);
      }
      emit(out_path, serialize_fst(build_extractor(sa)), out);
      return kPositive;
    }

    if (*normalize) {
      const SetAutomaton sa = parse_sa(read_file(sa_path));
      const SetAutomaton res = form == "req"   ? normalize_requirements(sa)
                               : form == "anf" ? to_anf(sa)
                                               : remove_eps_loops(sa);
      emit(out_path, serialize_sa(res), out);
      return kPositive;
    }

    if (*r_cvp) {
      const CvpProgram p = parse_cvp(read_file(sa_path));
      out << "WORD " << sacvp_input_alphabet().format_word(cvp_to_sacvp(p)) << "\n";
      if (!out_path.empty()) emit(out_path, serialize_sa(build_sacvp_dsa()), out);
      return kPositive;
    }

    if (*r_sat) {
      const CnfInstance inst = parse_cnf(read_file(sa_path));
      const Word w = inst.list ? sasat_word(*inst.list, inst.phi) : threesat_to_sasat(inst.phi);
      out << "WORD " << sasat_input_alphabet().format_word(w) << "\n";
      if (!out_path.empty()) emit(out_path, serialize_sa(build_sasat_nsa()), out);
      return kPositive;
    }

    if (*r_tm) {
      const TmDescription tm = parse_tm(read_file(sa_path));
      emit(out_path, serialize_sa(tm_to_unary_dsa(tm, cells)), out);
      return kPositive;
    }

    if (*r_member) {
      const SetAutomaton sa = parse_sa(read_file(sa_path));
      const Word w = sa.input_alphabet().parse_word(word_text);
      emit(out_path, serialize_sa(membership_to_emptiness(sa, w)), out);
      return kPositive;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << "error: no command\n";
  return kUsage;
}

}  // namespace sakit
