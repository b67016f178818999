#include "svs/cli.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svs/error.hpp"
#include "svs/mc.hpp"
#include "svs/svs.hpp"
#include "svs/sysfile.hpp"
#include "svs/theory.hpp"

namespace svs {

namespace {

using nlohmann::ordered_json;

struct Shape {
  std::uint64_t q = 0;
  unsigned r = 0, s = 0, d = 0;
};

void add_shape(CLI::App* cmd, Shape& sh) {
  cmd->add_option("--q", sh.q, "field order, a prime power")->required();
  cmd->add_option("--r", sh.r, "number of variables")->required();
  cmd->add_option("--s", sh.s, "number of equations")->required();
  cmd->add_option("--d", sh.d, "degree bound")->required();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random polynomial systems over finite fields, solved by searching vertical strips"};
  app.require_subcommand(1);

  // gen
  Shape gsh;
  std::uint64_t gseed = 0;
  bool gallow_zero = false;
  auto* gen = app.add_subcommand("gen", "sample a random system and print it as a system file");
  add_shape(gen, gsh);
  gen->add_option("--seed", gseed, "random seed (stream 0)")->required();
  gen->add_flag("--allow-zero", gallow_zero, "keep all-zero polynomials instead of redrawing them");

  // solve
  std::string system_path, strips_text, backend_text = "exhaustive";
  std::uint64_t sseed = 0;
  std::optional<std::uint64_t> shstar;
  bool scertify = false;
  auto* solve = app.add_subcommand("solve", "search strips of a system file for a rational zero");
  solve->add_option("--system", system_path, "system file")->required();
  solve->add_option("--seed", sseed, "seed for random strips (stream 0)");
  solve->add_option("--backend", backend_text, "exhaustive or resultant");
  solve->add_option("--strips", strips_text,
                    "explicit strips: ';' between strips, ',' between coordinates, e.g. \"2,3;4,0\"");
  solve->add_option("--hstar", shstar, "strip budget, default r-s+1");
  solve->add_flag("--certify", scertify, "run the two-equation certificate on every strip tried");

  // experiment
  Shape esh;
  ExperimentParams ep;
  std::string eout, ebackend = "exhaustive";
  bool ereject_zero = false;
  auto* exper = app.add_subcommand("experiment", "Monte Carlo run writing trials.csv and summary.json");
  add_shape(exper, esh);
  exper->add_option("--trials", ep.trials, "number of trials")->required();
  exper->add_option("--seed", ep.seed, "random seed, stream id = trial index")->required();
  exper->add_option("--backend", ebackend, "exhaustive or resultant");
  exper->add_flag("--certify", ep.certify, "certificate on the first strip (s = 2)");
  exper->add_option("--out", eout, "output directory")->required();
  exper->add_option("--workers", ep.workers, "worker threads; output does not depend on this");
  exper->add_option("--first-trial", ep.first_trial, "index of the first trial");
  exper->add_option("--hstar", ep.hstar, "strip budget, default r-s+1");
  exper->add_flag("--record-timing", ep.record_timing, "fill the wall_ns column");
  exper->add_flag("--reject-zero", ereject_zero, "redraw all-zero polynomials");

  // theory
  Shape tsh;
  std::optional<unsigned> th;
  double omega = 3.0;
  auto* theo = app.add_subcommand("theory", "exact bounds and hypothesis checks for one parameter set");
  theo->set_help_flag("--help", "print this help");
  add_shape(theo, tsh);
  theo->add_option("--h", th, "strip index for the per-h bounds");
  theo->add_option("--omega", omega, "linear algebra exponent in [2, 3]");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact brute-force results");
  oracle->require_subcommand(1);
  Shape p1sh;
  auto* p1 = oracle->add_subcommand("p1-exhaustive", "exact one-strip success probability");
  add_shape(p1, p1sh);
  Shape sksh;
  std::string sk_strips;
  auto* sk = oracle->add_subcommand("sk-exhaustive", "exact probability that all given strips succeed");
  add_shape(sk, sksh);
  sk->add_option("--strips", sk_strips, "strips as \"c1,c2;c1,c2\"")->required();
  std::string cp_path, cp_strip;
  auto* cp = oracle->add_subcommand("count-points", "geometric points of a square system, or of a specialization");
  cp->add_option("--system", cp_path, "system file, square (r = s) unless --strip is given")->required();
  cp->add_option("--strip", cp_strip, "specialize a non-square system at this strip first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      validate_params(gsh.q, gsh.r, gsh.s, gsh.d);
      const FieldCtx ctx = FieldCtx::of_order(gsh.q);
      RngStream rng(gseed, 0);
      out << write_system_file(sample_system(ctx, gsh.r, gsh.s, gsh.d, rng, gallow_zero));
      return 0;
    }
    if (*solve) {
      const SystemSpec sys = read_system_file(read_file(system_path));
      SolveOptions opts;
      opts.backend = parse_backend(backend_text);
      opts.hstar = shstar;
      opts.certify = scertify ? CertMode::all : CertMode::none;
      RngStream rng(sseed, 0);
      const StripSource src = strips_text.empty()
                                  ? StripSource::random(rng)
                                  : StripSource::explicit_list(parse_strips(strips_text, sys.r - sys.s, sys.ctx));
      const SolveOutcome res = run_svs(sys, src, opts);
      out << outcome_json(res, sys.ctx).dump(2) << '\n';
      return res.success ? 0 : 1;
    }
    if (*exper) {
      ep.q = esh.q;
      ep.r = esh.r;
      ep.s = esh.s;
      ep.d = esh.d;
      ep.backend = parse_backend(ebackend);
      ep.allow_zero = !ereject_zero;
      if (ep.workers == 0) throw UsageError("--workers must be at least 1");
      validate_params(ep.q, ep.r, ep.s, ep.d);
      const ExperimentResult res = run_experiment(ep);
      std::filesystem::create_directories(eout);
      const std::filesystem::path dir(eout);
      atomic_write((dir / "trials.csv").string(), records_csv(res.records));
      atomic_write((dir / "summary.json").string(), summary_json(res.summary).dump(2) + "\n");
      const auto& sm = res.summary;
      out << "completed " << sm.completed << ", aborted " << sm.aborted << '\n';
      for (const auto& c : sm.comparisons)
        out << (c.pass ? "pass " : "FAIL ") << c.quantity << " estimate " << c.estimate << " +- " << c.half_width
            << " vs " << c.interval.tag << " [" << theory::to_decimal(c.interval.lower, 6) << ", "
            << theory::to_decimal(c.interval.upper, 6) << "]" << (c.hypotheses_ok ? "" : " (hypotheses fail)") << '\n';
      if (sm.aborted) {
        err << sm.aborted << " trial(s) aborted on capacity limits\n";
        return 3;
      }
      return 0;
    }
    if (*theo) {
      validate_params(tsh.q, tsh.r, tsh.s, tsh.d);
      out << theory::theory_report(tsh.q, tsh.r, tsh.s, tsh.d, th, omega).dump(2) << '\n';
      return 0;
    }
    if (*p1) {
      validate_params(p1sh.q, p1sh.r, p1sh.s, p1sh.d);
      const theory::Rational v = exhaustive_p1(p1sh.q, p1sh.r, p1sh.s, p1sh.d);
      const theory::BoundInterval b = theory::p1_bounds(p1sh.q, p1sh.s, p1sh.d);
      ordered_json j;
      j["value"] = theory::rational_json(v);
      j["interval"] = theory::interval_json(b);
      j["inside"] = b.contains(v);
      out << j.dump(2) << '\n';
      return 0;
    }
    if (*sk) {
      validate_params(sksh.q, sksh.r, sksh.s, sksh.d);
      const FieldCtx ctx = FieldCtx::of_order(sksh.q);
      const auto strips = parse_strips(sk_strips, sksh.r - sksh.s, ctx);
      const SkResult v = exhaustive_sk(sksh.q, sksh.r, sksh.s, sksh.d, strips);
      ordered_json j;
      j["k"] = strips.size();
      j["value"] = theory::rational_json(v.value);
      j["m_singular"] = v.m_singular;
      if (!v.m_singular && strips.size() >= 2) {
        const auto b = theory::sk_bound(sksh.q, sksh.s, sksh.d, static_cast<unsigned>(strips.size()));
        j["bound"] = theory::interval_json(b);
        j["inside"] = b.contains(v.value);
      }
      out << j.dump(2) << '\n';
      if (v.m_singular) out << "M singular\n";
      return 0;
    }
    if (*cp) {
      const std::string text = read_file(cp_path);
      ZeroDimQuery q;
      if (cp_strip.empty()) {
        q = read_query_file(text);
      } else {
        const SystemSpec sys = read_system_file(text);
        const auto strips = parse_strips(cp_strip, sys.r - sys.s, sys.ctx);
        if (strips.size() != 1) throw UsageError("--strip takes exactly one strip");
        q = specialize_system(sys, strips[0]);
      }
      const unsigned emax = [&] {
        std::uint64_t e = 1;
        for (unsigned i = 0; i < q.s; ++i) e *= q.dmax;
        return static_cast<unsigned>(e);
      }();
      ordered_json j;
      j["rational_points"] = count_zeros(q, Backend::exhaustive);
      const auto a = closed_point_counts(q, emax);
      j["closed_points"] = std::vector<std::int64_t>(a.begin() + 1, a.end());  // degrees 1..d^s
      j["geometric_points"] = distinct_geometric_points(q);
      out << j.dump(2) << '\n';
      return 0;
    }
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace svs
