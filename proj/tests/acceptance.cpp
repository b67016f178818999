// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "svs/error.hpp"
#include "svs/mc.hpp"
#include "svs/svs.hpp"
#include "svs/theory.hpp"

using namespace svs;
namespace th = svs::theory;

namespace {

struct Line {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(double x, int prec = 5) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << x;
  return os.str();
}

// p-hat inside [lower - hw, upper + hw] with hw = 3 SE, or 3/N at 0 or N.
bool widened_contains(const th::BoundInterval& b, const Estimate& e) {
  return th::to_double(b.lower) - e.half_width <= e.p && e.p <= th::to_double(b.upper) + e.half_width;
}

std::string describe(const char* name, const th::BoundInterval& b, const Estimate& e) {
  return std::string(name) + " " + fmt(e.p) + " in [" + fmt(th::to_double(b.lower)) + ", " + fmt(th::to_double(b.upper)) +
         "] +- " + fmt(e.half_width) + (b.hypotheses_ok ? "" : " (hypotheses fail)");
}

ExperimentParams params(std::uint64_t q, unsigned r, unsigned s, unsigned d, std::uint64_t n, std::uint64_t seed) {
  ExperimentParams p;
  p.q = q;
  p.r = r;
  p.s = s;
  p.d = d;
  p.trials = n;
  p.seed = seed;
  p.workers = workers();
  return p;
}

Line c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const th::Rational v = exhaustive_p1(2, 3, 2, 2);
  const auto b = th::p1_bounds(2, 2, 2);
  const double secs = seconds_since(t0);
  const bool ok = b.lower == th::Rational(5, 8) && b.upper == th::Rational(11, 16) && b.contains(v) && secs < 60;
  return {ok, "exact P1 = " + v.get_str() + " in [" + b.lower.get_str() + ", " + b.upper.get_str() + "], " + fmt(secs, 2) + " s"};
}

Line c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_experiment(params(31, 5, 2, 3, 20000, 20240601));
  const auto& s = res.summary;
  const double secs = seconds_since(t0);
  const auto b1 = th::p1_bounds(31, 2, 3), b2 = th::ph_bounds(31, 2, 3, 2), b3 = th::ph_bounds(31, 2, 3, 3);
  const bool ok = s.aborted == 0 && widened_contains(b1, s.per_h[0]) && widened_contains(b2, s.per_h[1]) &&
                  widened_contains(b3, s.per_h[2]) && secs < 300;
  return {ok, describe("P[C=1]", b1, s.per_h[0]) + "; " + describe("P[C=2]", b2, s.per_h[1]) + "; " +
                  describe("P[C=3]", b3, s.per_h[2]) + "; " + fmt(secs, 1) + " s"};
}

ExperimentResult big_run;
double big_secs = 0;

Line c3() {
  const auto t0 = std::chrono::steady_clock::now();
  auto p = params(101, 4, 2, 6, 4000, 777);
  p.hstar = 3;
  big_run = run_experiment(p);
  big_secs = seconds_since(t0);
  const auto& s = big_run.summary;
  const auto b = th::pfail_bounds(101, 4, 2, 6);
  const bool ok = s.aborted == 0 && widened_contains(b, s.failure) && !b.vacuous && big_secs < 900 &&
                  std::abs(th::to_double(b.center) - 0.0498) < 1e-4 && std::abs(th::to_double(b.radius) - 0.0672) < 1e-3;
  return {ok, describe("P[C>3]", b, s.failure) + "; " + fmt(big_secs, 1) + " s"};
}

Line c4() {
  const auto& s = big_run.summary;
  const auto e = th::expected_strips_bound(101, 4, 2, 6);
  const double bound = th::to_double(e.explicit_part);
  const bool ok = s.aborted == 0 && s.mean_strips <= bound + 3 * s.mean_strips_se && s.mean_strips <= 2.34 &&
                  std::abs(bound - 1.767) < 1e-3;
  return {ok, "mean strips " + fmt(s.mean_strips) + " (SE " + fmt(s.mean_strips_se) + ") <= " + fmt(bound) +
                  " + 3 SE and <= 2.34" + (e.hypotheses_ok ? "" : " (q below the hypothesis threshold)")};
}

Line c5() {
  auto p = params(1009, 4, 2, 2, 2000, 31337);
  p.certify = true;
  const auto res = run_experiment(p);
  const auto& s = res.summary;
  const th::Rational lb = th::cond_h_lower_bound(1009, 2, 2).value;
  if (!s.certificate_rate) return {false, "no certificate rate recorded"};
  const auto& e = *s.certificate_rate;
  const bool ok = s.aborted == 0 && lb == 1 - th::Rational(72, 1009) && e.n == 2000 && e.p >= th::to_double(lb) - e.half_width;
  return {ok, "certificate rate " + fmt(e.p) + " >= " + fmt(th::to_double(lb)) + " - " + fmt(e.half_width)};
}

Line c6() {
  const auto F = FieldCtx::prime(2);
  int certified = 0, violations = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    RngStream rng(6006, t);
    const SystemSpec sys = sample_system(F, 3, 2, 2, rng);
    const Strip a = sample_strips(F, 1, 1, rng)[0];
    const ZeroDimQuery q = specialize_system(sys, a);
    const CertResult c = cond_h_certificate(q);
    if (c.verdict != Verdict::certified) continue;
    ++certified;
    if (distinct_geometric_points(q) != 4) ++violations;
  }
  return {violations == 0 && certified > 0,
          std::to_string(certified) + " of 200 specializations certified, " + std::to_string(violations) +
              " without 4 geometric points"};
}

std::vector<std::vector<Felt>> distinct_points(std::size_t count, unsigned dim, std::uint64_t q, RngStream& g) {
  std::set<std::vector<Felt>> seen;
  std::vector<std::vector<Felt>> out;
  while (out.size() < count) {
    std::vector<Felt> p(dim);
    for (auto& x : p) x = Felt{g.below(q)};
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

Line c7() {
  const std::vector<std::uint64_t> qs{2, 3, 5, 7};
  int lemma_bad = 0, prop_bad = 0, count_bad = 0, prop_n = 0, count_n = 0;
  RngStream g(7007, 0);
  for (int it = 0; it < 1000; ++it) {
    const std::uint64_t q = qs[it % 4];
    const auto F = FieldCtx::prime(q);
    const unsigned r = 3 + g.below(3), d = 1 + g.below(4);
    std::uint64_t cap = 1;
    for (unsigned i = 0; i < r; ++i) cap *= q;
    const unsigned s = static_cast<unsigned>(std::min<std::uint64_t>(1 + g.below(d + 1), cap));
    if (matrix_rank(vandermonde_a(distinct_points(s, r, q, g), d, F), F) != s) ++lemma_bad;
  }
  while (prop_n < 1000) {
    const std::uint64_t q = qs[prop_n % 4];
    const auto F = FieldCtx::prime(q);
    const unsigned s = 2, m = 1 + g.below(3), r = s + m, d = 2 + g.below(3);
    const unsigned h = 1 + g.below(m + 1);
    std::vector<Strip> strips;
    for (const auto& p : distinct_points(h, m, q, g)) strips.push_back(p);
    if (matrix_rank(m_matrix(strips), F) != h) continue;
    std::vector<unsigned> j(h);
    for (auto& x : j) x = 1 + g.below(std::min<std::uint64_t>(d, q * q));
    std::sort(j.rbegin(), j.rend());
    std::vector<std::vector<std::vector<Felt>>> sets;
    unsigned total = 0;
    for (unsigned i = 0; i < h; ++i) sets.push_back(distinct_points(j[i], s, q, g)), total += j[i];
    if (matrix_rank(condition_matrix(strips, sets, d, r, F), F) != total) ++prop_bad;
    ++prop_n;
  }
  for (std::uint64_t q : {2, 3}) {
    const auto F = FieldCtx::prime(q);
    for (unsigned m : {1u, 2u}) {
      std::uint64_t npts = 1;
      for (unsigned i = 0; i < m; ++i) npts *= q;
      for (unsigned h = 1; h <= 3 && h - 1 <= m; ++h) {
        std::uint64_t total = 1, good = 0;
        for (unsigned i = 0; i < h; ++i) total *= npts;
        for (std::uint64_t code = 0; code < total; ++code) {
          std::vector<Strip> strips;
          std::uint64_t c = code;
          for (unsigned i = 0; i < h; ++i) {
            Strip st;
            std::uint64_t v = c % npts;
            c /= npts;
            for (unsigned k = 0; k < m; ++k) st.push_back(Felt{v % q}), v /= q;
            strips.push_back(st);
          }
          good += matrix_rank(m_matrix(strips), F) == h;
        }
        ++count_n;
        if (th::BigInt(static_cast<unsigned long>(good)) != th::good_tuple_count(q, h, 2 + m, 2)) ++count_bad;
      }
    }
  }
  return {lemma_bad == 0 && prop_bad == 0 && count_bad == 0,
          "full-rank point matrices: " + std::to_string(lemma_bad) + " violations / 1000; condition matrices: " +
              std::to_string(prop_bad) + " / " + std::to_string(prop_n) + "; tuple counts: " + std::to_string(count_bad) +
              " mismatches / " + std::to_string(count_n)};
}

Line c8() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, checks = 0;
  std::set<unsigned> gap_bad;  // m values where |s_m - mu_m| exceeds 1/(4q^s) + m/q^(2s)
  auto check = [&](bool b) { ++checks, bad += !b; };
  for (std::uint64_t q : {2, 3, 4, 5, 7, 11, 31, 101}) {
    for (unsigned s : {1u, 2u, 3u}) {
      th::Rational Q = 1;
      for (unsigned i = 0; i < s; ++i) Q *= th::Rational(static_cast<unsigned long>(q));
      for (unsigned m = 2; m <= 12; ++m) {
        const auto v = th::s_t_values(q, s, m);
        th::Rational diff = v.s - th::mu(m);
        if (diff < 0) diff = -diff;
        const bool ok = diff <= th::Rational(1) / (4 * Q) + th::Rational(m) / (Q * Q);
        check(ok);
        if (!ok) gap_bad.insert(m);
        check(v.s == v.s_odd - v.s_even);
      }
    }
  }
  for (std::uint64_t q : {2, 3, 5})
    for (unsigned s : {2u, 3u})
      for (unsigned j = 0; j <= 8; ++j) check(th::binom_identity_check(q, s, j));
  for (std::uint64_t q : {2, 3, 5, 31})
    for (unsigned d = 2; d <= 7; ++d) {
      const auto ul = th::ul_recursion(q, 2, d, 12);
      for (std::size_t k = 0; k < ul.ul.size(); ++k) {
        check(ul.ul_closed[k] == ul.ul[k]);
        check(ul.b_closed[k] == ul.b_iter[k]);
        check(ul.ul[k].l <= ul.ul[k].u);
      }
    }
  for (unsigned m = 2; m <= 10; ++m) {
    const th::Rational u = th::mu(m);
    for (unsigned h = 1; h <= 8; ++h) {
      th::Rational sum = 0, pw = 1;
      for (unsigned i = 1; i <= h; ++i) sum += u * pw, pw *= 1 - u;
      check(sum == 1 - pw);
    }
  }
  const double secs = seconds_since(t0);
  std::string where;
  for (unsigned m : gap_bad) where += (where.empty() ? "" : ",") + std::to_string(m);
  return {bad == 0 && secs < 10, std::to_string(checks - bad) + "/" + std::to_string(checks) + " identities hold" +
                                     (where.empty() ? "" : "; |s_m - mu_m| bound exceeded at m = " + where) + ", " +
                                     fmt(secs, 2) + " s"};
}

Line c9() {
  const std::vector<std::uint64_t> qs{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 31};
  int runs = 0, verify_bad = 0, compared = 0, disagree = 0, successes = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    RngStream pick(9009, t);
    const std::uint64_t q = qs[pick.below(qs.size())];
    const unsigned s = (q <= 16 && pick.below(4) == 0) ? 3 : 2;
    const unsigned r = s + 1 + static_cast<unsigned>(pick.below(3));
    const unsigned d = 2 + static_cast<unsigned>(pick.below(2));
    const auto F = FieldCtx::of_order(q);
    const SystemSpec sys = sample_system(F, r, s, d, pick);
    RngStream strips_a(9010, t);
    const auto out = run_svs(sys, StripSource::random(strips_a), {Backend::exhaustive});
    ++runs;
    if (out.success) {
      ++successes;
      if (!verify_solution(sys, out.strip, out.point)) ++verify_bad;
    }
    if (s == 2 && q <= 16) {
      RngStream strips_b(9010, t);
      const auto alt = run_svs(sys, StripSource::random(strips_b), {Backend::resultant});
      ++compared;
      if (alt.success != out.success || alt.strip_index != out.strip_index) ++disagree;
      if (alt.success && !verify_solution(sys, alt.strip, alt.point)) ++verify_bad;
    }
  }
  return {verify_bad == 0 && disagree == 0 && runs == 10000,
          std::to_string(runs) + " runs (" + std::to_string(successes) + " successes), " + std::to_string(verify_bad) +
              " failed verifications, " + std::to_string(disagree) + " backend disagreements in " + std::to_string(compared) +
              " comparisons"};
}

Line c10() {
  bool same = true;
  std::string detail;
  for (const auto& base : {params(31, 5, 2, 3, 3000, 99), params(101, 4, 2, 6, 300, 5), params(7, 5, 3, 2, 500, 3)}) {
    std::string ref;
    for (unsigned w : {1u, 2u, 4u}) {
      auto p = base;
      p.workers = w;
      const std::string csv = records_csv(run_experiment(p).records);
      if (ref.empty()) ref = csv;
      same = same && csv == ref;
    }
    detail += "(" + std::to_string(base.q) + "," + std::to_string(base.r) + "," + std::to_string(base.s) + "," +
              std::to_string(base.d) + ") N=" + std::to_string(base.trials) + " ";
  }
  return {same, detail + "byte-identical CSV for 1, 2 and 4 workers"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria{
      {"exhaustive one-strip probability", c1}, {"first-success rates, q=31", c2},
      {"failure rate, q=101", c3},              {"expected strips, q=101", c4},
      {"certificate rate, q=1009", c5},         {"certificate soundness, q=2", c6},
      {"rank properties and tuple counts", c7}, {"exact theory identities", c8},
      {"solver soundness and backend agreement", c9}, {"reproducibility across workers", c10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    failed += !l.pass;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, l.pass ? "PASS" : "FAIL", criteria[i].first, l.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
