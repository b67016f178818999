#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "svs/error.hpp"
#include "svs/mc.hpp"

using namespace svs;

namespace {

ExperimentParams params(std::uint64_t q, unsigned r, unsigned s, unsigned d, std::uint64_t n, std::uint64_t seed) {
  ExperimentParams p;
  p.q = q;
  p.r = r;
  p.s = s;
  p.d = d;
  p.trials = n;
  p.seed = seed;
  return p;
}

// Per-polynomial zero masks over both strips of GF(2)^1 x GF(2)^2, by plain evaluation.
struct Q2Masks {
  std::vector<unsigned> mask;  // bits 0..3: strip (0), bits 4..7: strip (1)
  Q2Masks() {
    const auto F = FieldCtx::prime(2);
    const auto monos = monomials_upto(3, 2);
    for (unsigned code = 0; code < 1024; ++code) {
      std::vector<Term> t;
      for (unsigned b = 0; b < 10; ++b)
        if (code >> b & 1) t.push_back(Term{monos[b], Felt{1}});
      const MPoly f = MPoly::from_terms(3, t, F);
      unsigned m = 0;
      for (unsigned a = 0; a < 2; ++a)
        for (unsigned x = 0; x < 4; ++x)
          if (evaluate(f, {Felt{a}, Felt{x >> 1}, Felt{x & 1}}, F).is_zero()) m |= 1u << (4 * a + x);
      mask.push_back(m);
    }
  }
};

}  // namespace

TEST_CASE("estimate_with_ci") {
  auto e = estimate_with_ci(500, 1000);
  CHECK(e.p == doctest::Approx(0.5));
  CHECK(e.se == doctest::Approx(0.0158).epsilon(0.002));
  CHECK(e.lo == doctest::Approx(0.4526).epsilon(1e-3));
  CHECK(e.hi == doctest::Approx(0.5474).epsilon(1e-3));
  e = estimate_with_ci(0, 1000);
  CHECK(e.lo == 0);
  CHECK(e.hi == doctest::Approx(0.003));
  e = estimate_with_ci(1000, 1000);
  CHECK(e.lo == doctest::Approx(0.997));
  CHECK(e.hi == 1);
}

TEST_CASE("experiment structure") {
  const auto res = run_experiment(params(31, 5, 2, 3, 1000, 42));
  const auto& s = res.summary;
  CHECK(res.records.size() == 1000);
  CHECK(s.aborted == 0);
  CHECK(s.hstar == 4);
  std::uint64_t total = 0;
  for (auto c : s.counts) total += c;
  CHECK(total == 1000);
  for (const auto& e : s.per_h) {
    CHECK(e.p >= 0);
    CHECK(e.p <= 1);
    CHECK(e.se == doctest::Approx(std::sqrt(e.p * (1 - e.p) / 1000)));
  }
  CHECK(!s.comparisons.empty());
  for (const auto& c : s.comparisons) CHECK(!c.quantity.empty());
  for (const auto& r : res.records) {
    CHECK(r.strips.size() <= 4);
    CHECK(std::set<Strip>(r.strips.begin(), r.strips.end()).size() == r.strips.size());
    CHECK((r.strip_index == 0) == !r.success);
  }
  const std::string csv = records_csv(res.records);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "trial_id,seed,q,r,s,d,hstar,backend,status,strip_index,certificate,wall_ns");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 1000);
  const auto js = summary_json(s);
  CHECK(js.contains("comparisons"));
  for (const auto& c : js["comparisons"]) CHECK(c.contains("pass"));
  CHECK(js.contains("hypotheses"));
}

TEST_CASE("determinism, worker independence and merging") {
  auto p = params(31, 5, 2, 3, 600, 9);
  const auto a = records_csv(run_experiment(p).records);
  CHECK(a == records_csv(run_experiment(p).records));
  p.workers = 3;
  CHECK(a == records_csv(run_experiment(p).records));
  auto p1 = params(31, 5, 2, 3, 300, 9), p2 = p1;
  p2.first_trial = 300;
  auto r1 = run_experiment(p1).records, r2 = run_experiment(p2).records;
  r1.insert(r1.end(), r2.begin(), r2.end());
  CHECK(records_csv(r1) == a);
  CHECK(summarize(params(31, 5, 2, 3, 600, 9), r1).counts == run_experiment(params(31, 5, 2, 3, 600, 9)).summary.counts);
}

TEST_CASE("prefix consistency of the strip budget") {
  auto full = params(31, 5, 2, 3, 800, 5);
  const auto a = run_experiment(full).summary;
  for (std::uint64_t h : {1, 2, 3}) {
    auto cut = full;
    cut.hstar = h;
    const auto b = run_experiment(cut).summary;
    REQUIRE(b.counts.size() == h + 1);
    std::uint64_t tail = 0;
    for (std::size_t i = 0; i < h; ++i) CHECK(b.counts[i] == a.counts[i]);
    for (std::size_t i = h; i < a.counts.size(); ++i) tail += a.counts[i];
    CHECK(b.counts[h] == tail);
  }
}

TEST_CASE("certificate column and capacity aborts") {
  auto p = params(31, 4, 2, 2, 100, 1);
  p.certify = true;
  const auto res = run_experiment(p);
  REQUIRE(res.summary.certificate_rate);
  for (const auto& r : res.records) CHECK(r.certificate.has_value());
  auto bad = params(31, 5, 3, 3, 10, 1);
  bad.certify = true;
  CHECK_THROWS_AS(run_experiment(bad), UnsupportedError);
  // q^s above the grid cap: every trial aborts and is reported.
  const auto ab = run_experiment(params(65537, 4, 2, 2, 3, 1));
  CHECK(ab.summary.aborted == 3);
  CHECK(records_csv(ab.records).find("aborted") != std::string::npos);
}

TEST_CASE("exhaustive one-strip probability") {
  const auto v = exhaustive_p1(2, 3, 2, 2);
  CHECK(v >= theory::Rational(5, 8));
  CHECK(v <= theory::Rational(11, 16));
  // independent oracle from plain evaluation
  const Q2Masks m;
  std::uint64_t hits = 0;
  for (unsigned f = 0; f < 1024; ++f)
    for (unsigned g = 0; g < 1024; ++g) {
      const unsigned both = m.mask[f] & m.mask[g];
      hits += (both & 0xF) != 0;
      hits += (both & 0xF0) != 0;
    }
  theory::Rational oracle(hits, 2ul * 1024 * 1024);
  oracle.canonicalize();
  CHECK(v == oracle);
  CHECK_THROWS_AS(exhaustive_p1(3, 4, 2, 2), CapacityError);
}

TEST_CASE("exhaustive k-strip probability") {
  const Q2Masks m;
  std::uint64_t s0 = 0, s1 = 0, both = 0;
  for (unsigned f = 0; f < 1024; ++f)
    for (unsigned g = 0; g < 1024; ++g) {
      const unsigned x = m.mask[f] & m.mask[g];
      s0 += (x & 0xF) != 0;
      s1 += (x & 0xF0) != 0;
      both += (x & 0xF) && (x & 0xF0);
    }
  const theory::Rational N(1024 * 1024);
  const auto k0 = exhaustive_sk(2, 3, 2, 2, {{Felt{0}}});
  const auto k1 = exhaustive_sk(2, 3, 2, 2, {{Felt{1}}});
  const auto k2 = exhaustive_sk(2, 3, 2, 2, {{Felt{0}}, {Felt{1}}});
  CHECK(k0.value == theory::Rational(s0) / N);
  CHECK(k1.value == theory::Rational(s1) / N);
  CHECK(k2.value == theory::Rational(both) / N);
  CHECK(!k2.m_singular);
  CHECK(k2.value <= k0.value);
  CHECK((k0.value + k1.value) / 2 == exhaustive_p1(2, 3, 2, 2));
  const auto dup = exhaustive_sk(2, 3, 2, 2, {{Felt{0}}, {Felt{0}}});
  CHECK(dup.m_singular);
  CHECK(dup.value == k0.value);
}
