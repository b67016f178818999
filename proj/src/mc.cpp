#include "svs/mc.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "svs/error.hpp"

namespace svs {

namespace {

using Clock = std::chrono::steady_clock;

TrialRecord run_trial(const ExperimentParams& p, const FieldCtx& ctx, std::uint64_t hstar, std::uint64_t trial_id) {
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed = p.seed;
  rec.q = p.q;
  rec.r = p.r;
  rec.s = p.s;
  rec.d = p.d;
  rec.hstar = hstar;
  rec.backend = p.backend;
  const auto t0 = Clock::now();
  try {
    RngStream rng(p.seed, trial_id);
    const SystemSpec sys = sample_system(ctx, p.r, p.s, p.d, rng, p.allow_zero);
    SolveOptions opts;
    opts.backend = p.backend;
    opts.hstar = hstar;
    opts.certify = p.certify ? CertMode::first : CertMode::none;
    const SolveOutcome out = run_svs(sys, StripSource::random(rng), opts);
    rec.success = out.success;
    rec.strip_index = out.strip_index;
    rec.strips = out.strips;
    if (!out.certificates.empty() && out.certificates[0]) rec.certificate = out.certificates[0]->verdict;
  } catch (const CapacityError&) {
    rec.aborted = true;
  }
  if (p.record_timing)
    rec.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  return rec;
}

double to_d(const theory::Rational& x) { return x.get_d(); }

Comparison two_sided(std::string quantity, const Estimate& e, const theory::BoundInterval& b) {
  Comparison c;
  c.quantity = std::move(quantity);
  c.kind = "two_sided";
  c.estimate = e.p;
  c.half_width = e.half_width;
  c.interval = b;
  c.hypotheses_ok = b.hypotheses_ok;
  c.pass = e.p >= to_d(b.lower) - e.half_width && e.p <= to_d(b.upper) + e.half_width;
  return c;
}

}  // namespace

Estimate estimate_with_ci(std::uint64_t count, std::uint64_t n) {
  if (n == 0 || count > n) throw UsageError("estimate needs 0 <= count <= N and N >= 1");
  Estimate e;
  e.count = count;
  e.n = n;
  e.p = static_cast<double>(count) / static_cast<double>(n);
  e.se = std::sqrt(e.p * (1 - e.p) / static_cast<double>(n));
  e.half_width = (count == 0 || count == n) ? 3.0 / static_cast<double>(n) : 3 * e.se;
  e.lo = std::max(0.0, e.p - e.half_width);
  e.hi = std::min(1.0, e.p + e.half_width);
  return e;
}

ExperimentSummary summarize(const ExperimentParams& p, const std::vector<TrialRecord>& records) {
  ExperimentSummary sum;
  sum.params = p;
  sum.hstar = p.hstar.value_or(p.r - p.s + 1);
  sum.counts.assign(sum.hstar + 1, 0);
  double strips_total = 0, strips_sq = 0;
  std::uint64_t cert_n = 0, cert_yes = 0;
  for (const auto& rec : records) {
    if (rec.aborted) {
      ++sum.aborted;
      continue;
    }
    ++sum.completed;
    const std::uint64_t used = rec.success ? rec.strip_index : sum.hstar;
    if (rec.success)
      ++sum.counts[rec.strip_index - 1];
    else
      ++sum.counts[sum.hstar];
    strips_total += static_cast<double>(used);
    strips_sq += static_cast<double>(used) * static_cast<double>(used);
    if (rec.certificate) {
      ++cert_n;
      if (*rec.certificate == Verdict::certified) ++cert_yes;
    }
  }
  const std::uint64_t n = sum.completed;
  if (n == 0) return sum;
  for (std::uint64_t h = 0; h < sum.hstar; ++h) sum.per_h.push_back(estimate_with_ci(sum.counts[h], n));
  sum.failure = estimate_with_ci(sum.counts[sum.hstar], n);
  sum.mean_strips = strips_total / static_cast<double>(n);
  if (n > 1) {
    const double var = (strips_sq - static_cast<double>(n) * sum.mean_strips * sum.mean_strips) / static_cast<double>(n - 1);
    sum.mean_strips_se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  if (cert_n) sum.certificate_rate = estimate_with_ci(cert_yes, cert_n);

  namespace th = theory;
  sum.comparisons.push_back(two_sided("P[C=1]", sum.per_h[0], th::p1_bounds(p.q, p.s, p.d)));
  sum.comparisons.push_back(two_sided("P[C=1]", sum.per_h[0], th::p1_asym_bounds(p.q, p.s, p.d)));
  for (unsigned h = 2; h <= sum.hstar; ++h) {
    const std::string name = "P[C=" + std::to_string(h) + "]";
    auto b = th::ph_bounds(p.q, p.s, p.d, h);
    b.hypotheses_ok = b.hypotheses_ok && h <= p.r - p.s + 1;
    sum.comparisons.push_back(two_sided(name, sum.per_h[h - 1], b));
    auto ba = th::ph_asym_bounds(p.q, p.s, p.d, h);
    ba.hypotheses_ok = ba.hypotheses_ok && h <= p.r - p.s + 1;
    sum.comparisons.push_back(two_sided(name, sum.per_h[h - 1], ba));
  }
  if (sum.hstar == p.r - p.s + 1) {
    sum.comparisons.push_back(two_sided("P[C>h*]", sum.failure, th::pfail_bounds(p.q, p.r, p.s, p.d)));
    const auto es = th::expected_strips_bound(p.q, p.r, p.s, p.d);
    Comparison c;
    c.quantity = "E[min(C,h*)]";
    c.kind = "upper";
    c.estimate = sum.mean_strips;
    c.half_width = 3 * sum.mean_strips_se;
    c.interval = th::make_interval("expected_strips", es.explicit_part, 0, es.hypotheses_ok,
                                   "explicit part only; O-terms reported separately");
    c.interval.lower = 0;
    c.interval.upper = es.explicit_part;
    c.hypotheses_ok = es.hypotheses_ok;
    c.pass = sum.mean_strips <= to_d(es.explicit_part) + c.half_width;
    sum.comparisons.push_back(c);
  }
  if (sum.certificate_rate) {
    const auto lb = th::cond_h_lower_bound(p.q, p.s, p.d);
    Comparison c;
    c.quantity = "P[certified on first strip]";
    c.kind = "lower";
    c.estimate = sum.certificate_rate->p;
    c.half_width = sum.certificate_rate->half_width;
    c.interval = th::make_interval("condition_h_rate", lb.value, 0, !lb.vacuous);
    c.interval.upper = 1;
    c.hypotheses_ok = !lb.vacuous;
    c.pass = c.estimate >= to_d(lb.value) - c.half_width;
    sum.comparisons.push_back(c);
  }
  return sum;
}

ExperimentResult run_experiment(const ExperimentParams& p) {
  validate_params(p.q, p.r, p.s, p.d);
  if (p.trials == 0) throw UsageError("need at least one trial");
  if (p.certify && p.s != 2) throw UnsupportedError("certificates are implemented only for s = 2");
  const FieldCtx ctx = FieldCtx::of_order(p.q);
  const std::uint64_t hstar = p.hstar.value_or(p.r - p.s + 1);
  const auto t0 = Clock::now();

  ExperimentResult res;
  res.records.resize(p.trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(p.workers, static_cast<unsigned>(std::min<std::uint64_t>(p.trials, 256))));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= p.trials) return;
      try {
        res.records[i] = run_trial(p, ctx, hstar, p.first_trial + i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(fail_mu);
        if (!failure) failure = std::current_exception();
        next = p.trials;
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  res.summary = summarize(p, res.records);
  res.summary.total_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
  return res;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "trial_id,seed,q,r,s,d,hstar,backend,status,strip_index,certificate,wall_ns\n";
  for (const auto& r : records) {
    os << r.trial_id << ',' << r.seed << ',' << r.q << ',' << r.r << ',' << r.s << ',' << r.d << ',' << r.hstar << ','
       << backend_name(r.backend) << ',' << (r.aborted ? "aborted" : r.success ? "success" : "failure") << ',';
    if (r.success)
      os << r.strip_index;
    else
      os << "inf";
    os << ',' << (r.certificate ? verdict_name(*r.certificate) : "none") << ',' << r.wall_ns << '\n';
  }
  return os.str();
}

namespace {

nlohmann::ordered_json estimate_json(const Estimate& e) {
  return {{"count", e.count}, {"n", e.n}, {"p", e.p}, {"se", e.se}, {"half_width", e.half_width}, {"lo", e.lo}, {"hi", e.hi}};
}

}  // namespace

nlohmann::ordered_json summary_json(const ExperimentSummary& s) {
  const auto& p = s.params;
  nlohmann::ordered_json j;
  j["parameters"] = {{"q", p.q},           {"r", p.r},
                     {"s", p.s},           {"d", p.d},
                     {"trials", p.trials}, {"seed", p.seed},
                     {"first_trial", p.first_trial}, {"backend", backend_name(p.backend)},
                     {"certify", p.certify}, {"allow_zero", p.allow_zero},
                     {"hstar", s.hstar}};
  j["completed"] = s.completed;
  j["aborted"] = s.aborted;
  auto counts = nlohmann::ordered_json::object();
  for (std::uint64_t h = 0; h < s.hstar; ++h) counts[std::to_string(h + 1)] = s.counts[h];
  counts["inf"] = s.counts.empty() ? 0 : s.counts.back();
  j["counts"] = counts;
  auto per_h = nlohmann::ordered_json::array();
  for (std::size_t h = 0; h < s.per_h.size(); ++h) {
    auto e = estimate_json(s.per_h[h]);
    e["h"] = h + 1;
    per_h.push_back(e);
  }
  j["per_h"] = per_h;
  if (s.completed) j["failure"] = estimate_json(s.failure);
  j["mean_strips"] = {{"mean", s.mean_strips}, {"se", s.mean_strips_se}};
  j["certificate_rate"] = s.certificate_rate ? estimate_json(*s.certificate_rate) : nlohmann::ordered_json(nullptr);
  auto hyp = nlohmann::ordered_json::object();
  for (const auto& [k, v] : theory::hypothesis_report(p.q, p.r, p.s, p.d)) hyp[k] = v;
  j["hypotheses"] = hyp;
  auto cmp = nlohmann::ordered_json::array();
  for (const auto& c : s.comparisons) {
    cmp.push_back({{"quantity", c.quantity},
                   {"kind", c.kind},
                   {"estimate", c.estimate},
                   {"half_width", c.half_width},
                   {"interval", theory::interval_json(c.interval)},
                   {"hypotheses_ok", c.hypotheses_ok},
                   {"pass", c.pass}});
  }
  j["comparisons"] = cmp;
  j["total_runtime_ns"] = s.total_ns;
  return j;
}

namespace {

constexpr std::uint64_t kEnumCap = std::uint64_t{1} << 26;

std::uint64_t pow_capped(std::uint64_t b, std::uint64_t e) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (v > kEnumCap / b) return kEnumCap + 1;
    v *= b;
  }
  return v;
}

// For every coefficient vector of a single polynomial, the bitmask of zeros at
// the listed points (bit j set iff the polynomial vanishes at points[j]).
std::unordered_map<std::uint64_t, std::uint64_t> mask_histogram(const FieldCtx& ctx, unsigned r, unsigned d,
                                                                const std::vector<std::vector<Felt>>& points) {
  const auto mons = monomials_upto(r, d);
  const std::size_t D = mons.size(), P = points.size();
  // vals[j][x]: monomial j at point x
  std::vector<std::vector<Felt>> vals(D, std::vector<Felt>(P));
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t x = 0; x < P; ++x) {
      Felt v = ctx.one();
      for (unsigned i = 0; i < r; ++i)
        if (mons[j][i]) v = ctx.mul(v, ctx.pow(points[x][i], mons[j][i]));
      vals[j][x] = v;
    }
  std::unordered_map<std::uint64_t, std::uint64_t> hist;
  // acc[j] holds the values of the partial sum over monomials < j.
  std::vector<std::vector<Felt>> acc(D + 1, std::vector<Felt>(P, Felt{0}));
  const std::uint64_t full = P == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << P) - 1;
  bool zero_seen = false;
  auto rec = [&](auto&& self, std::size_t j, bool all_zero) -> void {
    if (j == D) {
      std::uint64_t mask = 0;
      for (std::size_t x = 0; x < P; ++x)
        if (acc[D][x].is_zero()) mask |= std::uint64_t{1} << x;
      if (all_zero) {
        if (mask != full) throw std::logic_error("zero polynomial must vanish everywhere");
        zero_seen = true;
      }
      ++hist[mask];
      return;
    }
    for (std::uint64_t c = 0; c < ctx.q(); ++c) {
      for (std::size_t x = 0; x < P; ++x) acc[j + 1][x] = ctx.add(acc[j][x], ctx.mul(Felt{c}, vals[j][x]));
      self(self, j + 1, all_zero && c == 0);
    }
  };
  rec(rec, 0, true);
  if (!zero_seen) throw std::logic_error("enumeration missed the zero polynomial");
  return hist;
}

// Distribution of the AND of s independent masks drawn from hist.
std::map<std::uint64_t, theory::BigInt> and_fold(const std::unordered_map<std::uint64_t, std::uint64_t>& hist, unsigned s) {
  std::map<std::uint64_t, theory::BigInt> dist;
  for (const auto& [m, c] : hist) dist[m] += theory::BigInt(static_cast<unsigned long>(c));
  for (unsigned i = 1; i < s; ++i) {
    std::map<std::uint64_t, theory::BigInt> next;
    for (const auto& [m, c] : dist)
      for (const auto& [m2, c2] : hist) next[m & m2] += c * theory::BigInt(static_cast<unsigned long>(c2));
    dist = std::move(next);
  }
  return dist;
}

std::vector<std::vector<Felt>> strip_points(const Strip& a, const FieldCtx& ctx, unsigned s) {
  std::vector<std::vector<Felt>> pts;
  const std::uint64_t n = pow_capped(ctx.q(), s);
  for (std::uint64_t code = 0; code < n; ++code) {
    std::vector<Felt> pt = a;
    std::vector<Felt> x(s);
    std::uint64_t c = code;
    for (unsigned i = s; i-- > 0;) {
      x[i] = Felt{c % ctx.q()};
      c /= ctx.q();
    }
    pt.insert(pt.end(), x.begin(), x.end());
    pts.push_back(std::move(pt));
  }
  return pts;
}

void check_enum_capacity(std::uint64_t q, unsigned r, unsigned s, unsigned d) {
  validate_params(q, r, s, d);
  const std::uint64_t D = theory::binom(theory::BigInt(d + r), r).get_ui();
  const std::uint64_t systems = pow_capped(q, s * D);
  const std::uint64_t strips = pow_capped(q, r - s);
  if (systems > kEnumCap || strips > kEnumCap || systems * strips > kEnumCap)
    throw CapacityError("enumeration exceeds 2^26 system-strip pairs");
  if (pow_capped(q, s) > 64) throw CapacityError("enumeration needs q^s <= 64");
}

}  // namespace

theory::Rational exhaustive_p1(std::uint64_t q, unsigned r, unsigned s, unsigned d) {
  check_enum_capacity(q, r, s, d);
  const FieldCtx ctx = FieldCtx::of_order(q);
  const unsigned m = r - s;
  const std::uint64_t nstrips = pow_capped(q, m);
  theory::BigInt hits = 0;
  for (std::uint64_t code = 0; code < nstrips; ++code) {
    Strip a(m);
    std::uint64_t c = code;
    for (unsigned i = m; i-- > 0;) {
      a[i] = Felt{c % q};
      c /= q;
    }
    const auto hist = mask_histogram(ctx, r, d, strip_points(a, ctx, s));
    for (const auto& [mask, cnt] : and_fold(hist, s))
      if (mask) hits += cnt;
  }
  const std::uint64_t D = theory::binom(theory::BigInt(d + r), r).get_ui();
  theory::BigInt total = theory::BigInt(static_cast<unsigned long>(nstrips));
  theory::BigInt sys_count;
  mpz_ui_pow_ui(sys_count.get_mpz_t(), q, s * D);
  theory::Rational out(hits, total * sys_count);
  out.canonicalize();
  return out;
}

SkResult exhaustive_sk(std::uint64_t q, unsigned r, unsigned s, unsigned d, const std::vector<Strip>& strips) {
  check_enum_capacity(q, r, s, d);
  if (strips.empty()) throw UsageError("need at least one strip");
  const FieldCtx ctx = FieldCtx::of_order(q);
  const std::uint64_t block = pow_capped(q, s);
  if (block * strips.size() > 64) throw CapacityError("k * q^s must be at most 64");
  std::vector<std::vector<Felt>> pts;
  for (const auto& a : strips) {
    if (a.size() != r - s) throw UsageError("strip length must be r - s");
    for (auto x : a)
      if (!ctx.contains(x)) throw UsageError("strip coordinate outside the field");
    const auto p = strip_points(a, ctx, s);
    pts.insert(pts.end(), p.begin(), p.end());
  }
  SkResult res;
  try {
    res.m_singular = matrix_rank(m_matrix(strips), ctx) < strips.size();
  } catch (const DomainError&) {
    res.m_singular = true;  // too many strips for the matrix to be square-invertible
  }
  const auto hist = mask_histogram(ctx, r, d, pts);
  theory::BigInt hits = 0;
  const std::uint64_t bmask = block == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << block) - 1;
  for (const auto& [mask, cnt] : and_fold(hist, s)) {
    bool every = true;
    for (std::size_t k = 0; k < strips.size() && every; ++k) every = ((mask >> (k * block)) & bmask) != 0;
    if (every) hits += cnt;
  }
  const std::uint64_t D = theory::binom(theory::BigInt(d + r), r).get_ui();
  theory::BigInt sys_count;
  mpz_ui_pow_ui(sys_count.get_mpz_t(), q, s * D);
  res.value = theory::Rational(hits, sys_count);
  res.value.canonicalize();
  return res;
}

}  // namespace svs
