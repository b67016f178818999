#include "svs/theory.hpp"

#include <cmath>

#include "svs/error.hpp"

namespace svs::theory {

namespace {

BigInt ipow(const BigInt& b, unsigned e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& b, unsigned e) {
  Rational r = 1;
  Rational base = b;
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  r.canonicalize();
  return r;
}

BigInt qs_of(std::uint64_t q, unsigned s) { return ipow(BigInt(static_cast<unsigned long>(q)), s); }

// C(Q, i) Q^{-i}
Rational term(const BigInt& Q, unsigned i) {
  Rational r(binom(Q, i), ipow(Q, i));
  r.canonicalize();
  return r;
}

Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }

Rational inv_fact(unsigned n) {
  Rational r(BigInt(1), factorial(n));
  r.canonicalize();
  return r;
}

// d^s (d+1)^s
BigInt point_budget(unsigned s, unsigned d) { return ipow(BigInt(d), s) * ipow(BigInt(d + 1), s); }

}  // namespace

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binom(const BigInt& n, unsigned k) {
  if (n < 0) throw UsageError("binomial of a negative number");
  if (n < k) return 0;
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

Rational mu(unsigned m) {
  if (m < 1) throw UsageError("mu(m) needs m >= 1");
  Rational acc = 0;
  for (unsigned j = 1; j <= m; ++j) {
    if (j % 2)
      acc += inv_fact(j);
    else
      acc -= inv_fact(j);
  }
  acc.canonicalize();
  return acc;
}

Enclosure exp_enclosure(unsigned n) {
  if (n == 0) return {Rational(1), Rational(1)};
  const Rational eps(BigInt(1), ipow(BigInt(10), 40));
  unsigned N = 2 * n + 10;
  for (;;) {
    Rational sum = 0;
    Rational t = 1;  // n^k / k!
    for (unsigned k = 0; k <= N; ++k) {
      if (k > 0) t = t * n / k;
      sum += t;
    }
    // Geometric tail bound: next term times 1 / (1 - n/(N+2)).
    Rational next = t * n / (N + 1);
    Rational tail = next * Rational(N + 2, N + 2 - n);
    tail.canonicalize();
    if (tail < eps) {
      sum.canonicalize();
      Rational hi = sum + tail;
      hi.canonicalize();
      return {sum, hi};
    }
    N *= 2;
  }
}

STValues s_t_values(std::uint64_t q, unsigned s, unsigned m) {
  if (m < 1) throw UsageError("s_t_values needs m >= 1");
  const BigInt Q = qs_of(q, s);
  STValues v;
  v.s_odd = 0;
  v.s_even = 0;
  for (unsigned i = 1; i <= m; ++i) (i % 2 ? v.s_odd : v.s_even) += term(Q, i);
  v.s = v.s_odd - v.s_even;
  v.s_plus = v.s_odd + v.s_even;
  v.t = term(Q, m);
  v.s.canonicalize();
  v.s_plus.canonicalize();
  v.s_odd.canonicalize();
  v.s_even.canonicalize();
  return v;
}

BoundInterval make_interval(std::string tag, Rational center, Rational radius, bool hypotheses_ok,
                            std::string note) {
  BoundInterval b;
  b.tag = std::move(tag);
  center.canonicalize();
  radius.canonicalize();
  b.center = center;
  b.radius = radius;
  b.lower = rmax(center - radius, Rational(0));
  b.upper = rmin(center + radius, Rational(1));
  b.hypotheses_ok = hypotheses_ok;
  b.vacuous = radius >= 1 || (b.lower == 0 && b.upper == 1);
  b.note = std::move(note);
  return b;
}

BoundInterval p1_bounds(std::uint64_t q, unsigned s, unsigned d) {
  const auto sd = s_t_values(q, s, d);
  const Rational t = s_t_values(q, s, d + 1).t;
  const bool hyp = s <= d + 1 && qs_of(q, s) > d;
  const Rational lo = d % 2 ? Rational(sd.s - t) : sd.s;
  const Rational hi = d % 2 ? sd.s : Rational(sd.s + t);
  return make_interval("one_strip_exact", (lo + hi) / 2, t / 2, hyp);
}

BoundInterval p1_asym_bounds(std::uint64_t q, unsigned s, unsigned d) {
  const BigInt Q = qs_of(q, s);
  const Rational two_q(BigInt(2), Q);
  const bool hyp = s <= d + 1 && Q > d;
  const Rational lo = (d % 2 ? mu(d + 1) : mu(d)) - two_q;
  const Rational hi = (d % 2 ? mu(d) : mu(d + 1)) + two_q;
  return make_interval("one_strip_asymptotic", (lo + hi) / 2, (hi - lo) / 2, hyp);
}

BoundInterval sk_bound(std::uint64_t q, unsigned s, unsigned d, unsigned k) {
  if (k < 2) throw UsageError("sk_bound needs k >= 2");
  const auto sd = s_t_values(q, s, d);
  const auto sd1 = s_t_values(q, s, d + 1);
  const Rational& base = d % 2 ? sd.s : sd1.s;
  const Rational center = rpow(base, k);
  const Rational radius = sd1.t / 2 * (rpow(sd1.s_plus, k - 1) + Rational(2 * k - 1) * rpow(base, k - 1));
  const bool hyp = s <= d + 1 && qs_of(q, s) > d;
  return make_interval("all_k_strips_exact", center, radius, hyp);
}

BoundInterval shstar_bound(std::uint64_t q, unsigned s, unsigned d, unsigned h) {
  if (h < 2) throw UsageError("shstar_bound needs h >= 2");
  const auto sd = s_t_values(q, s, d);
  const auto sd1 = s_t_values(q, s, d + 1);
  const Rational& base = d % 2 ? sd.s : sd1.s;
  const Rational center = base * rpow(1 - base, h - 1);
  const Rational radius = sd1.t * (rpow(1 + sd1.s_plus, h - 1) + Rational(1, 2));
  return make_interval("first_success_at_h_given_strips", center, radius, s < d);
}

BoundInterval ph_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h) {
  BoundInterval b = shstar_bound(q, s, d, h);
  const bool hyp = b.hypotheses_ok && qs_of(q, s) > d;
  return make_interval("first_success_at_h", b.center, b.radius + Rational(2, static_cast<unsigned long>(q)), hyp);
}

BoundInterval ph_asym_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h) {
  if (h < 2) throw UsageError("ph_asym_bounds needs h >= 2");
  const BigInt Q = qs_of(q, s);
  const Rational m = d % 2 ? mu(d) : mu(d + 1);
  const Rational center = m * rpow(1 - m, h - 1);
  const Rational radius = (exp_enclosure(h - 1).hi + Rational(1, 2)) * inv_fact(d + 1) +
                          Rational(2, static_cast<unsigned long>(q)) +
                          Rational(BigInt(5), Q) * rpow(2 - mu(d), h - 1);
  const bool hyp = s < d && Q > d && Q > 6;
  return make_interval("first_success_at_h_asymptotic", center, radius, hyp);
}

BoundInterval pfail_bounds(std::uint64_t q, unsigned r, unsigned s, unsigned d) {
  if (r <= s) throw UsageError("pfail_bounds needs r > s");
  const unsigned hs = r - s + 1;
  const BigInt Q = qs_of(q, s);
  const Rational m = d % 2 ? mu(d) : mu(d + 1);
  const Rational center = rpow(1 - m, hs);
  const Rational radius = exp_enclosure(hs).hi * inv_fact(d + 1) + Rational(2 * hs, static_cast<unsigned long>(q)) +
                          Rational(BigInt(15), Q) * rpow(2 - mu(d), hs);
  const bool hyp = s < d && Q > d;
  return make_interval("failure_after_budget", center, radius, hyp,
                       hs < 2 ? "budget below two strips; only the one-strip estimates apply" : "");
}

BoundInterval joint_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h) {
  if (h < 2) throw UsageError("joint_bounds needs h >= 2");
  const BigInt Q = qs_of(q, s);
  const BigInt pb = point_budget(s, d);
  const Rational m = d % 2 ? mu(d) : mu(d + 1);
  const Rational center = m * rpow(1 - m, h - 1);
  const Rational radius = (exp_enclosure(h - 1).hi + Rational(1, 2)) * inv_fact(d + 1) +
                          Rational(2 * pb + 2, BigInt(static_cast<unsigned long>(q))) +
                          Rational(BigInt(5), Q) * rpow(2 - mu(d), h - 1);
  const bool hyp = BigInt(static_cast<unsigned long>(q)) > 2 * pb && s < d;
  return make_interval("success_with_condition_h", center, radius, hyp);
}

ExpectedStrips expected_strips_bound(std::uint64_t q, unsigned r, unsigned s, unsigned d) {
  if (r <= s) throw UsageError("expected_strips_bound needs r > s");
  const unsigned hs = r - s + 1;
  const BigInt Q = qs_of(q, s);
  const BigInt qz(static_cast<unsigned long>(q));
  const Rational m = d % 2 ? mu(d) : mu(d + 1);
  ExpectedStrips out;
  out.explicit_part = 1 / m + hs * rpow(1 - m, hs) + 3 * hs * exp_enclosure(hs).hi * inv_fact(d + 1);
  out.explicit_part.canonicalize();
  out.slack_points = Rational(hs * point_budget(s, d), qz);
  out.slack_points.canonicalize();
  out.slack_strips = hs * rpow(2 - mu(d), hs) / Rational(Q);
  out.slack_strips.canonicalize();
  out.hypotheses_ok = qz > 2 * point_budget(s, d) && d > s;
  return out;
}

CondHBound cond_h_lower_bound(std::uint64_t q, unsigned s, unsigned d) {
  const BigInt pb2 = 2 * point_budget(s, d);
  const BigInt qz(static_cast<unsigned long>(q));
  CondHBound out;
  out.vacuous = qz <= pb2;
  Rational v = 1 - Rational(pb2, qz);
  v.canonicalize();
  out.value = rmax(v, Rational(0));
  return out;
}

BigInt stirling1(unsigned j, unsigned k) {
  if (k > j || j > 20) throw UsageError("stirling1 needs 0 <= k <= j <= 20");
  std::vector<std::vector<BigInt>> st(j + 1, std::vector<BigInt>(j + 1, 0));
  st[0][0] = 1;
  for (unsigned n = 1; n <= j; ++n)
    for (unsigned m = 1; m <= n; ++m) st[n][m] = st[n - 1][m - 1] + BigInt(n - 1) * st[n - 1][m];
  return st[j][k];
}

bool binom_identity_check(std::uint64_t q, unsigned s, unsigned j) {
  const BigInt Q = qs_of(q, s);
  Rational rhs = 0;
  for (unsigned k = 0; k <= j; ++k) {
    Rational t(stirling1(j, k) * ipow(Q, k), factorial(j));
    if ((j - k) % 2) rhs -= t; else rhs += t;
  }
  rhs.canonicalize();
  return rhs == Rational(binom(Q, j));
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Vec2 mat_apply(const Mat2& m, const Vec2& v) { return {m.a * v.u + m.b * v.l, m.c * v.u + m.d * v.l}; }

Mat2 mat_pow_closed(const Mat2& m, unsigned n) {
  // Cayley-Hamilton: m^n = u_n m - det u_{n-1} I with
  // u_n = sum_j C(n-1-j, j) tr^{n-1-2j} (-det)^j.
  if (n == 0) return {1, 0, 0, 1};
  Rational tr = m.a + m.d;
  Rational det = m.a * m.d - m.b * m.c;
  auto u = [&](unsigned k) {
    Rational acc = 0;
    if (k == 0) return acc;
    for (unsigned j = 0; 2 * j <= k - 1; ++j)
      acc += Rational(binom(BigInt(k - 1 - j), j)) * rpow(tr, k - 1 - 2 * j) * rpow(-det, j);
    return acc;
  };
  const Rational un = u(n), un1 = u(n - 1);
  Mat2 out{un * m.a - det * un1, un * m.b, un * m.c, un * m.d - det * un1};
  out.a.canonicalize();
  out.b.canonicalize();
  out.c.canonicalize();
  out.d.canonicalize();
  return out;
}

ULResult ul_recursion(std::uint64_t q, unsigned s, unsigned d, unsigned kmax) {
  if (kmax < 1 || kmax > 32) throw UsageError("ul_recursion needs 1 <= kmax <= 32");
  const auto sd = s_t_values(q, s, d);
  const auto sd1 = s_t_values(q, s, d + 1);
  ULResult r;
  if (d % 2) {
    r.A = {sd.s_odd, -sd.s_even, -sd1.s_even, sd1.s_odd};
    r.B = {sd.s_odd, -sd.s_even, -sd.s_even, sd.s_odd};
    r.C = {sd1.s_odd, -sd1.s_even, -sd1.s_even, sd1.s_odd};
  } else {
    r.A = {sd1.s_odd, -sd1.s_even, -sd.s_even, sd.s_odd};
    r.B = {sd1.s_odd, -sd.s_even, -sd.s_even, sd1.s_odd};
    r.C = {sd.s_odd, -sd1.s_even, -sd1.s_even, sd.s_odd};
  }
  // Starting from U_0 = L_0 = 1 gives the one-strip bounds of either parity.
  Vec2 v = mat_apply(r.A, {1, 1});
  const Vec2 v1 = v;
  Vec2 bv = v1, cv = v1;
  // Spectral form of the symmetric B: eigenvalues diag + off and diag - off.
  const Rational lam_minus = r.B.a + r.B.b;  // eigenvector (1, 1)
  const Rational lam_plus = r.B.a - r.B.b;   // eigenvector (1, -1)
  for (unsigned k = 1; k <= kmax; ++k) {
    if (k > 1) {
      v = mat_apply(r.A, v);
      bv = mat_apply(r.B, bv);
      cv = mat_apply(r.C, cv);
    }
    r.ul.push_back(v);
    r.ul_closed.push_back(mat_apply(mat_pow_closed(r.A, k - 1), v1));
    r.b_iter.push_back(bv);
    r.c_iter.push_back(cv);
    const Rational p = rpow(lam_plus, k - 1) / 2, n = rpow(lam_minus, k - 1) / 2;
    const Mat2 bk{p + n, n - p, n - p, p + n};
    r.b_closed.push_back(mat_apply(bk, v1));
  }
  for (auto* seq : {&r.ul, &r.ul_closed, &r.b_iter, &r.b_closed, &r.c_iter})
    for (auto& x : *seq) {
      x.u.canonicalize();
      x.l.canonicalize();
    }
  return r;
}

Rational ul_upper_expansion(std::uint64_t q, unsigned s, unsigned d, unsigned k) {
  if (k < 1) throw UsageError("k must be >= 1");
  const auto sd = s_t_values(q, s, d);
  const Rational t = s_t_values(q, s, d + 1).t;
  Rational v = rpow(sd.s, k) + t / 2 * (rpow(sd.s_plus, k - 1) - rpow(sd.s, k - 1));
  v.canonicalize();
  return v;
}

BigInt good_tuple_count(std::uint64_t q, unsigned h, unsigned r, unsigned s) {
  if (h < 1 || r <= s) throw UsageError("good_tuple_count needs h >= 1 and r > s");
  if (h - 1 > r - s) throw DomainError("good_tuple_count needs h - 1 <= r - s");
  const BigInt qz(static_cast<unsigned long>(q));
  BigInt out = 1;
  for (unsigned i = 1; i < h; ++i) out *= ipow(qz, i) - 1;
  // h(r-s) - h(h-1)/2 is a nonnegative integer
  const unsigned long ex = static_cast<unsigned long>(h) * (r - s) - static_cast<unsigned long>(h) * (h - 1) / 2;
  return out * ipow(qz, static_cast<unsigned>(ex));
}

Complexity complexity_formulas(unsigned d, unsigned s, std::uint64_t q, unsigned r, double omega) {
  if (!(omega >= 2.0 && omega <= 3.0)) throw UsageError("omega must lie in [2, 3]");
  auto bin = [](unsigned n, unsigned k) { return binom(BigInt(n), k).get_d(); };
  Complexity c;
  c.D = bin(d + r, r);
  const double ds = std::pow(static_cast<double>(d), s);
  const double lq = std::log2(static_cast<double>(q));
  c.tau_gb = c.D + d * std::pow(bin(s * d + 1, s), omega) + std::pow(static_cast<double>(d), 3.0 * s) + ds * lq;
  c.tau_k = c.D + bin(d + s, s) * std::pow(static_cast<double>(d), 2.0 * s) + ds * lq;
  return c;
}

std::map<std::string, bool> hypothesis_report(std::uint64_t q, unsigned r, unsigned s, unsigned d,
                                              std::optional<unsigned> h) {
  const BigInt Q = qs_of(q, s);
  std::map<std::string, bool> m;
  m["s<=d+1"] = s <= d + 1;
  m["q^s>d"] = Q > d;
  m["s<d"] = s < d;
  m["q^s>6"] = Q > 6;
  m["q>2d^s(d+1)^s"] = BigInt(static_cast<unsigned long>(q)) > 2 * point_budget(s, d);
  if (h) m["1<h<=r-s+1"] = *h > 1 && *h <= r - s + 1;
  return m;
}

std::string to_decimal(const Rational& x, unsigned digits) {
  const bool neg = x < 0;
  Rational a = neg ? Rational(-x) : x;
  const BigInt scale = ipow(BigInt(10), digits);
  // round half up of a * 10^digits
  Rational scaled = a * scale * 2 + 1;
  BigInt n = scaled.get_num() / (scaled.get_den() * 2);
  BigInt ip = n / scale, fp = n % scale;
  std::string frac = fp.get_str();
  if (frac.size() < digits) frac.insert(0, digits - frac.size(), '0');
  std::string out = (neg && n != 0 ? "-" : "") + ip.get_str();
  if (digits) out += "." + frac;
  return out;
}

double to_double(const Rational& x) { return x.get_d(); }

nlohmann::ordered_json rational_json(const Rational& x) {
  return {{"fraction", x.get_str()}, {"decimal", to_decimal(x)}};
}

nlohmann::ordered_json interval_json(const BoundInterval& b) {
  nlohmann::ordered_json j;
  j["tag"] = b.tag;
  j["center"] = rational_json(b.center);
  j["radius"] = rational_json(b.radius);
  j["lower"] = rational_json(b.lower);
  j["upper"] = rational_json(b.upper);
  j["hypotheses_ok"] = b.hypotheses_ok;
  j["vacuous"] = b.vacuous;
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

nlohmann::ordered_json theory_report(std::uint64_t q, unsigned r, unsigned s, unsigned d,
                                     std::optional<unsigned> h, double omega) {
  if (!(1 < s && s < r) || d < 2) throw UsageError("theory report needs 1 < s < r and d >= 2");
  if (h && (*h < 1 || *h > r - s + 1)) throw UsageError("h must lie in 1..r-s+1");
  const unsigned hs = r - s + 1;
  nlohmann::ordered_json j;
  j["parameters"] = {{"q", q}, {"r", r}, {"s", s}, {"d", d}, {"hstar", hs}, {"omega", omega}};
  if (h) j["parameters"]["h"] = *h;
  j["D"] = binom(BigInt(d + r), r).get_str();
  auto hyp = nlohmann::ordered_json::object();
  for (const auto& [k, v] : hypothesis_report(q, r, s, d, h)) hyp[k] = v;
  j["hypotheses"] = hyp;

  auto mus = nlohmann::ordered_json::array();
  for (unsigned m = 1; m <= std::max(20u, d + 1); ++m) {
    auto e = rational_json(mu(m));
    e["m"] = m;
    mus.push_back(e);
  }
  j["mu"] = mus;
  if (d % 2 && d >= 3) {
    const Rational md = mu(d);
    j["mu_strict_range_check"] = {{"d", d},
                                  {"mu_d", rational_json(md)},
                                  {"holds", Rational(1, 2) < md && md < Rational(2, 3)}};
  }

  auto st_json = [&](unsigned m) {
    const auto v = s_t_values(q, s, m);
    return nlohmann::ordered_json{{"m", m},
                                  {"s", rational_json(v.s)},
                                  {"t", rational_json(v.t)},
                                  {"s_odd", rational_json(v.s_odd)},
                                  {"s_even", rational_json(v.s_even)},
                                  {"s_plus", rational_json(v.s_plus)}};
  };
  j["s_t"] = {st_json(d), st_json(d + 1)};

  auto intervals = nlohmann::ordered_json::array();
  intervals.push_back(interval_json(p1_bounds(q, s, d)));
  intervals.push_back(interval_json(p1_asym_bounds(q, s, d)));
  std::vector<unsigned> hs_list;
  if (h) {
    if (*h >= 2) hs_list.push_back(*h);
  } else {
    for (unsigned k = 2; k <= hs; ++k) hs_list.push_back(k);
  }
  const auto add_indexed = [&](const BoundInterval& b, const char* key, unsigned idx) {
    auto e = interval_json(b);
    e[key] = idx;
    intervals.push_back(e);
  };
  for (unsigned k : hs_list) {
    add_indexed(sk_bound(q, s, d, k), "k", k);
    auto sh = shstar_bound(q, s, d, k);
    if (k > hs - 1) sh.hypotheses_ok = false;  // stated for h <= r - s
    add_indexed(sh, "h", k);
    add_indexed(ph_bounds(q, s, d, k), "h", k);
    add_indexed(ph_asym_bounds(q, s, d, k), "h", k);
    add_indexed(joint_bounds(q, s, d, k), "h", k);
  }
  intervals.push_back(interval_json(pfail_bounds(q, r, s, d)));
  j["intervals"] = intervals;

  const auto es = expected_strips_bound(q, r, s, d);
  j["expected_strips"] = {{"tag", "expected_strips"},
                          {"explicit_part", rational_json(es.explicit_part)},
                          {"slack_points_term", rational_json(es.slack_points)},
                          {"slack_strips_term", rational_json(es.slack_strips)},
                          {"slack_note", "unevaluated O-terms with coefficient 1; not added to the bound"},
                          {"hypotheses_ok", es.hypotheses_ok}};
  const auto ch = cond_h_lower_bound(q, s, d);
  j["condition_h_rate"] = {{"tag", "condition_h_rate"}, {"lower_bound", rational_json(ch.value)}, {"vacuous", ch.vacuous}};
  const auto cx = complexity_formulas(d, s, q, r, omega);
  j["complexity"] = {{"D", cx.D}, {"tau_gb", cx.tau_gb}, {"tau_k", cx.tau_k},
                     {"note", "order-of-magnitude expressions with unit constants"}};
  return j;
}

}  // namespace svs::theory
