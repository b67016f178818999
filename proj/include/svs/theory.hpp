#pragma once

// Exact evaluation of the success and failure estimates for strip search.
//
// Every quantity is a GMP rational. Where a bound contains e^n the radius uses
// a rational upper enclosure of e^n, so intervals are only ever widened.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace svs::theory {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Truncated alternating series sum_{j=1}^m (-1)^{j-1} / j!.
Rational mu(unsigned m);

BigInt binom(const BigInt& n, unsigned k);
BigInt factorial(unsigned n);

/// Rational lo <= e^n <= hi with hi - lo < 10^-40.
struct Enclosure {
  Rational lo, hi;
};
Enclosure exp_enclosure(unsigned n);

struct STValues {
  Rational s;       // sum_{i<=m} (-1)^{i-1} C(Q,i) Q^-i, Q = q^s
  Rational t;       // C(Q,m) Q^-m
  Rational s_odd;   // odd-i part of the sum without signs
  Rational s_even;  // even-i part
  Rational s_plus;  // s_odd + s_even
};
STValues s_t_values(std::uint64_t q, unsigned s, unsigned m);

struct BoundInterval {
  std::string tag;
  Rational center;
  Rational radius;
  Rational lower;  // max(center - radius, 0)
  Rational upper;  // min(center + radius, 1)
  bool hypotheses_ok = true;
  bool vacuous = false;  // radius >= 1, or the interval covers [0, 1]
  std::string note;

  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
};

BoundInterval make_interval(std::string tag, Rational center, Rational radius, bool hypotheses_ok,
                            std::string note = {});

/// One strip succeeds: exact Bonferroni interval.
BoundInterval p1_bounds(std::uint64_t q, unsigned s, unsigned d);
/// One strip succeeds: interval in terms of mu.
BoundInterval p1_asym_bounds(std::uint64_t q, unsigned s, unsigned d);
/// All of k fixed strips succeed, k >= 2.
BoundInterval sk_bound(std::uint64_t q, unsigned s, unsigned d, unsigned k);
/// First success exactly at strip h for fixed admissible strips, h >= 2.
BoundInterval shstar_bound(std::uint64_t q, unsigned s, unsigned d, unsigned h);
/// First success exactly at strip h for random strips, h >= 2.
BoundInterval ph_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h);
/// Same event, interval in terms of mu.
BoundInterval ph_asym_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h);
/// No success within h* = r - s + 1 strips.
BoundInterval pfail_bounds(std::uint64_t q, unsigned r, unsigned s, unsigned d);
/// First success at strip h and the specialization is a reduced regular sequence.
BoundInterval joint_bounds(std::uint64_t q, unsigned s, unsigned d, unsigned h);

struct ExpectedStrips {
  Rational explicit_part;  // upper-rounded
  // Unevaluated O-terms of the expected-strips estimate, each with coefficient 1.
  Rational slack_points;   // h* d^s (d+1)^s / q
  Rational slack_strips;   // h* (2 - mu_d)^{h*} / q^s
  bool hypotheses_ok = true;
};
ExpectedStrips expected_strips_bound(std::uint64_t q, unsigned r, unsigned s, unsigned d);

struct CondHBound {
  Rational value;  // max(0, 1 - 2 d^s (d+1)^s / q)
  bool vacuous = false;
};
CondHBound cond_h_lower_bound(std::uint64_t q, unsigned s, unsigned d);

/// Unsigned Stirling numbers of the first kind, 0 <= k <= j <= 20.
BigInt stirling1(unsigned j, unsigned k);
/// C(q^s, j) = sum_k (-1)^{j-k} st(j,k) q^{sk} / j!, checked exactly.
bool binom_identity_check(std::uint64_t q, unsigned s, unsigned j);

struct Vec2 {
  Rational u, l;
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.u == b.u && a.l == b.l; }
};
struct Mat2 {
  Rational a, b, c, d;  // [[a, b], [c, d]]
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};
Mat2 mat_mul(const Mat2& x, const Mat2& y);
Vec2 mat_apply(const Mat2& m, const Vec2& v);
/// m^n by the binomial Cayley-Hamilton expansion, no iteration.
Mat2 mat_pow_closed(const Mat2& m, unsigned n);

struct ULResult {
  std::vector<Vec2> ul;           // (U_k, L_k), index k-1
  Mat2 A, B, C;                   // recursion matrix and its componentwise neighbours
  std::vector<Vec2> ul_closed;    // A^{k-1} (U_1, L_1) in closed form
  std::vector<Vec2> b_iter;       // B^{k-1} (U_1, L_1) by repeated products
  std::vector<Vec2> b_closed;     // same from the spectral formula for B
  std::vector<Vec2> c_iter;       // C^{k-1} (U_1, L_1)
};
/// Upper/lower inclusion-exclusion bounds for k strips, k = 1..kmax (kmax <= 32).
ULResult ul_recursion(std::uint64_t q, unsigned s, unsigned d, unsigned kmax);
/// s_d^k + (t_{d+1}/2)((s_d^+)^{k-1} - s_d^{k-1}), the spectral estimate for U_k.
Rational ul_upper_expansion(std::uint64_t q, unsigned s, unsigned d, unsigned k);

/// Strip h-tuples with invertible M: prod_{i<h}(q^i - 1) * q^{h(r-s) - h(h-1)/2}.
BigInt good_tuple_count(std::uint64_t q, unsigned h, unsigned r, unsigned s);

struct Complexity {
  double tau_gb = 0;
  double tau_k = 0;
  double D = 0;
};
Complexity complexity_formulas(unsigned d, unsigned s, std::uint64_t q, unsigned r, double omega);

/// Named hypotheses; "1<h<=r-s+1" appears only when h is given.
std::map<std::string, bool> hypothesis_report(std::uint64_t q, unsigned r, unsigned s, unsigned d,
                                              std::optional<unsigned> h = std::nullopt);

/// Decimal expansion rounded to the given number of digits after the point.
std::string to_decimal(const Rational& x, unsigned digits = 30);
double to_double(const Rational& x);

nlohmann::ordered_json rational_json(const Rational& x);
nlohmann::ordered_json interval_json(const BoundInterval& b);

/// Everything above for one parameter set. h restricts strip-indexed bounds to
/// that h; otherwise 2..h* are listed.
nlohmann::ordered_json theory_report(std::uint64_t q, unsigned r, unsigned s, unsigned d,
                                     std::optional<unsigned> h, double omega);

}  // namespace svs::theory
