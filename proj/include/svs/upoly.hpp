#pragma once

// Dense univariate polynomials over a FieldCtx and the root-finding toolkit.

#include <cstdint>
#include <vector>

#include "svs/ffield.hpp"
#include "svs/mpoly.hpp"

namespace svs {

struct UPoly {
  std::vector<Felt> c;  // c[i] is the coefficient of X^i; no trailing zeros

  UPoly() = default;
  explicit UPoly(std::vector<Felt> coeffs);

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  Felt lead() const { return c.empty() ? Felt{0} : c.back(); }
  Felt coeff(std::size_t i) const { return i < c.size() ? c[i] : Felt{0}; }

  friend bool operator==(const UPoly&, const UPoly&) = default;
};

void normalize(UPoly& f);

UPoly upoly_add(const UPoly& f, const UPoly& g, const FieldCtx& ctx);
UPoly upoly_sub(const UPoly& f, const UPoly& g, const FieldCtx& ctx);
UPoly upoly_mul(const UPoly& f, const UPoly& g, const FieldCtx& ctx);
UPoly upoly_scale(const UPoly& f, Felt a, const FieldCtx& ctx);
/// Quotient and remainder; g must be nonzero.
void upoly_divmod(const UPoly& f, const UPoly& g, UPoly& quo, UPoly& rem, const FieldCtx& ctx);
UPoly upoly_rem(const UPoly& f, const UPoly& g, const FieldCtx& ctx);
UPoly upoly_monic(const UPoly& f, const FieldCtx& ctx);
UPoly upoly_derivative(const UPoly& f, const FieldCtx& ctx);
Felt upoly_eval(const UPoly& f, Felt x, const FieldCtx& ctx);
/// f(X)^e mod m.
UPoly upoly_powmod(const UPoly& f, std::uint64_t e, const UPoly& m, const FieldCtx& ctx);

/// Monic gcd; throws DomainError if both inputs are zero.
UPoly upoly_gcd(const UPoly& f, const UPoly& g, const FieldCtx& ctx);

/// X^q mod f for deg f >= 1.
UPoly xq_mod(const UPoly& f, const FieldCtx& ctx);

/// Distinct roots of f in the field, ascending by code. f must be nonzero.
std::vector<Felt> rational_roots(const UPoly& f, const FieldCtx& ctx);

/// gcd(f, f') constant; f' = 0 counts as not squarefree.
bool is_squarefree(const UPoly& f, const FieldCtx& ctx);

/// The unique polynomial of degree < n through (x_i, y_i); the x_i must be distinct.
UPoly interpolate(const std::vector<Felt>& xs, const std::vector<Felt>& ys, const FieldCtx& ctx);

/// Determinant of the Sylvester matrix of f and g (both nonzero, not both constant).
Felt sylvester_resultant(const UPoly& f, const UPoly& g, const FieldCtx& ctx);

/// Coefficients of f in its last variable: f = sum_j c_j * Y^j with c_j in the
/// remaining variables (returned with nvars-1 variables).
std::vector<MPoly> coeffs_in_last(const MPoly& f, const FieldCtx& ctx);

/// A polynomial in a single variable as UPoly; throws UsageError if nvars != 1.
UPoly to_upoly(const MPoly& f);

/// Res_Y(f, g) for bivariate f(X, Y), g(X, Y) with Y the second variable,
/// by evaluation and interpolation. Falls back to points in GF(q^e) when F_q
/// has too few usable evaluation points.
UPoly resultant_y(const MPoly& f, const MPoly& g, const FieldCtx& ctx);

/// Lifts every coefficient through the embedding.
MPoly lift_mpoly(const MPoly& f, const FieldEmbedding& emb);

}  // namespace svs
