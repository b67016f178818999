#pragma once

// Sparse multivariate polynomials over a FieldCtx.
//
// Terms are kept in graded-lex descending order (total degree first, then
// lexicographic on the exponent vector with X1 most significant). Zero
// coefficients and duplicate exponents never survive canonicalization, so two
// polynomials are equal iff their term lists are equal.

#include <cstdint>
#include <string>
#include <vector>

#include "svs/ffield.hpp"

namespace svs {

using ExpVec = std::vector<std::uint32_t>;

struct Term {
  ExpVec e;
  Felt c;

  friend bool operator==(const Term&, const Term&) = default;
};

unsigned total_degree(const ExpVec& e);

/// True iff a precedes b in graded-lex descending order.
bool grlex_greater(const ExpVec& a, const ExpVec& b);

/// All exponent vectors in nvars variables of total degree <= d, graded-lex descending.
std::vector<ExpVec> monomials_upto(unsigned nvars, unsigned d);

class MPoly {
 public:
  MPoly() = default;
  explicit MPoly(unsigned nvars) : nvars_(nvars) {}

  /// Canonicalizes: merges duplicate exponents, drops zeros, sorts.
  static MPoly from_terms(unsigned nvars, std::vector<Term> terms, const FieldCtx& ctx);
  static MPoly constant(unsigned nvars, Felt c);
  /// The variable X_{i+1} (0-based index i).
  static MPoly variable(unsigned nvars, unsigned i);

  unsigned nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  /// Degree in variable i; -1 for the zero polynomial.
  int degree_in(unsigned i) const;

  friend bool operator==(const MPoly&, const MPoly&) = default;

 private:
  unsigned nvars_ = 0;
  std::vector<Term> terms_;
};

MPoly add(const MPoly& f, const MPoly& g, const FieldCtx& ctx);
MPoly sub(const MPoly& f, const MPoly& g, const FieldCtx& ctx);
MPoly mul(const MPoly& f, const MPoly& g, const FieldCtx& ctx);
MPoly scale(const MPoly& f, Felt c, const FieldCtx& ctx);

Felt evaluate(const MPoly& f, const std::vector<Felt>& point, const FieldCtx& ctx);

/// Substitutes X_j := a_j for j < len(a) and renumbers the remaining variables.
MPoly specialize(const MPoly& f, const std::vector<Felt>& a, const FieldCtx& ctx);

/// Table of v^e for every field element v and 0 <= e <= max_exp.
/// Needs q * (max_exp + 1) entries, so it is meant for small fields.
class PowerCache {
 public:
  PowerCache(const FieldCtx& ctx, unsigned max_exp);

  Felt pow(Felt v, unsigned e) const { return table_[v.code * stride_ + e]; }
  unsigned max_exp() const { return stride_ - 1; }

 private:
  std::size_t stride_;
  std::vector<Felt> table_;
};

Felt evaluate_cached(const MPoly& f, const std::vector<Felt>& point, const PowerCache& pc,
                     const FieldCtx& ctx);

/// Text form: terms "c e1 ... er" separated by "; ". Coefficients are field codes.
/// The zero polynomial prints as "0".
std::string format_mpoly(const MPoly& f);
/// Accepts terms in any order, repeated exponents, and zero coefficients.
MPoly parse_mpoly(const std::string& text, unsigned nvars, const FieldCtx& ctx);

/// Human-oriented rendering, e.g. "3*X1^2*X3 + X2 + 1".
std::string pretty_mpoly(const MPoly& f, const FieldCtx& ctx);

}  // namespace svs
