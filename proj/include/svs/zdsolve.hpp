#pragma once

// Solving the specialized square system over F_q, the reduced-regular-sequence
// certificate for two equations, and point counts over extensions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svs/ffield.hpp"
#include "svs/mpoly.hpp"
#include "svs/upoly.hpp"

namespace svs {

enum class Backend { exhaustive, resultant };

const char* backend_name(Backend b);
Backend parse_backend(const std::string& name);

struct ZeroDimQuery {
  FieldCtx ctx = FieldCtx::prime(2);
  unsigned s = 0;
  std::vector<MPoly> polys;
  unsigned dmax = 0;
};

/// Throws UsageError when a polynomial has the wrong variable count or degree.
void validate_query(const ZeroDimQuery& q);

std::uint64_t count_zeros(const ZeroDimQuery& q, Backend backend);

/// First zero in grid order (exhaustive) or smallest X1 then smallest X2
/// (resultant). Every returned point is re-checked against all polynomials.
std::optional<std::vector<Felt>> find_zero(const ZeroDimQuery& q, Backend backend);

enum class Verdict { certified, not_certified };

struct CertResult {
  Verdict verdict = Verdict::not_certified;
  int resultant_degree = -1;  // -1 when no resultant was formed or it vanished
  bool squarefree = false;
  bool leading_coprime = false;
};

const char* verdict_name(Verdict v);

/// Two equations in two variables: certified when Res_Y has degree d^2, is
/// squarefree, and the Y-leading coefficients have no common zero. Then the
/// zero set is d^2 distinct points. not_certified proves nothing.
CertResult cond_h_certificate(const ZeroDimQuery& q);

/// Common zeros with coordinates in GF(q^e).
std::uint64_t count_zeros_ext(const ZeroDimQuery& q, unsigned e);

/// Geometric points of a zero-dimensional system, by Moebius inversion of
/// count_zeros_ext over e = 1..d^s.
std::uint64_t distinct_geometric_points(const ZeroDimQuery& q);

/// The per-degree closed-point counts a_1..a_E used by distinct_geometric_points.
std::vector<std::int64_t> closed_point_counts(const ZeroDimQuery& q, unsigned max_e);

}  // namespace svs
