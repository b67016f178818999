#pragma once

// Random systems and strips from reproducible streams, plus the matrices used
// to check the rank properties behind the success estimates.

#include <cstdint>
#include <vector>

#include "svs/ffield.hpp"
#include "svs/mpoly.hpp"

namespace svs {

/// SplitMix64 stream keyed by (seed, stream_id). The output sequence depends
/// only on the key, never on the host or on scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform integer in [0, n), n >= 1, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

std::uint64_t splitmix_mix(std::uint64_t z);

struct SystemSpec {
  FieldCtx ctx = FieldCtx::prime(2);
  unsigned r = 0;
  unsigned s = 0;
  unsigned d = 0;
  std::vector<MPoly> polys;

  /// Number of coefficients of a polynomial of degree <= d in r variables.
  std::uint64_t dim_fd() const;
};

/// Throws UsageError unless 1 < s < r, d >= 2, and polys match (count, nvars, degree).
void validate_system(const SystemSpec& sys);
void validate_params(std::uint64_t q, unsigned r, unsigned s, unsigned d);

using Strip = std::vector<Felt>;

/// Every coefficient of every polynomial drawn uniformly from F_q in monomial
/// order. With allow_zero = false an all-zero polynomial is redrawn.
SystemSpec sample_system(const FieldCtx& ctx, unsigned r, unsigned s, unsigned d, RngStream& rng,
                         bool allow_zero = true);

/// h pairwise-distinct strips of length m, drawn one at a time with rejection,
/// so the first k strips of a longer call equal a call with count k.
std::vector<Strip> sample_strips(const FieldCtx& ctx, unsigned m, std::uint64_t h, RngStream& rng);

/// Row i is (1, a_{i,1}, ..., a_{i,h-1}) for h strips.
FMatrix m_matrix(const std::vector<Strip>& strips);

/// Row j lists every monomial of degree <= d evaluated at points[j].
FMatrix vandermonde_a(const std::vector<std::vector<Felt>>& points, unsigned d, const FieldCtx& ctx);

/// Rows are the monomial evaluations at (strip_i, x) for x in point_sets[i].
FMatrix condition_matrix(const std::vector<Strip>& strips,
                         const std::vector<std::vector<std::vector<Felt>>>& point_sets, unsigned d,
                         unsigned r, const FieldCtx& ctx);

}  // namespace svs
