#pragma once

// Monte Carlo harness for strip search and exact enumeration oracles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svs/svs.hpp"
#include "svs/theory.hpp"

namespace svs {

struct ExperimentParams {
  std::uint64_t q = 2;
  unsigned r = 3;
  unsigned s = 2;
  unsigned d = 2;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t first_trial = 0;  // stream offset, so runs can be split and merged
  Backend backend = Backend::exhaustive;
  bool certify = false;  // first strip only, s = 2 only
  bool allow_zero = true;
  std::optional<std::uint64_t> hstar;
  unsigned workers = 1;
  bool record_timing = false;  // wall_ns column stays 0 otherwise
};

struct TrialRecord {
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  std::uint64_t q = 0;
  unsigned r = 0, s = 0, d = 0;
  std::uint64_t hstar = 0;
  Backend backend = Backend::exhaustive;
  bool aborted = false;
  bool success = false;
  std::uint64_t strip_index = 0;  // 0 encodes "no success within h*"
  std::optional<Verdict> certificate;
  std::vector<Strip> strips;
  std::uint64_t wall_ns = 0;
};

struct Estimate {
  std::uint64_t count = 0;
  std::uint64_t n = 0;
  double p = 0;
  double se = 0;
  double half_width = 0;  // 3 SE, or 3/N when count is 0 or N
  double lo = 0;
  double hi = 0;
};

Estimate estimate_with_ci(std::uint64_t count, std::uint64_t n);

struct Comparison {
  std::string quantity;  // e.g. "P[C=2]"
  std::string kind;      // "two_sided", "upper", "lower"
  double estimate = 0;
  double half_width = 0;
  theory::BoundInterval interval;  // for one-sided checks only lower or upper matter
  bool hypotheses_ok = true;
  bool pass = false;
};

struct ExperimentSummary {
  ExperimentParams params;
  std::uint64_t hstar = 0;
  std::uint64_t completed = 0;
  std::uint64_t aborted = 0;
  std::vector<std::uint64_t> counts;  // counts[h-1] for h = 1..h*, then failures last
  std::vector<Estimate> per_h;
  Estimate failure;
  double mean_strips = 0;
  double mean_strips_se = 0;
  std::optional<Estimate> certificate_rate;
  std::vector<Comparison> comparisons;
  std::uint64_t total_ns = 0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

ExperimentResult run_experiment(const ExperimentParams& params);

/// Summary figures recomputed from a list of records (used for merging runs).
ExperimentSummary summarize(const ExperimentParams& params, const std::vector<TrialRecord>& records);

std::string records_csv(const std::vector<TrialRecord>& records);
nlohmann::ordered_json summary_json(const ExperimentSummary& s);

/// Exact one-strip success probability by enumerating every system and strip.
theory::Rational exhaustive_p1(std::uint64_t q, unsigned r, unsigned s, unsigned d);

struct SkResult {
  theory::Rational value;
  bool m_singular = false;
};

/// Exact fraction of systems that have a rational zero on every given strip.
SkResult exhaustive_sk(std::uint64_t q, unsigned r, unsigned s, unsigned d, const std::vector<Strip>& strips);

}  // namespace svs
