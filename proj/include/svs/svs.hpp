#pragma once

// Search on vertical strips: fix the first r-s coordinates to a strip point,
// solve the square system that remains, move to a fresh strip on failure.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svs/sampler.hpp"
#include "svs/zdsolve.hpp"

namespace svs {

struct StripSource {
  RngStream* rng = nullptr;   // random mode when set
  std::vector<Strip> strips;  // explicit mode otherwise

  static StripSource random(RngStream& r) { return StripSource{&r, {}}; }
  static StripSource explicit_list(std::vector<Strip> s) { return StripSource{nullptr, std::move(s)}; }
};

enum class CertMode { none, first, all };

struct SolveOptions {
  Backend backend = Backend::exhaustive;
  std::optional<std::uint64_t> hstar;  // default r - s + 1
  CertMode certify = CertMode::none;
};

struct SolveOutcome {
  bool success = false;
  std::uint64_t strip_index = 0;  // 1-based; 0 on failure
  Strip strip;                    // the successful strip
  std::vector<Felt> point;        // its zero, s coordinates
  std::uint64_t hstar = 0;
  std::uint64_t strips_tried = 0;
  std::vector<Strip> strips;  // every strip tried, in order
  std::vector<std::optional<CertResult>> certificates;  // parallel to strips
};

ZeroDimQuery specialize_system(const SystemSpec& sys, const Strip& strip);

/// Random mode draws all h* strips up front from the stream. Explicit mode
/// tries at most h* of the given strips, which must be pairwise distinct.
SolveOutcome run_svs(const SystemSpec& sys, const StripSource& source, const SolveOptions& opts = {});

bool verify_solution(const SystemSpec& sys, const Strip& strip, const std::vector<Felt>& point);

nlohmann::ordered_json felt_json(Felt a, const FieldCtx& ctx);
nlohmann::ordered_json outcome_json(const SolveOutcome& out, const FieldCtx& ctx);

}  // namespace svs
