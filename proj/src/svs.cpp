#include "svs/svs.hpp"

#include <set>

#include "svs/error.hpp"

namespace svs {

ZeroDimQuery specialize_system(const SystemSpec& sys, const Strip& strip) {
  if (strip.size() != sys.r - sys.s) throw UsageError("strip length must be r - s");
  ZeroDimQuery q;
  q.ctx = sys.ctx;
  q.s = sys.s;
  q.dmax = sys.d;
  for (const auto& f : sys.polys) q.polys.push_back(specialize(f, strip, sys.ctx));
  return q;
}

SolveOutcome run_svs(const SystemSpec& sys, const StripSource& source, const SolveOptions& opts) {
  validate_system(sys);
  const unsigned m = sys.r - sys.s;
  const std::uint64_t hstar = opts.hstar.value_or(m + 1);
  if (hstar == 0) throw UsageError("strip budget must be positive");

  std::vector<Strip> strips;
  if (source.rng) {
    strips = sample_strips(sys.ctx, m, hstar, *source.rng);
  } else {
    std::set<Strip> seen;
    for (const auto& a : source.strips) {
      if (a.size() != m) throw UsageError("explicit strip has the wrong length");
      for (auto x : a)
        if (!sys.ctx.contains(x)) throw UsageError("explicit strip coordinate outside the field");
      if (!seen.insert(a).second) throw UsageError("explicit strips must be pairwise distinct");
    }
    strips.assign(source.strips.begin(),
                  source.strips.begin() + static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(hstar, source.strips.size())));
  }

  SolveOutcome out;
  out.hstar = hstar;
  for (std::size_t i = 0; i < strips.size(); ++i) {
    const ZeroDimQuery q = specialize_system(sys, strips[i]);
    out.strips.push_back(strips[i]);
    ++out.strips_tried;
    std::optional<CertResult> cert;
    if (opts.certify == CertMode::all || (opts.certify == CertMode::first && i == 0)) cert = cond_h_certificate(q);
    out.certificates.push_back(cert);
    if (auto pt = find_zero(q, opts.backend)) {
      if (!verify_solution(sys, strips[i], *pt)) throw std::logic_error("returned point fails verification");
      out.success = true;
      out.strip_index = i + 1;
      out.strip = strips[i];
      out.point = *pt;
      break;
    }
  }
  return out;
}

bool verify_solution(const SystemSpec& sys, const Strip& strip, const std::vector<Felt>& point) {
  if (strip.size() + point.size() != sys.r) throw UsageError("strip and point lengths must add up to r");
  std::vector<Felt> full = strip;
  full.insert(full.end(), point.begin(), point.end());
  for (const auto& f : sys.polys)
    if (!evaluate(f, full, sys.ctx).is_zero()) return false;
  return true;
}

nlohmann::ordered_json felt_json(Felt a, const FieldCtx& ctx) {
  if (ctx.k() == 1) return a.code;
  return ctx.coeffs(a);
}

namespace {

nlohmann::ordered_json vec_json(const std::vector<Felt>& v, const FieldCtx& ctx) {
  auto arr = nlohmann::ordered_json::array();
  for (auto x : v) arr.push_back(felt_json(x, ctx));
  return arr;
}

}  // namespace

nlohmann::ordered_json outcome_json(const SolveOutcome& out, const FieldCtx& ctx) {
  nlohmann::ordered_json j;
  j["status"] = out.success ? "success" : "failure";
  j["strip_index"] = out.success ? nlohmann::ordered_json(out.strip_index) : nlohmann::ordered_json(nullptr);
  j["strip"] = out.success ? vec_json(out.strip, ctx) : nlohmann::ordered_json(nullptr);
  j["point"] = out.success ? vec_json(out.point, ctx) : nlohmann::ordered_json(nullptr);
  j["hstar"] = out.hstar;
  j["strips_tried"] = out.strips_tried;
  auto tried = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < out.strips.size(); ++i) {
    nlohmann::ordered_json t;
    t["strip"] = vec_json(out.strips[i], ctx);
    if (i < out.certificates.size() && out.certificates[i]) {
      const auto& c = *out.certificates[i];
      t["certificate"] = {{"verdict", verdict_name(c.verdict)},
                          {"resultant_degree", c.resultant_degree},
                          {"squarefree", c.squarefree},
                          {"leading_coprime", c.leading_coprime}};
    }
    tried.push_back(t);
  }
  j["tried"] = tried;
  return j;
}

}  // namespace svs
