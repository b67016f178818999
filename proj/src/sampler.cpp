#include "svs/sampler.hpp"

#include <algorithm>
#include <set>

#include "svs/error.hpp"

namespace svs {

std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), state_(splitmix_mix(seed ^ splitmix_mix(stream_id + 0x9E3779B97F4A7C15ULL))) {}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return splitmix_mix(state_);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw UsageError("below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % n;
  }
}

std::uint64_t SystemSpec::dim_fd() const {
  // C(d + r, r)
  std::uint64_t c = 1;
  for (unsigned i = 1; i <= r; ++i) c = c * (d + i) / i;
  return c;
}

void validate_params(std::uint64_t q, unsigned r, unsigned s, unsigned d) {
  if (q < 2) throw UsageError("q must be a prime power >= 2");
  if (!(1 < s && s < r)) throw UsageError("need 1 < s < r");
  if (d < 2) throw UsageError("need d >= 2");
  if (r > 64) throw UsageError("r above 64 is not supported");
}

void validate_system(const SystemSpec& sys) {
  validate_params(sys.ctx.q(), sys.r, sys.s, sys.d);
  if (sys.polys.size() != sys.s) throw UsageError("system must contain exactly s polynomials");
  for (const auto& f : sys.polys) {
    if (f.nvars() != sys.r) throw UsageError("polynomial variable count must equal r");
    if (f.degree() > static_cast<int>(sys.d)) throw UsageError("polynomial degree exceeds d");
  }
}

SystemSpec sample_system(const FieldCtx& ctx, unsigned r, unsigned s, unsigned d, RngStream& rng,
                         bool allow_zero) {
  validate_params(ctx.q(), r, s, d);
  SystemSpec sys;
  sys.ctx = ctx;
  sys.r = r;
  sys.s = s;
  sys.d = d;
  const auto mons = monomials_upto(r, d);
  for (unsigned i = 0; i < s; ++i) {
    for (;;) {
      std::vector<Term> terms;
      for (const auto& e : mons) {
        const Felt c{rng.below(ctx.q())};
        if (!c.is_zero()) terms.push_back(Term{e, c});
      }
      if (terms.empty() && !allow_zero) continue;
      sys.polys.push_back(MPoly::from_terms(r, std::move(terms), ctx));
      break;
    }
  }
  return sys;
}

std::vector<Strip> sample_strips(const FieldCtx& ctx, unsigned m, std::uint64_t h, RngStream& rng) {
  if (h > (std::uint64_t{1} << 20)) throw CapacityError("at most 2^20 strips per call");
  // q^m >= h check without overflow.
  std::uint64_t room = 1;
  for (unsigned i = 0; i < m && room < h; ++i) room *= ctx.q();
  if (room < h) throw DomainError("more strips requested than points in F_q^(r-s)");
  std::vector<Strip> out;
  std::set<Strip> seen;
  out.reserve(h);
  while (out.size() < h) {
    Strip a(m);
    for (auto& x : a) x = Felt{rng.below(ctx.q())};
    if (!seen.insert(a).second) continue;
    out.push_back(std::move(a));
  }
  return out;
}

FMatrix m_matrix(const std::vector<Strip>& strips) {
  const std::size_t h = strips.size();
  if (h == 0) throw UsageError("m_matrix needs at least one strip");
  FMatrix m(h, h);
  for (std::size_t i = 0; i < h; ++i) {
    if (strips[i].size() + 1 < h) throw DomainError("strips have too few coordinates for m_matrix");
    m.at(i, 0) = Felt{1};
    for (std::size_t j = 1; j < h; ++j) m.at(i, j) = strips[i][j - 1];
  }
  return m;
}

namespace {

void fill_monomial_row(FMatrix& m, std::size_t row, const std::vector<ExpVec>& mons,
                       const std::vector<Felt>& pt, const FieldCtx& ctx) {
  for (std::size_t c = 0; c < mons.size(); ++c) {
    Felt v = ctx.one();
    for (std::size_t i = 0; i < pt.size(); ++i)
      if (mons[c][i]) v = ctx.mul(v, ctx.pow(pt[i], mons[c][i]));
    m.at(row, c) = v;
  }
}

}  // namespace

FMatrix vandermonde_a(const std::vector<std::vector<Felt>>& points, unsigned d, const FieldCtx& ctx) {
  if (points.empty()) throw UsageError("vandermonde_a needs at least one point");
  const auto r = static_cast<unsigned>(points[0].size());
  for (const auto& p : points)
    if (p.size() != r) throw UsageError("points must share a dimension");
  std::set<std::vector<Felt>> uniq(points.begin(), points.end());
  if (uniq.size() != points.size()) throw DomainError("points must be pairwise distinct");
  const auto mons = monomials_upto(r, d);
  FMatrix m(points.size(), mons.size());
  for (std::size_t j = 0; j < points.size(); ++j) fill_monomial_row(m, j, mons, points[j], ctx);
  return m;
}

FMatrix condition_matrix(const std::vector<Strip>& strips,
                         const std::vector<std::vector<std::vector<Felt>>>& point_sets, unsigned d,
                         unsigned r, const FieldCtx& ctx) {
  if (strips.empty() || strips.size() != point_sets.size())
    throw UsageError("need one point set per strip");
  std::size_t rows = 0;
  std::size_t prev = d;
  for (std::size_t i = 0; i < strips.size(); ++i) {
    const std::size_t j = point_sets[i].size();
    if (j < 1 || j > prev) throw UsageError("point set sizes must satisfy d >= j_1 >= ... >= j_h >= 1");
    prev = j;
    std::set<std::vector<Felt>> uniq(point_sets[i].begin(), point_sets[i].end());
    if (uniq.size() != j) throw UsageError("point sets must not repeat points");
    for (const auto& x : point_sets[i])
      if (strips[i].size() + x.size() != r) throw UsageError("strip and point lengths must add up to r");
    rows += j;
  }
  const auto mons = monomials_upto(r, d);
  FMatrix m(rows, mons.size());
  std::size_t row = 0;
  for (std::size_t i = 0; i < strips.size(); ++i) {
    for (const auto& x : point_sets[i]) {
      std::vector<Felt> pt = strips[i];
      pt.insert(pt.end(), x.begin(), x.end());
      fill_monomial_row(m, row++, mons, pt, ctx);
    }
  }
  return m;
}

}  // namespace svs
