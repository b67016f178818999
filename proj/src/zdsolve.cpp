#include "svs/zdsolve.hpp"

#include <functional>
#include <memory>

#include "svs/error.hpp"

namespace svs {

namespace {

constexpr std::uint64_t kGridCap = std::uint64_t{1} << 24;
// Above this order the last coordinate is solved by root finding instead of
// Horner evaluation at every element; both give the same sorted zero list.
constexpr std::uint64_t kHornerLimit = 64;

std::uint64_t checked_power(std::uint64_t base, unsigned e, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

// A polynomial prepared for scanning: terms grouped by the exponent of the last variable.
struct Prepared {
  struct Part {
    ExpVec prefix_exp;
    Felt c;
    unsigned last;
  };
  std::vector<Part> parts;
  unsigned last_deg = 0;
};

Prepared prepare(const MPoly& f) {
  Prepared p;
  const unsigned n = f.nvars();
  for (const auto& t : f.terms()) {
    p.parts.push_back({ExpVec(t.e.begin(), t.e.end() - 1), t.c, t.e[n - 1]});
    p.last_deg = std::max(p.last_deg, t.e[n - 1]);
  }
  return p;
}

// Visits common zeros in grid order (X1 slowest). The visitor returns false to stop.
void grid_scan(const ZeroDimQuery& q, const std::function<bool(const std::vector<Felt>&)>& visit) {
  const FieldCtx& ctx = q.ctx;
  const unsigned s = q.s;
  if (checked_power(ctx.q(), s, kGridCap) > kGridCap) throw CapacityError("exhaustive backend needs q^s <= 2^24");
  std::vector<Prepared> preps;
  unsigned maxdeg = 1;
  for (const auto& f : q.polys) {
    if (f.is_zero()) continue;
    preps.push_back(prepare(f));
    maxdeg = std::max<unsigned>(maxdeg, static_cast<unsigned>(std::max(f.degree(), 0)));
  }
  std::unique_ptr<PowerCache> pc;
  if (ctx.q() * (maxdeg + 1) <= (std::uint64_t{1} << 24)) pc = std::make_unique<PowerCache>(ctx, maxdeg);
  auto power = [&](Felt v, unsigned e) { return pc ? pc->pow(v, e) : ctx.pow(v, e); };

  const std::uint64_t qq = ctx.q();
  std::vector<Felt> point(s, Felt{0});
  std::vector<UPoly> uni(preps.size());
  std::vector<Felt> ys;
  for (;;) {
    // Univariate restriction of each polynomial to the current prefix.
    int lead = -1;
    for (std::size_t k = 0; k < preps.size(); ++k) {
      std::vector<Felt> cs(preps[k].last_deg + 1, Felt{0});
      for (const auto& part : preps[k].parts) {
        Felt m = part.c;
        for (unsigned i = 0; i + 1 < s; ++i)
          if (part.prefix_exp[i]) m = ctx.mul(m, power(point[i], part.prefix_exp[i]));
        cs[part.last] = ctx.add(cs[part.last], m);
      }
      uni[k] = UPoly(std::move(cs));
      if (lead < 0 && !uni[k].is_zero()) lead = static_cast<int>(k);
    }
    ys.clear();
    if (lead < 0) {
      for (std::uint64_t y = 0; y < qq; ++y) ys.push_back(Felt{y});
    } else if (qq <= kHornerLimit || uni[lead].degree() == 0) {
      for (std::uint64_t y = 0; y < qq; ++y)
        if (upoly_eval(uni[lead], Felt{y}, ctx).is_zero()) ys.push_back(Felt{y});
    } else {
      ys = rational_roots(uni[lead], ctx);
    }
    for (Felt y : ys) {
      bool ok = true;
      for (std::size_t k = lead < 0 ? preps.size() : static_cast<std::size_t>(lead) + 1; k < preps.size() && ok; ++k)
        ok = uni[k].is_zero() || upoly_eval(uni[k], y, ctx).is_zero();
      if (!ok) continue;
      point[s - 1] = y;
      if (!visit(point)) return;
    }
    point[s - 1] = Felt{0};
    // Advance the prefix odometer, last prefix coordinate fastest.
    int i = static_cast<int>(s) - 2;
    while (i >= 0) {
      if (point[i].code + 1 < qq) {
        point[i] = Felt{point[i].code + 1};
        break;
      }
      point[i] = Felt{0};
      --i;
    }
    if (i < 0) return;
  }
}

UPoly at_x(const std::vector<UPoly>& coeffs, Felt x, const FieldCtx& ctx) {
  std::vector<Felt> v(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) v[j] = upoly_eval(coeffs[j], x, ctx);
  return UPoly(std::move(v));
}

std::vector<UPoly> y_coeffs(const MPoly& f, const FieldCtx& ctx) {
  std::vector<UPoly> out;
  for (const auto& c : coeffs_in_last(f, ctx)) out.push_back(to_upoly(c));
  return out;
}

// Two-variable solve through elimination of the second variable.
void resultant_scan(const ZeroDimQuery& q, const std::function<bool(const std::vector<Felt>&)>& visit) {
  const FieldCtx& ctx = q.ctx;
  if (q.s != 2) throw CapacityError("resultant backend needs s = 2");
  const std::uint64_t qq = ctx.q();
  std::vector<const MPoly*> nz;
  for (const auto& f : q.polys)
    if (!f.is_zero()) nz.push_back(&f);

  std::vector<std::vector<UPoly>> ycs;
  for (auto* f : nz) ycs.push_back(y_coeffs(*f, ctx));

  bool all_x = false;
  std::vector<Felt> cand;
  const MPoly* y_free = nullptr;
  for (auto* f : nz)
    if (f->degree_in(1) <= 0) {
      y_free = f;
      break;
    }
  if (nz.empty() || (nz.size() == 1 && !y_free)) {
    all_x = true;
  } else if (y_free) {
    const UPoly u = to_upoly(coeffs_in_last(*y_free, ctx)[0]);
    cand = rational_roots(u, ctx);
  } else {
    const UPoly res = resultant_y(*nz[0], *nz[1], ctx);
    if (res.is_zero())
      all_x = true;
    else
      cand = rational_roots(res, ctx);
  }
  if (all_x) {
    cand.clear();
    for (std::uint64_t x = 0; x < qq; ++x) cand.push_back(Felt{x});
  }
  std::vector<Felt> pt(2);
  for (Felt x : cand) {
    UPoly g;
    bool any = false;
    for (const auto& yc : ycs) {
      const UPoly u = at_x(yc, x, ctx);
      if (u.is_zero()) continue;
      g = any ? upoly_gcd(g, u, ctx) : u;
      any = true;
    }
    pt[0] = x;
    if (!any) {
      for (std::uint64_t y = 0; y < qq; ++y) {
        pt[1] = Felt{y};
        if (!visit(pt)) return;
      }
      continue;
    }
    if (g.degree() < 1) continue;
    for (Felt y : rational_roots(g, ctx)) {
      pt[1] = y;
      if (!visit(pt)) return;
    }
  }
}

void scan(const ZeroDimQuery& q, Backend b, const std::function<bool(const std::vector<Felt>&)>& visit) {
  validate_query(q);
  if (b == Backend::exhaustive)
    grid_scan(q, visit);
  else
    resultant_scan(q, visit);
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::exhaustive ? "exhaustive" : "resultant"; }

Backend parse_backend(const std::string& name) {
  if (name == "exhaustive") return Backend::exhaustive;
  if (name == "resultant") return Backend::resultant;
  throw UsageError("unknown backend '" + name + "' (expected exhaustive or resultant)");
}

const char* verdict_name(Verdict v) { return v == Verdict::certified ? "certified" : "not_certified"; }

void validate_query(const ZeroDimQuery& q) {
  if (q.s == 0) throw UsageError("query needs at least one variable");
  for (const auto& f : q.polys) {
    if (f.nvars() != q.s) throw UsageError("query polynomial must have exactly s variables");
    if (f.degree() > static_cast<int>(q.dmax)) throw UsageError("query polynomial exceeds the degree bound");
  }
}

std::uint64_t count_zeros(const ZeroDimQuery& q, Backend backend) {
  std::uint64_t n = 0;
  scan(q, backend, [&](const std::vector<Felt>&) {
    ++n;
    return true;
  });
  return n;
}

std::optional<std::vector<Felt>> find_zero(const ZeroDimQuery& q, Backend backend) {
  std::optional<std::vector<Felt>> hit;
  scan(q, backend, [&](const std::vector<Felt>& p) {
    hit = p;
    return false;
  });
  if (hit) {
    for (const auto& f : q.polys)
      if (!evaluate(f, *hit, q.ctx).is_zero()) throw std::logic_error("solver returned a non-zero of the system");
  }
  return hit;
}

CertResult cond_h_certificate(const ZeroDimQuery& q) {
  if (q.s != 2 || q.polys.size() != 2) throw UnsupportedError("certificate implemented only for two equations in two variables");
  validate_query(q);
  CertResult out;
  const MPoly& f = q.polys[0];
  const MPoly& g = q.polys[1];
  if (f.is_zero() || g.is_zero() || f.degree_in(1) < 1 || g.degree_in(1) < 1) return out;
  const auto& ctx = q.ctx;
  const UPoly lf = y_coeffs(f, ctx).back();
  const UPoly lg = y_coeffs(g, ctx).back();
  out.leading_coprime = upoly_gcd(lf, lg, ctx).degree() == 0;
  const UPoly res = resultant_y(f, g, ctx);
  if (res.is_zero()) return out;
  out.resultant_degree = res.degree();
  out.squarefree = is_squarefree(res, ctx);
  const int target = static_cast<int>(q.dmax * q.dmax);
  if (out.leading_coprime && out.squarefree && out.resultant_degree == target) out.verdict = Verdict::certified;
  return out;
}

std::uint64_t count_zeros_ext(const ZeroDimQuery& q, unsigned e) {
  validate_query(q);
  if (e == 0) throw UsageError("extension degree must be >= 1");
  const std::uint64_t qe = checked_power(q.ctx.q(), e, kGridCap);
  if (qe > kGridCap || checked_power(qe, q.s, kGridCap) > kGridCap)
    throw CapacityError("extension scan needs (q^e)^s <= 2^24");
  if (e == 1) return count_zeros(q, Backend::exhaustive);
  FieldEmbedding emb(q.ctx, e);
  ZeroDimQuery big;
  big.ctx = emb.big();
  big.s = q.s;
  big.dmax = q.dmax;
  for (const auto& f : q.polys) big.polys.push_back(lift_mpoly(f, emb));
  return count_zeros(big, Backend::exhaustive);
}

std::vector<std::int64_t> closed_point_counts(const ZeroDimQuery& q, unsigned max_e) {
  auto moebius = [](unsigned n) {
    int m = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
    if (n > 1) m = -m;
    return m;
  };
  std::vector<std::int64_t> counts(max_e + 1, 0);
  for (unsigned e = 1; e <= max_e; ++e) counts[e] = static_cast<std::int64_t>(count_zeros_ext(q, e));
  std::vector<std::int64_t> a(max_e + 1, 0);
  for (unsigned e = 1; e <= max_e; ++e) {
    std::int64_t acc = 0;
    for (unsigned f = 1; f <= e; ++f)
      if (e % f == 0) acc += moebius(f) * counts[e / f];
    if (acc % static_cast<std::int64_t>(e) != 0) throw DomainError("point counts are not consistent with a finite variety");
    a[e] = acc / static_cast<std::int64_t>(e);
  }
  return a;
}

std::uint64_t distinct_geometric_points(const ZeroDimQuery& q) {
  std::uint64_t bound = 1;
  for (unsigned i = 0; i < q.s; ++i) bound *= q.dmax;
  if (bound > 8) throw CapacityError("geometric point count needs d^s <= 8");
  const auto a = closed_point_counts(q, static_cast<unsigned>(bound));
  std::uint64_t total = 0;
  for (std::size_t e = 1; e < a.size(); ++e) {
    if (a[e] < 0) throw DomainError("negative closed point count; system is not zero-dimensional");
    total += e * static_cast<std::uint64_t>(a[e]);
  }
  return total;
}

}  // namespace svs
