#include "svs/upoly.hpp"

#include <algorithm>

#include "svs/error.hpp"

namespace svs {

namespace {

constexpr std::uint64_t kScanLimitOdd = std::uint64_t{1} << 16;
constexpr std::uint64_t kScanLimitEven = std::uint64_t{1} << 20;

// Fixed-seed generator for the random shifts of equal-degree splitting. It is
// separate from the trial streams so root finding never perturbs them.
struct SplitRng {
  std::uint64_t state = 0x5DEECE66DULL;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

UPoly x_poly() { return UPoly({Felt{0}, Felt{1}}); }

void split_odd(const UPoly& g, const FieldCtx& ctx, SplitRng& rng, std::vector<Felt>& out) {
  // g is monic, squarefree and splits into distinct linear factors.
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(ctx.neg(g.c[0]));
    return;
  }
  const std::uint64_t half = (ctx.q() - 1) / 2;
  for (;;) {
    const Felt shift{rng.next() % ctx.q()};
    UPoly base({shift, ctx.one()});
    UPoly w = upoly_powmod(base, half, g, ctx);
    w = upoly_sub(w, UPoly({ctx.one()}), ctx);
    if (w.is_zero()) continue;
    UPoly h = upoly_gcd(g, w, ctx);
    if (h.degree() <= 0 || h.degree() == g.degree()) continue;
    UPoly quo, rem;
    upoly_divmod(g, h, quo, rem, ctx);
    split_odd(h, ctx, rng, out);
    split_odd(upoly_monic(quo, ctx), ctx, rng, out);
    return;
  }
}

void split_even(const UPoly& g, const FieldCtx& ctx, SplitRng& rng, std::vector<Felt>& out) {
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(ctx.neg(g.c[0]));
    return;
  }
  const unsigned bits = ctx.k();  // q = 2^bits
  for (;;) {
    const Felt c{rng.next() % ctx.q()};
    // Absolute trace of c*X modulo g.
    UPoly term = upoly_rem(UPoly({Felt{0}, c}), g, ctx);
    UPoly tr = term;
    for (unsigned i = 1; i < bits; ++i) {
      term = upoly_rem(upoly_mul(term, term, ctx), g, ctx);
      tr = upoly_add(tr, term, ctx);
    }
    if (tr.is_zero()) continue;
    UPoly h = upoly_gcd(g, tr, ctx);
    if (h.degree() <= 0 || h.degree() == g.degree()) continue;
    UPoly quo, rem;
    upoly_divmod(g, h, quo, rem, ctx);
    split_even(h, ctx, rng, out);
    split_even(upoly_monic(quo, ctx), ctx, rng, out);
    return;
  }
}

}  // namespace

UPoly::UPoly(std::vector<Felt> coeffs) : c(std::move(coeffs)) { normalize(*this); }

void normalize(UPoly& f) {
  while (!f.c.empty() && f.c.back().is_zero()) f.c.pop_back();
}

UPoly upoly_add(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  std::vector<Felt> out(std::max(f.c.size(), g.c.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ctx.add(f.coeff(i), g.coeff(i));
  return UPoly(std::move(out));
}

UPoly upoly_sub(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  std::vector<Felt> out(std::max(f.c.size(), g.c.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ctx.sub(f.coeff(i), g.coeff(i));
  return UPoly(std::move(out));
}

UPoly upoly_mul(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  if (f.is_zero() || g.is_zero()) return {};
  std::vector<Felt> out(f.c.size() + g.c.size() - 1);
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < g.c.size(); ++j) out[i + j] = ctx.add(out[i + j], ctx.mul(f.c[i], g.c[j]));
  }
  return UPoly(std::move(out));
}

UPoly upoly_scale(const UPoly& f, Felt a, const FieldCtx& ctx) {
  std::vector<Felt> out(f.c.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ctx.mul(f.c[i], a);
  return UPoly(std::move(out));
}

void upoly_divmod(const UPoly& f, const UPoly& g, UPoly& quo, UPoly& rem, const FieldCtx& ctx) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  std::vector<Felt> r = f.c;
  const int dg = g.degree();
  const Felt li = ctx.inv(g.lead());
  std::vector<Felt> qv(f.degree() >= dg ? f.degree() - dg + 1 : 0);
  for (int i = f.degree(); i >= dg; --i) {
    const Felt c = ctx.mul(r[i], li);
    if (c.is_zero()) continue;
    qv[i - dg] = c;
    for (int j = 0; j <= dg; ++j) r[i - dg + j] = ctx.sub(r[i - dg + j], ctx.mul(c, g.c[j]));
  }
  r.resize(std::min<std::size_t>(r.size(), dg));
  quo = UPoly(std::move(qv));
  rem = UPoly(std::move(r));
}

UPoly upoly_rem(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  if (f.degree() < g.degree()) return f;
  std::vector<Felt> r = f.c;
  const int dg = g.degree();
  const Felt li = ctx.inv(g.lead());
  for (int i = f.degree(); i >= dg; --i) {
    const Felt c = ctx.mul(r[i], li);
    if (c.is_zero()) continue;
    for (int j = 0; j <= dg; ++j) r[i - dg + j] = ctx.sub(r[i - dg + j], ctx.mul(c, g.c[j]));
  }
  r.resize(dg);
  return UPoly(std::move(r));
}

UPoly upoly_monic(const UPoly& f, const FieldCtx& ctx) {
  if (f.is_zero()) return f;
  return upoly_scale(f, ctx.inv(f.lead()), ctx);
}

UPoly upoly_derivative(const UPoly& f, const FieldCtx& ctx) {
  if (f.c.size() <= 1) return {};
  std::vector<Felt> out(f.c.size() - 1);
  for (std::size_t i = 1; i < f.c.size(); ++i)
    out[i - 1] = ctx.mul(f.c[i], ctx.from_int(static_cast<std::int64_t>(i % ctx.p())));
  return UPoly(std::move(out));
}

Felt upoly_eval(const UPoly& f, Felt x, const FieldCtx& ctx) {
  Felt acc = ctx.zero();
  for (std::size_t i = f.c.size(); i-- > 0;) acc = ctx.add(ctx.mul(acc, x), f.c[i]);
  return acc;
}

UPoly upoly_powmod(const UPoly& f, std::uint64_t e, const UPoly& m, const FieldCtx& ctx) {
  if (m.degree() < 1) throw UsageError("modulus must have positive degree");
  UPoly result({ctx.one()});
  result = upoly_rem(result, m, ctx);
  UPoly base = upoly_rem(f, m, ctx);
  while (e) {
    if (e & 1) result = upoly_rem(upoly_mul(result, base, ctx), m, ctx);
    e >>= 1;
    if (e) base = upoly_rem(upoly_mul(base, base, ctx), m, ctx);
  }
  return result;
}

UPoly upoly_gcd(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  if (f.is_zero() && g.is_zero()) throw DomainError("gcd of two zero polynomials");
  UPoly a = f, b = g;
  while (!b.is_zero()) {
    UPoly r = upoly_rem(a, b, ctx);
    a = std::move(b);
    b = std::move(r);
  }
  return upoly_monic(a, ctx);
}

UPoly xq_mod(const UPoly& f, const FieldCtx& ctx) {
  if (f.degree() < 1) throw UsageError("xq_mod needs a polynomial of positive degree");
  return upoly_powmod(x_poly(), ctx.q(), f, ctx);
}

std::vector<Felt> rational_roots(const UPoly& f_in, const FieldCtx& ctx) {
  if (f_in.is_zero()) throw DomainError("every element is a root of the zero polynomial");
  const UPoly f = upoly_monic(f_in, ctx);
  if (f.degree() == 0) return {};
  if (f.degree() == 1) return {ctx.neg(f.c[0])};
  UPoly h = upoly_sub(xq_mod(f, ctx), x_poly(), ctx);
  const UPoly g = h.is_zero() ? f : upoly_gcd(f, h, ctx);
  std::vector<Felt> roots;
  if (g.degree() <= 0) return roots;
  if (g.degree() == 1) return {ctx.neg(g.c[0])};
  const std::uint64_t q = ctx.q();
  const bool scan = (q % 2 == 1) ? q <= kScanLimitOdd : q <= kScanLimitEven;
  if (scan) {
    const auto want = static_cast<std::size_t>(g.degree());
    for (std::uint64_t x = 0; x < q && roots.size() < want; ++x)
      if (upoly_eval(g, Felt{x}, ctx).is_zero()) roots.push_back(Felt{x});
    return roots;
  }
  SplitRng rng;
  if (q % 2 == 1)
    split_odd(g, ctx, rng, roots);
  else
    split_even(g, ctx, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool is_squarefree(const UPoly& f, const FieldCtx& ctx) {
  if (f.is_zero()) throw DomainError("squarefree test of the zero polynomial");
  if (f.degree() == 0) return true;
  const UPoly df = upoly_derivative(f, ctx);
  if (df.is_zero()) return false;
  return upoly_gcd(f, df, ctx).degree() == 0;
}

UPoly interpolate(const std::vector<Felt>& xs, const std::vector<Felt>& ys, const FieldCtx& ctx) {
  if (xs.size() != ys.size()) throw UsageError("interpolation needs matching point and value counts");
  const std::size_t n = xs.size();
  // Newton divided differences, then expansion from the innermost factor.
  std::vector<Felt> dd = ys;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      const Felt den = ctx.sub(xs[i], xs[i - j]);
      if (den.is_zero()) throw UsageError("interpolation nodes must be distinct");
      dd[i] = ctx.mul(ctx.sub(dd[i], dd[i - 1]), ctx.inv(den));
      if (i == j) break;
    }
  }
  std::vector<Felt> acc;
  for (std::size_t i = n; i-- > 0;) {
    // acc = acc * (X - xs[i]) + dd[i]
    std::vector<Felt> next(acc.size() + 1);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] = ctx.add(next[k + 1], acc[k]);
      next[k] = ctx.sub(next[k], ctx.mul(acc[k], xs[i]));
    }
    next[0] = ctx.add(next[0], dd[i]);
    acc = std::move(next);
  }
  return UPoly(std::move(acc));
}

Felt sylvester_resultant(const UPoly& f, const UPoly& g, const FieldCtx& ctx) {
  if (f.is_zero() || g.is_zero()) return ctx.zero();
  const int m = f.degree(), n = g.degree();
  if (m == 0) return ctx.pow(f.c[0], static_cast<std::uint64_t>(n));
  if (n == 0) return ctx.pow(g.c[0], static_cast<std::uint64_t>(m));
  const std::size_t dim = static_cast<std::size_t>(m + n);
  FMatrix s(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s.at(i, i + j) = f.c[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s.at(n + i, i + j) = g.c[n - j];
  return determinant(s, ctx);
}

std::vector<MPoly> coeffs_in_last(const MPoly& f, const FieldCtx& ctx) {
  const unsigned n = f.nvars();
  if (n == 0) throw UsageError("polynomial has no variables");
  const int dy = f.degree_in(n - 1);
  std::vector<std::vector<Term>> parts(std::max(dy, 0) + 1);
  for (const auto& t : f.terms()) parts[t.e[n - 1]].push_back(Term{ExpVec(t.e.begin(), t.e.end() - 1), t.c});
  std::vector<MPoly> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(MPoly::from_terms(n - 1, std::move(p), ctx));
  return out;
}

UPoly to_upoly(const MPoly& f) {
  if (f.nvars() != 1) throw UsageError("expected a polynomial in one variable");
  std::vector<Felt> c(std::max(f.degree(), 0) + 1);
  for (const auto& t : f.terms()) c[t.e[0]] = t.c;
  return UPoly(std::move(c));
}

MPoly lift_mpoly(const MPoly& f, const FieldEmbedding& emb) {
  std::vector<Term> t = f.terms();
  for (auto& x : t) x.c = emb.lift(x.c);
  return MPoly::from_terms(f.nvars(), std::move(t), emb.big());
}

UPoly resultant_y(const MPoly& f, const MPoly& g, const FieldCtx& ctx) {
  if (f.nvars() != 2 || g.nvars() != 2) throw UsageError("resultant_y expects bivariate polynomials");
  if (f.is_zero() || g.is_zero()) throw UsageError("resultant_y expects nonzero polynomials");
  if (f.degree_in(1) <= 0 || g.degree_in(1) <= 0) throw UsageError("resultant_y expects positive degree in Y");

  std::vector<UPoly> cf, cg;
  for (const auto& c : coeffs_in_last(f, ctx)) cf.push_back(to_upoly(c));
  for (const auto& c : coeffs_in_last(g, ctx)) cg.push_back(to_upoly(c));
  const std::size_t need = static_cast<std::size_t>(f.degree()) * g.degree() + 1;
  const std::size_t bad_max = static_cast<std::size_t>(std::max(cf.back().degree(), 0) + std::max(cg.back().degree(), 0));

  if (ctx.q() < need + bad_max) {
    // Might run out of usable points in F_q; compute over an extension and pull back.
    unsigned e = 2;
    std::uint64_t qe = ctx.q() * ctx.q();
    while (qe < need + bad_max) {
      qe *= ctx.q();
      ++e;
    }
    FieldEmbedding emb(ctx, e);
    UPoly big = resultant_y(lift_mpoly(f, emb), lift_mpoly(g, emb), emb.big());
    std::vector<Felt> out(big.c.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!emb.lower(big.c[i], out[i])) throw DomainError("resultant coefficient outside the base field");
    return UPoly(std::move(out));
  }

  std::vector<Felt> xs, ys;
  xs.reserve(need);
  ys.reserve(need);
  auto specialize_at = [&](const std::vector<UPoly>& cs, Felt x) {
    std::vector<Felt> v(cs.size());
    for (std::size_t j = 0; j < cs.size(); ++j) v[j] = upoly_eval(cs[j], x, ctx);
    return UPoly(std::move(v));
  };
  for (std::uint64_t code = 0; code < ctx.q() && xs.size() < need; ++code) {
    const Felt x{code};
    if (upoly_eval(cf.back(), x, ctx).is_zero() || upoly_eval(cg.back(), x, ctx).is_zero()) continue;
    xs.push_back(x);
    ys.push_back(sylvester_resultant(specialize_at(cf, x), specialize_at(cg, x), ctx));
  }
  if (xs.size() < need) throw DomainError("not enough evaluation points for the resultant");
  return interpolate(xs, ys, ctx);
}

}  // namespace svs
