#include "svs/mpoly.hpp"

#include <algorithm>
#include <sstream>

#include "svs/error.hpp"

namespace svs {

unsigned total_degree(const ExpVec& e) {
  unsigned s = 0;
  for (auto x : e) s += x;
  return s;
}

bool grlex_greater(const ExpVec& a, const ExpVec& b) {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void gen_exact(unsigned nvars, unsigned deg, unsigned pos, ExpVec& cur, std::vector<ExpVec>& out) {
  if (pos + 1 == nvars) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (unsigned x = deg + 1; x-- > 0;) {
    cur[pos] = x;
    gen_exact(nvars, deg - x, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<ExpVec> monomials_upto(unsigned nvars, unsigned d) {
  std::vector<ExpVec> out;
  if (nvars == 0) {
    out.emplace_back();
    return out;
  }
  ExpVec cur(nvars, 0);
  for (unsigned deg = d + 1; deg-- > 0;) gen_exact(nvars, deg, 0, cur, out);
  return out;
}

MPoly MPoly::from_terms(unsigned nvars, std::vector<Term> terms, const FieldCtx& ctx) {
  for (const auto& t : terms) {
    if (t.e.size() != nvars) throw UsageError("exponent vector length does not match variable count");
    if (!ctx.contains(t.c)) throw UsageError("coefficient does not belong to the field");
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return grlex_greater(a.e, b.e); });
  MPoly out(nvars);
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().e == t.e) {
      out.terms_.back().c = ctx.add(out.terms_.back().c, t.c);
      if (out.terms_.back().c.is_zero()) out.terms_.pop_back();
      continue;
    }
    if (!t.c.is_zero()) out.terms_.push_back(std::move(t));
  }
  return out;
}

MPoly MPoly::constant(unsigned nvars, Felt c) {
  MPoly out(nvars);
  if (!c.is_zero()) out.terms_.push_back(Term{ExpVec(nvars, 0), c});
  return out;
}

MPoly MPoly::variable(unsigned nvars, unsigned i) {
  if (i >= nvars) throw UsageError("variable index out of range");
  MPoly out(nvars);
  ExpVec e(nvars, 0);
  e[i] = 1;
  out.terms_.push_back(Term{e, Felt{1}});
  return out;
}

int MPoly::degree() const {
  // Graded order puts a highest-degree term first.
  return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.front().e));
}

int MPoly::degree_in(unsigned i) const {
  if (i >= nvars_) throw UsageError("variable index out of range");
  int best = -1;
  for (const auto& t : terms_) best = std::max(best, static_cast<int>(t.e[i]));
  return best;
}

MPoly add(const MPoly& f, const MPoly& g, const FieldCtx& ctx) {
  if (f.nvars() != g.nvars()) throw UsageError("variable counts differ");
  std::vector<Term> t = f.terms();
  t.insert(t.end(), g.terms().begin(), g.terms().end());
  return MPoly::from_terms(f.nvars(), std::move(t), ctx);
}

MPoly scale(const MPoly& f, Felt c, const FieldCtx& ctx) {
  std::vector<Term> t = f.terms();
  for (auto& x : t) x.c = ctx.mul(x.c, c);
  return MPoly::from_terms(f.nvars(), std::move(t), ctx);
}

MPoly sub(const MPoly& f, const MPoly& g, const FieldCtx& ctx) {
  return add(f, scale(g, ctx.neg(ctx.one()), ctx), ctx);
}

MPoly mul(const MPoly& f, const MPoly& g, const FieldCtx& ctx) {
  if (f.nvars() != g.nvars()) throw UsageError("variable counts differ");
  std::vector<Term> t;
  t.reserve(f.terms().size() * g.terms().size());
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      ExpVec e(a.e);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.e[i];
      t.push_back(Term{std::move(e), ctx.mul(a.c, b.c)});
    }
  }
  return MPoly::from_terms(f.nvars(), std::move(t), ctx);
}

Felt evaluate(const MPoly& f, const std::vector<Felt>& point, const FieldCtx& ctx) {
  if (point.size() != f.nvars()) throw UsageError("point length does not match variable count");
  for (auto v : point)
    if (!ctx.contains(v)) throw UsageError("point coordinate does not belong to the field");
  // Per-variable power tables up to the largest exponent used.
  std::vector<std::vector<Felt>> pw(f.nvars());
  for (unsigned i = 0; i < f.nvars(); ++i) {
    const int di = f.degree_in(i);
    pw[i].assign(std::max(di, 0) + 1, ctx.one());
    for (int e = 1; e <= di; ++e) pw[i][e] = ctx.mul(pw[i][e - 1], point[i]);
  }
  Felt acc = ctx.zero();
  for (const auto& t : f.terms()) {
    Felt m = t.c;
    for (unsigned i = 0; i < f.nvars(); ++i)
      if (t.e[i]) m = ctx.mul(m, pw[i][t.e[i]]);
    acc = ctx.add(acc, m);
  }
  return acc;
}

MPoly specialize(const MPoly& f, const std::vector<Felt>& a, const FieldCtx& ctx) {
  const unsigned n = f.nvars();
  if (a.size() >= n) throw UsageError("specialization must leave at least one variable");
  const unsigned m = static_cast<unsigned>(a.size());
  std::vector<std::vector<Felt>> pw(m);
  for (unsigned i = 0; i < m; ++i) {
    if (!ctx.contains(a[i])) throw UsageError("specialization value does not belong to the field");
    const int di = f.degree_in(i);
    pw[i].assign(std::max(di, 0) + 1, ctx.one());
    for (int e = 1; e <= di; ++e) pw[i][e] = ctx.mul(pw[i][e - 1], a[i]);
  }
  std::vector<Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    Felt c = t.c;
    for (unsigned i = 0; i < m; ++i)
      if (t.e[i]) c = ctx.mul(c, pw[i][t.e[i]]);
    if (c.is_zero()) continue;
    out.push_back(Term{ExpVec(t.e.begin() + m, t.e.end()), c});
  }
  return MPoly::from_terms(n - m, std::move(out), ctx);
}

PowerCache::PowerCache(const FieldCtx& ctx, unsigned max_exp) : stride_(max_exp + 1) {
  const std::uint64_t q = ctx.q();
  if (q > (std::uint64_t{1} << 22) || q * stride_ > (std::uint64_t{1} << 26))
    throw CapacityError("power cache too large");
  table_.resize(q * stride_);
  for (std::uint64_t v = 0; v < q; ++v) {
    Felt* row = &table_[v * stride_];
    row[0] = ctx.one();
    for (std::size_t e = 1; e < stride_; ++e) row[e] = ctx.mul(row[e - 1], Felt{v});
  }
}

Felt evaluate_cached(const MPoly& f, const std::vector<Felt>& point, const PowerCache& pc,
                     const FieldCtx& ctx) {
  Felt acc = ctx.zero();
  for (const auto& t : f.terms()) {
    Felt m = t.c;
    for (unsigned i = 0; i < f.nvars(); ++i)
      if (t.e[i]) m = ctx.mul(m, pc.pow(point[i], t.e[i]));
    acc = ctx.add(acc, m);
  }
  return acc;
}

std::string format_mpoly(const MPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << "; ";
    first = false;
    os << t.c.code;
    for (auto x : t.e) os << ' ' << x;
  }
  return os.str();
}

MPoly parse_mpoly(const std::string& text, unsigned nvars, const FieldCtx& ctx) {
  std::vector<Term> terms;
  std::stringstream whole(text);
  std::string chunk;
  while (std::getline(whole, chunk, ';')) {
    std::istringstream is(chunk);
    std::vector<std::int64_t> nums;
    std::string tok;
    while (is >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw UsageError("malformed polynomial term '" + chunk + "'");
      }
      if (used != tok.size()) throw UsageError("malformed polynomial term '" + chunk + "'");
      nums.push_back(v);
    }
    if (nums.empty()) continue;
    if (nums.size() == 1 && nums[0] == 0) continue;  // the zero polynomial
    if (nums.size() != nvars + 1)
      throw UsageError("term '" + chunk + "' needs a coefficient and " + std::to_string(nvars) + " exponents");
    if (nums[0] < 0 || static_cast<std::uint64_t>(nums[0]) >= ctx.q())
      throw UsageError("coefficient out of range in term '" + chunk + "'");
    ExpVec e(nvars);
    for (unsigned i = 0; i < nvars; ++i) {
      if (nums[i + 1] < 0 || nums[i + 1] > 1'000'000) throw UsageError("bad exponent in term '" + chunk + "'");
      e[i] = static_cast<std::uint32_t>(nums[i + 1]);
    }
    terms.push_back(Term{std::move(e), Felt{static_cast<std::uint64_t>(nums[0])}});
  }
  return MPoly::from_terms(nvars, std::move(terms), ctx);
}

std::string pretty_mpoly(const MPoly& f, const FieldCtx& ctx) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : f.terms()) {
    if (!first) os << " + ";
    first = false;
    const bool is_const = total_degree(t.e) == 0;
    bool wrote = false;
    if (is_const || t.c != ctx.one()) {
      os << ctx.format(t.c);
      wrote = true;
    }
    for (unsigned i = 0; i < t.e.size(); ++i) {
      if (!t.e[i]) continue;
      if (wrote) os << '*';
      os << 'X' << (i + 1);
      if (t.e[i] > 1) os << '^' << t.e[i];
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace svs
