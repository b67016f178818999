#include "svs/ffield.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "svs/error.hpp"

namespace svs {

namespace {

using u64 = std::uint64_t;

constexpr u64 kTableLimit = u64{1} << 20;
constexpr u64 kIrreducibleCap = u64{1} << 40;

u64 inv_mod_u64(u64 a, u64 p) {
  // Extended Euclid on (a, p).
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t qt = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - qt * t1);
  }
  if (r0 != 1) throw DomainError("element is not invertible");
  if (t0 < 0) t0 += static_cast<std::int64_t>(p);
  return static_cast<u64>(t0);
}

// ---- GF(p)[X] helpers on dense coefficient vectors ----

void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const PrimePoly& f) { return static_cast<int>(f.size()) - 1; }

PrimePoly poly_rem(PrimePoly a, const PrimePoly& m, u64 p) {
  trim(a);
  const int dm = deg(m);
  const u64 lead_inv = inv_mod_u64(m.back(), p);
  while (deg(a) >= dm) {
    const u64 c = a.back() * lead_inv % p;
    const int shift = deg(a) - dm;
    for (int i = 0; i <= dm; ++i) {
      u64& slot = a[shift + i];
      slot = (slot + p - c * m[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

PrimePoly poly_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  PrimePoly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  return poly_rem(std::move(prod), m, p);
}

PrimePoly poly_powmod(PrimePoly base, u64 e, const PrimePoly& m, u64 p) {
  PrimePoly result{1};
  base = poly_rem(std::move(base), m, p);
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    e >>= 1;
    if (e) base = poly_mulmod(base, base, m, p);
  }
  return result;
}

PrimePoly poly_gcd(PrimePoly a, PrimePoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PrimePoly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

struct FieldCtx::Ext {
  PrimePoly modulus;
  std::vector<u64> ppow;  // p^i, i = 0..k
  // Discrete log tables for small extensions: exp has 2(q-1) entries.
  std::vector<std::uint32_t> exp;
  std::vector<std::uint32_t> log;
};

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

bool is_irreducible_mod_p(const PrimePoly& f_in, std::uint64_t p) {
  PrimePoly f = f_in;
  trim(f);
  const int n = deg(f);
  if (n < 1) return false;
  if (n == 1) return true;
  const PrimePoly x{0, 1};
  PrimePoly xp = x;
  for (int i = 1; i <= n / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    PrimePoly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    PrimePoly g = poly_gcd(f, diff, p);
    if (deg(g) > 0) return false;
  }
  return true;
}

PrimePoly find_irreducible(std::uint64_t p, unsigned k) {
  if (!is_prime(p) || p >= (u64{1} << 31)) throw UsageError("characteristic must be a prime below 2^31");
  if (k < 2) throw UsageError("find_irreducible needs degree >= 2");
  u64 total = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (total > kIrreducibleCap / p) throw CapacityError("p^k exceeds 2^40");
    total *= p;
  }
  // Scan tails c_0 + c_1 p + ... + c_{k-1} p^{k-1} in increasing order; with c_{k-1}
  // most significant this is lexicographic order from degree k-1 down.
  for (u64 code = 1; code < total; ++code) {
    PrimePoly f(k + 1, 0);
    u64 c = code;
    for (unsigned i = 0; i < k; ++i) {
      f[i] = c % p;
      c /= p;
    }
    f[k] = 1;
    if (f[0] == 0) continue;
    if (is_irreducible_mod_p(f, p)) return f;
  }
  throw DomainError("no irreducible polynomial found");  // unreachable for valid input
}

FieldCtx::FieldCtx(std::uint64_t p, unsigned k, std::shared_ptr<const Ext> ext)
    : p_(p), k_(k), q_(1), ext_(std::move(ext)) {
  for (unsigned i = 0; i < k; ++i) q_ *= p;
}

FieldCtx FieldCtx::prime(std::uint64_t p) {
  if (p >= (u64{1} << 31) || !is_prime(p)) throw UsageError("field characteristic must be a prime below 2^31");
  return FieldCtx(p, 1, nullptr);
}

FieldCtx FieldCtx::extension(std::uint64_t p, unsigned k, PrimePoly modulus) {
  if (k == 1) return prime(p);
  if (k == 0) throw UsageError("extension degree must be >= 1");
  if (p >= (u64{1} << 31) || !is_prime(p)) throw UsageError("field characteristic must be a prime below 2^31");
  trim(modulus);
  if (deg(modulus) != static_cast<int>(k) || modulus.back() != 1)
    throw UsageError("modulus must be monic of degree k");
  for (u64 c : modulus)
    if (c >= p) throw UsageError("modulus coefficients must lie in [0, p)");
  u64 q = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (q > kIrreducibleCap / p) throw CapacityError("extension field larger than 2^40");
    q *= p;
  }
  // Root check first; it is cheap and covers degrees 2 and 3 completely.
  if (q <= kTableLimit || p <= 1024) {
    for (u64 x = 0; x < p; ++x) {
      u64 v = 0;
      for (int i = deg(modulus); i >= 0; --i) v = (v * x + modulus[i]) % p;
      if (v == 0) throw UsageError("modulus has a root in GF(p)");
    }
  }
  if (!is_irreducible_mod_p(modulus, p)) throw UsageError("modulus is reducible over GF(p)");

  auto ext = std::make_shared<Ext>();
  ext->modulus = modulus;
  ext->ppow.resize(k + 1);
  ext->ppow[0] = 1;
  for (unsigned i = 1; i <= k; ++i) ext->ppow[i] = ext->ppow[i - 1] * p;

  FieldCtx ctx(p, k, ext);
  if (q <= kTableLimit) {
    // Find a generator of the multiplicative group using the table-free product.
    const auto factors = prime_factors(q - 1);
    u64 gen = 0;
    for (u64 c = 2; c < q && gen == 0; ++c) {
      bool ok = true;
      for (u64 r : factors) {
        if (ctx.pow(Felt{c}, (q - 1) / r) == ctx.one()) {
          ok = false;
          break;
        }
      }
      if (ok) gen = c;
    }
    // Filled locally: mul_ext switches to the tables as soon as exp is nonempty.
    std::vector<std::uint32_t> exp(2 * (q - 1)), log(q, 0);
    Felt cur = ctx.one();
    for (u64 i = 0; i < q - 1; ++i) {
      exp[i] = static_cast<std::uint32_t>(cur.code);
      exp[i + q - 1] = static_cast<std::uint32_t>(cur.code);
      log[cur.code] = static_cast<std::uint32_t>(i);
      cur = ctx.mul_ext(cur, Felt{gen});
    }
    ext->exp = std::move(exp);
    ext->log = std::move(log);
  }
  return ctx;
}

FieldCtx FieldCtx::extension(std::uint64_t p, unsigned k) {
  if (k == 1) return prime(p);
  return extension(p, k, find_irreducible(p, k));
}

FieldCtx FieldCtx::of_order(std::uint64_t q) {
  if (q < 2) throw UsageError("field order must be >= 2");
  u64 p = 0;
  for (u64 f = 2; f * f <= q; ++f) {
    if (q % f == 0) {
      p = f;
      break;
    }
  }
  if (p == 0) return prime(q);
  unsigned k = 0;
  u64 rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++k;
  }
  if (rest != 1) throw UsageError("field order " + std::to_string(q) + " is not a prime power");
  return extension(p, k);
}

const PrimePoly& FieldCtx::modulus() const {
  static const PrimePoly kNone;
  return ext_ ? ext_->modulus : kNone;
}

Felt FieldCtx::element(std::uint64_t i) const {
  if (i >= q_) throw UsageError("element index out of range");
  return Felt{i};
}

Felt FieldCtx::from_int(std::int64_t v) const {
  const auto sp = static_cast<std::int64_t>(p_);
  std::int64_t r = v % sp;
  if (r < 0) r += sp;
  return Felt{static_cast<u64>(r)};
}

std::vector<std::uint64_t> FieldCtx::coeffs(Felt a) const {
  std::vector<u64> out(k_);
  u64 c = a.code;
  for (unsigned i = 0; i < k_; ++i) {
    out[i] = c % p_;
    c /= p_;
  }
  return out;
}

Felt FieldCtx::from_coeffs(const std::vector<std::uint64_t>& c) const {
  if (c.size() != k_) throw UsageError("coefficient vector length must equal the extension degree");
  u64 code = 0;
  for (unsigned i = k_; i-- > 0;) {
    if (c[i] >= p_) throw UsageError("coefficient out of range");
    code = code * p_ + c[i];
  }
  return Felt{code};
}

Felt FieldCtx::add_ext(Felt a, Felt b) const {
  u64 out = 0;
  u64 x = a.code, y = b.code;
  for (unsigned i = 0; i < k_; ++i) {
    u64 s = x % p_ + y % p_;
    if (s >= p_) s -= p_;
    out += s * ext_->ppow[i];
    x /= p_;
    y /= p_;
  }
  return Felt{out};
}

Felt FieldCtx::neg_ext(Felt a) const {
  u64 out = 0;
  u64 x = a.code;
  for (unsigned i = 0; i < k_; ++i) {
    const u64 c = x % p_;
    out += (c == 0 ? 0 : p_ - c) * ext_->ppow[i];
    x /= p_;
  }
  return Felt{out};
}

Felt FieldCtx::mul_ext(Felt a, Felt b) const {
  if (a.code == 0 || b.code == 0) return Felt{0};
  if (!ext_->exp.empty()) {
    return Felt{ext_->exp[static_cast<std::size_t>(ext_->log[a.code]) + ext_->log[b.code]]};
  }
  PrimePoly pa = coeffs(a), pb = coeffs(b);
  trim(pa);
  trim(pb);
  PrimePoly r = poly_mulmod(pa, pb, ext_->modulus, p_);
  r.resize(k_, 0);
  u64 code = 0;
  for (unsigned i = k_; i-- > 0;) code = code * p_ + r[i];
  return Felt{code};
}

Felt FieldCtx::inv(Felt a) const {
  if (a.code == 0) throw DomainError("inverse of zero");
  if (k_ == 1) return Felt{inv_mod_u64(a.code, p_)};
  if (!ext_->exp.empty()) return Felt{ext_->exp[(q_ - 1 - ext_->log[a.code]) % (q_ - 1)]};
  // Extended Euclid in GF(p)[X] on (a, modulus).
  PrimePoly r0 = ext_->modulus, r1 = coeffs(a);
  trim(r1);
  PrimePoly t0{}, t1{1};
  auto sub_scaled = [&](PrimePoly x, const PrimePoly& y, const PrimePoly& qt) {
    // x - qt*y
    PrimePoly prod(qt.empty() || y.empty() ? 0 : qt.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < qt.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) prod[i + j] = (prod[i + j] + qt[i] * y[j]) % p_;
    if (x.size() < prod.size()) x.resize(prod.size(), 0);
    for (std::size_t i = 0; i < prod.size(); ++i) x[i] = (x[i] + p_ - prod[i]) % p_;
    trim(x);
    return x;
  };
  while (!r1.empty()) {
    // quotient of r0 by r1
    PrimePoly rem = r0;
    PrimePoly qt(std::max(0, deg(r0) - deg(r1) + 1), 0);
    const u64 li = inv_mod_u64(r1.back(), p_);
    while (deg(rem) >= deg(r1)) {
      const u64 c = rem.back() * li % p_;
      const int shift = deg(rem) - deg(r1);
      qt[shift] = c;
      for (int i = 0; i <= deg(r1); ++i) rem[shift + i] = (rem[shift + i] + p_ - c * r1[i] % p_) % p_;
      trim(rem);
    }
    PrimePoly t2 = sub_scaled(t0, t1, qt);
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 is a nonzero constant
  const u64 c = inv_mod_u64(r0[0], p_);
  t0.resize(k_, 0);
  u64 code = 0;
  for (unsigned i = k_; i-- > 0;) code = code * p_ + t0[i] * c % p_;
  return Felt{code};
}

Felt FieldCtx::pow(Felt a, std::uint64_t e) const {
  Felt result = one();
  while (e) {
    if (e & 1) result = mul(result, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return result;
}

std::string FieldCtx::format(Felt a) const {
  if (k_ == 1) return std::to_string(a.code);
  std::ostringstream os;
  os << '(';
  const auto c = coeffs(a);
  for (unsigned i = 0; i < k_; ++i) os << (i ? "," : "") << c[i];
  os << ')';
  return os.str();
}

bool FieldCtx::operator==(const FieldCtx& other) const {
  return p_ == other.p_ && k_ == other.k_ && modulus() == other.modulus();
}

Felt field_arith(ArithOp op, Felt a, Felt b, const FieldCtx& ctx) {
  if (!ctx.contains(a) || !ctx.contains(b)) throw UsageError("operand does not belong to the field");
  switch (op) {
    case ArithOp::add:
      return ctx.add(a, b);
    case ArithOp::sub:
      return ctx.sub(a, b);
    case ArithOp::mul:
      return ctx.mul(a, b);
  }
  throw UsageError("unknown operation");
}

Felt field_inv(Felt a, const FieldCtx& ctx) {
  if (!ctx.contains(a)) throw UsageError("operand does not belong to the field");
  return ctx.inv(a);
}

Felt field_pow(Felt a, std::uint64_t e, const FieldCtx& ctx) {
  if (!ctx.contains(a)) throw UsageError("operand does not belong to the field");
  return ctx.pow(a, e);
}

FMatrix transpose(const FMatrix& m) {
  FMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

std::size_t matrix_rank(const FMatrix& m, const FieldCtx& ctx) {
  FMatrix w = m;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < w.cols && rank < w.rows; ++col) {
    std::size_t piv = rank;
    while (piv < w.rows && w.at(piv, col).is_zero()) ++piv;
    if (piv == w.rows) continue;
    if (piv != rank)
      for (std::size_t j = 0; j < w.cols; ++j) std::swap(w.at(piv, j), w.at(rank, j));
    const Felt inv = ctx.inv(w.at(rank, col));
    for (std::size_t i = rank + 1; i < w.rows; ++i) {
      const Felt f = ctx.mul(w.at(i, col), inv);
      if (f.is_zero()) continue;
      for (std::size_t j = col; j < w.cols; ++j) w.at(i, j) = ctx.sub(w.at(i, j), ctx.mul(f, w.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

Felt determinant(const FMatrix& m, const FieldCtx& ctx) {
  if (m.rows != m.cols) throw UsageError("determinant of a non-square matrix");
  FMatrix w = m;
  const std::size_t n = w.rows;
  Felt det = ctx.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && w.at(piv, col).is_zero()) ++piv;
    if (piv == n) return ctx.zero();
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(col, j));
      det = ctx.neg(det);
    }
    const Felt pv = w.at(col, col);
    det = ctx.mul(det, pv);
    const Felt inv = ctx.inv(pv);
    for (std::size_t i = col + 1; i < n; ++i) {
      const Felt f = ctx.mul(w.at(i, col), inv);
      if (f.is_zero()) continue;
      for (std::size_t j = col; j < n; ++j) w.at(i, j) = ctx.sub(w.at(i, j), ctx.mul(f, w.at(col, j)));
    }
  }
  return det;
}

FieldEmbedding::FieldEmbedding(const FieldCtx& base, unsigned e)
    : base_(base), big_(FieldCtx::prime(2)), e_(e) {
  if (e == 0) throw UsageError("embedding degree must be >= 1");
  if (e == 1) {
    big_ = base;
  } else {
    big_ = FieldCtx::extension(base.p(), base.k() * e);
  }
  const u64 q = base.q();
  if (q > kTableLimit) throw CapacityError("embedding tables limited to base fields of order <= 2^20");
  image_.resize(q);
  if (e == 1) {
    for (u64 c = 0; c < q; ++c) image_[c] = Felt{c};
  } else if (base.k() == 1) {
    for (u64 c = 0; c < q; ++c) image_[c] = Felt{c};
  } else {
    // Locate a root beta of the base modulus in the big field by scanning.
    const PrimePoly& m = base.modulus();
    const u64 Q = big_.q();
    if (Q > (u64{1} << 26)) throw CapacityError("embedding root scan exceeds 2^26 elements");
    Felt beta{0};
    bool found = false;
    for (u64 c = 1; c < Q && !found; ++c) {
      Felt x{c};
      Felt v = big_.zero();
      for (int i = deg(m); i >= 0; --i) v = big_.add(big_.mul(v, x), Felt{m[i]});
      if (v.is_zero()) {
        beta = x;
        found = true;
      }
    }
    if (!found) throw DomainError("base modulus has no root in the extension");
    std::vector<Felt> bpow(base.k());
    bpow[0] = big_.one();
    for (unsigned i = 1; i < base.k(); ++i) bpow[i] = big_.mul(bpow[i - 1], beta);
    for (u64 c = 0; c < q; ++c) {
      const auto cs = base.coeffs(Felt{c});
      Felt v = big_.zero();
      for (unsigned i = 0; i < base.k(); ++i) v = big_.add(v, big_.mul(Felt{cs[i]}, bpow[i]));
      image_[c] = v;
    }
  }
  back_.reserve(q);
  for (u64 c = 0; c < q; ++c) back_.emplace_back(image_[c].code, c);
  std::sort(back_.begin(), back_.end());
}

Felt FieldEmbedding::lift(Felt a) const {
  if (!base_.contains(a)) throw UsageError("element does not belong to the base field");
  return image_[a.code];
}

bool FieldEmbedding::lower(Felt b, Felt& out) const {
  auto it = std::lower_bound(back_.begin(), back_.end(), std::make_pair(b.code, u64{0}));
  if (it == back_.end() || it->first != b.code) return false;
  out = Felt{it->second};
  return true;
}

}  // namespace svs
