#pragma once

// Finite fields GF(p) and GF(p^k) with dense linear algebra over them.
//
// Elements are stored packed: the class of c_0 + c_1 X + ... + c_{k-1} X^{k-1}
// is the integer code c_0 + c_1 p + ... + c_{k-1} p^{k-1} in [0, q). For prime
// fields the code is the residue itself. Codes are always canonical.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace svs {

struct Felt {
  std::uint64_t code = 0;

  constexpr Felt() = default;
  constexpr explicit Felt(std::uint64_t c) : code(c) {}

  constexpr bool is_zero() const { return code == 0; }
  friend constexpr auto operator<=>(Felt, Felt) = default;
};

/// Dense polynomial over GF(p), coefficients low degree first.
using PrimePoly = std::vector<std::uint64_t>;

class FieldCtx {
 public:
  /// GF(p); p must be prime and below 2^31.
  static FieldCtx prime(std::uint64_t p);
  /// GF(p^k) = GF(p)[X]/(modulus). The modulus must be monic of degree k and irreducible.
  static FieldCtx extension(std::uint64_t p, unsigned k, PrimePoly modulus);
  /// GF(p^k) with the smallest irreducible modulus from find_irreducible.
  static FieldCtx extension(std::uint64_t p, unsigned k);
  /// The field with q elements; q must be a prime power.
  static FieldCtx of_order(std::uint64_t q);

  std::uint64_t p() const { return p_; }
  unsigned k() const { return k_; }
  std::uint64_t q() const { return q_; }
  /// Monic modulus of degree k; empty for prime fields.
  const PrimePoly& modulus() const;

  Felt zero() const { return Felt{0}; }
  Felt one() const { return Felt{1}; }
  /// The i-th element in code order, i < q.
  Felt element(std::uint64_t i) const;
  /// Image of an integer in the prime subfield.
  Felt from_int(std::int64_t v) const;
  bool contains(Felt a) const { return a.code < q_; }

  std::vector<std::uint64_t> coeffs(Felt a) const;
  Felt from_coeffs(const std::vector<std::uint64_t>& c) const;

  Felt add(Felt a, Felt b) const {
    if (k_ == 1) {
      std::uint64_t s = a.code + b.code;
      return Felt{s >= p_ ? s - p_ : s};
    }
    if (p_ == 2) return Felt{a.code ^ b.code};
    return add_ext(a, b);
  }
  Felt neg(Felt a) const {
    if (k_ == 1) return Felt{a.code == 0 ? 0 : p_ - a.code};
    if (p_ == 2) return a;
    return neg_ext(a);
  }
  Felt sub(Felt a, Felt b) const { return add(a, neg(b)); }
  Felt mul(Felt a, Felt b) const {
    if (k_ == 1) return Felt{(a.code * b.code) % p_};
    return mul_ext(a, b);
  }
  /// Multiplicative inverse; throws DomainError for zero.
  Felt inv(Felt a) const;
  /// a^e with 0^0 = 1.
  Felt pow(Felt a, std::uint64_t e) const;

  /// Integer for prime fields, "(c0,c1,...)" coefficient tuple for extensions.
  std::string format(Felt a) const;

  bool operator==(const FieldCtx& other) const;

 private:
  struct Ext;

  FieldCtx(std::uint64_t p, unsigned k, std::shared_ptr<const Ext> ext);

  Felt add_ext(Felt a, Felt b) const;
  Felt neg_ext(Felt a) const;
  Felt mul_ext(Felt a, Felt b) const;

  std::uint64_t p_ = 2;
  unsigned k_ = 1;
  std::uint64_t q_ = 2;
  std::shared_ptr<const Ext> ext_;
};

enum class ArithOp { add, sub, mul };

/// Checked arithmetic: throws UsageError if an operand is not an element of ctx.
Felt field_arith(ArithOp op, Felt a, Felt b, const FieldCtx& ctx);
Felt field_inv(Felt a, const FieldCtx& ctx);
Felt field_pow(Felt a, std::uint64_t e, const FieldCtx& ctx);

bool is_prime(std::uint64_t n);

/// Lexicographically smallest monic irreducible polynomial of degree k >= 2 over GF(p).
/// Coefficients above the leading one are compared from degree k-1 downwards.
/// Throws CapacityError when p^k > 2^40.
PrimePoly find_irreducible(std::uint64_t p, unsigned k);

/// Ben-Or irreducibility test over GF(p) for a monic polynomial of degree >= 1.
bool is_irreducible_mod_p(const PrimePoly& f, std::uint64_t p);

/// Inclusion of a base field GF(q) into GF(q^e). The big field is built as
/// GF(p^{k e}) with its default modulus; for k > 1 the base generator X maps to a
/// root of the base modulus inside the big field.
class FieldEmbedding {
 public:
  FieldEmbedding(const FieldCtx& base, unsigned e);

  const FieldCtx& base() const { return base_; }
  const FieldCtx& big() const { return big_; }
  unsigned degree() const { return e_; }

  Felt lift(Felt a) const;
  /// Inverse of lift on its image; returns false when b is not in the base field.
  bool lower(Felt b, Felt& out) const;

 private:
  FieldCtx base_;
  FieldCtx big_;
  unsigned e_;
  std::vector<Felt> image_;  // image_[code] = lift of base element code
  std::vector<std::pair<std::uint64_t, std::uint64_t>> back_;  // sorted (big code, base code)
};

struct FMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Felt> entries;  // row-major

  FMatrix() = default;
  FMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  Felt& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  Felt at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

FMatrix transpose(const FMatrix& m);

/// Rank by Gaussian elimination on a private copy.
std::size_t matrix_rank(const FMatrix& m, const FieldCtx& ctx);

/// Determinant of a square matrix.
Felt determinant(const FMatrix& m, const FieldCtx& ctx);

}  // namespace svs
