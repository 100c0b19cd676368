#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ribetor/error.hpp"

namespace ribetor {

/// Immutable description of F_{p^k}: odd prime p > 3, extension degree k >= 1,
/// deterministic monic irreducible modulus of degree k over F_p.
///
/// The modulus is the one with the smallest counter value c0 + c1*p + ... + c_{k-1}*p^{k-1}
/// among all (c_i) making X^k + sum c_i X^i irreducible, so every run of every build picks
/// the same field presentation.
class FieldCtx {
  public:
    uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    uint64_t q() const { return q_; }

    /// Modulus coefficients, degree-ascending, size k+1, monic. For k=1 this is {0,1} (X),
    /// a placeholder: prime fields use no extension polynomial.
    const std::vector<uint64_t>& modulus() const { return modulus_; }

    /// Prime factors of q-1 (deduplicated, ascending). Lazily computed, cached, thread-safe.
    const std::vector<uint64_t>& unit_group_prime_factors() const;

    bool same_field(const FieldCtx& o) const { return p_ == o.p_ && k_ == o.k_; }

    static std::shared_ptr<const FieldCtx> create(uint64_t p, unsigned k);

  private:
    FieldCtx() = default;

    uint64_t p_ = 0;
    unsigned k_ = 0;
    uint64_t q_ = 0;
    std::vector<uint64_t> modulus_;

    mutable std::once_flag factor_once_;
    mutable std::vector<uint64_t> unit_factors_;
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

/// Element of F_{p^k}: coefficient vector of length k over F_p in the ctx's polynomial basis.
class Fq {
  public:
    Fq() = default;
    Fq(FieldCtxPtr ctx, std::vector<uint64_t> coeffs);

    static Fq zero(const FieldCtxPtr& ctx);
    static Fq one(const FieldCtxPtr& ctx);
    /// Counter encoding: value v in [0, q) read as base-p digits, degree-ascending.
    static Fq from_counter(const FieldCtxPtr& ctx, uint64_t v);
    /// Embeds an integer residue (element of the prime field) as a constant.
    static Fq from_int(const FieldCtxPtr& ctx, int64_t v);

    const FieldCtxPtr& ctx() const { return ctx_; }
    const std::vector<uint64_t>& coeffs() const { return c_; }
    uint64_t counter() const;

    bool is_zero() const;
    bool is_one() const;

    friend Fq operator+(const Fq& a, const Fq& b);
    friend Fq operator-(const Fq& a, const Fq& b);
    friend Fq operator*(const Fq& a, const Fq& b);
    friend Fq operator/(const Fq& a, const Fq& b);
    Fq operator-() const;
    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }
    Fq& operator/=(const Fq& o) { return *this = *this / o; }

    friend bool operator==(const Fq& a, const Fq& b);
    friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

    Fq inverse() const;
    Fq pow(uint64_t e) const;

    std::string str() const;

  private:
    FieldCtxPtr ctx_;
    std::vector<uint64_t> c_;
};

/// Builds F_{p^k} with the deterministic modulus. Throws not_prime / bad_characteristic /
/// degree_zero / too_large (q capped at 2^62).
FieldCtxPtr build_extension(uint64_t p, unsigned k);

/// a^(p^e). e is reduced mod k (the Galois group has order k); e = k-1 is the p-th root.
Fq frobenius_auto(const Fq& a, unsigned e);

/// Least m >= 1 with a^m = 1, by descent through the prime factors of q-1.
uint64_t mult_order(const Fq& a);

/// Square root, deterministic: returns the root with the smaller counter encoding,
/// or nullopt when a is a non-residue.
std::optional<Fq> sqrt_in_fq(const Fq& a);

/// Euler-criterion quadratic character: 0 for a = 0, else +1 / -1.
int quadratic_character(const Fq& a);

bool is_prime_u64(uint64_t n);

} // namespace ribetor
