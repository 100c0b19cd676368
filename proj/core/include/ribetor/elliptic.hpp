#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ribetor/finite_field.hpp"
#include "ribetor/rng.hpp"

namespace ribetor {

/// Short Weierstrass curve y^2 = x^3 + a4 x + a6 over F_p, p > 3 prime, p <= 10^6.
/// The trace of Frobenius is computed at construction by exhaustive point count
/// and cached; extension orders come from the trace recurrence.
class Curve {
  public:
    static std::shared_ptr<const Curve> create(uint64_t p, uint64_t a4, uint64_t a6);
    /// y^2 = x^3 + a6, j = 0, requires p = 1 mod 3 (carries the order-3 automorphism).
    static std::shared_ptr<const Curve> preset_j0(uint64_t p, uint64_t a6);
    /// y^2 = x^3 + a4 x, j = 1728, requires p = 1 mod 4 (carries the order-4 automorphism).
    static std::shared_ptr<const Curve> preset_j1728(uint64_t p, uint64_t a4);

    uint64_t p() const { return p_; }
    uint64_t a4() const { return a4_; }
    uint64_t a6() const { return a6_; }
    int64_t trace() const { return trace_; }
    uint64_t base_order() const { return n_base_; }
    const FieldCtxPtr& base_field() const { return base_; }

    /// #E(F_{p^k}) via t_k = a t_{k-1} - p t_{k-2}; throws too_large when p^k > 2^62.
    uint64_t order_over_extension(unsigned k) const;

    Fq a4_in(const FieldCtxPtr& ctx) const { return Fq::from_int(ctx, (int64_t)a4_); }
    Fq a6_in(const FieldCtxPtr& ctx) const { return Fq::from_int(ctx, (int64_t)a6_); }

    bool same_curve(const Curve& o) const { return p_ == o.p_ && a4_ == o.a4_ && a6_ == o.a6_; }

  private:
    Curve() = default;
    uint64_t p_ = 0, a4_ = 0, a6_ = 0;
    int64_t trace_ = 0;
    uint64_t n_base_ = 0;
    FieldCtxPtr base_;
};

using CurvePtr = std::shared_ptr<const Curve>;

/// Affine-or-infinity point over some extension of the curve's prime field.
class Point {
  public:
    Point() = default;

    static Point infinity(CurvePtr E, FieldCtxPtr F);
    /// Checks the curve equation exactly; throws not_on_curve.
    static Point make(CurvePtr E, Fq x, Fq y);

    bool is_infinity() const { return inf_; }
    const Fq& x() const { return x_; }
    const Fq& y() const { return y_; }
    const CurvePtr& curve() const { return E_; }
    const FieldCtxPtr& field() const { return F_; }

    friend bool operator==(const Point& a, const Point& b);
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    /// Deterministic total order (infinity first, then counter encodings); divisor keys.
    friend bool operator<(const Point& a, const Point& b);

    std::string str() const;

  private:
    CurvePtr E_;
    FieldCtxPtr F_;
    bool inf_ = true;
    Fq x_, y_;
};

Point point_add(const Point& P, const Point& Q);
Point point_neg(const Point& P);
Point point_sub(const Point& P, const Point& Q);
Point scalar_mul(int64_t m, const Point& P);
Point scalar_mul_u(uint64_t m, const Point& P);

/// #E(F_p) by x-scan with a quadratic-residue table; p <= 10^6.
uint64_t count_points_base(uint64_t p, uint64_t a4, uint64_t a6);

/// Uniformly samples an affine point of E over ctx (deterministic given the rng state).
Point random_point(const CurvePtr& E, const FieldCtxPtr& ctx, SeededRng& rng);

/// Order of P in E(F_q). Exact for desk-scale orders; not_torsion when the order has a
/// factor beyond the trial-division range that cannot be certified.
uint64_t point_order(const Point& P);

struct TorsionPoint {
    Point P;
    FieldCtxPtr field;
    unsigned degree; // extension degree over F_p
};

/// A point of exact order n over the smallest viable extension degree k' <= max_degree
/// with p^k' <= 2^62. Deterministic given the seed.
TorsionPoint torsion_point(const CurvePtr& E, uint64_t n, SeededRng rng, unsigned max_degree = 24);

/// All points of exact order n rational over the given ctx, found by saturating the
/// sampled subgroup E(F_q)[n]; sorted, deterministic.
std::vector<Point> rational_points_of_order(const CurvePtr& E, const FieldCtxPtr& ctx, uint64_t n,
                                            SeededRng rng);

/// Points of exact order n over the smallest extension holding at least `target` of them
/// (capped by how many exist; E[n] has at most n^2 - (n/rad stuff) such points).
std::vector<Point> collect_torsion_points(const CurvePtr& E, uint64_t n, size_t target,
                                          SeededRng rng, unsigned max_degree = 24);

} // namespace ribetor
