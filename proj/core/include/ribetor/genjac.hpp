#pragma once

#include "ribetor/divisor.hpp"
#include "ribetor/endomorphism.hpp"
#include "ribetor/weil.hpp"

namespace ribetor {

/// Fiber G_x = Pic0(C_x) of the generalized Jacobian of the nodal curve glued along the
/// sections x and 2x: degree-0 divisor classes on E with support outside {x, 2x}, modulo
/// div(f) with f(x) = f(2x). An extension of E by the multiplicative group.
///
/// Classes are stored in normal form (Q, c) against the fixed auxiliary point R0:
/// the class with base coordinate Q and kernel coordinate 1 is [((-Q)+R0) - (R0)], so the
/// base coordinate is the polarization-normalized projection (the class of (0)-(Q) maps
/// to Q), matching the identification under which the Ribet point projects to alpha(x).
class GenJacCtx {
  public:
    static std::shared_ptr<const GenJacCtx> create(CurvePtr E, FieldCtxPtr ctx, Point x_pt,
                                                   SeededRng rng, unsigned ladder_index = 0);

    const CurvePtr& curve() const { return E_; }
    const FieldCtxPtr& field() const { return F_; }
    const Point& x() const { return x_; }
    const Point& x2() const { return x2_; }
    const Point& aux() const { return r0_; }
    unsigned ladder_index() const { return ladder_index_; }
    const EvalPair& eval_pair() const { return ep_; }

    /// Which of the three bad loci (kernels of 2(phi-1), 2phi-1, phi-2) x avoids.
    struct Admissibility {
        bool avoids_2phim1_kernel;  // 2(phi-1)
        bool avoids_2phi_m1_kernel; // 2phi-1
        bool avoids_phim2_kernel;   // phi-2
        bool ok() const { return avoids_2phim1_kernel && avoids_2phi_m1_kernel && avoids_phim2_kernel; }
    };
    Admissibility admissible_for(const Endo& phi) const;

  private:
    GenJacCtx(CurvePtr E, FieldCtxPtr F, Point x, Point x2, Point r0, unsigned idx)
        : E_(std::move(E)), F_(std::move(F)), x_(std::move(x)), x2_(std::move(x2)),
          r0_(std::move(r0)), ladder_index_(idx), ep_(x_, x2_) {}

    CurvePtr E_;
    FieldCtxPtr F_;
    Point x_, x2_, r0_;
    unsigned ladder_index_;
    EvalPair ep_;
};

using GenJacCtxPtr = std::shared_ptr<const GenJacCtx>;

struct GjElem {
    GenJacCtxPtr ctx;
    Point Q; // base coordinate (projection to E)
    Fq c;    // kernel coordinate, nonzero
};

GjElem gj_zero(const GenJacCtxPtr& ctx);
GjElem gj_from_divisor(const GenJacCtxPtr& ctx, const Divisor& D);
GjElem gj_add(const GjElem& a, const GjElem& b);
GjElem gj_neg(const GjElem& a);
GjElem gj_scalar_mul(uint64_t m, const GjElem& a);
bool gj_eq(const GjElem& a, const GjElem& b);
Point gj_project(const GjElem& a);

/// Order of a in G_x: m1 = order of Q in E, then m1 * mult_order of the kernel part.
uint64_t gj_order(const GjElem& a);

/// t^J at x for direct-mode phi (unit times a Frobenius power): the class of the fiber
/// divisor (phi x) - (phi 2x) - phi^*((x) - (2x)).
GjElem ribet_point_direct(const GenJacCtxPtr& ctx, const Endo& phi);

/// n * t^J(x) as a kernel scalar, computed purely from Miller ratios
/// (works for every phi): [h(x) f(phi 2x)] / [h(2x) f(phi x)] with
/// div(f) = n(x) - n(2x) and div(h) = n(phi x) - n(phi 2x).
Fq ribet_times_n(const GenJacCtxPtr& ctx, const Endo& phi, uint64_t n);

struct OrderSearchResult {
    Point x;
    FieldCtxPtr field;
    unsigned degree;
    Fq n_ribet;       // the kernel scalar n*t^J(x), of multiplicative order n
    uint64_t order;   // n^2, verified
};

/// The torsion-order witness search: x of order n with ord(t^J(x)) = n^2.
/// Rejects with hypothesis_violated (naming the condition) when n is even, shares a
/// factor with p or deg(alpha), or divides one of deg(2(phi-1)), deg(2phi-1), deg(phi-2).
OrderSearchResult search_order_n2(const CurvePtr& E, const Endo& phi, uint64_t n, SeededRng rng,
                                  unsigned max_degree = 24);

} // namespace ribetor
