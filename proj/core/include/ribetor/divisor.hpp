#pragma once

#include <map>

#include "ribetor/elliptic.hpp"

namespace ribetor {

/// Sparse formal divisor on E: point -> multiplicity (zero entries dropped).
using Divisor = std::map<Point, long long>;

long long divisor_degree(const Divisor& D);
/// Image under Div(E) -> E sending each point to itself.
Point divisor_sum(const Divisor& D, const CurvePtr& E, const FieldCtxPtr& ctx);
void divisor_accumulate(Divisor& D, const Point& P, long long mult);
Divisor divisor_add(const Divisor& A, const Divisor& B);
Divisor divisor_negate(const Divisor& D);

/// Two marked evaluation points; all tracked scalars are h(x_pt)/h(x2_pt).
struct EvalPair {
    Point x_pt;
    Point x2_pt;

    EvalPair(Point a, Point b);
};

/// Value at Q of the line through P1 and P2 (tangent when P1 = P2, vertical when
/// P2 = -P1 or either is infinity; 1 when both are infinity). Never throws on a zero
/// value; callers decide.
Fq line_at(const Point& P1, const Point& P2, const Point& Q);

/// Public contract form: throws on_line when Q lies on the line (value 0) or Q is infinity.
Fq line_value(const Point& P1, const Point& P2, const Point& Q);

enum class MillerChain { plain_binary, signed_binary };

/// f_{n,P}(Q) with div(f_{n,P}) = n(P) - n(O), requires nP = O.
/// Throws miller_degenerate when an intermediate line vanishes at Q.
Fq miller_eval(uint64_t n, const Point& P, const Point& Q,
               MillerChain chain = MillerChain::plain_binary);

/// f(Q) for f = f_{n,x}/f_{n,2x}, div(f) = n(x) - n(2x). Only ratios of these values
/// across two evaluation points are contractually meaningful. Retries once with the
/// signed-binary chain on degeneracy, then surfaces.
Fq fn_ratio_eval(uint64_t n, const Point& x_pt, const Point& Q);

/// h(x_pt)/h(x2_pt) for the function h with div(h) = D; requires D principal
/// (degree 0 and zero sum). `attempt` permutes the chord/tangent association order,
/// giving independent retries after a support_hit.
Fq principal_ratio(const Divisor& D, const EvalPair& ep, uint64_t attempt = 0);

/// Chord-tangent reduction: D = (Q) - (O) + div(h) with Q = divisor_sum(D) and
/// c = h(x_pt)/h(x2_pt). Throws support_hit when the marked points collide with the
/// moving support (caller re-randomizes the ambient representative).
std::pair<Point, Fq> divisor_reduce(const Divisor& D, const EvalPair& ep);

} // namespace ribetor
