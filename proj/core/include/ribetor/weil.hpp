#pragma once

#include "ribetor/divisor.hpp"
#include "ribetor/endomorphism.hpp"

namespace ribetor {

/// e_n(P,Q) = f(D_Q)/g(D_P) with D_P = (P+R1)-(R1), D_Q = (Q+R2)-(R2) disjoint,
/// div(f) = n D_P, div(g) = n D_Q, both realized as translated Miller functions.
/// The auxiliary points run down a seeded ladder until all evaluations are
/// non-degenerate; 64 steps, then exhausted_retries.
Fq weil_en_divisor(uint64_t n, const Point& P, const Point& Q, uint64_t seed);

/// Second route: the classical Miller assembly with one auxiliary S,
///   e_n(P,Q) = [f_{n,P}(Q-S) / f_{n,P}(-S)] / [f_{n,Q}(P+S) / f_{n,Q}(S)],
/// i.e. representatives (P+S)-(S) and (Q)-(O). Contractually equal to
/// weil_en_divisor for all inputs.
Fq weil_en_miller(uint64_t n, const Point& P, const Point& Q, uint64_t seed);

/// e_n(phi P, Q) == e_n(P, rosati(phi) Q).
bool check_adjoint(uint64_t n, const Endo& phi, const Point& P, const Point& Q, uint64_t seed);

struct TorsionBasis {
    Point P;
    Point Q;
    FieldCtxPtr field;
    unsigned degree;
};

/// Basis of E[n] = (Z/n)^2 over the smallest extension with the full n-torsion rational
/// (n an odd prime power); independence is certified by e_n(P,Q) having order n.
/// The optional exact_degree pins the search to one extension degree.
TorsionBasis torsion_basis(const CurvePtr& E, uint64_t n, SeededRng rng, unsigned max_degree = 24,
                           unsigned exact_degree = 0);

} // namespace ribetor
