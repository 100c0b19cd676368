#include "ribetor/weil.hpp"

namespace ribetor {

namespace {

bool viable_prime_power(uint64_t n, uint64_t& ell_out, unsigned& a_out) {
    if (n < 2) return false;
    uint64_t ell = 0;
    uint64_t m = n;
    for (uint64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            ell = d;
            break;
        }
    }
    if (ell == 0) ell = m;
    unsigned a = 0;
    while (m % ell == 0) {
        m /= ell;
        ++a;
    }
    if (m != 1) return false;
    ell_out = ell;
    a_out = a;
    return true;
}

} // namespace

Fq weil_en_divisor(uint64_t n, const Point& P, const Point& Q, uint64_t seed) {
    const auto& ctx = P.field();
    if (!ctx->same_field(*Q.field())) raise(errc::ctx_mismatch, "pairing arguments");
    if (n % P.curve()->p() == 0) raise(errc::bad_characteristic, "n divisible by p");
    Fq one = Fq::one(ctx);
    if (P.is_infinity() || Q.is_infinity()) return one;
    if (!scalar_mul_u(n, P).is_infinity() || !scalar_mul_u(n, Q).is_infinity())
        raise(errc::config_error, "pairing arguments must be n-torsion");

    SeededRng rng(seed ^ 0x77E11ull);
    for (int step = 0; step < 64; ++step) {
        try {
            Point R1 = random_point(P.curve(), ctx, rng);
            Point R2 = random_point(P.curve(), ctx, rng);
            Point PR1 = point_add(P, R1);
            Point QR2 = point_add(Q, R2);
            if (R1.is_infinity() || R2.is_infinity()) continue;
            // supports {P+R1, R1} and {Q+R2, R2} must be disjoint
            if (PR1 == QR2 || PR1 == R2 || R1 == QR2 || R1 == R2) continue;

            // f(D_Q): f = translated f_{n,P}, arguments shifted by -R1
            Fq fDQ = miller_eval(n, P, point_sub(QR2, R1)) / miller_eval(n, P, point_sub(R2, R1));
            // g(D_P): g = translated f_{n,Q}, arguments shifted by -R2
            Fq gDP = miller_eval(n, Q, point_sub(PR1, R2)) / miller_eval(n, Q, point_sub(R1, R2));
            return fDQ / gDP;
        } catch (const error& e) {
            if (e.code() != errc::miller_degenerate && e.code() != errc::on_line) throw;
        }
    }
    raise(errc::exhausted_retries, "weil_en_divisor ladder exhausted");
}

Fq weil_en_miller(uint64_t n, const Point& P, const Point& Q, uint64_t seed) {
    const auto& ctx = P.field();
    if (!ctx->same_field(*Q.field())) raise(errc::ctx_mismatch, "pairing arguments");
    if (n % P.curve()->p() == 0) raise(errc::bad_characteristic, "n divisible by p");
    Fq one = Fq::one(ctx);
    if (P.is_infinity() || Q.is_infinity()) return one;
    if (!scalar_mul_u(n, P).is_infinity() || !scalar_mul_u(n, Q).is_infinity())
        raise(errc::config_error, "pairing arguments must be n-torsion");

    SeededRng rng(seed ^ 0x3A11ull);
    for (int step = 0; step < 64; ++step) {
        try {
            Point S = random_point(P.curve(), ctx, rng);
            if (S.is_infinity()) continue;
            Point PS = point_add(P, S);
            // representatives (P+S)-(S) and (Q)-(O) must be disjoint
            if (PS == Q || PS.is_infinity() || S == Q) continue;

            Fq fQ = miller_eval(n, P, point_sub(Q, S)) / miller_eval(n, P, point_neg(S));
            Fq gP = miller_eval(n, Q, PS) / miller_eval(n, Q, S);
            return fQ / gP;
        } catch (const error& e) {
            if (e.code() != errc::miller_degenerate && e.code() != errc::on_line) throw;
        }
    }
    raise(errc::exhausted_retries, "weil_en_miller ladder exhausted");
}

bool check_adjoint(uint64_t n, const Endo& phi, const Point& P, const Point& Q, uint64_t seed) {
    Fq lhs = weil_en_divisor(n, endo_eval(phi, P), Q, seed);
    Fq rhs = weil_en_divisor(n, P, endo_eval(rosati(phi), Q), seed + 1);
    return lhs == rhs;
}

TorsionBasis torsion_basis(const CurvePtr& E, uint64_t n, SeededRng rng, unsigned max_degree,
                           unsigned exact_degree) {
    uint64_t ell;
    unsigned a;
    if (!viable_prime_power(n, ell, a) || ell == 2)
        raise(errc::config_error, "torsion_basis needs an odd prime power");
    if (n % E->p() == 0) raise(errc::bad_characteristic, "n divisible by the characteristic");

    unsigned k_lo = exact_degree ? exact_degree : 1;
    unsigned k_hi = exact_degree ? exact_degree : max_degree;
    for (unsigned k = k_lo; k <= k_hi; ++k) {
        uint64_t N;
        try {
            N = E->order_over_extension(k);
        } catch (const error& e) {
            if (e.code() == errc::too_large) break;
            throw;
        }
        // need n^2 | #E and mu_n in the field
        if (N % (n * n) != 0) continue;
        uint64_t pk_mod = 1;
        {
            auto ctx_probe = build_extension(E->p(), k);
            pk_mod = (ctx_probe->q() - 1) % n;
        }
        if (pk_mod != 0) continue;

        auto ctx = build_extension(E->p(), k);
        auto pts = rational_points_of_order(E, ctx, n, rng.fork(1000 + k));
        if (pts.size() < 2) continue;
        for (size_t i = 0; i < pts.size(); ++i) {
            for (size_t j = i + 1; j < pts.size(); ++j) {
                Fq e = weil_en_divisor(n, pts[i], pts[j], 0x8A515 + i * 131 + j);
                if (mult_order(e) == n) return TorsionBasis{pts[i], pts[j], ctx, k};
            }
        }
    }
    raise(errc::not_found, "no rational E[n] basis within the degree bound");
}

} // namespace ribetor
