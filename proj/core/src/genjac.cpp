#include "ribetor/genjac.hpp"

#include <algorithm>
#include <numeric>

namespace ribetor {

std::shared_ptr<const GenJacCtx> GenJacCtx::create(CurvePtr E, FieldCtxPtr ctx, Point x_pt,
                                                   SeededRng rng, unsigned ladder_index) {
    if (x_pt.is_infinity()) raise(errc::config_error, "x must lie in U = E - {0}");
    Point x2 = point_add(x_pt, x_pt);
    if (x2.is_infinity()) raise(errc::config_error, "2x = 0: the glued sections collide");

    // auxiliary ladder: walk the seeded stream, skip the marked points and their negatives
    Point r0 = Point::infinity(E, ctx);
    unsigned hits = 0;
    for (int tries = 0; tries < 4096; ++tries) {
        Point cand = random_point(E, ctx, rng);
        if (cand.is_infinity() || cand == x_pt || cand == x2 || cand == point_neg(x_pt) ||
            cand == point_neg(x2))
            continue;
        if (hits == ladder_index) {
            r0 = cand;
            break;
        }
        ++hits;
    }
    if (r0.is_infinity()) raise(errc::internal, "auxiliary ladder exhausted");
    return std::shared_ptr<const GenJacCtx>(
        new GenJacCtx(std::move(E), std::move(ctx), std::move(x_pt), std::move(x2), std::move(r0),
                      ladder_index));
}

GenJacCtx::Admissibility GenJacCtx::admissible_for(const Endo& phi) const {
    // A removed kernel only makes sense for a nonzero endomorphism; when the map is
    // identically zero the divisor pieces it guards cancel rather than collide
    // (the phi = rosati(phi) degenerate case, where t^J is the unit section).
    auto avoids = [&](const Endo& psi) {
        if (psi.m == 0 && psi.k == 0) return true;
        return !endo_eval(psi, x_).is_infinity();
    };
    Endo two_phi_minus_2 = endo_scale(2, endo_sub(phi, endo_make(1, 0, phi.gen)));
    Endo two_phi_minus_1 = endo_sub(endo_scale(2, phi), endo_make(1, 0, phi.gen));
    Endo phi_minus_2 = endo_sub(phi, endo_make(2, 0, phi.gen));
    Admissibility adm;
    adm.avoids_2phim1_kernel = avoids(two_phi_minus_2);
    adm.avoids_2phi_m1_kernel = avoids(two_phi_minus_1);
    adm.avoids_phim2_kernel = avoids(phi_minus_2);
    return adm;
}

namespace {

/// Representative divisor of the element (Q, 1): ((-Q)+R0) - (R0).
Divisor normal_rep(const GenJacCtxPtr& ctx, const Point& Q) {
    Divisor D;
    divisor_accumulate(D, point_add(point_neg(Q), ctx->aux()), 1);
    divisor_accumulate(D, ctx->aux(), -1);
    return D;
}

Fq principal_ratio_retrying(const GenJacCtxPtr& ctx, const Divisor& D) {
    error last(errc::internal, "unset");
    for (uint64_t attempt = 0; attempt < 8; ++attempt) {
        try {
            return principal_ratio(D, ctx->eval_pair(), attempt);
        } catch (const error& e) {
            if (e.code() != errc::support_hit) throw;
            last = e;
        }
    }
    throw last;
}

} // namespace

GjElem gj_zero(const GenJacCtxPtr& ctx) {
    return GjElem{ctx, Point::infinity(ctx->curve(), ctx->field()), Fq::one(ctx->field())};
}

GjElem gj_from_divisor(const GenJacCtxPtr& ctx, const Divisor& D) {
    if (divisor_degree(D) != 0) raise(errc::config_error, "gj class needs a degree-0 divisor");
    for (const auto& [P, m] : D) {
        if (P == ctx->x() || P == ctx->x2())
            raise(errc::support_hit, "divisor support meets the glued sections");
    }
    // base coordinate under the polarization-normalized projection
    Point Q = point_neg(divisor_sum(D, ctx->curve(), ctx->field()));
    Divisor principal = divisor_add(D, divisor_negate(normal_rep(ctx, Q)));
    Fq c = principal_ratio_retrying(ctx, principal);
    return GjElem{ctx, Q, c};
}

GjElem gj_add(const GjElem& a, const GjElem& b) {
    if (a.ctx != b.ctx) raise(errc::ctx_mismatch, "gj elements from different fibers");
    Point Qs = point_add(a.Q, b.Q);
    // cocycle: rep(Qa) + rep(Qb) - rep(Qa+Qb) is principal
    Divisor D = divisor_add(normal_rep(a.ctx, a.Q), normal_rep(a.ctx, b.Q));
    D = divisor_add(D, divisor_negate(normal_rep(a.ctx, Qs)));
    Fq gamma = principal_ratio_retrying(a.ctx, D);
    return GjElem{a.ctx, Qs, a.c * b.c * gamma};
}

GjElem gj_neg(const GjElem& a) {
    Point Qn = point_neg(a.Q);
    Divisor D = divisor_add(normal_rep(a.ctx, a.Q), normal_rep(a.ctx, Qn));
    Fq gamma = principal_ratio_retrying(a.ctx, D); // rep(Q) + rep(-Q) - rep(O), rep(O) = 0
    return GjElem{a.ctx, Qn, (a.c * gamma).inverse()};
}

GjElem gj_scalar_mul(uint64_t m, const GjElem& a) {
    GjElem R = gj_zero(a.ctx);
    GjElem base = a;
    while (m) {
        if (m & 1) R = gj_add(R, base);
        m >>= 1;
        if (m) base = gj_add(base, base);
    }
    return R;
}

bool gj_eq(const GjElem& a, const GjElem& b) {
    if (a.ctx != b.ctx) raise(errc::ctx_mismatch, "gj elements from different fibers");
    return a.Q == b.Q && a.c == b.c;
}

Point gj_project(const GjElem& a) { return a.Q; }

uint64_t gj_order(const GjElem& a) {
    uint64_t m1 = point_order(a.Q);
    GjElem t = gj_scalar_mul(m1, a);
    if (!t.Q.is_infinity()) raise(errc::internal, "projection order mismatch");
    if (t.c.is_one()) return m1;
    return m1 * mult_order(t.c);
}

GjElem ribet_point_direct(const GenJacCtxPtr& ctx, const Endo& phi) {
    auto adm = ctx->admissible_for(phi);
    if (!adm.ok()) raise(errc::bad_orbit, "x lies in a removed kernel of the base open set");

    // D_{phi,x} = (phi x) - (phi 2x) - phi^*((x) - (2x))
    Divisor D;
    divisor_accumulate(D, endo_eval(phi, ctx->x()), 1);
    divisor_accumulate(D, endo_eval(phi, ctx->x2()), -1);
    for (const auto& [z, m] : endo_preimage(phi, ctx->x())) divisor_accumulate(D, z, -m);
    for (const auto& [z, m] : endo_preimage(phi, ctx->x2())) divisor_accumulate(D, z, m);
    return gj_from_divisor(ctx, D);
}

Fq ribet_times_n(const GenJacCtxPtr& ctx, const Endo& phi, uint64_t n) {
    const Point& x = ctx->x();
    const Point& x2 = ctx->x2();
    if (!scalar_mul_u(n, x).is_infinity()) raise(errc::config_error, "x is not n-torsion");
    Point px = endo_eval(phi, x);
    Point px2 = endo_eval(phi, x2); // = 2 phi(x)
    if (px.is_infinity() || px == x || px == x2 || px2.is_infinity() || px2 == x || px2 == x2)
        raise(errc::bad_orbit, "phi orbit of x meets the glued sections");

    // h(x) f(phi 2x) / (h(2x) f(phi x)) with div f = n(x)-n(2x), div h = n(phi x)-n(phi 2x).
    // Each Miller function must be evaluated at both of its points with one addition
    // chain, or the normalization constants fail to cancel; retry switches the whole batch.
    for (MillerChain chain : {MillerChain::plain_binary, MillerChain::signed_binary}) {
        try {
            Fq hx = miller_eval(n, px, x, chain) / miller_eval(n, px2, x, chain);
            Fq hx2 = miller_eval(n, px, x2, chain) / miller_eval(n, px2, x2, chain);
            Fq fpx = miller_eval(n, x, px, chain) / miller_eval(n, x2, px, chain);
            Fq fpx2 = miller_eval(n, x, px2, chain) / miller_eval(n, x2, px2, chain);
            return (hx * fpx2) / (hx2 * fpx);
        } catch (const error& e) {
            if (e.code() != errc::miller_degenerate) throw;
            if (chain == MillerChain::signed_binary) throw;
        }
    }
    raise(errc::internal, "unreachable");
}

OrderSearchResult search_order_n2(const CurvePtr& E, const Endo& phi, uint64_t n, SeededRng rng,
                                  unsigned max_degree) {
    if (n < 2 || n % 2 == 0)
        raise(errc::hypothesis_violated, "n must be a positive odd integer");
    if (n % E->p() == 0)
        raise(errc::hypothesis_violated, "n must be invertible in the base field");
    Endo alpha = alpha_of(phi);
    if (alpha.k == 0) raise(errc::hypothesis_violated, "alpha = phi - rosati(phi) is zero");
    int64_t d_alpha = endo_degree(alpha);
    if (std::gcd((int64_t)n, d_alpha) != 1)
        raise(errc::hypothesis_violated, "n must be prime to deg(alpha)");
    struct Cond {
        const char* name;
        int64_t deg;
    } conds[] = {
        {"deg(2(phi-1))", endo_degree(endo_scale(2, endo_sub(phi, endo_make(1, 0, phi.gen))))},
        {"deg(2phi-1)", endo_degree(endo_sub(endo_scale(2, phi), endo_make(1, 0, phi.gen)))},
        {"deg(phi-2)", endo_degree(endo_sub(phi, endo_make(2, 0, phi.gen)))},
    };
    for (const auto& c : conds) {
        if (c.deg % (int64_t)n == 0)
            raise(errc::hypothesis_violated, std::string("n divides ") + c.name);
    }

    // factor n (odd, desk scale)
    std::vector<std::pair<uint64_t, unsigned>> fac;
    {
        uint64_t m = n;
        for (uint64_t d = 3; d * d <= m; d += 2) {
            if (m % d) continue;
            unsigned v = 0;
            while (m % d == 0) {
                m /= d;
                ++v;
            }
            fac.push_back({d, v});
        }
        if (m > 1) fac.push_back({m, 1});
    }

    // one field for everything: lcm of the basis degrees for each prime power
    unsigned K = 1;
    for (auto [ell, v] : fac) {
        uint64_t lv = 1;
        for (unsigned i = 0; i < v; ++i) lv *= ell;
        auto basis = torsion_basis(E, lv, rng.fork(ell), max_degree);
        K = (unsigned)std::lcm(K, basis.degree);
    }
    if (K > max_degree) raise(errc::not_found, "compositum degree exceeds the bound");
    auto ctx = build_extension(E->p(), K);

    Point x_total = Point::infinity(E, ctx);
    for (auto [ell, v] : fac) {
        uint64_t lv = 1;
        for (unsigned i = 0; i < v; ++i) lv *= ell;
        auto basis = torsion_basis(E, lv, rng.fork(7000 + ell), max_degree, K);
        uint64_t l_low = lv / ell; // ell^{v-1}
        Point P1 = scalar_mul_u(l_low, basis.P);
        Point Q1 = scalar_mul_u(l_low, basis.Q);
        // sweep the E[ell] grid spanned by the reduced basis for an anisotropic vector
        bool found = false;
        for (uint64_t i = 0; i < ell && !found; ++i) {
            for (uint64_t j = (i == 0) ? 1 : 0; j < ell && !found; ++j) {
                Point xl = point_add(scalar_mul_u(i, P1), scalar_mul_u(j, Q1));
                if (xl.is_infinity()) continue;
                try {
                    Fq v_pair = weil_en_divisor(ell, endo_eval(alpha, xl), xl, 0xA150 + i * 97 + j);
                    if (v_pair.is_one()) continue;
                } catch (const error& e) {
                    if (e.code() == errc::exhausted_retries) continue;
                    throw;
                }
                // lift to exact order ell^v: x_l = ell^{v-1} (i P + j Q)
                Point lifted = point_add(scalar_mul_u(i, basis.P), scalar_mul_u(j, basis.Q));
                x_total = point_add(x_total, lifted);
                found = true;
            }
        }
        if (!found) raise(errc::not_found, "no anisotropic vector for ell = " + std::to_string(ell));
    }

    // verify: ord(t^J(x)) = n * mult_order(n t^J(x)) = n^2
    auto gctx = GenJacCtx::create(E, ctx, x_total, rng.fork(0xF1BE));
    Fq s = ribet_times_n(gctx, phi, n);
    uint64_t so = mult_order(s);
    if (so != n)
        raise(errc::not_found, "constructed x fails the order-n^2 certificate");
    return OrderSearchResult{x_total, ctx, K, s, n * n};
}

} // namespace ribetor
