#include "ribetor/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ribetor {

namespace {
using u128 = unsigned __int128;
using i128 = __int128;
} // namespace

uint64_t count_points_base(uint64_t p, uint64_t a4, uint64_t a6) {
    if (p > 1000000) raise(errc::too_large, "exhaustive count limited to p <= 10^6");
    std::vector<int8_t> is_qr(p, 0);
    for (uint64_t t = 1; t < p; ++t) is_qr[(uint64_t)((u128)t * t % p)] = 1;
    uint64_t n = 1; // infinity
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t rhs = (uint64_t)(((u128)x * x % p * x + (u128)a4 * x + a6) % p);
        if (rhs == 0)
            n += 1;
        else if (is_qr[rhs])
            n += 2;
    }
    return n;
}

std::shared_ptr<const Curve> Curve::create(uint64_t p, uint64_t a4, uint64_t a6) {
    auto base = build_extension(p, 1);
    a4 %= p;
    a6 %= p;
    uint64_t disc = (uint64_t)(((u128)4 * a4 % p * a4 % p * a4 + (u128)27 * a6 % p * a6) % p);
    if (disc == 0) raise(errc::not_on_curve, "singular curve: 4*a4^3 + 27*a6^2 = 0");

    auto E = std::shared_ptr<Curve>(new Curve());
    E->p_ = p;
    E->a4_ = a4;
    E->a6_ = a6;
    E->base_ = base;
    E->n_base_ = count_points_base(p, a4, a6);
    E->trace_ = (int64_t)p + 1 - (int64_t)E->n_base_;
    if ((i128)E->trace_ * E->trace_ > (i128)4 * p) raise(errc::internal, "Hasse bound violated");
    return E;
}

std::shared_ptr<const Curve> Curve::preset_j0(uint64_t p, uint64_t a6) {
    if (p % 3 != 1) raise(errc::config_error, "preset j0 requires p = 1 mod 3");
    if (a6 % p == 0) raise(errc::config_error, "preset j0 requires a6 != 0");
    return create(p, 0, a6);
}

std::shared_ptr<const Curve> Curve::preset_j1728(uint64_t p, uint64_t a4) {
    if (p % 4 != 1) raise(errc::config_error, "preset j1728 requires p = 1 mod 4");
    if (a4 % p == 0) raise(errc::config_error, "preset j1728 requires a4 != 0");
    return create(p, a4, 0);
}

uint64_t Curve::order_over_extension(unsigned k) const {
    u128 pk = 1;
    for (unsigned i = 0; i < k; ++i) {
        pk *= p_;
        if (pk > ((u128)1 << 62)) raise(errc::too_large, "p^k exceeds 2^62");
    }
    i128 t_prev = 2, t_cur = trace_;
    if (k == 0) return 0;
    for (unsigned i = 2; i <= k; ++i) {
        i128 t_next = (i128)trace_ * t_cur - (i128)p_ * t_prev;
        t_prev = t_cur;
        t_cur = t_next;
    }
    i128 n = (i128)pk + 1 - (k == 1 ? (i128)trace_ : t_cur);
    return (uint64_t)n;
}

// ---- points ----

Point Point::infinity(CurvePtr E, FieldCtxPtr F) {
    Point P;
    P.E_ = std::move(E);
    P.F_ = std::move(F);
    P.inf_ = true;
    return P;
}

Point Point::make(CurvePtr E, Fq x, Fq y) {
    if (!x.ctx()->same_field(*y.ctx())) raise(errc::ctx_mismatch, "point coordinates");
    if (x.ctx()->p() != E->p()) raise(errc::curve_mismatch, "coordinate field characteristic");
    Fq rhs = x * x * x + E->a4_in(x.ctx()) * x + E->a6_in(x.ctx());
    if (y * y != rhs) raise(errc::not_on_curve, "point fails the curve equation");
    Point P;
    P.E_ = std::move(E);
    P.F_ = x.ctx();
    P.inf_ = false;
    P.x_ = std::move(x);
    P.y_ = std::move(y);
    return P;
}

bool operator==(const Point& a, const Point& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.x_ == b.x_ && a.y_ == b.y_;
}

bool operator<(const Point& a, const Point& b) {
    if (a.inf_ != b.inf_) return a.inf_;
    if (a.inf_) return false;
    uint64_t ax = a.x_.counter(), bx = b.x_.counter();
    if (ax != bx) return ax < bx;
    return a.y_.counter() < b.y_.counter();
}

std::string Point::str() const {
    if (inf_) return "O";
    return "(" + x_.str() + "," + y_.str() + ")";
}

namespace {
void check_same_group(const Point& P, const Point& Q) {
    if (!P.curve() || !Q.curve() || !P.curve()->same_curve(*Q.curve()))
        raise(errc::curve_mismatch, "points on different curves");
    if (!P.field()->same_field(*Q.field()))
        raise(errc::ctx_mismatch, "points over different extensions");
}
} // namespace

Point point_neg(const Point& P) {
    if (P.is_infinity()) return P;
    return Point::make(P.curve(), P.x(), -P.y());
}

Point point_add(const Point& P, const Point& Q) {
    check_same_group(P, Q);
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    const auto& ctx = P.field();
    if (P.x() == Q.x()) {
        if (P.y() != Q.y() || P.y().is_zero()) return Point::infinity(P.curve(), ctx);
        // tangent
        Fq three = Fq::from_int(ctx, 3), two = Fq::from_int(ctx, 2);
        Fq lam = (three * P.x() * P.x() + P.curve()->a4_in(ctx)) / (two * P.y());
        Fq x3 = lam * lam - P.x() - Q.x();
        Fq y3 = lam * (P.x() - x3) - P.y();
        return Point::make(P.curve(), std::move(x3), std::move(y3));
    }
    Fq lam = (Q.y() - P.y()) / (Q.x() - P.x());
    Fq x3 = lam * lam - P.x() - Q.x();
    Fq y3 = lam * (P.x() - x3) - P.y();
    return Point::make(P.curve(), std::move(x3), std::move(y3));
}

Point point_sub(const Point& P, const Point& Q) { return point_add(P, point_neg(Q)); }

Point scalar_mul_u(uint64_t m, const Point& P) {
    Point R = Point::infinity(P.curve(), P.field());
    if (m == 0 || P.is_infinity()) return R;
    Point base = P;
    while (m) {
        if (m & 1) R = point_add(R, base);
        m >>= 1;
        if (m) base = point_add(base, base);
    }
    return R;
}

Point scalar_mul(int64_t m, const Point& P) {
    if (m < 0) return scalar_mul_u((uint64_t)(-m), point_neg(P));
    return scalar_mul_u((uint64_t)m, P);
}

Point random_point(const CurvePtr& E, const FieldCtxPtr& ctx, SeededRng& rng) {
    if (ctx->p() != E->p()) raise(errc::curve_mismatch, "field characteristic");
    for (int tries = 0; tries < 4096; ++tries) {
        Fq x = Fq::from_counter(ctx, rng.below(ctx->q()));
        Fq rhs = x * x * x + E->a4_in(ctx) * x + E->a6_in(ctx);
        auto y = sqrt_in_fq(rhs);
        if (!y) continue;
        Fq yy = rng.bit() ? -*y : *y;
        return Point::make(E, std::move(x), std::move(yy));
    }
    raise(errc::internal, "point sampling failed");
}

namespace {

// Prime factors of n found by bounded trial division, plus the unfactored cofactor.
struct PartialFactorization {
    std::vector<uint64_t> primes;
    uint64_t cofactor; // 1, or a product of primes above the bound
};

PartialFactorization partial_factor(uint64_t n, uint64_t bound = 1000000) {
    PartialFactorization f;
    f.cofactor = n;
    for (uint64_t d = 2; d <= bound && (u128)d * d <= f.cofactor; d += (d == 2) ? 1 : 2) {
        if (f.cofactor % d == 0) {
            f.primes.push_back(d);
            while (f.cofactor % d == 0) f.cofactor /= d;
        }
    }
    if (f.cofactor > 1 && (f.cofactor <= (u128)bound * bound || is_prime_u64(f.cofactor))) {
        f.primes.push_back(f.cofactor); // below bound^2 with no small factor => prime
        f.cofactor = 1;
    }
    return f;
}

} // namespace

uint64_t point_order(const Point& P) {
    if (P.is_infinity()) return 1;
    uint64_t N = P.curve()->order_over_extension(P.field()->k());
    auto f = partial_factor(N);
    uint64_t m = N;
    if (f.cofactor > 1) {
        if (scalar_mul_u(m / f.cofactor, P).is_infinity())
            m /= f.cofactor;
        else
            raise(errc::not_torsion, "point order involves an unfactored large cofactor");
    }
    for (uint64_t ell : f.primes) {
        while (m % ell == 0 && scalar_mul_u(m / ell, P).is_infinity()) m /= ell;
    }
    return m;
}

namespace {

// Multiplicity of each prime of n in N, and the n-free part of N.
// Needs only the factorization of n, never of N.
struct NSplit {
    std::vector<std::pair<uint64_t, unsigned>> n_primes; // (ell, v_ell(N))
    uint64_t n_free_part;
};

NSplit split_by(uint64_t N, uint64_t n) {
    NSplit s;
    s.n_free_part = N;
    auto nf = partial_factor(n);
    for (uint64_t ell : nf.primes) {
        unsigned v = 0;
        while (s.n_free_part % ell == 0) {
            s.n_free_part /= ell;
            ++v;
        }
        s.n_primes.push_back({ell, v});
    }
    return s;
}

// Projects R to the n-primary part and returns a point of exact order n, if R allows it.
std::optional<Point> exact_order_part(const Point& R, uint64_t n, const NSplit& s) {
    Point Q = scalar_mul_u(s.n_free_part, R);
    if (Q.is_infinity()) return std::nullopt;
    // order of Q is prod ell^{e_ell}; compute each exponent by descent
    uint64_t ord = 1;
    for (auto [ell, v] : s.n_primes) {
        uint64_t rest = 1;
        for (auto [l2, v2] : s.n_primes)
            if (l2 != ell)
                for (unsigned i = 0; i < v2; ++i) rest *= l2;
        Point T = scalar_mul_u(rest, Q);
        unsigned e = 0;
        while (!T.is_infinity()) {
            T = scalar_mul_u(ell, T);
            ++e;
        }
        for (unsigned i = 0; i < e; ++i) ord *= ell;
    }
    if (ord % n != 0) return std::nullopt;
    Point P = scalar_mul_u(ord / n, Q);
    return P;
}

} // namespace

TorsionPoint torsion_point(const CurvePtr& E, uint64_t n, SeededRng rng, unsigned max_degree) {
    if (n < 2) raise(errc::config_error, "torsion order must be >= 2");
    if (n % E->p() == 0) raise(errc::bad_characteristic, "n divisible by the characteristic");
    for (unsigned k = 1; k <= max_degree; ++k) {
        uint64_t N;
        try {
            N = E->order_over_extension(k);
        } catch (const error& e) {
            if (e.code() == errc::too_large) break;
            throw;
        }
        if (N % n != 0) continue;
        auto ctx = build_extension(E->p(), k);
        auto split = split_by(N, n);
        for (int tries = 0; tries < 64; ++tries) {
            Point R = random_point(E, ctx, rng);
            auto P = exact_order_part(R, n, split);
            if (P) return TorsionPoint{*P, ctx, k};
        }
    }
    raise(errc::not_found, "no extension of degree <= " + std::to_string(max_degree) +
                               " holds a point of order " + std::to_string(n));
}

std::vector<Point> rational_points_of_order(const CurvePtr& E, const FieldCtxPtr& ctx, uint64_t n,
                                            SeededRng rng) {
    uint64_t N = E->order_over_extension(ctx->k());
    std::vector<Point> result;
    if (N % n != 0) return result;
    auto split = split_by(N, n);

    // saturate the subgroup of E(F_q)[n] spanned by sampled points
    std::set<Point> subgroup;
    subgroup.insert(Point::infinity(E, ctx));
    int stale = 0;
    while (stale < 40 && subgroup.size() < (size_t)n * n) {
        Point R = random_point(E, ctx, rng);
        auto P = exact_order_part(R, n, split);
        if (!P) {
            // R's n-part may still have a smaller exact order; fold it in anyway
            Point Q = scalar_mul_u(split.n_free_part, R);
            uint64_t strip = 1;
            Point T = Q;
            while (!T.is_infinity()) {
                T = scalar_mul_u(n, T);
                strip *= n;
            }
            P = scalar_mul_u(strip / n, Q);
        }
        if (subgroup.count(*P)) {
            ++stale;
            continue;
        }
        stale = 0;
        // close under addition
        std::set<Point> next = subgroup;
        for (const auto& A : subgroup) {
            Point B = A;
            for (uint64_t i = 1; i < n; ++i) {
                B = point_add(B, *P);
                next.insert(B);
            }
        }
        subgroup = std::move(next);
    }
    for (const auto& P : subgroup) {
        if (P.is_infinity()) continue;
        if (!scalar_mul_u(n, P).is_infinity()) continue;
        bool exact = true;
        for (auto [ell, v] : split.n_primes) {
            (void)v;
            if (scalar_mul_u(n / ell, P).is_infinity()) {
                exact = false;
                break;
            }
        }
        if (exact) result.push_back(P);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<Point> collect_torsion_points(const CurvePtr& E, uint64_t n, size_t target,
                                          SeededRng rng, unsigned max_degree) {
    std::vector<Point> best;
    for (unsigned k = 1; k <= max_degree; ++k) {
        uint64_t N;
        try {
            N = E->order_over_extension(k);
        } catch (const error& e) {
            if (e.code() == errc::too_large) break;
            throw;
        }
        if (N % n != 0) continue;
        auto ctx = build_extension(E->p(), k);
        auto pts = rational_points_of_order(E, ctx, n, rng.fork(k));
        if (pts.size() > best.size()) best = pts;
        if (best.size() >= target) break;
    }
    if (best.empty())
        raise(errc::not_found, "no rational points of order " + std::to_string(n) +
                                   " within degree " + std::to_string(max_degree));
    if (best.size() > target) best.resize(target);
    return best;
}

} // namespace ribetor
