#include "doctest.h"

#include <cmath>
#include <numeric>
#include <set>

#include "ribetor/elliptic.hpp"

using namespace ribetor;

namespace {

// Oracle: brute-force order count over F_{p^k} for small q.
uint64_t naive_extension_count(const CurvePtr& E, unsigned k) {
    auto ctx = build_extension(E->p(), k);
    uint64_t n = 1;
    for (uint64_t v = 0; v < ctx->q(); ++v) {
        Fq x = Fq::from_counter(ctx, v);
        Fq rhs = x * x * x + E->a4_in(ctx) * x + E->a6_in(ctx);
        int chi = quadratic_character(rhs);
        n += (chi == 0) ? 1 : (chi == 1 ? 2 : 0);
    }
    return n;
}

Point lift_to(const Point& P, const FieldCtxPtr& ctx) {
    if (P.is_infinity()) return Point::infinity(P.curve(), ctx);
    REQUIRE(P.field()->k() == 1);
    return Point::make(P.curve(), Fq::from_int(ctx, (int64_t)P.x().counter()),
                       Fq::from_int(ctx, (int64_t)P.y().counter()));
}

} // namespace

TEST_CASE("count_points_base stays in the Hasse interval") {
    for (uint64_t p : {5ull, 53ull, 101ull}) {
        uint64_t n = count_points_base(p, 1, 1);
        double b = 2.0 * std::sqrt((double)p);
        CHECK((double)n >= p + 1 - b);
        CHECK((double)n <= p + 1 + b);
    }
}

TEST_CASE("supersingular curve has a = 0") {
    // y^2 = x^3 + 1 over p = 2 mod 3 is supersingular
    auto E = Curve::create(11, 0, 1);
    CHECK(E->trace() == 0);
    CHECK(E->base_order() == 12);
}

TEST_CASE("quadratic twist orders sum to 2p + 2") {
    // E': y^2 = x^3 + a4 c^2 x + a6 c^3 for a non-residue c
    uint64_t p = 61, a4 = 1, a6 = 2;
    uint64_t c = 0;
    for (uint64_t t = 2; t < p; ++t) {
        uint64_t e = 1, b = t, ex = (p - 1) / 2;
        while (ex) {
            if (ex & 1) e = e * b % p;
            b = b * b % p;
            ex >>= 1;
        }
        if (e == p - 1) {
            c = t;
            break;
        }
    }
    REQUIRE(c != 0);
    uint64_t n1 = count_points_base(p, a4, a6);
    uint64_t n2 = count_points_base(p, a4 * c % p * c % p, a6 * c % p * c % p * c % p);
    CHECK(n1 + n2 == 2 * p + 2);
}

TEST_CASE("order_over_extension: recurrence vs closed form vs naive count") {
    auto E = Curve::create(7, 1, 3);
    CHECK(E->order_over_extension(1) == E->base_order());
    int64_t a = E->trace();
    CHECK(E->order_over_extension(2) == (uint64_t)(49 + 1 - (a * a - 2 * 7)));
    for (unsigned k = 1; k <= 4; ++k)
        CHECK(E->order_over_extension(k) == naive_extension_count(E, k));

    auto E2 = Curve::create(13, 2, 5);
    for (unsigned k = 1; k <= 3; ++k)
        CHECK(E2->order_over_extension(k) == naive_extension_count(E2, k));
}

TEST_CASE("Hasse bound over extensions") {
    auto E = Curve::create(53, 2, 1);
    for (unsigned k = 1; k <= 8; ++k) {
        double pk = std::pow(53.0, k);
        double n = (double)E->order_over_extension(k);
        CHECK(std::abs(pk + 1 - n) <= 2 * std::sqrt(pk) * (1 + 1e-12));
    }
}

TEST_CASE("group law: identity, inverse, associativity on random triples") {
    auto E = Curve::create(53, 2, 1);
    auto ctx = E->base_field();
    SeededRng rng(5);
    Point O = Point::infinity(E, ctx);
    for (int t = 0; t < 1000; ++t) {
        Point P = random_point(E, ctx, rng);
        Point Q = random_point(E, ctx, rng);
        Point R = random_point(E, ctx, rng);
        CHECK(point_add(P, O) == P);
        CHECK(point_add(P, point_neg(P)) == O);
        CHECK(point_add(point_add(P, Q), R) == point_add(P, point_add(Q, R)));
        CHECK(point_add(P, Q) == point_add(Q, P));
    }
    // the whole base group is killed by #E(F_p)
    for (int t = 0; t < 20; ++t) {
        Point P = random_point(E, ctx, rng);
        CHECK(scalar_mul_u(E->base_order(), P).is_infinity());
    }
}

TEST_CASE("base points remain on the curve over extensions") {
    auto E = Curve::create(53, 2, 1);
    SeededRng rng(11);
    auto base = E->base_field();
    auto ext = build_extension(53, 3);
    for (int t = 0; t < 20; ++t) {
        Point P = random_point(E, base, rng);
        Point lifted = lift_to(P, ext); // Point::make validates the equation
        CHECK(!lifted.is_infinity());
        CHECK(scalar_mul_u(E->base_order(), lifted).is_infinity());
    }
}

TEST_CASE("torsion_point finds exact orders") {
    auto E = Curve::create(53, 2, 1);
    CHECK_THROWS_AS(torsion_point(E, 1, SeededRng(1)), error);
    CHECK_THROWS_AS(torsion_point(E, 53, SeededRng(1)), error);

    // 59 = #E(F_53) is prime, so 59-torsion already lives over the base field
    auto tp = torsion_point(E, 59, SeededRng(7));
    CHECK(tp.degree == 1);
    CHECK(scalar_mul_u(59, tp.P).is_infinity());
    CHECK(!tp.P.is_infinity());

    for (uint64_t n : {3ull, 5ull, 7ull, 9ull}) {
        auto t = torsion_point(E, n, SeededRng(n));
        CHECK(scalar_mul_u(n, t.P).is_infinity());
        CHECK(point_order(t.P) == n);
    }
}

TEST_CASE("point_order agrees with exhaustive scan on a small curve") {
    auto E = Curve::create(7, 1, 3);
    auto ctx = E->base_field();
    SeededRng rng(3);
    for (int t = 0; t < 30; ++t) {
        Point P = random_point(E, ctx, rng);
        uint64_t ord = point_order(P);
        CHECK(scalar_mul_u(ord, P).is_infinity());
        for (uint64_t m = 1; m < ord; ++m) CHECK(!scalar_mul_u(m, P).is_infinity());
    }
}

TEST_CASE("rational_points_of_order enumerates the full E[n] for prime n") {
    auto E = Curve::create(61, 0, 1);
    for (uint64_t n : {3ull, 5ull}) {
        bool verified = false;
        for (unsigned k = 1; k <= 6 && !verified; ++k) {
            uint64_t N = E->order_over_extension(k);
            auto ctx = build_extension(61, k);
            if (N % (n * n) != 0 || (ctx->q() - 1) % n != 0) continue;
            auto pts = rational_points_of_order(E, ctx, n, SeededRng(17));
            if (pts.size() < n * n - 1) continue;
            // for prime n every nonzero element of (Z/n)^2 has exact order n
            CHECK(pts.size() == (size_t)(n * n - 1));
            std::set<Point> all(pts.begin(), pts.end());
            CHECK(all.size() == pts.size());
            for (const auto& P : pts) {
                CHECK(scalar_mul_u(n, P).is_infinity());
                CHECK(!P.is_infinity());
            }
            verified = true;
        }
        CHECK(verified);
    }
}

TEST_CASE("curve construction rejections") {
    CHECK_THROWS_AS(Curve::create(5, 0, 0), error);     // singular
    CHECK_THROWS_AS(Curve::preset_j0(53, 1), error);    // 53 != 1 mod 3
    CHECK_THROWS_AS(Curve::preset_j1728(59, 1), error); // 59 != 1 mod 4
    CHECK_THROWS_AS(Curve::create(4, 1, 1), error);     // not prime
    auto E1 = Curve::create(53, 2, 1);
    auto E2 = Curve::create(53, 1, 1);
    auto ctx = E1->base_field();
    SeededRng rng(1);
    Point P = random_point(E1, ctx, rng);
    Point Q = random_point(E2, ctx, rng);
    CHECK_THROWS_AS(point_add(P, Q), error);
}
