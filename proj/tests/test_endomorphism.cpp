#include "doctest.h"

#include "ribetor/endomorphism.hpp"

using namespace ribetor;

namespace {

std::vector<Point> all_points(const CurvePtr& E, const FieldCtxPtr& ctx) {
    std::vector<Point> pts;
    pts.push_back(Point::infinity(E, ctx));
    for (uint64_t v = 0; v < ctx->q(); ++v) {
        Fq x = Fq::from_counter(ctx, v);
        Fq rhs = x * x * x + E->a4_in(ctx) * x + E->a6_in(ctx);
        auto y = sqrt_in_fq(rhs);
        if (!y) continue;
        pts.push_back(Point::make(E, x, *y));
        if (!y->is_zero()) pts.push_back(Point::make(E, x, -*y));
    }
    return pts;
}

} // namespace

TEST_CASE("generator compatibility rules") {
    auto Eord = Curve::create(53, 2, 1);
    auto Ej0 = Curve::preset_j0(61, 1);
    auto Ej1728 = Curve::preset_j1728(53, 2);
    CHECK_NOTHROW(Generator::make(GenKind::frobenius, Eord));
    CHECK_NOTHROW(Generator::make(GenKind::frobenius, Ej0));
    CHECK_NOTHROW(Generator::make(GenKind::omega, Ej0));
    CHECK_NOTHROW(Generator::make(GenKind::i_unit, Ej1728));
    CHECK_THROWS_AS(Generator::make(GenKind::omega, Eord), error);
    CHECK_THROWS_AS(Generator::make(GenKind::i_unit, Eord), error);
    CHECK_THROWS_AS(Generator::make(GenKind::omega, Ej1728), error);
}

TEST_CASE("point action satisfies the minimal polynomial of each generator") {
    SeededRng rng(2);

    // pi^2 = a pi - p on points
    auto E = Curve::create(53, 2, 1);
    auto g = Generator::make(GenKind::frobenius, E);
    auto ctx = build_extension(53, 2);
    for (int t = 0; t < 50; ++t) {
        Point P = random_point(E, ctx, rng);
        Point lhs = g.apply(g.apply(P));
        Point rhs = point_add(scalar_mul(E->trace(), g.apply(P)), scalar_mul(-(int64_t)53, P));
        CHECK(lhs == rhs);
    }

    // omega^3 = 1 and omega^2 + omega + 1 = 0 on points
    auto Ej0 = Curve::preset_j0(61, 1);
    auto om = Generator::make(GenKind::omega, Ej0);
    auto ctx0 = Ej0->base_field();
    for (int t = 0; t < 50; ++t) {
        Point P = random_point(Ej0, ctx0, rng);
        CHECK(om.apply(om.apply(om.apply(P))) == P);
        Point sum = point_add(point_add(om.apply(om.apply(P)), om.apply(P)), P);
        CHECK(sum.is_infinity());
    }

    // i^2 = -1 on points
    auto Ei = Curve::preset_j1728(53, 2);
    auto iu = Generator::make(GenKind::i_unit, Ei);
    auto ctxi = Ei->base_field();
    for (int t = 0; t < 50; ++t) {
        Point P = random_point(Ei, ctxi, rng);
        CHECK(iu.apply(iu.apply(P)) == point_neg(P));
    }
}

TEST_CASE("endo_eval is additive in the point and in the endomorphism") {
    auto E = Curve::preset_j0(61, 1);
    auto g = Generator::make(GenKind::omega, E);
    auto ctx = E->base_field();
    SeededRng rng(3);
    Endo one = endo_make(1, 0, g);
    Endo phi = endo_make(2, -3, g);
    Endo psi = endo_make(-1, 2, g);
    for (int t = 0; t < 100; ++t) {
        Point P = random_point(E, ctx, rng);
        Point Q = random_point(E, ctx, rng);
        CHECK(endo_eval(one, P) == P);
        CHECK(endo_eval(phi, point_add(P, Q)) == point_add(endo_eval(phi, P), endo_eval(phi, Q)));
        // the ring is represented on points: (phi + psi)(P) = phi(P) + psi(P)
        CHECK(endo_eval(endo_add(phi, psi), P) == point_add(endo_eval(phi, P), endo_eval(psi, P)));
        // and multiplication is composition
        CHECK(endo_eval(endo_mul(phi, psi), P) == endo_eval(phi, endo_eval(psi, P)));
    }
}

TEST_CASE("rosati: involution, trace facts, composition to the degree") {
    auto E = Curve::create(53, 2, 1);
    auto g = Generator::make(GenKind::frobenius, E);
    for (int64_t m = -5; m <= 5; ++m) {
        for (int64_t k = -5; k <= 5; ++k) {
            Endo phi = endo_make(m, k, g);
            CHECK(endo_eq(rosati(rosati(phi)), phi));
            if (k == 0) CHECK(endo_eq(rosati(phi), phi));
            Endo alpha = alpha_of(phi);
            CHECK(endo_eq(rosati(alpha), endo_scale(-1, alpha))); // alpha is imaginary
            CHECK((alpha.k == 0) == (k == 0));
            // deg(1 + alpha) = 1 + deg(alpha)
            CHECK(endo_degree(endo_add(endo_make(1, 0, g), alpha)) == 1 + endo_degree(alpha));
            // norm multiplicativity, exhaustive over the second factor too
            for (int64_t m2 = -5; m2 <= 5; ++m2)
                for (int64_t k2 = -5; k2 <= 5; ++k2) {
                    Endo psi = endo_make(m2, k2, g);
                    CHECK(endo_degree(endo_mul(phi, psi)) ==
                          endo_degree(phi) * endo_degree(psi));
                }
        }
    }
    // pi-bar = a - pi
    Endo pi = endo_make(0, 1, g);
    CHECK(endo_eq(rosati(pi), endo_make(E->trace(), -1, g)));
    // alpha(pi) = 2 pi - a
    CHECK(endo_eq(alpha_of(pi), endo_make(-E->trace(), 2, g)));
    CHECK(endo_degree(pi) == 53);
    CHECK(endo_degree(endo_make(0, 0, g)) == 0);
    CHECK(endo_degree(endo_make(1, 0, g)) == 1);
}

TEST_CASE("rosati conjugate composes with phi to multiplication by deg(phi)") {
    SeededRng rng(8);
    auto E = Curve::create(53, 2, 1);
    auto g = Generator::make(GenKind::frobenius, E);
    auto ctx = build_extension(53, 2);
    for (auto [m, k] : {std::pair<int64_t, int64_t>{0, 1}, {1, 1}, {2, -1}, {-1, 2}}) {
        Endo phi = endo_make(m, k, g);
        for (int t = 0; t < 20; ++t) {
            Point P = random_point(E, ctx, rng);
            CHECK(endo_eval(rosati(phi), endo_eval(phi, P)) ==
                  scalar_mul(endo_degree(phi), P));
        }
    }
}

TEST_CASE("degree equals rational kernel size once the kernel is rational") {
    // deg(2) = 4: y^2 = x^3 - x over F_7 has full rational 2-torsion
    auto E = Curve::create(7, 6, 0);
    auto g = Generator::make(GenKind::frobenius, E);
    Endo two = endo_make(2, 0, g);
    size_t kernel = 0;
    for (const auto& P : all_points(E, E->base_field()))
        if (endo_eval(two, P).is_infinity()) ++kernel;
    CHECK((int64_t)kernel == endo_degree(two));

    // alpha = 1 + 2 omega on a j0 curve has degree 3
    auto Ej0 = Curve::preset_j0(7, 1);
    auto om = Generator::make(GenKind::omega, Ej0);
    Endo alpha = endo_make(1, 2, om);
    CHECK(endo_degree(alpha) == 3);
    bool matched = false;
    for (unsigned k = 1; k <= 4 && !matched; ++k) {
        auto ctx = build_extension(7, k);
        if (ctx->q() > 10000) break;
        size_t cnt = 0;
        for (const auto& P : all_points(Ej0, ctx))
            if (endo_eval(alpha, P).is_infinity()) ++cnt;
        if ((int64_t)cnt == endo_degree(alpha)) matched = true;
    }
    CHECK(matched);
}

TEST_CASE("unit_pi_shape recognition") {
    auto E = Curve::create(53, 2, 1);
    auto g = Generator::make(GenKind::frobenius, E);
    auto s1 = unit_pi_shape(endo_make(1, 0, g));
    REQUIRE(s1.has_value());
    CHECK(s1->e == 0);
    auto s2 = unit_pi_shape(endo_make(0, 1, g));
    REQUIRE(s2.has_value());
    CHECK(s2->e == 1);
    auto s3 = unit_pi_shape(endo_make(0, -1, g)); // -pi
    REQUIRE(s3.has_value());
    CHECK(s3->e == 1);
    // pi^2 = -p + a pi
    auto s4 = unit_pi_shape(endo_make(-53, E->trace(), g));
    REQUIRE(s4.has_value());
    CHECK(s4->e == 2);
    CHECK(!unit_pi_shape(endo_make(1, 1, g)).has_value()); // 1 + pi
    CHECK(!unit_pi_shape(endo_make(2, 0, g)).has_value()); // 2

    auto Ej0 = Curve::preset_j0(61, 1);
    auto om = Generator::make(GenKind::omega, Ej0);
    CHECK(unit_pi_shape(endo_make(0, 1, om)).has_value());  // omega: a unit
    CHECK(unit_pi_shape(endo_make(1, 1, om)).has_value());  // 1 + omega = -omega^2
    CHECK(!unit_pi_shape(endo_make(1, 2, om)).has_value()); // alpha, degree 3
}

TEST_CASE("endo_preimage: identity, frobenius, rejection") {
    auto E = Curve::create(53, 2, 1);
    auto g = Generator::make(GenKind::frobenius, E);
    auto ctx = build_extension(53, 2);
    SeededRng rng(21);
    Point P = random_point(E, ctx, rng);

    auto d1 = endo_preimage(endo_make(1, 0, g), P);
    REQUIRE(d1.size() == 1);
    CHECK(d1.begin()->first == P);
    CHECK(d1.begin()->second == 1);

    Endo pi = endo_make(0, 1, g);
    auto dp = endo_preimage(pi, P);
    REQUIRE(dp.size() == 1);
    CHECK(dp.begin()->second == 53);
    CHECK(endo_eval(pi, dp.begin()->first) == P); // z is the honest preimage

    CHECK_THROWS_AS(endo_preimage(endo_make(1, 1, g), P), error);
}
