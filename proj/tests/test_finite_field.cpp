#include "doctest.h"

#include "ribetor/finite_field.hpp"
#include "ribetor/rng.hpp"

#include <numeric>

using namespace ribetor;

namespace {

// Oracle: exhaustive root test over all monic quadratics of F_p, smallest counter first.
std::vector<uint64_t> first_irreducible_quadratic(uint64_t p) {
    for (uint64_t c1 = 0; c1 < p; ++c1) {
        for (uint64_t c0 = 0; c0 < p; ++c0) {
            uint64_t counter = c0 + c1 * p;
            uint64_t cc0 = counter % p, cc1 = counter / p;
            bool has_root = false;
            for (uint64_t t = 0; t < p; ++t)
                if ((t * t + cc1 * t + cc0) % p == 0) has_root = true;
            if (!has_root) return {cc0, cc1, 1};
        }
    }
    return {};
}

} // namespace

TEST_CASE("build_extension picks the first irreducible modulus") {
    auto ctx = build_extension(5, 2);
    CHECK(ctx->q() == 25);
    CHECK(ctx->modulus() == first_irreducible_quadratic(5));

    auto ctx7 = build_extension(7, 3);
    CHECK(ctx7->q() == 343);
    // spot-check irreducibility by brute force: no roots in F_7
    const auto& m = ctx7->modulus();
    for (uint64_t t = 0; t < 7; ++t) {
        uint64_t v = (t * t % 7 * t + m[2] * t % 7 * t + m[1] * t + m[0]) % 7;
        CHECK(v != 0);
    }
}

TEST_CASE("build_extension rejections") {
    CHECK_THROWS_AS(build_extension(4, 1), error);
    CHECK_THROWS_AS(build_extension(2, 1), error);
    CHECK_THROWS_AS(build_extension(3, 4), error);
    CHECK_THROWS_AS(build_extension(5, 0), error);
    CHECK_THROWS_AS(build_extension(5, 40), error); // q > 2^62
}

TEST_CASE("prime field arithmetic facts") {
    auto ctx = build_extension(5, 1);
    Fq a = Fq::from_int(ctx, 3), b = Fq::from_int(ctx, 4);
    CHECK(a + b == Fq::from_int(ctx, 2));
    CHECK((a / b) * b == a);
    CHECK_THROWS_AS(a / Fq::zero(ctx), error);
}

TEST_CASE("field axioms and frobenius on random samples") {
    SeededRng rng(42);
    for (auto [p, k] : {std::pair<uint64_t, unsigned>{5, 2}, {7, 3}, {11, 2}}) {
        auto ctx = build_extension(p, k);
        for (int t = 0; t < 1000; ++t) {
            Fq a = Fq::from_counter(ctx, rng.below(ctx->q()));
            Fq b = Fq::from_counter(ctx, rng.below(ctx->q()));
            Fq c = Fq::from_counter(ctx, rng.below(ctx->q()));
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
        }
        // frobenius is an automorphism: (a+b)^p = a^p + b^p, (ab)^p = a^p b^p
        for (int t = 0; t < 200; ++t) {
            Fq a = Fq::from_counter(ctx, rng.below(ctx->q()));
            Fq b = Fq::from_counter(ctx, rng.below(ctx->q()));
            CHECK(frobenius_auto(a + b, 1) == frobenius_auto(a, 1) + frobenius_auto(b, 1));
            CHECK(frobenius_auto(a * b, 1) == frobenius_auto(a, 1) * frobenius_auto(b, 1));
        }
    }
}

TEST_CASE("frobenius powers: identity at e=0 and e=k, p-th root at e=k-1") {
    auto ctx = build_extension(7, 4);
    SeededRng rng(7);
    for (int t = 0; t < 100; ++t) {
        Fq a = Fq::from_counter(ctx, rng.below(ctx->q()));
        CHECK(frobenius_auto(a, 0) == a);
        CHECK(frobenius_auto(a, 4) == a);
        CHECK(frobenius_auto(frobenius_auto(a, 3), 1) == a); // p-th root then p-th power
    }
}

TEST_CASE("mult_order") {
    auto ctx5 = build_extension(5, 1);
    CHECK(mult_order(Fq::one(ctx5)) == 1);
    CHECK(mult_order(Fq::from_int(ctx5, 2)) == 4); // oracle: 2,4,3,1
    CHECK_THROWS_AS(mult_order(Fq::zero(ctx5)), error);

    SeededRng rng(9);
    for (auto [p, k] : {std::pair<uint64_t, unsigned>{5, 2}, {11, 3}}) {
        auto ctx = build_extension(p, k);
        for (int t = 0; t < 50; ++t) {
            Fq a = Fq::from_counter(ctx, 1 + rng.below(ctx->q() - 1));
            uint64_t m = mult_order(a);
            CHECK((ctx->q() - 1) % m == 0); // Lagrange
            CHECK(a.pow(m).is_one());
            // order of powers: ord(a^j) = ord(a)/gcd(j, ord(a))
            uint64_t j = 1 + rng.below(m);
            uint64_t g = std::gcd(j, m);
            CHECK(mult_order(a.pow(j)) == m / g);
        }
    }
}

TEST_CASE("sqrt_in_fq") {
    auto ctx7 = build_extension(7, 1);
    CHECK(*sqrt_in_fq(Fq::zero(ctx7)) == Fq::zero(ctx7));
    CHECK(*sqrt_in_fq(Fq::one(ctx7)) == Fq::one(ctx7)); // 1 has smaller counter than -1 = 6
    CHECK(!sqrt_in_fq(Fq::from_int(ctx7, 3)).has_value()); // squares mod 7 are {0,1,2,4}

    SeededRng rng(1234);
    for (auto [p, k] : {std::pair<uint64_t, unsigned>{7, 2}, {13, 1}, {5, 3}}) {
        auto ctx = build_extension(p, k);
        for (int t = 0; t < 100; ++t) {
            Fq r = Fq::from_counter(ctx, rng.below(ctx->q()));
            auto s = sqrt_in_fq(r * r);
            REQUIRE(s.has_value());
            CHECK((*s == r || *s == -r));
        }
    }
}

TEST_CASE("ctx mismatch is rejected") {
    auto c1 = build_extension(5, 1);
    auto c2 = build_extension(7, 1);
    CHECK_THROWS_AS(Fq::one(c1) + Fq::one(c2), error);
}
