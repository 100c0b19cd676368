#include <benchmark/benchmark.h>

#include "ribetor/analytic.hpp"
#include "ribetor/genjac.hpp"
#include "ribetor/weil.hpp"

using namespace ribetor;

static void FieldMul(benchmark::State& state) {
    auto ctx = build_extension(53, (unsigned)state.range(0));
    SeededRng rng(1);
    Fq a = Fq::from_counter(ctx, rng.below(ctx->q()));
    Fq b = Fq::from_counter(ctx, rng.below(ctx->q()));
    for (auto _ : state) {
        a = a * b + b;
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(FieldMul)->Arg(1)->Arg(4)->Arg(8);

static void FieldInverse(benchmark::State& state) {
    auto ctx = build_extension(53, (unsigned)state.range(0));
    SeededRng rng(2);
    Fq a = Fq::from_counter(ctx, 1 + rng.below(ctx->q() - 1));
    for (auto _ : state) {
        a = a.inverse() + Fq::one(ctx);
        if (a.is_zero()) a = Fq::from_counter(ctx, 2);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(FieldInverse)->Arg(1)->Arg(4)->Arg(8);

static void PointScalarMul(benchmark::State& state) {
    auto E = Curve::create(53, 2, 1);
    auto ctx = build_extension(53, (unsigned)state.range(0));
    SeededRng rng(3);
    Point P = random_point(E, ctx, rng);
    uint64_t m = E->order_over_extension((unsigned)state.range(0)) / 7 + 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scalar_mul_u(m, P));
    }
}
BENCHMARK(PointScalarMul)->Arg(1)->Arg(4)->Arg(8);

static void MillerEval(benchmark::State& state) {
    auto E = Curve::create(53, 2, 1);
    uint64_t n = (uint64_t)state.range(0);
    auto tp = torsion_point(E, n, SeededRng(4));
    SeededRng rng(5);
    Point Q = random_point(E, tp.field, rng);
    while (Q.is_infinity() || Q == tp.P) Q = random_point(E, tp.field, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(miller_eval(n, tp.P, Q));
    }
}
BENCHMARK(MillerEval)->Arg(5)->Arg(9);

static void WeilPairing(benchmark::State& state) {
    auto E = Curve::create(53, 2, 1);
    uint64_t n = (uint64_t)state.range(0);
    auto basis = torsion_basis(E, n, SeededRng(6));
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(weil_en_divisor(n, basis.P, basis.Q, seed++));
    }
}
BENCHMARK(WeilPairing)->Arg(3)->Arg(7);

static void GjAdd(benchmark::State& state) {
    auto E = Curve::create(53, 2, 1);
    auto ctx = E->base_field();
    SeededRng rng(7);
    Point x = random_point(E, ctx, rng);
    while (x.is_infinity() || point_add(x, x).is_infinity()) x = random_point(E, ctx, rng);
    auto gctx = GenJacCtx::create(E, ctx, x, rng.fork(1));
    Point A = random_point(E, ctx, rng);
    while (A.is_infinity() || A == x || A == gctx->x2() || A == point_neg(x) ||
           A == point_neg(gctx->x2()))
        A = random_point(E, ctx, rng);
    Divisor D;
    divisor_accumulate(D, A, 1);
    divisor_accumulate(D, Point::infinity(E, ctx), -1);
    GjElem a = gj_from_divisor(gctx, D);
    GjElem acc = gj_zero(gctx);
    for (auto _ : state) {
        try {
            acc = gj_add(acc, a);
        } catch (const error&) {
            acc = gj_zero(gctx); // rare auxiliary collision; restart the walk
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(GjAdd);

static void RibetTimesN(benchmark::State& state) {
    auto E = Curve::create(53, 2, 1);
    Endo pi = endo_make(0, 1, Generator::make(GenKind::frobenius, E));
    uint64_t n = (uint64_t)state.range(0);
    auto pts = collect_torsion_points(E, n, 4, SeededRng(8));
    auto gctx = GenJacCtx::create(E, pts[0].field(), pts[0], SeededRng(9));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ribet_times_n(gctx, pi, n));
    }
}
BENCHMARK(RibetTimesN)->Arg(5)->Arg(9);

static void AnalyticGspAction(benchmark::State& state) {
    int d = (int)state.range(0);
    auto tau = SiegelPoint::make(MatC::Identity(d, d) * cplx(0, 1));
    auto mp = MixedPeriod::base(tau);
    mp.u.setConstant(cplx(0.3, 0.2));
    mp.v.setConstant(cplx(-0.1, 0.4));
    mp.w = cplx(0.7, -0.3);
    MatR g = MatR::Zero(2 * d, 2 * d);
    g.block(0, d, d, d) = -MatR::Identity(d, d);
    g.block(d, 0, d, d) = MatR::Identity(d, d);
    auto p = GroupElement::gsp(g, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(act_gsp(p, mp));
    }
}
BENCHMARK(AnalyticGspAction)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
