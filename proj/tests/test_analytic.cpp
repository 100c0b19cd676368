#include "doctest.h"

#include "ribetor/analytic.hpp"

using namespace ribetor;

namespace {

SiegelPoint tau_i(int d) { return SiegelPoint::make(MatC::Identity(d, d) * cplx(0, 1)); }

} // namespace

TEST_CASE("SiegelPoint invariants") {
    CHECK_NOTHROW(tau_i(1));
    CHECK_NOTHROW(tau_i(3));
    MatC bad(1, 1);
    bad << cplx(0.5, -1.0); // negative imaginary part
    CHECK_THROWS_AS(SiegelPoint::make(bad), error);
    MatC asym(2, 2);
    asym << cplx(0, 1), cplx(0.5, 0), cplx(-0.5, 0), cplx(0, 1);
    CHECK_THROWS_AS(SiegelPoint::make(asym), error);
}

TEST_CASE("param_embed: base lift shape, rank, e0 avoidance") {
    for (int d : {1, 2, 3}) {
        auto mp = MixedPeriod::base(tau_i(d));
        MatC M = param_embed(mp);
        CHECK(M.rows() == 2 * d + 2);
        CHECK(M.cols() == d + 1);
        // the split lift: u, v, w all zero
        CHECK(M.block(0, 0, 1, d).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(M(0, d)) == 0.0);
        Eigen::ColPivHouseholderQR<MatC> qr(M);
        qr.setThreshold(1e-10);
        CHECK(qr.rank() == d + 1);
        // F^0 meets the e_0 line trivially: stacking e_0 raises the rank
        MatC S(2 * d + 2, d + 2);
        S.leftCols(d + 1) = M;
        S.col(d + 1).setZero();
        S(0, d + 1) = 1.0;
        Eigen::ColPivHouseholderQR<MatC> qr2(S);
        qr2.setThreshold(1e-10);
        CHECK(qr2.rank() == d + 2);
    }
}

TEST_CASE("unipotent action: identity and the known center/row/column translations") {
    SeededRng rng(5);
    auto mp = MixedPeriod::base(tau_i(2));
    mp.u << cplx(0.3, 0.1), cplx(-0.2, 0.4);
    mp.v << cplx(0.1, -0.7), cplx(0.9, 0.2);
    mp.w = cplx(0.25, -0.5);

    auto id = GroupElement::identity(2);
    auto out = act_unipotent(id, mp);
    CHECK((out.u - mp.u).cwiseAbs().maxCoeff() == 0.0);
    CHECK((out.v - mp.v).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(out.w - mp.w) == 0.0);

    // 2 pi i n shifts w only
    auto c = act_center(3, mp);
    CHECK(std::abs(c.w - (mp.w + two_pi_i() * 3.0)) < 1e-14);
    CHECK((c.u - mp.u).cwiseAbs().maxCoeff() == 0.0);

    // column translation: v += m1 - tau m2, w -= u m2
    Eigen::VectorXd m(4);
    m << 1, -2, 0, 3;
    auto cc = act_column(m, mp);
    Eigen::VectorXcd expect_v =
        mp.v + m.head(2).cast<cplx>() - mp.tau.tau * m.tail(2).cast<cplx>();
    CHECK((cc.v - expect_v).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(cc.w - (mp.w - (mp.u * m.tail(2).cast<cplx>())(0))) < 1e-14);

    // row translation: u += 2 pi i (n1 tau + n2), w += 2 pi i n1 v
    Eigen::RowVectorXd n12(4);
    n12 << 2, 0, -1, 1;
    auto rr = act_row(n12, mp);
    Eigen::RowVectorXcd eu = mp.u + two_pi_i() * (n12.head(2).cast<cplx>() * mp.tau.tau) +
                             two_pi_i() * n12.tail(2).cast<cplx>();
    CHECK((rr.u - eu).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(rr.w - (mp.w + two_pi_i() * (n12.head(2).cast<cplx>() * mp.v)(0))) < 1e-14);
    (void)rng;
}

TEST_CASE("gsp action: identity and the d=1 inversion") {
    auto mp = MixedPeriod::base(tau_i(1));
    mp.u << cplx(0.2, 0.3);
    mp.v << cplx(-0.4, 0.1);
    mp.w = cplx(0.6, 0.0);

    auto out = act_gsp(GroupElement::identity(1), mp);
    CHECK((out.u - mp.u).cwiseAbs().maxCoeff() < 1e-14);

    MatR g(2, 2);
    g << 0, -1, 1, 0;
    auto inv = act_gsp(GroupElement::gsp(g, 1.0), MixedPeriod::base(SiegelPoint::make(
                                                      MatC::Identity(1, 1) * cplx(0.5, 2.0))));
    cplx tau0(0.5, 2.0);
    CHECK(std::abs(inv.tau.tau(0, 0) - (-1.0 / tau0)) < 1e-12);

    // singular automorphy surfaces
    auto mpi = MixedPeriod::base(tau_i(1));
    MatR gs(2, 2);
    gs << 0, -1, 1, 0;
    // c tau + d = i, fine; force singularity with tau = i and g = [[1,0],[i...]] impossible
    // over the reals, so instead check the action keeps H_d
    auto moved = act_gsp(GroupElement::gsp(gs, 1.0), mpi);
    CHECK(moved.tau.min_imag_eigenvalue() > 1e-10);
}

TEST_CASE("normal_form_mod_lattice: reduced points are fixed, torsion sanity") {
    auto mp = MixedPeriod::base(tau_i(2));
    mp.u << cplx(0.0, 0.5), cplx(0.0, 0.25); // small coefficients already in the box
    mp.v << cplx(0.25, 0.25), cplx(0.5, 0.125);
    mp.w = cplx(0.0, 1.0);
    auto red = normal_form_mod_lattice(mp);
    auto red2 = normal_form_mod_lattice(red);
    CHECK((red.v - red2.v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((red.u - red2.u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(red.w - red2.w) < 1e-12);

    // v = (1 -tau) m reduces to zero for integral m
    Eigen::VectorXd m(4);
    m << 2, -1, 3, 1;
    MixedPeriod t = MixedPeriod::base(tau_i(2));
    t.v = m.head(2).cast<cplx>() - t.tau.tau * m.tail(2).cast<cplx>();
    auto tr = normal_form_mod_lattice(t);
    CHECK(tr.v.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("is_hodge_morphism: the tau = i family and its failure off the locus") {
    auto ti = tau_i(1);
    for (long long A = -2; A <= 2; ++A) {
        for (long long B = -2; B <= 2; ++B) {
            MatI fz(2, 2);
            fz << A, B, -B, A;
            auto hc = is_hodge_morphism(IntBlockMatrix::make(fz), ti);
            CHECK(hc.ok);
            CHECK(hc.residual < 1e-12);
        }
    }
    // same f_Z away from tau = i: fails unless f = 0
    auto off = SiegelPoint::make(MatC::Identity(1, 1) * cplx(0.1, 1.0));
    MatI fz(2, 2);
    fz << 1, 1, -1, 1;
    CHECK(!is_hodge_morphism(IntBlockMatrix::make(fz), off).ok);
    MatI zero = MatI::Zero(2, 2);
    CHECK(is_hodge_morphism(IntBlockMatrix::make(zero), off).ok);
}

TEST_CASE("dual_blocks: printed example and involution") {
    MatI fz(2, 2);
    fz << 0, 1, 0, 0;
    auto fd = dual_z(IntBlockMatrix::make(fz));
    MatI expect(2, 2);
    expect << 0, 0, -1, 0;
    CHECK((fd.fz - expect).cwiseAbs().maxCoeff() == 0);
    CHECK((dual_z(fd).fz - fz).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("ribet_section_coords: unit section, worked example, antisymmetric collapse") {
    auto ti = tau_i(1);
    // [[1,0],[0,0]] is lattice data only (not a Hodge morphism at tau = i), so the
    // exact-rational evaluations run with the morphism check suppressed
    MatI fz(2, 2);
    fz << 1, 0, 0, 0;
    auto f = IntBlockMatrix::make(fz);
    CHECK_THROWS_AS(ribet_section_coords(f, ti, {Rat(0), Rat(0)}), error);

    auto zero = ribet_section_coords(f, ti, {Rat(0), Rat(0)}, /*check_hodge=*/false);
    CHECK(zero.fiber_exponent.is_zero());
    for (const auto& c : zero.base_column) CHECK(c.is_zero());

    auto worked = ribet_section_coords(f, ti, {Rat(1, 2), Rat(0)}, /*check_hodge=*/false);
    CHECK(worked.fiber_exponent == Rat(1, 4));
    CHECK(worked.base_column[0] == Rat(1));
    CHECK(worked.base_column[1] == Rat(0));

    // a genuine Hodge morphism at tau = i passes the checked path
    MatI good(2, 2);
    good << 2, 1, -1, 2;
    auto checked = ribet_section_coords(IntBlockMatrix::make(good), ti, {Rat(1, 3), Rat(0)});
    CHECK(checked.fiber_exponent == Rat(2, 9));

    MatI anti(2, 2);
    anti << 0, 3, -3, 0;
    auto collapsed = ribet_section_coords(IntBlockMatrix::make(anti), ti, {Rat(1, 3), Rat(2, 5)},
                                          /*check_hodge=*/false);
    CHECK(collapsed.fiber_exponent.is_zero());
    for (const auto& c : collapsed.base_column) CHECK(c.is_zero());
}

TEST_CASE("ribet_torsion_verify: worked example and integral points") {
    MatI fz(2, 2);
    fz << 1, 0, 0, 0;
    auto f = IntBlockMatrix::make(fz);
    auto t = ribet_torsion_verify(f, {Rat(1, 2), Rat(0)});
    CHECK(t.order == 4);
    CHECK(t.n == 2);
    CHECK(t.base_order == 1);
    CHECK(t.n_times_fiber_exponent == Rat(1, 2));

    auto ti = ribet_torsion_verify(f, {Rat(3), Rat(-2)});
    CHECK(ti.order == 1);
    CHECK(ti.n == 1);
}

TEST_CASE("dw_toy and coarse modulus") {
    CHECK(dw_toy(1.0, 0.0, cplx(0.4, 0.2)) == cplx(0.4, 0.2));
    CHECK(dw_toy(2.0, cplx(1, 0), cplx(0.5, 0)) == cplx(2.0, 0.0));
    CHECK_THROWS_AS(dw_toy(0.0, 0.0, 0.0), error);
    cplx a(0.3, 0.8);
    CHECK(std::abs(coarse_modulus(a + 1.0) - coarse_modulus(a)) < 1e-12);
    CHECK(std::abs(coarse_modulus(-a) - coarse_modulus(a)) < 1e-12);
}

TEST_CASE("orbit_sample: length, base point, rational periodicity") {
    MatI fz(2, 2);
    fz << 1, 1, 0, 1;
    auto f = IntBlockMatrix::make(fz);

    Eigen::RowVectorXd zero(2);
    zero << 0, 0;
    auto s0 = orbit_sample(f, zero, 7);
    CHECK(s0.size() == 7);
    for (const auto& s : s0) {
        CHECK(s.fiber == 0.0);
        for (double b : s.base) CHECK(b == 0.0);
    }

    // rational base point: the sequence is periodic with period dividing n^2
    // (circle distance: float reduction can land on either side of the box boundary)
    auto circ = [](double a, double b) {
        double d = std::abs(a - b);
        return std::min(d, 1.0 - d);
    };
    Eigen::RowVectorXd x(2);
    x << 1.0 / 3.0, 2.0 / 3.0;
    auto s = orbit_sample(f, x, 20);
    for (int m = 0; m + 9 < 20; ++m) {
        CHECK(circ(s[m].fiber, s[m + 9].fiber) < 1e-9);
        for (size_t i = 0; i < s[m].base.size(); ++i)
            CHECK(circ(s[m].base[i], s[m + 9].base[i]) < 1e-9);
    }
}

TEST_CASE("stabilizer factors satisfy the defining identity; wrong z fails") {
    MatI fz(2, 2);
    fz << 1, 2, 0, 1;
    auto f = IntBlockMatrix::make(fz);
    Eigen::RowVector<long long, Eigen::Dynamic> x(2);
    x << 2, -3;
    MatI u = stabilizer_unipotent_factor(f, x);
    CHECK(stabilizer_check_exact(u, f));
    CHECK(stabilizer_check_exact(MatI::Identity(4, 4), f));
    MatI bad = u;
    bad(0, 3) += 1;
    CHECK(!stabilizer_check_exact(bad, f));
}
