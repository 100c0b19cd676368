#include "ribetor/analytic.hpp"

#include <cmath>

namespace ribetor {

namespace {

MatR symplectic_form(int d) {
    MatR J = MatR::Zero(2 * d, 2 * d);
    J.block(0, d, d, d) = -MatR::Identity(d, d);
    J.block(d, 0, d, d) = MatR::Identity(d, d);
    return J;
}

} // namespace

SiegelPoint SiegelPoint::make(const MatC& tau) {
    if (tau.rows() != tau.cols() || tau.rows() < 1)
        raise(errc::config_error, "tau must be square");
    SiegelPoint s{(int)tau.rows(), tau};
    if (s.symmetry_residual() > 1e-12) raise(errc::config_error, "tau not symmetric");
    if (s.min_imag_eigenvalue() <= 1e-10) raise(errc::config_error, "Im(tau) not positive definite");
    return s;
}

double SiegelPoint::symmetry_residual() const {
    return (tau - tau.transpose()).cwiseAbs().maxCoeff();
}

double SiegelPoint::min_imag_eigenvalue() const {
    MatR im = tau.imag();
    Eigen::SelfAdjointEigenSolver<MatR> es((im + im.transpose()) / 2.0);
    return es.eigenvalues().minCoeff();
}

MixedPeriod MixedPeriod::base(const SiegelPoint& tau) {
    MixedPeriod mp;
    mp.tau = tau;
    mp.u = Eigen::RowVectorXcd::Zero(tau.d);
    mp.v = Eigen::VectorXcd::Zero(tau.d);
    mp.w = 0.0;
    return mp;
}

GroupElement GroupElement::identity(int d) {
    GroupElement p;
    p.d = d;
    p.mu = 1.0;
    p.g = MatR::Identity(2 * d, 2 * d);
    p.x = Eigen::RowVectorXcd::Zero(2 * d);
    p.y = Eigen::VectorXd::Zero(2 * d);
    p.z = 0.0;
    return p;
}

GroupElement GroupElement::unipotent(const Eigen::RowVectorXcd& x, const Eigen::VectorXd& y,
                                     cplx z) {
    if (x.size() != y.size() || x.size() % 2 != 0) raise(errc::config_error, "unipotent shape");
    GroupElement p = identity((int)x.size() / 2);
    p.x = x;
    p.y = y;
    p.z = z;
    return p;
}

GroupElement GroupElement::gsp(const MatR& g, double mu) {
    if (g.rows() != g.cols() || g.rows() % 2 != 0) raise(errc::config_error, "gsp shape");
    GroupElement p = identity((int)g.rows() / 2);
    p.g = g;
    p.mu = mu;
    if (mu <= 0) raise(errc::config_error, "mu must be positive on the connected component");
    if (p.similitude_residual() > 1e-10) raise(errc::config_error, "g is not a similitude of Psi");
    return p;
}

double GroupElement::similitude_residual() const {
    MatR J = symplectic_form(d);
    return (g.transpose() * J * g - mu * J).cwiseAbs().maxCoeff();
}

MatC GroupElement::complex_matrix() const {
    int n = 2 * d + 2;
    MatC M = MatC::Zero(n, n);
    M(0, 0) = mu;
    M.block(0, 1, 1, 2 * d) = two_pi_i() * x;
    M(0, n - 1) = two_pi_i() * z;
    M.block(1, 1, 2 * d, 2 * d) = g.cast<cplx>();
    M.block(1, n - 1, 2 * d, 1) = y.cast<cplx>();
    M(n - 1, n - 1) = 1.0;
    return M;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
    if (a.d != b.d) raise(errc::config_error, "group elements of different rank");
    // multiply in the integral-basis representation [[mu, x, z],[0,g,y],[0,0,1]]
    GroupElement r;
    r.d = a.d;
    r.mu = a.mu * b.mu;
    r.g = a.g * b.g;
    r.x = a.mu * b.x + a.x * b.g.cast<cplx>();
    r.y = a.g * b.y + a.y;
    r.z = a.mu * b.z + (a.x * b.y.cast<cplx>())(0) + a.z;
    return r;
}

MatC param_embed(const MixedPeriod& mp) {
    int d = mp.tau.d;
    MatC M = MatC::Zero(2 * d + 2, d + 1);
    M.block(0, 0, 1, d) = mp.u;
    M(0, d) = mp.w;
    M.block(1, 0, d, d) = mp.tau.tau;
    M.block(1, d, d, 1) = mp.v;
    M.block(d + 1, 0, d, d) = MatC::Identity(d, d);
    M(2 * d + 1, d) = 1.0;
    return M;
}

MixedPeriod act_unipotent(const GroupElement& p, const MixedPeriod& mp) {
    int d = mp.tau.d;
    if (p.d != d) raise(errc::config_error, "rank mismatch");
    if ((p.g - MatR::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff() > 0 || p.mu != 1.0)
        raise(errc::config_error, "act_unipotent needs g = 1");
    Eigen::RowVectorXcd x1 = p.x.head(d), x2 = p.x.tail(d);
    Eigen::VectorXcd y1 = p.y.head(d).cast<cplx>(), y2 = p.y.tail(d).cast<cplx>();
    MixedPeriod out = mp;
    Eigen::RowVectorXcd u_new = mp.u + two_pi_i() * (x1 * mp.tau.tau) + two_pi_i() * x2;
    out.u = u_new;
    out.v = mp.v + y1 - mp.tau.tau * y2;
    out.w = mp.w + two_pi_i() * (x1 * mp.v)(0) + two_pi_i() * p.z - (u_new * y2)(0);
    return out;
}

MixedPeriod act_gsp(const GroupElement& p, const MixedPeriod& mp) {
    int d = mp.tau.d;
    if (p.d != d) raise(errc::config_error, "rank mismatch");
    MatC a = p.g.topLeftCorner(d, d).cast<cplx>();
    MatC b = p.g.topRightCorner(d, d).cast<cplx>();
    MatC c = p.g.bottomLeftCorner(d, d).cast<cplx>();
    MatC dd = p.g.bottomRightCorner(d, d).cast<cplx>();
    MatC ctd = c * mp.tau.tau + dd;
    if (std::abs(ctd.determinant()) <= 1e-10) raise(errc::singular_automorphy, "c tau + d singular");
    MatC inv = ctd.inverse();
    MixedPeriod out;
    MatC tau_new = (a * mp.tau.tau + b) * inv;
    // tau' is symmetric analytically; kill the inversion roundoff before the invariant check
    if ((tau_new - tau_new.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        raise(errc::singular_automorphy, "transformed tau lost symmetry");
    out.tau = SiegelPoint::make((tau_new + tau_new.transpose()) / 2.0);
    out.u = p.mu * mp.u * inv;
    out.v = a * mp.v - (a * mp.tau.tau + b) * inv * (c * mp.v);
    out.w = p.mu * mp.w - (p.mu * mp.u * inv * (c * mp.v))(0);
    return out;
}

MixedPeriod act_full(const GroupElement& p, const MixedPeriod& mp) {
    // p = u(x g^{-1}, y, z) * h(g, mu)
    GroupElement h = GroupElement::gsp(p.g, p.mu);
    Eigen::RowVectorXcd xh = p.x * p.g.inverse().cast<cplx>();
    GroupElement u = GroupElement::unipotent(xh, p.y, p.z);
    return act_unipotent(u, act_gsp(h, mp));
}

MixedPeriod act_via_matrix(const GroupElement& p, const MixedPeriod& mp) {
    int d = mp.tau.d;
    MatC M = p.complex_matrix() * param_embed(mp);
    // re-normalize the span to [[u,w],[tau,v],[1,0],[0,1]]
    MatC R = M.block(d + 1, 0, d, d);
    MatC s = M.block(d + 1, d, d, 1);
    cplx bottom = M(2 * d + 1, d);
    if (std::abs(R.determinant()) <= 1e-12 || std::abs(bottom) <= 1e-12)
        raise(errc::singular_automorphy, "period matrix left the parametrized chart");
    MatC T = MatC::Zero(d + 1, d + 1);
    T.topLeftCorner(d, d) = R.inverse();
    T.block(0, d, d, 1) = -R.inverse() * s / bottom;
    T(d, d) = 1.0 / bottom;
    MatC N = M * T;
    MixedPeriod out;
    MatC tau_new = N.block(1, 0, d, d);
    if ((tau_new - tau_new.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        raise(errc::singular_automorphy, "transformed tau lost symmetry");
    out.tau = SiegelPoint::make((tau_new + tau_new.transpose()) / 2.0);
    out.u = N.block(0, 0, 1, d);
    out.v = N.block(1, d, d, 1);
    out.w = N(0, d);
    return out;
}

MixedPeriod act_center(long long n, const MixedPeriod& mp) {
    MixedPeriod out = mp;
    out.w = mp.w + two_pi_i() * (double)n;
    return out;
}

MixedPeriod act_column(const Eigen::VectorXd& m, const MixedPeriod& mp) {
    int d = mp.tau.d;
    if (m.size() != 2 * d) raise(errc::config_error, "column generator shape");
    Eigen::VectorXcd m1 = m.head(d).cast<cplx>(), m2 = m.tail(d).cast<cplx>();
    MixedPeriod out = mp;
    out.v = mp.v + m1 - mp.tau.tau * m2;
    out.w = mp.w - (mp.u * m2)(0);
    return out;
}

MixedPeriod act_row(const Eigen::RowVectorXd& n12, const MixedPeriod& mp) {
    int d = mp.tau.d;
    if (n12.size() != 2 * d) raise(errc::config_error, "row generator shape");
    Eigen::RowVectorXcd n1 = n12.head(d).cast<cplx>(), n2 = n12.tail(d).cast<cplx>();
    MixedPeriod out = mp;
    out.u = mp.u + two_pi_i() * (n1 * mp.tau.tau) + two_pi_i() * n2;
    out.w = mp.w + two_pi_i() * (n1 * mp.v)(0);
    return out;
}

GroupElement center_generator(int d, long long n) {
    GroupElement p = GroupElement::identity(d);
    p.z = (double)n;
    return p;
}

GroupElement column_generator(const Eigen::VectorXd& m) {
    return GroupElement::unipotent(Eigen::RowVectorXcd::Zero(m.size()), m, 0.0);
}

GroupElement row_generator(const Eigen::RowVectorXd& n12) {
    return GroupElement::unipotent(n12.cast<cplx>(), Eigen::VectorXd::Zero(n12.size()), 0.0);
}

namespace {

double snap(double t) {
    double r = std::round(t);
    return (std::abs(t - r) < 1e-9) ? r : t;
}

} // namespace

MixedPeriod normal_form_mod_lattice(const MixedPeriod& mp) {
    int d = mp.tau.d;
    const MatC& tau = mp.tau.tau;
    MatR im_inv = mp.tau.tau.imag().inverse();
    MixedPeriod cur = mp;

    // v mod (1 -tau) Z^{2d}: v = a + tau b, push a, b into [0,1)
    {
        Eigen::VectorXd b = im_inv * cur.v.imag();
        Eigen::VectorXd a = cur.v.real() - tau.real() * b;
        Eigen::VectorXd m(2 * d);
        for (int i = 0; i < d; ++i) {
            m(i) = -std::floor(snap(a(i)));
            m(d + i) = std::floor(snap(b(i))); // v += m1 - tau m2
        }
        cur = act_column(m, cur);
    }
    // u mod 2 pi i Z^{2d} (tau; 1): u = 2 pi i (n1 tau + n2)
    {
        Eigen::RowVectorXcd coeff = cur.u / two_pi_i();
        Eigen::RowVectorXd n1 = coeff.imag() * im_inv;
        Eigen::RowVectorXd n2 = coeff.real() - n1 * tau.real();
        Eigen::RowVectorXd n(2 * d);
        for (int i = 0; i < d; ++i) {
            n(i) = -std::floor(snap(n1(i)));
            n(d + i) = -std::floor(snap(n2(i)));
        }
        cur = act_row(n, cur);
    }
    // w mod 2 pi i Z
    {
        double frac = (cur.w / two_pi_i()).real();
        cur = act_center(-(long long)std::floor(snap(frac)), cur);
    }
    return cur;
}

IntBlockMatrix IntBlockMatrix::make(const MatI& fz) {
    if (fz.rows() != fz.cols() || fz.rows() % 2 != 0 || fz.rows() < 2)
        raise(errc::config_error, "f_Z must be 2d x 2d");
    return IntBlockMatrix{(int)fz.rows() / 2, fz};
}

MatI IntBlockMatrix::block_a() const { return fz.topLeftCorner(d, d); }
MatI IntBlockMatrix::block_b() const { return fz.topRightCorner(d, d); }
MatI IntBlockMatrix::block_c() const { return fz.bottomLeftCorner(d, d); }
MatI IntBlockMatrix::block_d() const { return fz.bottomRightCorner(d, d); }

MatI IntBlockMatrix::alpha_tilde() const {
    MatI t = MatI::Zero(2 * d + 2, 2 * d + 2);
    t(0, 2 * d + 1) = -1;
    t(2 * d + 1, 0) = -1;
    t.block(1, 1, 2 * d, 2 * d) = alpha();
    return t;
}

HodgeCheck is_hodge_morphism(const IntBlockMatrix& f, const SiegelPoint& tau, double tol) {
    if (f.d != tau.d) raise(errc::config_error, "dimension mismatch");
    MatC A = f.block_a().cast<double>().cast<cplx>();
    MatC B = f.block_b().cast<double>().cast<cplx>();
    MatC C = f.block_c().cast<double>().cast<cplx>();
    MatC D = f.block_d().cast<double>().cast<cplx>();
    MatC fc = (B - tau.tau * D) / two_pi_i();
    double residual = (two_pi_i() * fc * tau.tau.transpose() - (A - tau.tau * C)).cwiseAbs().maxCoeff();
    return HodgeCheck{residual <= tol, residual};
}

std::pair<IntBlockMatrix, MatC> dual_blocks(const IntBlockMatrix& f, const SiegelPoint& tau,
                                            double tol) {
    auto hc = is_hodge_morphism(f, tau, tol);
    if (!hc.ok)
        raise(errc::not_a_morphism,
              "f is not a Hodge morphism at tau (residual " + std::to_string(hc.residual) + ")");
    MatC C = f.block_c().cast<double>().cast<cplx>();
    MatC D = f.block_d().cast<double>().cast<cplx>();
    MatC dc = (-C.transpose() + tau.tau * D.transpose()) / two_pi_i();
    return {dual_z(f), dc};
}

IntBlockMatrix dual_z(const IntBlockMatrix& f) {
    MatI dz = -f.fz.transpose();
    return IntBlockMatrix::make(dz);
}

std::pair<MatC, MatI> polarization_maps(const SiegelPoint& tau) {
    int d = tau.d;
    MatC lc = two_pi_i() * MatC::Identity(d, d); // v -> 2 pi i v^t
    MatI lz = MatI::Zero(2 * d, 2 * d);
    lz.block(0, d, d, d) = MatI::Identity(d, d);
    lz.block(d, 0, d, d) = -MatI::Identity(d, d);
    // antisymmetry and self-duality are structural; assert them here
    if ((lz + lz.transpose()).cwiseAbs().maxCoeff() != 0)
        raise(errc::internal, "polarization matrix not antisymmetric");
    if (((-lz.transpose()) - lz).cwiseAbs().maxCoeff() != 0)
        raise(errc::internal, "polarization not self-dual");
    return {lc, lz};
}

bool stabilizer_check_exact(const MatI& p, const IntBlockMatrix& f) {
    if (p.rows() != 2 * f.d + 2 || p.cols() != p.rows())
        raise(errc::config_error, "stabilizer_check: p must be (2d+2) square");
    long long mu = p(0, 0);
    MatI lhs = p * f.alpha_tilde() * p.transpose();
    MatI rhs = mu * f.alpha_tilde();
    return (lhs - rhs).cwiseAbs().maxCoeff() == 0;
}

bool stabilizer_check_real(const MatC& p, const IntBlockMatrix& f, double tol) {
    if (p.rows() != 2 * f.d + 2 || p.cols() != p.rows())
        raise(errc::config_error, "stabilizer_check: p must be (2d+2) square");
    cplx mu = p(0, 0);
    MatC at = f.alpha_tilde().cast<double>().cast<cplx>();
    return ((p * at * p.transpose()) - mu * at).cwiseAbs().maxCoeff() <= tol;
}

MatI stabilizer_unipotent_factor(const IntBlockMatrix& f,
                                 const Eigen::RowVector<long long, Eigen::Dynamic>& x) {
    int d = f.d;
    if (x.size() != 2 * d) raise(errc::config_error, "x must have 2d entries");
    MatI p = MatI::Identity(2 * d + 2, 2 * d + 2);
    p.block(0, 1, 1, 2 * d) = x;
    p(0, 2 * d + 1) = (x * f.fz * x.transpose())(0);
    p.block(1, 2 * d + 1, 2 * d, 1) = f.alpha() * x.transpose();
    return p;
}

MatI stabilizer_gsp_factor(const IntBlockMatrix& f, const MatI& g, long long mu) {
    int d = f.d;
    if (g.rows() != 2 * d || g.cols() != 2 * d) raise(errc::config_error, "g must be 2d x 2d");
    MatI p = MatI::Zero(2 * d + 2, 2 * d + 2);
    p(0, 0) = mu;
    p.block(1, 1, 2 * d, 2 * d) = g;
    p(2 * d + 1, 2 * d + 1) = 1;
    return p;
}

namespace {

RibetCoords ribet_coords_lattice(const IntBlockMatrix& f, const std::vector<Rat>& x) {
    if ((int)x.size() != 2 * f.d) raise(errc::config_error, "x must have 2d entries");
    RibetCoords out;
    Rat q(0);
    for (int i = 0; i < 2 * f.d; ++i)
        for (int j = 0; j < 2 * f.d; ++j) q += x[i] * Rat(f.fz(i, j)) * x[j];
    out.fiber_exponent = q;
    MatI a = f.alpha();
    for (int i = 0; i < 2 * f.d; ++i) {
        Rat s(0);
        for (int j = 0; j < 2 * f.d; ++j) s += Rat(a(i, j)) * x[j];
        out.base_column.push_back(s);
    }
    return out;
}

} // namespace

RibetCoords ribet_section_coords(const IntBlockMatrix& f, const SiegelPoint& tau,
                                 const std::vector<Rat>& x, bool check_hodge, double tol) {
    if (check_hodge) {
        auto hc = is_hodge_morphism(f, tau, tol);
        if (!hc.ok)
            raise(errc::not_a_morphism,
                  "f is not a Hodge morphism at tau (residual " + std::to_string(hc.residual) + ")");
    }
    return ribet_coords_lattice(f, x);
}

RibetTorsion ribet_torsion_verify(const IntBlockMatrix& f, const std::vector<Rat>& x) {
    if ((int)x.size() != 2 * f.d) raise(errc::config_error, "x must have 2d entries");
    long long n = 1;
    for (const auto& xi : x) n = lcm_ll(n == 0 ? 1 : n, xi.den());
    if (n <= 0) n = 1;

    // coordinates of r_f(x) in (Q/Z) x (Q^{2d}/Z^{2d}); the group law is componentwise
    auto coords = ribet_coords_lattice(f, x);
    long long base_order = 1;
    for (const auto& c : coords.base_column) base_order = lcm_ll(base_order, c.mod1().order_mod1());
    long long fiber_order = coords.fiber_exponent.mod1().order_mod1();
    long long order = lcm_ll(base_order, fiber_order);
    if (((__int128)n * n) % order != 0) raise(errc::internal, "order does not divide n^2");

    RibetTorsion out;
    out.order = order;
    out.base_order = base_order;
    out.n_times_fiber_exponent = (Rat(n) * coords.fiber_exponent).mod1();
    out.n = n;
    return out;
}

cplx dw_toy(double lambda, cplx x, cplx a) {
    if (lambda == 0.0) raise(errc::config_error, "lambda must be nonzero");
    return lambda * a + x;
}

cplx coarse_modulus(cplx a) {
    return std::exp(two_pi_i() * a) + std::exp(-two_pi_i() * a);
}

std::vector<OrbitSample> orbit_sample(const IntBlockMatrix& f, const Eigen::RowVectorXd& x,
                                      int count) {
    if (x.size() != 2 * f.d) raise(errc::config_error, "x must have 2d entries");
    std::vector<OrbitSample> out;
    double q = (x * f.fz.cast<double>() * x.transpose())(0);
    Eigen::VectorXd col = f.alpha().cast<double>() * x.transpose();
    auto frac = [](double t) { return t - std::floor(t); };
    for (int m = 1; m <= count; ++m) {
        OrbitSample s;
        s.fiber = frac(m * q);
        for (int i = 0; i < col.size(); ++i) s.base.push_back(frac(m * col(i)));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace ribetor
