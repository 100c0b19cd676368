#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ribetor/error.hpp"
#include "ribetor/rational.hpp"
#include "ribetor/rng.hpp"

namespace ribetor {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using MatI = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

inline cplx two_pi_i() { return cplx(0.0, 2.0 * M_PI); }

/// tau in the Siegel half space H_d: symmetric (1e-12), Im positive definite (1e-10).
struct SiegelPoint {
    int d;
    MatC tau;

    static SiegelPoint make(const MatC& tau);
    double symmetry_residual() const;
    double min_imag_eigenvalue() const;
};

/// Coordinates (tau, u, v, w) of a point of the mixed-period domain.
struct MixedPeriod {
    SiegelPoint tau;
    Eigen::RowVectorXcd u; // 1 x d
    Eigen::VectorXcd v;    // d x 1
    cplx w;

    static MixedPeriod base(const SiegelPoint& tau); // (tau, 0, 0, 0)
};

/// Element of P(R)^+ U(C) in coordinates (mu, g, x, y, z) with respect to the
/// integral basis 2*pi*i e_0, e_1, ..., e_{2d+1}; g^t J g = mu J within 1e-10, mu > 0.
struct GroupElement {
    int d;
    double mu;
    MatR g;                // 2d x 2d
    Eigen::RowVectorXcd x; // 1 x 2d
    Eigen::VectorXd y;     // 2d x 1
    cplx z;

    static GroupElement identity(int d);
    static GroupElement unipotent(const Eigen::RowVectorXcd& x, const Eigen::VectorXd& y, cplx z);
    static GroupElement gsp(const MatR& g, double mu);

    /// Matrix on the complex basis e_0..e_{2d+1}: [[mu, 2pi i x, 2pi i z],[0,g,y],[0,0,1]].
    MatC complex_matrix() const;
    double similitude_residual() const;
};

GroupElement compose(const GroupElement& a, const GroupElement& b);

/// The (2d+2) x (d+1) period matrix [[u,w],[tau,v],[1,0],[0,1]] whose column span is F^0.
MatC param_embed(const MixedPeriod& mp);

/// Closed-form action of a unipotent group element (g = 1).
MixedPeriod act_unipotent(const GroupElement& p, const MixedPeriod& mp);

/// Closed-form action of a pure symplectic-similitude element (x = y = z = 0);
/// throws singular_automorphy when c*tau + d is numerically singular.
MixedPeriod act_gsp(const GroupElement& p, const MixedPeriod& mp);

/// General action: factor p = unipotent * gsp and compose the closed forms.
MixedPeriod act_full(const GroupElement& p, const MixedPeriod& mp);

/// Oracle path: multiply the complex-basis matrix against the period matrix and
/// re-normalize the column span to the standard shape. Used for the equivariance checks.
MixedPeriod act_via_matrix(const GroupElement& p, const MixedPeriod& mp);

/// Integer-generator closed forms (the lattice actions on (u,v,w)).
MixedPeriod act_center(long long n, const MixedPeriod& mp);                     // w += 2 pi i n
MixedPeriod act_column(const Eigen::VectorXd& m, const MixedPeriod& mp);        // (m1; m2)
MixedPeriod act_row(const Eigen::RowVectorXd& n12, const MixedPeriod& mp);      // 2 pi i (n1 n2)

/// The three generator embeddings of the lattice actions into the group.
GroupElement center_generator(int d, long long n);
GroupElement column_generator(const Eigen::VectorXd& m);
GroupElement row_generator(const Eigen::RowVectorXd& n12);

/// Greedy reduction of (u, v, w) into the fundamental box for the integral Heisenberg
/// action. Lattice coefficients within 1e-9 of integers are snapped exactly.
MixedPeriod normal_form_mod_lattice(const MixedPeriod& mp);

/// Integer 2d x 2d matrix with named blocks and the derived symmetric alpha and the
/// (2d+2)-square tensor [[0,0,-1],[0,alpha,0],[-1,0,0]].
struct IntBlockMatrix {
    int d;
    MatI fz; // 2d x 2d

    static IntBlockMatrix make(const MatI& fz);

    MatI block_a() const; // top-left d x d
    MatI block_b() const;
    MatI block_c() const;
    MatI block_d() const;
    MatI alpha() const { return fz + fz.transpose(); }
    MatI alpha_tilde() const;
};

/// Residual of the Hodge-morphism condition 2 pi i f_C tau^t = A - tau C with
/// f_C = (B - tau D) / 2 pi i.
struct HodgeCheck {
    bool ok;
    double residual;
};
HodgeCheck is_hodge_morphism(const IntBlockMatrix& f, const SiegelPoint& tau, double tol = 1e-10);

/// Dual morphism: ((f_dual)_Z, (f_dual)_C) = (-f_Z^t, (1/2 pi i)(-C^t + tau D^t)).
std::pair<IntBlockMatrix, MatC> dual_blocks(const IntBlockMatrix& f, const SiegelPoint& tau,
                                            double tol = 1e-10);

/// The lattice half of the dual, -f_Z^t; needs no tau (valid whenever Im tau is invertible).
IntBlockMatrix dual_z(const IntBlockMatrix& f);

/// The principal polarization as maps: (lambda_C: v -> 2 pi i v^t as a d x d descriptor,
/// lambda_Z = [[0, 1],[-1, 0]] in d x d blocks).
std::pair<MatC, MatI> polarization_maps(const SiegelPoint& tau);

/// p alpha~ p^t == mu(p) alpha~, exact on integer matrices.
bool stabilizer_check_exact(const MatI& p, const IntBlockMatrix& f);
/// Same over the reals, residual <= 1e-10.
bool stabilizer_check_real(const MatC& p, const IntBlockMatrix& f, double tol = 1e-10);

/// The semidirect-product factors of the alpha~ stabilizer:
/// u(x) = [[1, x, x f x^t],[0, 1, alpha x^t],[0,0,1]] and h(g, mu) block-diagonal.
MatI stabilizer_unipotent_factor(const IntBlockMatrix& f, const Eigen::RowVector<long long, Eigen::Dynamic>& x);
MatI stabilizer_gsp_factor(const IntBlockMatrix& f, const MatI& g, long long mu);

/// Exact rational coordinates of the Ribet section at a rational base point:
/// fiber exponent q = x f x^t (the fiber coordinate is 2 pi i q mod 2 pi i Z) and
/// base column alpha x^t.
struct RibetCoords {
    Rat fiber_exponent;
    std::vector<Rat> base_column;
};
RibetCoords ribet_section_coords(const IntBlockMatrix& f, const SiegelPoint& tau,
                                 const std::vector<Rat>& x, bool check_hodge = true,
                                 double tol = 1e-10);

/// Exact torsion data of r_f(x) in (Q/Z) x (Q^{2d}/Z^{2d}): the order (divides n^2),
/// the order of the base column (m1), and the fiber exponent of n * r_f mod 1.
struct RibetTorsion {
    long long order;
    long long base_order;
    Rat n_times_fiber_exponent; // n * q mod 1
    long long n;                // common denominator of x
};
RibetTorsion ribet_torsion_verify(const IntBlockMatrix& f, const std::vector<Rat>& x);

/// Weight-filtration toy action a -> lambda a + x and the coarse modulus
/// exp(2 pi i a) + exp(-2 pi i a).
cplx dw_toy(double lambda, cplx x, cplx a);
cplx coarse_modulus(cplx a);

/// n * r_f(x) for n = 1..N, reduced to the fundamental box: (fiber fraction in [0,1),
/// base coordinates in [0,1)^{2d}). Diagnostic sampler, no density claim.
struct OrbitSample {
    double fiber;
    std::vector<double> base;
};
std::vector<OrbitSample> orbit_sample(const IntBlockMatrix& f, const Eigen::RowVectorXd& x,
                                      int count);

} // namespace ribetor
