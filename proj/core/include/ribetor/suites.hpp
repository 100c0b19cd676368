#pragma once

#include "ribetor/analytic.hpp"
#include "ribetor/genjac.hpp"
#include "ribetor/report.hpp"

namespace ribetor {

/// A verification curve with its distinguished endomorphism.
struct TestCurve {
    CurvePtr E;
    Endo phi;
    std::string label;
};

/// Deterministic first-match scans over small parameters. These are the three curves the
/// verification battery runs on: an ordinary curve with phi = Frobenius, a j=0 curve with
/// phi = omega, and a j=1728 curve with phi = i.
TestCurve derive_ordinary_frobenius_curve();
TestCurve derive_j0_omega_curve();
TestCurve derive_j1728_i_curve();
std::vector<TestCurve> standard_test_curves();

/// The Ribet point identities at every admissible torsion point: the ratio-mode kernel
/// scalar equals e_n(phi x, x) exactly, its n-th power is 1, and in direct mode the
/// projection is alpha(x), n * t is the same kernel scalar, and n^2 * t vanishes.
std::vector<CaseRecord> suite_ribet_algebraic(const CurvePtr& E, const Endo& phi,
                                              const std::vector<uint64_t>& ns, uint64_t seed,
                                              size_t target_points = 20);

/// The order-n^2 witness search, including the named hypothesis
/// rejections.
std::vector<CaseRecord> suite_search_n2(const CurvePtr& E, const Endo& phi,
                                        const std::vector<uint64_t>& ns, uint64_t seed);

/// Pairing battery: route agreement, bilinearity, alternation, antisymmetry,
/// perfectness on a basis, and the Rosati adjointness sweep.
std::vector<CaseRecord> suite_pairing(const CurvePtr& E, const std::vector<uint64_t>& ns,
                                      uint64_t seed, size_t triples = 1000);

/// Weil reciprocity f(div g) = g(div f) on constructed disjoint principal divisors.
std::vector<CaseRecord> suite_reciprocity(const CurvePtr& E, uint64_t seed, size_t pairs = 100);

/// Biextension arithmetic: gj_add associativity, normal-form independence under
/// twists by functions with f(x) = f(2x), projection homomorphism.
std::vector<CaseRecord> suite_biextension(const CurvePtr& E, uint64_t seed, size_t triples = 500);

/// Action laws and lattice-generator equivariance over random elements of the analytic model.
std::vector<CaseRecord> suite_analytic_actions(const std::vector<int>& dims, uint64_t seed,
                                               size_t cases = 10000, double tol = 1e-9);

/// Duality and polarization identities, exhaustive d=1 plus sampled d=2.
std::vector<CaseRecord> suite_duality(uint64_t seed);

/// The alpha-tilde stabilizer law on semidirect-product generator products.
std::vector<CaseRecord> suite_stabilizer(uint64_t seed);

/// Exact-rational torsion of the lattice-model Ribet section.
std::vector<CaseRecord> suite_torsion_exact();

/// Reduced-scale battery across every module.
std::vector<CaseRecord> suite_selftest(uint64_t seed);

/// CSV emitters for the two table modes (column layout documented in the CLI help).
std::string pairing_table_csv(const CurvePtr& E, const std::vector<uint64_t>& ns, uint64_t seed);
std::string orbit_sample_csv(const IntBlockMatrix& f, const Eigen::RowVectorXd& x, int count);

bool all_pass(const std::vector<CaseRecord>& cases);

} // namespace ribetor
