#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ribetor/elliptic.hpp"

namespace ribetor {

enum class GenKind { frobenius, omega, i_unit };

/// Quadratic generator g of a rank-2 endomorphism ring Z[g], with g^2 = t g - n:
///   frobenius: (t, n) = (trace a, p), acts by (x,y) -> (x^p, y^p) on any curve;
///   omega:     (t, n) = (-1, 1), order-3 automorphism (x,y) -> (zeta x, y), j=0 only;
///   i_unit:    (t, n) = (0, 1), order-4 automorphism (x,y) -> (-x, beta y), j=1728 only.
class Generator {
  public:
    static Generator make(GenKind kind, const CurvePtr& E);

    GenKind kind() const { return kind_; }
    int64_t t() const { return t_; }
    int64_t n() const { return n_; }
    const CurvePtr& curve() const { return E_; }
    /// The fixed root of unity in F_p backing omega / i_unit; 0 for frobenius.
    uint64_t root() const { return root_; }

    Point apply(const Point& P) const;

    std::string str() const;

  private:
    GenKind kind_;
    int64_t t_ = 0, n_ = 0;
    uint64_t root_ = 0;
    CurvePtr E_;
};

/// phi = m + k*g in Z[g]. Trace 2m + k t, degree (norm) m^2 + m k t + k^2 n >= 0.
struct Endo {
    int64_t m = 0;
    int64_t k = 0;
    Generator gen;

    std::string str() const;
};

Endo endo_make(int64_t m, int64_t k, const Generator& g);
Endo endo_add(const Endo& a, const Endo& b);
Endo endo_sub(const Endo& a, const Endo& b);
Endo endo_mul(const Endo& a, const Endo& b);
Endo endo_scale(int64_t c, const Endo& a);

int64_t endo_trace(const Endo& phi);
int64_t endo_degree(const Endo& phi);

/// Rosati conjugate: trace(phi) - phi.
Endo rosati(const Endo& phi);

/// alpha = phi - rosati(phi); zero exactly when k = 0.
Endo alpha_of(const Endo& phi);

Point endo_eval(const Endo& phi, const Point& P);

/// Direct-mode shape phi = u * pi^e (u a unit of Z[g], e >= 0). For omega / i_unit
/// generators only units (e = 0) qualify.
struct UnitPiShape {
    int64_t um, uk; // the unit as an element of Z[g]
    unsigned e;
};
std::optional<UnitPiShape> unit_pi_shape(const Endo& phi);

/// Full pullback divisor phi^*(P) = p^e (z) for direct-mode phi; the unique preimage z
/// is computed by the inverse automorphism followed by e coordinate p-th roots.
std::map<Point, long long> endo_preimage(const Endo& phi, const Point& P);

bool endo_eq(const Endo& a, const Endo& b);

} // namespace ribetor
