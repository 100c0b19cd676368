#include "ribetor/endomorphism.hpp"

namespace ribetor {

Generator Generator::make(GenKind kind, const CurvePtr& E) {
    Generator g;
    g.kind_ = kind;
    g.E_ = E;
    switch (kind) {
        case GenKind::frobenius:
            g.t_ = E->trace();
            g.n_ = (int64_t)E->p();
            break;
        case GenKind::omega: {
            if (E->a4() != 0 || E->a6() == 0 || E->p() % 3 != 1)
                raise(errc::incompatible_generator, "omega needs y^2 = x^3 + a6 with p = 1 mod 3");
            g.t_ = -1;
            g.n_ = 1;
            // smallest primitive cube root of unity: z^2 + z + 1 = 0 mod p
            uint64_t p = E->p();
            for (uint64_t z = 2;; ++z) {
                if ((z * z % p + z + 1) % p == 0) {
                    g.root_ = z;
                    break;
                }
            }
            break;
        }
        case GenKind::i_unit: {
            if (E->a6() != 0 || E->a4() == 0 || E->p() % 4 != 1)
                raise(errc::incompatible_generator, "i needs y^2 = x^3 + a4 x with p = 1 mod 4");
            g.t_ = 0;
            g.n_ = 1;
            // smallest primitive fourth root of unity: b^2 = -1 mod p
            uint64_t p = E->p();
            for (uint64_t b = 2;; ++b) {
                if (b * b % p == p - 1) {
                    g.root_ = b;
                    break;
                }
            }
            break;
        }
    }
    return g;
}

Point Generator::apply(const Point& P) const {
    if (!P.curve()->same_curve(*E_)) raise(errc::incompatible_generator, "generator of another curve");
    if (P.is_infinity()) return P;
    const auto& ctx = P.field();
    switch (kind_) {
        case GenKind::frobenius:
            return Point::make(P.curve(), frobenius_auto(P.x(), 1), frobenius_auto(P.y(), 1));
        case GenKind::omega: {
            Fq zeta = Fq::from_int(ctx, (int64_t)root_);
            return Point::make(P.curve(), zeta * P.x(), P.y());
        }
        case GenKind::i_unit: {
            Fq beta = Fq::from_int(ctx, (int64_t)root_);
            return Point::make(P.curve(), -P.x(), beta * P.y());
        }
    }
    raise(errc::internal, "unreachable");
}

std::string Generator::str() const {
    switch (kind_) {
        case GenKind::frobenius: return "pi";
        case GenKind::omega: return "omega";
        case GenKind::i_unit: return "i";
    }
    return "?";
}

std::string Endo::str() const {
    return std::to_string(m) + (k >= 0 ? "+" : "") + std::to_string(k) + "*" + gen.str();
}

Endo endo_make(int64_t m, int64_t k, const Generator& g) { return Endo{m, k, g}; }

namespace {
void check_same_ring(const Endo& a, const Endo& b) {
    if (a.gen.kind() != b.gen.kind() || !a.gen.curve()->same_curve(*b.gen.curve()))
        raise(errc::incompatible_generator, "endomorphisms from different rings");
}
} // namespace

Endo endo_add(const Endo& a, const Endo& b) {
    check_same_ring(a, b);
    return Endo{a.m + b.m, a.k + b.k, a.gen};
}

Endo endo_sub(const Endo& a, const Endo& b) {
    check_same_ring(a, b);
    return Endo{a.m - b.m, a.k - b.k, a.gen};
}

Endo endo_mul(const Endo& a, const Endo& b) {
    check_same_ring(a, b);
    // (m1 + k1 g)(m2 + k2 g) with g^2 = t g - n
    int64_t t = a.gen.t(), n = a.gen.n();
    int64_t m = a.m * b.m - a.k * b.k * n;
    int64_t k = a.m * b.k + a.k * b.m + a.k * b.k * t;
    return Endo{m, k, a.gen};
}

Endo endo_scale(int64_t c, const Endo& a) { return Endo{c * a.m, c * a.k, a.gen}; }

int64_t endo_trace(const Endo& phi) { return 2 * phi.m + phi.k * phi.gen.t(); }

int64_t endo_degree(const Endo& phi) {
    return phi.m * phi.m + phi.m * phi.k * phi.gen.t() + phi.k * phi.k * phi.gen.n();
}

Endo rosati(const Endo& phi) { return Endo{phi.m + phi.k * phi.gen.t(), -phi.k, phi.gen}; }

Endo alpha_of(const Endo& phi) { return endo_sub(phi, rosati(phi)); }

Point endo_eval(const Endo& phi, const Point& P) {
    if (!P.curve()->same_curve(*phi.gen.curve()))
        raise(errc::incompatible_generator, "endomorphism of another curve");
    Point gP = phi.gen.apply(P);
    return point_add(scalar_mul(phi.m, P), scalar_mul(phi.k, gP));
}

bool endo_eq(const Endo& a, const Endo& b) {
    return a.m == b.m && a.k == b.k && a.gen.kind() == b.gen.kind();
}

std::optional<UnitPiShape> unit_pi_shape(const Endo& phi) {
    if (phi.gen.kind() == GenKind::frobenius) {
        // candidates +-pi^e, with pi^{e+1} = -p k_e + (m_e + a k_e) pi
        int64_t a = phi.gen.t(), p = phi.gen.n();
        int64_t me = 1, ke = 0;
        for (unsigned e = 0; e <= 40; ++e) {
            if (phi.m == me && phi.k == ke) return UnitPiShape{1, 0, e};
            if (phi.m == -me && phi.k == -ke) return UnitPiShape{-1, 0, e};
            __int128 nm = -(__int128)p * ke;
            __int128 nk = (__int128)me + (__int128)a * ke;
            if (nm > INT64_MAX || nm < INT64_MIN || nk > INT64_MAX || nk < INT64_MIN) break;
            me = (int64_t)nm;
            ke = (int64_t)nk;
            if ((uint64_t)(me < 0 ? -me : me) > (1ull << 62)) break;
        }
        return std::nullopt;
    }
    // omega / i rings: direct mode covers the unit group only
    if (endo_degree(phi) == 1) return UnitPiShape{phi.m, phi.k, 0};
    return std::nullopt;
}

std::map<Point, long long> endo_preimage(const Endo& phi, const Point& P) {
    auto shape = unit_pi_shape(phi);
    if (!shape)
        raise(errc::unsupported_shape,
              "phi = " + phi.str() + " is not unit * pi^e; use ratio mode");
    // z = pth-root^e (u^{-1} P); u^{-1} is the Rosati conjugate of the unit
    Endo u{shape->um, shape->uk, phi.gen};
    Point z = endo_eval(rosati(u), P);
    if (!z.is_infinity()) {
        const unsigned kc = z.field()->k();
        for (unsigned i = 0; i < shape->e; ++i)
            z = Point::make(z.curve(), frobenius_auto(z.x(), kc - 1), frobenius_auto(z.y(), kc - 1));
    }
    long long mult = 1;
    for (unsigned i = 0; i < shape->e; ++i) mult *= (long long)phi.gen.curve()->p();
    std::map<Point, long long> D;
    D[z] = mult;
    return D;
}

} // namespace ribetor
