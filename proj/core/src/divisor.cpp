#include "ribetor/divisor.hpp"

#include <algorithm>

namespace ribetor {

long long divisor_degree(const Divisor& D) {
    long long d = 0;
    for (const auto& [P, m] : D) d += m;
    return d;
}

Point divisor_sum(const Divisor& D, const CurvePtr& E, const FieldCtxPtr& ctx) {
    Point S = Point::infinity(E, ctx);
    for (const auto& [P, m] : D) S = point_add(S, scalar_mul(m, P));
    return S;
}

void divisor_accumulate(Divisor& D, const Point& P, long long mult) {
    if (mult == 0) return;
    auto it = D.find(P);
    if (it == D.end()) {
        D.emplace(P, mult);
    } else {
        it->second += mult;
        if (it->second == 0) D.erase(it);
    }
}

Divisor divisor_add(const Divisor& A, const Divisor& B) {
    Divisor R = A;
    for (const auto& [P, m] : B) divisor_accumulate(R, P, m);
    return R;
}

Divisor divisor_negate(const Divisor& D) {
    Divisor R;
    for (const auto& [P, m] : D) R.emplace(P, -m);
    return R;
}

EvalPair::EvalPair(Point a, Point b) : x_pt(std::move(a)), x2_pt(std::move(b)) {
    if (x_pt.is_infinity() || x2_pt.is_infinity())
        raise(errc::support_hit, "marked evaluation points must be affine");
    if (x_pt == x2_pt) raise(errc::support_hit, "marked evaluation points must differ");
}

Fq line_at(const Point& P1, const Point& P2, const Point& Q) {
    if (Q.is_infinity()) raise(errc::on_line, "evaluation at infinity");
    const auto& ctx = Q.field();
    if (P1.is_infinity() && P2.is_infinity()) return Fq::one(ctx);
    if (P1.is_infinity()) return Q.x() - P2.x();
    if (P2.is_infinity()) return Q.x() - P1.x();
    if (P1.x() == P2.x()) {
        if (P1.y() != P2.y() || P1.y().is_zero()) return Q.x() - P1.x(); // vertical
        Fq three = Fq::from_int(ctx, 3), two = Fq::from_int(ctx, 2);
        Fq lam = (three * P1.x() * P1.x() + P1.curve()->a4_in(ctx)) / (two * P1.y());
        return (Q.y() - P1.y()) - lam * (Q.x() - P1.x());
    }
    Fq lam = (P2.y() - P1.y()) / (P2.x() - P1.x());
    return (Q.y() - P1.y()) - lam * (Q.x() - P1.x());
}

Fq line_value(const Point& P1, const Point& P2, const Point& Q) {
    Fq v = line_at(P1, P2, Q);
    if (v.is_zero()) raise(errc::on_line, "Q lies on the line");
    return v;
}

namespace {

Fq vertical_at(const Point& P, const Point& Q) {
    if (P.is_infinity()) return Fq::one(Q.field());
    return Q.x() - P.x();
}

std::vector<int> naf_digits(uint64_t n) {
    std::vector<int> d;
    while (n) {
        if (n & 1) {
            int dig = 2 - (int)(n & 3);
            d.push_back(dig);
            n -= (uint64_t)(int64_t)dig;
        } else {
            d.push_back(0);
        }
        n >>= 1;
    }
    return d; // LSB first, top digit is 1
}

} // namespace

Fq miller_eval(uint64_t n, const Point& P, const Point& Q, MillerChain chain) {
    const auto& ctx = Q.field();
    if (n == 0) raise(errc::config_error, "miller_eval needs n >= 1");
    if (P.is_infinity() || n == 1) return Fq::one(ctx);
    if (Q.is_infinity()) raise(errc::miller_degenerate, "evaluation point at infinity");
    if (!scalar_mul_u(n, P).is_infinity()) raise(errc::config_error, "miller_eval needs nP = O");

    auto checked = [&](Fq v) {
        if (v.is_zero()) raise(errc::miller_degenerate, "intermediate line vanished at Q");
        return v;
    };

    Fq f = Fq::one(ctx);
    Point T = P;

    auto double_step = [&] {
        Fq l = checked(line_at(T, T, Q));
        Point T2 = point_add(T, T);
        Fq v = checked(vertical_at(T2, Q));
        f = f * f * l / v;
        T = T2;
    };
    auto add_step = [&](const Point& A) { // T -> T + A, A in {P, -P} not both needed
        Fq l = checked(line_at(T, A, Q));
        Point T1 = point_add(T, A);
        Fq v = checked(vertical_at(T1, Q));
        f = f * l / v;
        T = T1;
    };

    if (chain == MillerChain::plain_binary) {
        int top = 63;
        while (!((n >> top) & 1)) --top;
        for (int b = top - 1; b >= 0; --b) {
            double_step();
            if ((n >> b) & 1) add_step(P);
        }
    } else {
        auto digits = naf_digits(n);
        Point negP = point_neg(P);
        for (size_t i = digits.size() - 1; i-- > 0;) {
            double_step();
            if (digits[i] == 1) {
                add_step(P);
            } else if (digits[i] == -1) {
                // f *= l_{T,-P} / (v_{T-P} * v_P)
                Fq vP = checked(vertical_at(P, Q));
                Fq l = checked(line_at(T, negP, Q));
                Point T1 = point_add(T, negP);
                Fq v = checked(vertical_at(T1, Q));
                f = f * l / (v * vP);
                T = T1;
            }
        }
    }
    if (!T.is_infinity()) raise(errc::internal, "miller chain did not close");
    return f;
}

Fq fn_ratio_eval(uint64_t n, const Point& x_pt, const Point& Q) {
    if (x_pt.is_infinity()) raise(errc::config_error, "fn_ratio_eval needs affine x");
    Point x2 = point_add(x_pt, x_pt);
    if (Q.is_infinity() || Q == x_pt || Q == x2)
        raise(errc::support_hit, "Q inside the divisor support");
    for (MillerChain chain : {MillerChain::plain_binary, MillerChain::signed_binary}) {
        try {
            Fq num = miller_eval(n, x_pt, Q, chain);
            Fq den = miller_eval(n, x2, Q, chain);
            return num / den;
        } catch (const error& e) {
            if (e.code() != errc::miller_degenerate) throw;
            if (chain == MillerChain::signed_binary) throw;
        }
    }
    raise(errc::internal, "unreachable");
}

namespace {

struct Entry {
    Point P;
    long long mult; // positive after normalization
};

} // namespace

Fq principal_ratio(const Divisor& D, const EvalPair& ep, uint64_t attempt) {
    const auto& ctx = ep.x_pt.field();
    const auto& E = ep.x_pt.curve();
    if (divisor_degree(D) != 0) raise(errc::internal, "principal_ratio: degree != 0");
    if (!divisor_sum(D, E, ctx).is_infinity()) raise(errc::internal, "principal_ratio: sum != O");

    Fq c = Fq::one(ctx);
    auto mul_ratio = [&](const Fq& at_x, const Fq& at_2x, bool inverted) {
        if (at_x.is_zero() || at_2x.is_zero())
            raise(errc::support_hit, "reduction line met a marked point");
        c = inverted ? c * at_2x / at_x : c * at_x / at_2x;
    };

    // expand affine entries; negatives become positives at -P through a vertical
    std::vector<Point> work;
    for (const auto& [P, m] : D) {
        if (P.is_infinity()) continue;
        long long mm = m;
        if (mm < 0) {
            Fq vx = line_at(P, point_neg(P), ep.x_pt);
            Fq v2 = line_at(P, point_neg(P), ep.x2_pt);
            for (long long i = 0; i < -mm; ++i) {
                mul_ratio(vx, v2, true); // dividing out the vertical
                work.push_back(point_neg(P));
            }
        } else {
            for (long long i = 0; i < mm; ++i) work.push_back(P);
        }
    }

    // deterministic association order, permuted per attempt
    SeededRng rng(0xD15C0 + attempt * 0x9E37u);
    for (size_t i = work.size(); i > 1; --i) std::swap(work[i - 1], work[rng.below(i)]);

    while (work.size() >= 2) {
        Point P1 = work.back();
        work.pop_back();
        Point P2 = work.back();
        work.pop_back();
        Fq lx = line_at(P1, P2, ep.x_pt);
        Fq l2 = line_at(P1, P2, ep.x2_pt);
        Point S = point_add(P1, P2);
        mul_ratio(lx, l2, false);
        if (!S.is_infinity()) {
            Fq vx = vertical_at(S, ep.x_pt);
            Fq v2 = vertical_at(S, ep.x2_pt);
            mul_ratio(vx, v2, true);
            work.push_back(S);
        }
    }
    if (!work.empty()) raise(errc::internal, "principal divisor left a point");
    return c;
}

std::pair<Point, Fq> divisor_reduce(const Divisor& D, const EvalPair& ep) {
    const auto& ctx = ep.x_pt.field();
    const auto& E = ep.x_pt.curve();
    if (divisor_degree(D) != 0) raise(errc::config_error, "divisor_reduce needs degree 0");
    for (const auto& [P, m] : D) {
        (void)m;
        if (P == ep.x_pt || P == ep.x2_pt)
            raise(errc::support_hit, "divisor support meets a marked point");
    }
    Point Q = divisor_sum(D, E, ctx);
    Divisor principal = D;
    if (!Q.is_infinity()) {
        divisor_accumulate(principal, Q, -1);
        divisor_accumulate(principal, Point::infinity(E, ctx), 1);
    }
    error last(errc::internal, "unset");
    for (uint64_t attempt = 0; attempt < 8; ++attempt) {
        try {
            return {Q, principal_ratio(principal, ep, attempt)};
        } catch (const error& e) {
            if (e.code() != errc::support_hit) throw;
            last = e;
        }
    }
    throw last;
}

} // namespace ribetor
