#include "ribetor/finite_field.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace ribetor {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return (uint64_t)((u128)a * b % m); }

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t inv_mod_p(uint64_t a, uint64_t p) { return powmod(a % p, p - 2, p); }

// ---- dense polynomial arithmetic over F_p (degree-ascending coefficient vectors) ----

using Poly = std::vector<uint64_t>;

void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + (u128)a[i] * b[j]) % p;
    }
    poly_trim(r);
    return r;
}

// Remainder modulo a monic polynomial.
Poly poly_mod(Poly f, const Poly& m, uint64_t p) {
    const size_t dm = m.size() - 1;
    while (f.size() > dm) {
        uint64_t lead = f.back();
        size_t shift = f.size() - 1 - dm;
        if (lead != 0) {
            for (size_t i = 0; i < dm; ++i) {
                uint64_t t = mulmod(lead, m[i], p);
                uint64_t& dst = f[i + shift];
                dst = (dst >= t) ? dst - t : dst + p - t;
            }
        }
        f.pop_back();
        poly_trim(f);
        if (f.size() <= dm) break;
    }
    poly_trim(f);
    return f;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint64_t p) {
    return poly_mod(poly_mul(a, b, p), m, p);
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
    Poly r = {1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // make b monic, reduce a mod b
        uint64_t inv = inv_mod_p(b.back(), p);
        Poly bm = b;
        for (auto& c : bm) c = mulmod(c, inv, p);
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        uint64_t inv = inv_mod_p(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

// Extended Euclid: returns g (monic) and s with s*a = g mod m. Used for inversion.
std::pair<Poly, Poly> poly_ext_gcd(Poly a, Poly m, uint64_t p) {
    Poly r0 = std::move(m), r1 = std::move(a);
    Poly s0 = {}, s1 = {1};
    poly_trim(r0);
    poly_trim(r1);
    while (!r1.empty()) {
        // r0 = q*r1 + r2
        uint64_t inv = inv_mod_p(r1.back(), p);
        Poly q(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
        Poly r2 = r0;
        while (r2.size() >= r1.size() && !r2.empty()) {
            uint64_t coef = mulmod(r2.back(), inv, p);
            size_t shift = r2.size() - r1.size();
            q[shift] = (q[shift] + coef) % p;
            for (size_t i = 0; i < r1.size(); ++i) {
                uint64_t t = mulmod(coef, r1[i], p);
                uint64_t& dst = r2[i + shift];
                dst = (dst >= t) ? dst - t : dst + p - t;
            }
            poly_trim(r2);
            if (r2.size() < r1.size()) break;
        }
        Poly s2 = s0; // s2 = s0 - q*s1
        {
            Poly qs1 = poly_mul(q, s1, p);
            if (s2.size() < qs1.size()) s2.resize(qs1.size(), 0);
            for (size_t i = 0; i < qs1.size(); ++i) {
                uint64_t& dst = s2[i];
                dst = (dst >= qs1[i]) ? dst - qs1[i] : dst + p - qs1[i];
            }
            poly_trim(s2);
        }
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (!r0.empty()) {
        uint64_t inv = inv_mod_p(r0.back(), p);
        for (auto& c : r0) c = mulmod(c, inv, p);
        for (auto& c : s0) c = mulmod(c, inv, p);
    }
    return {r0, s0};
}

// Rabin irreducibility for monic f of degree k: no factor of degree <= k/2
// iff gcd(X^{p^i} - X, f) = 1 for i = 1..k/2.
bool poly_irreducible(const Poly& f, uint64_t p) {
    const size_t k = f.size() - 1;
    if (k == 1) return true;
    Poly xp = {0, 1}; // X
    for (size_t i = 1; i <= k / 2; ++i) {
        xp = poly_powmod(std::move(xp), p, f, p);
        Poly diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] >= 1) ? diff[1] - 1 : p - 1;
        poly_trim(diff);
        Poly g = poly_gcd(diff, f, p);
        if (!(g.size() == 1 && g[0] == 1)) return false;
    }
    return true;
}

void trial_divide(uint64_t n, std::vector<uint64_t>& out) {
    for (uint64_t d = 2; (u128)d * d <= n; d += (d == 2) ? 1 : 2) {
        while (n % d == 0) {
            out.push_back(d);
            n /= d;
        }
    }
    if (n > 1) out.push_back(n);
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

FieldCtxPtr FieldCtx::create(uint64_t p, unsigned k) {
    if (k == 0) raise(errc::degree_zero, "extension degree must be >= 1");
    if (p == 2 || p == 3) raise(errc::bad_characteristic, "characteristic 2 and 3 unsupported");
    if (!is_prime_u64(p)) raise(errc::not_prime, std::to_string(p) + " is not prime");

    // dedupe: the modulus is deterministic given (p, k), so contexts are shareable
    static std::mutex reg_mutex;
    static std::map<std::pair<uint64_t, unsigned>, std::weak_ptr<const FieldCtx>> registry;
    {
        std::lock_guard<std::mutex> lock(reg_mutex);
        auto it = registry.find({p, k});
        if (it != registry.end()) {
            if (auto live = it->second.lock()) return live;
        }
    }

    u128 q = 1;
    for (unsigned i = 0; i < k; ++i) {
        q *= p;
        if (q > ((u128)1 << 62)) raise(errc::too_large, "q = p^k exceeds 2^62");
    }

    auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
    ctx->p_ = p;
    ctx->k_ = k;
    ctx->q_ = (uint64_t)q;

    if (k == 1) {
        ctx->modulus_ = {0, 1};
    } else {
        // smallest counter value whose monic polynomial is irreducible
        Poly f(k + 1, 0);
        f[k] = 1;
        uint64_t counter = 0;
        for (;; ++counter) {
            uint64_t v = counter;
            for (unsigned i = 0; i < k; ++i) {
                f[i] = v % p;
                v /= p;
            }
            if (poly_irreducible(f, p)) break;
            if (counter == ctx->q_ - 1)
                raise(errc::internal, "no irreducible modulus found"); // cannot happen
        }
        ctx->modulus_ = f;
    }

    FieldCtxPtr out = ctx;
    std::lock_guard<std::mutex> lock(reg_mutex);
    registry[{p, k}] = out;
    return out;
}

const std::vector<uint64_t>& FieldCtx::unit_group_prime_factors() const {
    std::call_once(factor_once_, [this] {
        // q - 1 = prod_{d | k} Phi_d(p); trial-divide each cyclotomic piece
        std::vector<uint64_t> primes;
        std::map<unsigned, uint64_t> phi; // d -> Phi_d(p)
        for (unsigned d = 1; d <= k_; ++d) {
            if (k_ % d != 0) continue;
            u128 pd = 1;
            for (unsigned i = 0; i < d; ++i) pd *= p_;
            uint64_t val = (uint64_t)(pd - 1);
            for (auto& [e, ph] : phi) {
                if (d % e == 0) val /= ph;
            }
            phi[d] = val;
            trial_divide(val, primes);
        }
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        unit_factors_ = std::move(primes);
    });
    return unit_factors_;
}

FieldCtxPtr build_extension(uint64_t p, unsigned k) { return FieldCtx::create(p, k); }

// ---- Fq ----

Fq::Fq(FieldCtxPtr ctx, std::vector<uint64_t> coeffs) : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    c_.resize(ctx_->k(), 0);
    for (auto& x : c_) x %= ctx_->p();
}

Fq Fq::zero(const FieldCtxPtr& ctx) { return Fq(ctx, {}); }

Fq Fq::one(const FieldCtxPtr& ctx) { return Fq(ctx, {1}); }

Fq Fq::from_counter(const FieldCtxPtr& ctx, uint64_t v) {
    std::vector<uint64_t> c(ctx->k());
    for (unsigned i = 0; i < ctx->k(); ++i) {
        c[i] = v % ctx->p();
        v /= ctx->p();
    }
    return Fq(ctx, std::move(c));
}

Fq Fq::from_int(const FieldCtxPtr& ctx, int64_t v) {
    int64_t m = v % (int64_t)ctx->p();
    if (m < 0) m += (int64_t)ctx->p();
    return Fq(ctx, {(uint64_t)m});
}

uint64_t Fq::counter() const {
    uint64_t v = 0;
    for (size_t i = c_.size(); i-- > 0;) v = v * ctx_->p() + c_[i];
    return v;
}

bool Fq::is_zero() const {
    for (auto x : c_)
        if (x) return false;
    return true;
}

bool Fq::is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i]) return false;
    return true;
}

namespace {
void check_same_ctx(const Fq& a, const Fq& b) {
    if (!a.ctx() || !b.ctx() || !a.ctx()->same_field(*b.ctx()))
        raise(errc::ctx_mismatch, "operands from different field contexts");
}
} // namespace

Fq operator+(const Fq& a, const Fq& b) {
    check_same_ctx(a, b);
    const uint64_t p = a.ctx()->p();
    std::vector<uint64_t> c(a.coeffs());
    for (size_t i = 0; i < c.size(); ++i) {
        c[i] += b.coeffs()[i];
        if (c[i] >= p) c[i] -= p;
    }
    return Fq(a.ctx(), std::move(c));
}

Fq operator-(const Fq& a, const Fq& b) {
    check_same_ctx(a, b);
    const uint64_t p = a.ctx()->p();
    std::vector<uint64_t> c(a.coeffs());
    for (size_t i = 0; i < c.size(); ++i) {
        uint64_t t = b.coeffs()[i];
        c[i] = (c[i] >= t) ? c[i] - t : c[i] + p - t;
    }
    return Fq(a.ctx(), std::move(c));
}

Fq Fq::operator-() const {
    const uint64_t p = ctx_->p();
    std::vector<uint64_t> c(c_);
    for (auto& x : c) x = x ? p - x : 0;
    return Fq(ctx_, std::move(c));
}

Fq operator*(const Fq& a, const Fq& b) {
    check_same_ctx(a, b);
    const uint64_t p = a.ctx()->p();
    if (a.ctx()->k() == 1) return Fq(a.ctx(), {mulmod(a.coeffs()[0], b.coeffs()[0], p)});
    Poly prod = poly_mul(a.coeffs(), b.coeffs(), p);
    prod = poly_mod(std::move(prod), a.ctx()->modulus(), p);
    return Fq(a.ctx(), std::move(prod));
}

Fq Fq::inverse() const {
    if (is_zero()) raise(errc::division_by_zero, "inverse of zero");
    const uint64_t p = ctx_->p();
    if (ctx_->k() == 1) return Fq(ctx_, {inv_mod_p(c_[0], p)});
    Poly a = c_;
    poly_trim(a);
    auto [g, s] = poly_ext_gcd(a, ctx_->modulus(), p);
    if (!(g.size() == 1 && g[0] == 1)) raise(errc::internal, "modulus not irreducible");
    return Fq(ctx_, std::move(s));
}

Fq operator/(const Fq& a, const Fq& b) {
    check_same_ctx(a, b);
    if (b.is_zero()) raise(errc::division_by_zero, "division by zero");
    return a * b.inverse();
}

bool operator==(const Fq& a, const Fq& b) {
    if (!a.ctx() || !b.ctx()) return !a.ctx() && !b.ctx();
    if (!a.ctx()->same_field(*b.ctx())) return false;
    return a.coeffs() == b.coeffs();
}

Fq Fq::pow(uint64_t e) const {
    Fq r = Fq::one(ctx_);
    Fq base = *this;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

std::string Fq::str() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c_[i]);
    }
    return s + "]";
}

Fq frobenius_auto(const Fq& a, unsigned e) {
    const unsigned k = a.ctx()->k();
    e %= k;
    if (e == 0) return a;
    uint64_t exp = 1;
    for (unsigned i = 0; i < e; ++i) exp *= a.ctx()->p(); // p^e <= p^k = q <= 2^62
    return a.pow(exp);
}

uint64_t mult_order(const Fq& a) {
    if (a.is_zero()) raise(errc::zero_element, "multiplicative order of zero");
    uint64_t m = a.ctx()->q() - 1;
    for (uint64_t ell : a.ctx()->unit_group_prime_factors()) {
        while (m % ell == 0 && a.pow(m / ell).is_one()) m /= ell;
    }
    return m;
}

int quadratic_character(const Fq& a) {
    if (a.is_zero()) return 0;
    Fq t = a.pow((a.ctx()->q() - 1) / 2);
    return t.is_one() ? 1 : -1;
}

std::optional<Fq> sqrt_in_fq(const Fq& a) {
    const auto& ctx = a.ctx();
    if (a.is_zero()) return a;
    if (quadratic_character(a) != 1) return std::nullopt;
    const uint64_t q = ctx->q();

    Fq r = Fq::zero(ctx);
    if (q % 4 == 3) {
        r = a.pow((q + 1) / 4);
    } else {
        // Tonelli-Shanks with the first non-residue in counter order
        uint64_t t = q - 1;
        unsigned s = 0;
        while ((t & 1) == 0) {
            t >>= 1;
            ++s;
        }
        Fq z = Fq::zero(ctx);
        for (uint64_t v = 2;; ++v) {
            z = Fq::from_counter(ctx, v);
            if (quadratic_character(z) == -1) break;
        }
        Fq c = z.pow(t);
        Fq x = a.pow((t + 1) / 2);
        Fq b = a.pow(t);
        unsigned m = s;
        while (!b.is_one()) {
            Fq b2 = b;
            unsigned i = 0;
            while (!b2.is_one()) {
                b2 *= b2;
                ++i;
            }
            Fq cc = c;
            for (unsigned j = 0; j + i + 1 < m; ++j) cc *= cc;
            x *= cc;
            c = cc * cc;
            b *= c;
            m = i;
        }
        r = x;
    }
    Fq nr = -r;
    return (r.counter() <= nr.counter()) ? r : nr;
}

const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::degree_zero: return "DegreeZero";
        case errc::too_large: return "TooLarge";
        case errc::bad_characteristic: return "BadCharacteristic";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::ctx_mismatch: return "CtxMismatch";
        case errc::zero_element: return "ZeroElement";
        case errc::curve_mismatch: return "CurveMismatch";
        case errc::not_on_curve: return "NotOnCurve";
        case errc::not_found: return "NotFound";
        case errc::incompatible_generator: return "IncompatibleGenerator";
        case errc::unsupported_shape: return "UnsupportedShape";
        case errc::on_line: return "OnLine";
        case errc::miller_degenerate: return "MillerDegenerate";
        case errc::support_hit: return "SupportHit";
        case errc::exhausted_retries: return "ExhaustedRetries";
        case errc::not_torsion: return "NotTorsion";
        case errc::bad_orbit: return "BadOrbit";
        case errc::hypothesis_violated: return "HypothesisViolated";
        case errc::not_a_morphism: return "NotAMorphism";
        case errc::singular_automorphy: return "SingularAutomorphy";
        case errc::config_error: return "ConfigError";
        case errc::internal: return "Internal";
    }
    return "Unknown";
}

} // namespace ribetor
