#include "cmq/fp2.hpp"

#include <algorithm>

namespace cmq {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

}  // namespace

Fp2Field::Fp2Field(std::uint64_t p) : p_(p) {
    if (p < 2 || p >= (1ull << 31)) throw invalid_input("Fp2Field: p out of range");
    if (!is_prime(Int(p))) throw invalid_input("Fp2Field: p not prime");
    if (p == 2) {
        a_ = 1;
        b_ = 1;   // s^2 + s + 1
        return;
    }
    // s^2 - ns with ns the smallest quadratic non-residue
    for (std::uint64_t ns = 2;; ++ns) {
        if (powmod_u64(ns, (p - 1) / 2, p) == p - 1) {
            a_ = 0;
            b_ = p - ns;   // s^2 + b = 0 -> s^2 = ns
            return;
        }
    }
}

std::uint64_t Fp2Field::mulp(std::uint64_t x, std::uint64_t y) const { return mulmod_u64(x, y, p_); }
std::uint64_t Fp2Field::addp(std::uint64_t x, std::uint64_t y) const {
    std::uint64_t s = x + y;
    return s >= p_ ? s - p_ : s;
}
std::uint64_t Fp2Field::subp(std::uint64_t x, std::uint64_t y) const {
    return x >= y ? x - y : x + p_ - y;
}
std::uint64_t Fp2Field::invp(std::uint64_t x) const {
    if (x == 0) throw invalid_input("Fp2Field: division by zero");
    return powmod_u64(x, p_ - 2, p_);
}

Fp2El Fp2Field::from_int(const Int& n) const {
    Int r = ((n % Int(p_)) + Int(p_)) % Int(p_);
    return {r.convert_to<std::uint64_t>(), 0};
}

Fp2El Fp2Field::add(const Fp2El& a, const Fp2El& b) const {
    return {addp(a.x, b.x), addp(a.y, b.y)};
}
Fp2El Fp2Field::sub(const Fp2El& a, const Fp2El& b) const {
    return {subp(a.x, b.x), subp(a.y, b.y)};
}
Fp2El Fp2Field::neg(const Fp2El& a) const { return {subp(0, a.x), subp(0, a.y)}; }

Fp2El Fp2Field::mul(const Fp2El& u, const Fp2El& v) const {
    // (x1 + y1 s)(x2 + y2 s) with s^2 = -a s - b
    std::uint64_t x1x2 = mulp(u.x, v.x), y1y2 = mulp(u.y, v.y);
    std::uint64_t cross = addp(mulp(u.x, v.y), mulp(u.y, v.x));
    std::uint64_t x = subp(x1x2, mulp(b_, y1y2));
    std::uint64_t y = subp(cross, mulp(a_, y1y2));
    return {x, y};
}

Fp2El Fp2Field::inv(const Fp2El& u) const {
    // norm = u * conj(u) with conj(x + ys) = (x - a y) - y s
    std::uint64_t n = addp(subp(mulp(u.x, u.x), mulp(a_, mulp(u.x, u.y))), mulp(b_, mulp(u.y, u.y)));
    std::uint64_t ninv = invp(n);
    Fp2El c{subp(u.x, mulp(a_, u.y)), subp(0, u.y)};
    return {mulp(c.x, ninv), mulp(c.y, ninv)};
}

Fp2El Fp2Field::pow(Fp2El a, Int e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    Fp2El r{1 % p_, 0};
    while (e > 0) {
        if (e % 2 == 1) r = mul(r, a);
        a = mul(a, a);
        e /= 2;
    }
    return r;
}

Fp2El Fp2Field::frobenius(const Fp2El& a) const { return pow(a, Int(p_)); }

// ---------------------------------------------------------------------------

Fp2Poly poly_trim(Fp2Poly f) {
    while (!f.empty() && f.back().x == 0 && f.back().y == 0) f.pop_back();
    return f;
}

Fp2Poly poly_mul(const Fp2Field& k, const Fp2Poly& a, const Fp2Poly& b) {
    if (a.empty() || b.empty()) return {};
    Fp2Poly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
    return poly_trim(std::move(r));
}

Fp2Poly poly_mod(const Fp2Field& k, Fp2Poly a, const Fp2Poly& m) {
    a = poly_trim(std::move(a));
    if (m.empty()) throw invalid_input("poly_mod: zero modulus");
    Fp2El lead_inv = k.inv(m.back());
    while (a.size() >= m.size()) {
        Fp2El q = k.mul(a.back(), lead_inv);
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i)
            a[off + i] = k.sub(a[off + i], k.mul(q, m[i]));
        a = poly_trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}

Fp2Poly poly_gcd(const Fp2Field& k, Fp2Poly a, Fp2Poly b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        Fp2Poly r = poly_mod(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Fp2El inv = k.inv(a.back());
        for (auto& c : a) c = k.mul(c, inv);
    }
    return a;
}

Fp2Poly poly_powmod(const Fp2Field& k, Fp2Poly base, Int e, const Fp2Poly& m) {
    Fp2Poly r{k.make(1, 0)};
    base = poly_mod(k, std::move(base), m);
    while (e > 0) {
        if (e % 2 == 1) r = poly_mod(k, poly_mul(k, r, base), m);
        base = poly_mod(k, poly_mul(k, base, base), m);
        e /= 2;
    }
    return r;
}

Fp2El poly_eval(const Fp2Field& k, const Fp2Poly& f, const Fp2El& x) {
    Fp2El r{0, 0};
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = k.add(k.mul(r, x), *it);
    return r;
}

Fp2Poly poly_derivative(const Fp2Field& k, const Fp2Poly& f) {
    Fp2Poly d;
    for (size_t i = 1; i < f.size(); ++i) {
        Fp2El c = f[i];
        Fp2El m = k.make(static_cast<std::uint64_t>(i % k.p()), 0);
        d.push_back(k.mul(c, m));
    }
    return poly_trim(std::move(d));
}

namespace {

// deterministic splitting randomness
struct SplitRng {
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
};

void split_equal_degree_one(const Fp2Field& k, const Fp2Poly& f, std::vector<Fp2El>& out,
                            SplitRng& rng) {
    // f = product of distinct linear factors
    if (f.size() <= 1) return;
    if (f.size() == 2) {
        // c0 + c1 X = 0
        out.push_back(k.neg(k.mul(f[0], k.inv(f[1]))));
        return;
    }
    Int half = (Int(k.p()) * Int(k.p()) - 1) / 2;
    for (int tries = 0; tries < 256; ++tries) {
        Fp2El r{rng.next() % k.p(), rng.next() % k.p()};
        Fp2Poly shift{r, k.make(1, 0)};
        Fp2Poly h = poly_powmod(k, shift, half, f);
        if (h.empty()) continue;
        h[0] = k.sub(h[0], k.make(1, 0));
        Fp2Poly g = poly_gcd(k, h, f);
        if (g.size() > 1 && g.size() < f.size()) {
            split_equal_degree_one(k, g, out, rng);
            // f / g
            Fp2Poly q;
            {
                Fp2Poly a = f;
                Fp2El li = k.inv(g.back());
                q.assign(a.size() - g.size() + 1, Fp2El{0, 0});
                while (a.size() >= g.size() && !a.empty()) {
                    Fp2El qq = k.mul(a.back(), li);
                    size_t off = a.size() - g.size();
                    q[off] = qq;
                    for (size_t i = 0; i < g.size(); ++i)
                        a[off + i] = k.sub(a[off + i], k.mul(qq, g[i]));
                    a = poly_trim(std::move(a));
                }
            }
            split_equal_degree_one(k, poly_trim(std::move(q)), out, rng);
            return;
        }
    }
    throw invariant_failure("split_equal_degree_one: splitting failed");
}

}  // namespace

std::vector<Fp2El> poly_roots(const Fp2Field& k, const Fp2Poly& f_in) {
    Fp2Poly f = poly_trim(f_in);
    std::vector<Fp2El> out;
    if (f.size() <= 1) return out;

    // brute force for tiny fields (covers p = 2, 3 where the CZ exponent
    // tricks degenerate)
    if (k.order() <= 4096) {
        for (std::uint64_t x = 0; x < k.p(); ++x)
            for (std::uint64_t y = 0; y < k.p(); ++y) {
                Fp2El e{x, y};
                if (k.is_zero(poly_eval(k, f, e))) out.push_back(e);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    // radical part: distinct roots of f are roots of gcd(x^{p^2} - x, f)
    Fp2Poly xq = poly_powmod(k, Fp2Poly{k.make(0, 0), k.make(1, 0)}, Int(k.p()) * Int(k.p()), f);
    if (xq.size() < 2) xq.resize(2, Fp2El{0, 0});
    xq[1] = k.sub(xq[1], k.make(1, 0));
    Fp2Poly lin = poly_gcd(k, poly_trim(std::move(xq)), f);
    if (lin.size() <= 1) return out;
    SplitRng rng;
    rng.state ^= k.p();
    split_equal_degree_one(k, lin, out, rng);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace cmq
