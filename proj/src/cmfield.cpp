#include "cmq/cmfield.hpp"

#include "cmq/enumerate.hpp"

#include <algorithm>
#include <sstream>

namespace cmq {

namespace {

// ---------------------------------------------------------------------------
// univariate factorization over F_p (p < 2^31), dense uint64 polynomials

using FpP = std::vector<std::uint64_t>;

std::uint64_t fp_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
std::uint64_t fp_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = fp_mul(r, a, p);
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    return r;
}
std::uint64_t fp_inv(std::uint64_t a, std::uint64_t p) { return fp_pow(a, p - 2, p); }

FpP fp_trim(FpP f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}
FpP fp_mulp(const FpP& a, const FpP& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    FpP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + fp_mul(a[i], b[j], p)) % p;
    return fp_trim(std::move(r));
}
FpP fp_mod(FpP a, const FpP& m, std::uint64_t p) {
    a = fp_trim(std::move(a));
    std::uint64_t li = fp_inv(m.back(), p);
    while (a.size() >= m.size()) {
        std::uint64_t q = fp_mul(a.back(), li, p);
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i)
            a[off + i] = (a[off + i] + p - fp_mul(q, m[i], p)) % p;
        a = fp_trim(std::move(a));
        if (a.empty()) break;
    }
    return a;
}
FpP fp_gcd(FpP a, FpP b, std::uint64_t p) {
    a = fp_trim(std::move(a));
    b = fp_trim(std::move(b));
    while (!b.empty()) {
        FpP r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        std::uint64_t li = fp_inv(a.back(), p);
        for (auto& c : a) c = fp_mul(c, li, p);
    }
    return a;
}
FpP fp_powmod(FpP base, Int e, const FpP& m, std::uint64_t p) {
    FpP r{1};
    base = fp_mod(std::move(base), m, p);
    while (e > 0) {
        if (e % 2 == 1) r = fp_mod(fp_mulp(r, base, p), m, p);
        base = fp_mod(fp_mulp(base, base, p), m, p);
        e /= 2;
    }
    return r;
}
FpP fp_div_exact(const FpP& a, const FpP& b, std::uint64_t p) {
    FpP r = fp_trim(a), q;
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    std::uint64_t li = fp_inv(b.back(), p);
    while (r.size() >= b.size()) {
        std::uint64_t c = fp_mul(r.back(), li, p);
        size_t off = r.size() - b.size();
        q[off] = c;
        for (size_t i = 0; i < b.size(); ++i) r[off + i] = (r[off + i] + p - fp_mul(c, b[i], p)) % p;
        r = fp_trim(std::move(r));
        if (r.empty()) break;
    }
    return q;
}
FpP fp_derivative(const FpP& f, std::uint64_t p) {
    FpP d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(fp_mul(f[i], i % p, p));
    return fp_trim(std::move(d));
}

struct FpRng {
    std::uint64_t s = 88172645463325252ull;
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
};

void fp_equal_degree_split(const FpP& f, long d, std::uint64_t p, std::vector<FpP>& out,
                           FpRng& rng) {
    long deg = static_cast<long>(f.size()) - 1;
    if (deg == d) {
        out.push_back(f);
        return;
    }
    for (int tries = 0; tries < 512; ++tries) {
        FpP r(static_cast<size_t>(2 * d), 0);
        for (auto& c : r) c = rng.next() % p;
        r.push_back(1);
        FpP h;
        if (p == 2) {
            // trace map sum r^(2^i)
            FpP t = fp_mod(r, f, p);
            FpP acc = t;
            for (long i = 1; i < d; ++i) {
                t = fp_mod(fp_mulp(t, t, p), f, p);
                acc.resize(std::max(acc.size(), t.size()), 0);
                for (size_t m = 0; m < t.size(); ++m) acc[m] ^= t[m];
            }
            h = fp_trim(std::move(acc));
        } else {
            Int e = (pow(Int(p), static_cast<unsigned>(d)) - 1) / 2;
            h = fp_powmod(r, e, f, p);
            if (h.empty())
                h = FpP{p - 1};
            else
                h[0] = (h[0] + p - 1) % p;
        }
        FpP g = fp_gcd(h, f, p);
        if (g.size() > 1 && g.size() < f.size()) {
            fp_equal_degree_split(g, d, p, out, rng);
            fp_equal_degree_split(fp_div_exact(f, g, p), d, p, out, rng);
            return;
        }
    }
    throw invariant_failure("fp_equal_degree_split failed");
}

// distinct irreducible factors with multiplicities
std::vector<std::pair<FpP, int>> fp_factor(const FpP& f_in, std::uint64_t p) {
    std::vector<std::pair<FpP, int>> out;
    FpP f = fp_trim(f_in);
    if (f.size() <= 1) return out;
    // make monic
    std::uint64_t li = fp_inv(f.back(), p);
    for (auto& c : f) c = fp_mul(c, li, p);

    // squarefree decomposition by repeated gcd with derivative
    // (desk scale: factor the squarefree radical, then read multiplicities)
    FpP radical;
    {
        FpP d = fp_derivative(f, p);
        if (d.empty()) {
            // f = g(x^p); at our degrees (<= 4) only possible as x^p-type
            // handle by recursing on p-th root
            FpP g;
            for (size_t i = 0; i < f.size(); i += static_cast<size_t>(p)) g.push_back(f[i]);
            auto sub = fp_factor(g, p);
            for (auto& [fac, mult] : sub) out.push_back({fac, mult * static_cast<int>(p)});
            return out;
        }
        radical = fp_div_exact(f, fp_gcd(f, d, p), p);
    }

    // distinct degree on the radical
    FpRng rng;
    rng.s ^= p * 1000003ull + f.size();
    std::vector<std::pair<FpP, long>> stages;   // (product of factors of degree d, d)
    {
        FpP h{0, 1};   // x
        FpP rem = radical;
        for (long d = 1; 2 * d <= static_cast<long>(rem.size()) - 1; ++d) {
            h = fp_powmod(h, Int(p), rem, p);
            FpP hx = h;
            if (hx.size() < 2) hx.resize(2, 0);
            hx[1] = (hx[1] + p - 1) % p;
            FpP g = fp_gcd(hx, rem, p);
            if (g.size() > 1) {
                stages.push_back({g, d});
                rem = fp_div_exact(rem, g, p);
                h = fp_mod(h, rem, p);
            }
            if (rem.size() <= 1) break;
        }
        if (rem.size() > 1) stages.push_back({rem, static_cast<long>(rem.size()) - 1});
    }
    std::vector<FpP> irr;
    for (auto& [g, d] : stages) fp_equal_degree_split(g, d, p, irr, rng);

    // multiplicities by trial division of f
    for (auto& g : irr) {
        int mult = 0;
        FpP cur = f;
        while (cur.size() >= g.size()) {
            FpP q = fp_div_exact(cur, g, p);
            if (fp_trim(fp_mulp(q, g, p)) == fp_trim(cur)) {
                ++mult;
                cur = q;
            } else {
                break;
            }
        }
        out.push_back({g, mult});
    }
    std::sort(out.begin(), out.end(),
              [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// element arithmetic

KElem k_from_rat(const Rat& q) {
    KElem e;
    e << q, Rat(0), Rat(0), Rat(0);
    return e;
}

bool k_is_zero(const KElem& a) {
    return a(0) == 0 && a(1) == 0 && a(2) == 0 && a(3) == 0;
}

KElem k_mul(const CMQuartic& k, const KElem& a, const KElem& b) {
    // convolution + reduction by theta^4 = 2 alpha theta^2 - n0
    const Rat two_alpha = 2 * k.alpha;
    const Rat n0 = k.norm_r();
    std::array<Rat, 7> c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[static_cast<size_t>(i + j)] += a(i) * b(j);
    // theta^6 -> (4a^2 - n0) theta^2 - 2a n0;  theta^5 -> 2a theta^3 - n0 theta;
    // theta^4 -> 2a theta^2 - n0
    c[2] += c[6] * (two_alpha * two_alpha - n0);
    c[0] -= c[6] * two_alpha * n0;
    c[3] += c[5] * two_alpha;
    c[1] -= c[5] * n0;
    c[2] += c[4] * two_alpha;
    c[0] -= c[4] * n0;
    KElem r;
    r << c[0], c[1], c[2], c[3];
    return r;
}

KElem k_conj(const KElem& a) {
    KElem r;
    r << a(0), -a(1), a(2), -a(3);
    return r;
}

Rat k_trace(const CMQuartic& k, const KElem& a) {
    // Tr(1,theta,theta^2,theta^3) = (4, 0, 4 alpha, 0)
    return 4 * a(0) + 4 * k.alpha * a(2);
}

namespace {

Mat4q mult_matrix(const CMQuartic& k, const KElem& a) {
    Mat4q m;
    for (int j = 0; j < 4; ++j) {
        KElem e;
        e.setZero();
        e(j) = 1;
        KElem col = k_mul(k, a, e);
        for (int i = 0; i < 4; ++i) m(i, j) = col(i);
    }
    return m;
}

}  // namespace

Rat k_norm(const CMQuartic& k, const KElem& a) { return mult_matrix(k, a).determinant(); }

KElem k_inv(const CMQuartic& k, const KElem& a) {
    Mat4q m = mult_matrix(k, a);
    Vec4q e0;
    e0 << 1, 0, 0, 0;
    Vec4q x = m.fullPivLu().solve(e0);
    return x;
}

KElem power_from_integral(const CMQuartic& k, const Vec4q& c) {
    return k.ibasis.transpose() * c;
}

Vec4q integral_from_power(const CMQuartic& k, const KElem& x) { return k.ibasis_inv * x; }

bool in_maximal_order(const CMQuartic& k, const KElem& x) {
    Vec4q c = integral_from_power(k, x);
    for (int i = 0; i < 4; ++i)
        if (denominator(c(i)) != 1) return false;
    return true;
}

Cplx embed(const CMQuartic& k, const KElem& x, int which, unsigned bits) {
    precision_guard g(bits);
    Real sd = sqrt(to_real(k.d));
    Real t = to_real(k.alpha) + (which % 2 == 0 ? to_real(k.beta) * sd : -to_real(k.beta) * sd);
    // t < 0; theta = +- i sqrt(-t); which in {0,1}: +, {2,3}: -
    Real s = sqrt(-t);
    if (which >= 2) s = -s;
    Real re = to_real(x(0)) + to_real(x(2)) * t;
    Real im = s * (to_real(x(1)) + to_real(x(3)) * t);
    return {re, im};
}

// ---------------------------------------------------------------------------
// construction and the maximal order

namespace {

// rows = basis of an order in power coordinates; computes disc of the
// trace form Tr(b_i b_j)
Int order_disc(const CMQuartic& k, const MatQ& rows) {
    Mat4q g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            KElem bi = rows.row(i).transpose(), bj = rows.row(j).transpose();
            g(i, j) = k_trace(k, k_mul(k, bi, bj));
        }
    Rat d = g.determinant();
    if (denominator(d) != 1) throw invariant_failure("order_disc: non-integral trace form");
    return numerator(d);
}

// integral structure constants of the Z-module spanned by rows (must be a ring)
bool ring_structure(const CMQuartic& k, const MatQ& rows,
                    std::array<std::array<Vec4i, 4>, 4>* out) {
    Mat4q m = rows.transpose();   // columns = basis
    Mat4q minv = m.inverse();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            KElem prod = k_mul(k, rows.row(i).transpose(), rows.row(j).transpose());
            Vec4q c = minv * prod;
            for (int t = 0; t < 4; ++t) {
                if (denominator(c(t)) != 1) return false;
                if (out) (*out)[static_cast<size_t>(i)][static_cast<size_t>(j)](t) = numerator(c(t));
            }
        }
    return true;
}

// one round-2 enlargement step at p; returns true if the order grew
bool round2_step(const CMQuartic& k, MatQ& rows, const Int& p) {
    std::array<std::array<Vec4i, 4>, 4> sc;
    if (!ring_structure(k, rows, &sc)) throw invariant_failure("round2: basis is not a ring");

    auto normp = [&](const Int& x) { return ((x % p) + p) % p; };
    auto mul_modp = [&](const Vec4i& a, const Vec4i& b) {
        Vec4i r;
        r.setZero();
        for (int i = 0; i < 4; ++i) {
            if (a(i) == 0) continue;
            for (int j = 0; j < 4; ++j) {
                if (b(j) == 0) continue;
                Int c = normp(a(i) * b(j));
                for (int t = 0; t < 4; ++t)
                    r(t) = normp(r(t) + c * sc[static_cast<size_t>(i)][static_cast<size_t>(j)](t));
            }
        }
        return r;
    };

    // frobenius matrix: columns b_i^p mod p
    MatZ frob(4, 4);
    for (int i = 0; i < 4; ++i) {
        Vec4i acc;
        acc.setZero();
        acc(i) = 1;
        // acc = b_i^p by square and multiply
        Vec4i result;
        result.setZero();
        result(0) = 1;   // wrong unless basis[0] = 1; handled below
        // generic power: b_i^p
        Vec4i base = acc;
        Int e = p;
        bool started = false;
        Vec4i cur;
        cur.setZero();
        while (e > 0) {
            if (e % 2 == 1) {
                if (!started) {
                    cur = base;
                    started = true;
                } else {
                    cur = mul_modp(cur, base);
                }
            }
            base = mul_modp(base, base);
            e /= 2;
        }
        for (int t = 0; t < 4; ++t) frob(t, i) = cur(t);
    }
    // radical = kernel of x -> x^(p^m), p^m >= 4: square the matrix once
    MatZ f2(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Int s = 0;
            for (int t = 0; t < 4; ++t) s += frob(i, t) * frob(t, j);
            f2(i, j) = normp(s);
        }
    MatZ ker = kernel_mod_p(f2.transpose(), p);   // rows v with f2 v^T = 0

    // radical lattice I (in order coordinates): pZ^4 + kernel lifts
    MatZ ilat(4 + ker.rows(), 4);
    ilat.setZero();
    for (int i = 0; i < 4; ++i) ilat(i, i) = p;
    for (int i = 0; i < ker.rows(); ++i) ilat.row(4 + i) = ker.row(i);
    MatZ w = hnf(std::move(ilat));   // 4x4 basis of I

    // multiplier condition: y in O with y * w_j in p*I for all j
    // coords of b_i * w_j in the w-basis
    MatQ winv(4, 4);
    {
        Mat4q wq;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) wq(i, j) = Rat(w(i, j));
        winv = wq.transpose().inverse();   // solve x * w = v  ->  coords
    }
    MatZ cond(4, 16);
    for (int i = 0; i < 4; ++i) {
        Vec4i bi;
        bi.setZero();
        bi(i) = 1;
        for (int j = 0; j < 4; ++j) {
            // b_i * w_j in order coords (exact, not mod p)
            Vec4q prod;
            prod.setZero();
            for (int t = 0; t < 4; ++t) {
                if (w(j, t) == 0) continue;
                for (int u = 0; u < 4; ++u)
                    prod(u) += Rat(w(j, t)) *
                               Rat(sc[static_cast<size_t>(i)][static_cast<size_t>(t)](u));
            }
            Vec4q coords = winv * prod;
            for (int m = 0; m < 4; ++m) {
                if (denominator(coords(m)) != 1)
                    throw invariant_failure("round2: radical not an ideal");
                cond(i, 4 * j + m) = normp(numerator(coords(m)));
            }
        }
    }
    MatZ ys = kernel_mod_p(cond, p);
    if (ys.rows() == 0) return false;

    // candidate enlargement: O + (1/p) * lifts
    MatQ bigger(4 + ys.rows(), 4);
    for (int i = 0; i < 4; ++i) bigger.row(i) = rows.row(i);
    for (int i = 0; i < ys.rows(); ++i) {
        KElem y;
        y.setZero();
        for (int t = 0; t < 4; ++t) {
            KElem bt = rows.row(t).transpose();
            y += Rat(ys(i, t)) * bt;
        }
        bigger.row(4 + i) = (y / Rat(p)).transpose();
    }
    QLattice lat = QLattice::from_rows(bigger);
    MatQ newrows = lat.rows();
    if (newrows == rows) return false;
    Int od = order_disc(k, rows), nd = order_disc(k, newrows);
    if (abs(nd) >= abs(od)) return false;
    rows = newrows;
    return true;
}

}  // namespace

CMQuartic construct_cm_quartic(const Int& d, const Rat& alpha, const Rat& beta) {
    if (d <= 0 || squarefree_part(d) != d)
        throw invalid_input("construct: d must be positive and squarefree");
    if (beta == 0) throw invalid_input("construct: beta = 0 gives a biquadratic field");
    CMQuartic k;
    k.d = d;
    k.alpha = alpha;
    k.beta = beta;
    // totally negative: alpha < 0 and alpha^2 > beta^2 d
    if (!(alpha < 0 && alpha * alpha > beta * beta * Rat(d)))
        throw invalid_input("construct: r = alpha + beta sqrt(d) is not totally negative");
    // integrality of r in O_{K+}
    Rat n0 = alpha * alpha - beta * beta * Rat(d);
    Rat t0 = 2 * alpha;
    if (denominator(t0) != 1 || denominator(n0) != 1)
        throw invalid_input("construct: r is not an algebraic integer");
    k.minpoly.c = {numerator(n0), Int(0), -numerator(t0), Int(0), Int(1)};

    // starting order Z[w] + Z[w] theta, w = (1+sqrt d)/2 or sqrt d
    MatQ rows(4, 4);
    rows.setZero();
    rows(0, 0) = 1;
    // sqrt d = (theta^2 - alpha)/beta
    Rat inv_b = 1 / beta;
    KElem sqrtd;
    sqrtd << -alpha * inv_b, Rat(0), inv_b, Rat(0);
    KElem w = sqrtd;
    if (((d % 4) + 4) % 4 == 1) {
        w = (sqrtd + k_from_rat(1)) / Rat(2);
    }
    rows.row(1) = w.transpose();
    KElem theta;
    theta << 0, 1, 0, 0;
    rows.row(2) = theta.transpose();
    rows.row(3) = k_mul(k, w, theta).transpose();

    // saturate at primes whose square divides the discriminant
    for (int guard = 0; guard < 64; ++guard) {
        Int dsc = order_disc(k, rows);
        bool grew = false;
        for (auto& [p, e] : factorize(abs(dsc))) {
            if (e < 2) continue;
            if (round2_step(k, rows, p)) {
                grew = true;
                break;
            }
        }
        if (!grew) break;
    }

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) k.ibasis(i, j) = rows(i, j);
    k.ibasis_inv = Mat4q(k.ibasis.transpose()).inverse();
    k.disc = order_disc(k, rows);
    if (!ring_structure(k, rows, &k.mult))
        throw invariant_failure("construct: maximal order structure not integral");
    return k;
}

CMQuartic parse_cm_field(const std::string& descriptor) {
    std::istringstream in(descriptor);
    std::string tok;
    std::optional<Int> d;
    std::optional<Rat> alpha, beta;
    while (in >> tok) {
        if (tok == "cmfield") continue;
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw invalid_input("field descriptor: expected key=value, got '" + tok + "'");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "d")
                d = Int(val);
            else if (key == "alpha")
                alpha = Rat(val);
            else if (key == "beta")
                beta = Rat(val);
            else
                throw invalid_input("field descriptor: unknown key '" + key + "'");
        } catch (const std::exception&) {
            throw invalid_input("field descriptor: bad value '" + val + "'");
        }
    }
    if (!d || !alpha || !beta)
        throw invalid_input("field descriptor needs d=, alpha=, beta=");
    return construct_cm_quartic(*d, *alpha, *beta);
}

bool is_primitive(const CMQuartic& k) {
    Rat n0 = k.norm_r();
    return !is_square(numerator(n0));   // denominator is 1 by construction
}

GaloisType galois_type(const CMQuartic& k) {
    if (!is_primitive(k)) throw invalid_input("galois_type: field is not primitive");
    Int m = numerator(k.norm_r()) * k.d;
    return is_square(m) ? GaloisType::cyclic : GaloisType::non_galois;
}

Int denominator_bound(const CMQuartic& k) {
    Rat t = k.trace_r();
    Rat b = Rat(16) * Rat(k.d) * Rat(k.d) * t * t;
    return numerator(b);
}

std::vector<CMType> cm_types(const CMQuartic&) {
    return {{0, 1}, {0, 3}, {2, 1}, {2, 3}};
}

CMQuartic reflex_field(const CMQuartic& k, const CMType& phi, unsigned check_bits) {
    if (!is_primitive(k)) throw invalid_input("reflex_field: field is not primitive");
    Int n0 = numerator(k.norm_r());
    Int dstar = squarefree_part(n0);
    Int m = isqrt(n0 / dstar);
    CMQuartic ref = construct_cm_quartic(dstar, 2 * k.alpha, Rat(2 * m));

    // numeric certification: eta = sum of phi(theta) satisfies the quartic
    precision_guard g(check_bits);
    KElem theta;
    theta << 0, 1, 0, 0;
    Cplx eta = embed(k, theta, phi.e1, check_bits) + embed(k, theta, phi.e2, check_bits);
    Cplx v = pow_int(eta, 4) - Cplx(to_real(4 * k.alpha)) * pow_int(eta, 2) +
             Cplx(to_real(4 * numerator(k.beta * k.beta) * k.d / denominator(k.beta * k.beta)));
    if (abs(v) > ldexp(Real(1), -static_cast<int>(check_bits / 4)))
        throw precision_exhausted("reflex_field: numeric certification failed");
    return ref;
}

std::vector<Mat4q> field_automorphism_matrices(const CMQuartic& k) {
    std::vector<Mat4q> out;
    Mat4q id = Mat4q::Identity();
    out.push_back(id);
    Mat4q conj = Mat4q::Zero();
    conj(0, 0) = 1;
    conj(1, 1) = -1;
    conj(2, 2) = 1;
    conj(3, 3) = -1;
    if (galois_type(k) == GaloisType::non_galois) {
        out.push_back(conj);
        return out;
    }
    // cyclic: sigma(theta) = c / (sqrt(d) theta), c^2 = d * N(r)
    Int c = isqrt(k.d * numerator(k.norm_r()));
    KElem theta;
    theta << 0, 1, 0, 0;
    Rat inv_b = 1 / k.beta;
    KElem sqrtd;
    sqrtd << -k.alpha * inv_b, Rat(0), inv_b, Rat(0);
    KElem sigma_theta = Rat(c) * k_inv(k, k_mul(k, sqrtd, theta));
    // sanity: sigma(theta)^2 = alpha - beta sqrt d
    KElem sq = k_mul(k, sigma_theta, sigma_theta);
    KElem rbar = k_from_rat(k.alpha) - k.beta * sqrtd;
    if (!(sq == rbar)) throw invariant_failure("cyclic automorphism failed verification");
    Mat4q sigma;
    KElem pw = k_from_rat(1);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) sigma(i, j) = pw(i);
        pw = k_mul(k, pw, sigma_theta);
    }
    out.push_back(sigma);
    out.push_back(sigma * sigma);
    out.push_back(sigma * sigma * sigma);
    return out;
}

// ---------------------------------------------------------------------------
// ideals

KIdeal ideal_whole_ring() {
    KIdeal a;
    a.lat.scale = 1;
    a.lat.basis = Mat4z::Identity();
    return a;
}

KIdeal ideal_from_rows(const MatQ& rows) {
    KIdeal a;
    a.lat = QLattice::from_rows(rows);
    return a;
}

namespace {

// multiplication of integral-coordinate vectors through the structure tensor
Vec4q int_mul(const CMQuartic& k, const Vec4q& a, const Vec4q& b) {
    Vec4q r;
    r.setZero();
    for (int i = 0; i < 4; ++i) {
        if (a(i) == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (b(j) == 0) continue;
            Rat c = a(i) * b(j);
            for (int t = 0; t < 4; ++t)
                r(t) += c * Rat(k.mult[static_cast<size_t>(i)][static_cast<size_t>(j)](t));
        }
    }
    return r;
}

}  // namespace

KIdeal ideal_mul(const CMQuartic& k, const KIdeal& a, const KIdeal& b) {
    MatQ ra = a.lat.rows(), rb = b.lat.rows();
    MatQ prods(16, 4);
    int r = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            prods.row(r++) = int_mul(k, ra.row(i).transpose(), rb.row(j).transpose()).transpose();
    return ideal_from_rows(prods);
}

KIdeal ideal_scale(const KIdeal& a, const Rat& s) {
    KIdeal b = a;
    b.lat.scale *= s;
    if (b.lat.scale < 0) b.lat.scale = -b.lat.scale;
    return b;
}

KIdeal apply_matrix_to_ideal(const CMQuartic& k, const Mat4q& power_map, const KIdeal& a) {
    MatQ rows = a.lat.rows();
    MatQ out(4, 4);
    for (int i = 0; i < 4; ++i) {
        KElem x = power_from_integral(k, rows.row(i).transpose());
        KElem y = power_map * x;
        out.row(i) = integral_from_power(k, y).transpose();
    }
    return ideal_from_rows(out);
}

KIdeal ideal_conj(const CMQuartic& k, const KIdeal& a) {
    Mat4q conj = Mat4q::Zero();
    conj(0, 0) = 1;
    conj(1, 1) = -1;
    conj(2, 2) = 1;
    conj(3, 3) = -1;
    return apply_matrix_to_ideal(k, conj, a);
}

Rat ideal_norm(const CMQuartic& k, const KIdeal& a) {
    (void)k;
    return a.lat.covolume_det();
}

KIdeal principal_ideal(const CMQuartic& k, const KElem& g) {
    MatQ rows(4, 4);
    for (int j = 0; j < 4; ++j) {
        KElem bj = power_from_integral(k, Vec4q::Unit(j));
        rows.row(j) = integral_from_power(k, k_mul(k, g, bj)).transpose();
    }
    return ideal_from_rows(rows);
}

KIdeal ideal_inverse(const CMQuartic& k, const KIdeal& a) {
    // (O : a) = intersection over generators g of O * g^-1
    MatQ rows = a.lat.rows();
    std::optional<QLattice> acc;
    for (int i = 0; i < 4; ++i) {
        KElem g = power_from_integral(k, rows.row(i).transpose());
        KElem ginv = k_inv(k, g);
        // lattice O * ginv in integral coords: rows b_j * ginv
        MatQ l(4, 4);
        for (int j = 0; j < 4; ++j) {
            KElem bj = power_from_integral(k, Vec4q::Unit(j));
            l.row(j) = integral_from_power(k, k_mul(k, bj, ginv)).transpose();
        }
        QLattice lat = QLattice::from_rows(l);
        acc = acc ? lattice_intersect(*acc, lat) : lat;
    }
    KIdeal inv;
    inv.lat = *acc;
    return inv;
}

KIdeal different_ideal(const CMQuartic& k) {
    // trace-dual of O_K, inverted
    Mat4q tg;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            KElem bi = power_from_integral(k, Vec4q::Unit(i));
            KElem bj = power_from_integral(k, Vec4q::Unit(j));
            tg(i, j) = k_trace(k, k_mul(k, bi, bj));
        }
    Mat4q dual = tg.inverse();   // rows = dual basis in integral coords
    KIdeal codiff;
    codiff.lat = QLattice::from_rows(MatQ(dual));
    return ideal_inverse(k, codiff);
}

std::vector<PrimeIdeal> prime_ideals_above(const CMQuartic& k, const Int& p) {
    if (!is_prime(p)) throw invalid_input("prime_ideals_above: p not prime");
    std::vector<PrimeIdeal> out;

    Int poly_disc;
    {
        // disc of the power basis vs field disc gives the index
        MatQ rows = MatQ::Identity(4, 4);
        Mat4q tg;
        KElem theta;
        theta << 0, 1, 0, 0;
        KElem pw = k_from_rat(1);
        std::array<KElem, 4> pws;
        for (int i = 0; i < 4; ++i) {
            pws[static_cast<size_t>(i)] = pw;
            pw = k_mul(k, pw, theta);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                tg(i, j) = k_trace(k, k_mul(k, pws[static_cast<size_t>(i)], pws[static_cast<size_t>(j)]));
        poly_disc = numerator(tg.determinant());
    }
    Int index_sq = poly_disc / k.disc;

    if (index_sq % p != 0) {
        // factor the minimal polynomial mod p
        std::uint64_t pp = p.convert_to<std::uint64_t>();
        FpP f;
        for (auto& c : k.minpoly.c) f.push_back(((c % p + p) % p).convert_to<std::uint64_t>());
        auto factors = fp_factor(f, pp);
        for (auto& [g, e] : factors) {
            // ideal p O + g(theta) O
            KElem gt;
            gt.setZero();
            KElem pw = k_from_rat(1);
            KElem theta;
            theta << 0, 1, 0, 0;
            for (size_t i = 0; i < g.size(); ++i) {
                gt += Rat(Int(g[i])) * pw;
                pw = k_mul(k, pw, theta);
            }
            MatQ rows(8, 4);
            for (int j = 0; j < 4; ++j) {
                rows.row(j) = Rat(p) * MatQ::Identity(4, 4).row(j);
                KElem bj = power_from_integral(k, Vec4q::Unit(j));
                rows.row(4 + j) = integral_from_power(k, k_mul(k, gt, bj)).transpose();
            }
            PrimeIdeal pi;
            pi.ideal = ideal_from_rows(rows);
            pi.p = p;
            pi.e = e;
            pi.f = static_cast<int>(g.size()) - 1;
            out.push_back(pi);
        }
    } else {
        // index prime: decompose O/pO by radical + idempotents
        auto normp = [&](const Int& x) { return ((x % p) + p) % p; };
        auto mul_modp = [&](const Vec4i& a, const Vec4i& b) {
            Vec4i r;
            r.setZero();
            for (int i = 0; i < 4; ++i) {
                if (a(i) == 0) continue;
                for (int j = 0; j < 4; ++j) {
                    if (b(j) == 0) continue;
                    Int c = normp(a(i) * b(j));
                    for (int t = 0; t < 4; ++t)
                        r(t) = normp(r(t) +
                                     c * k.mult[static_cast<size_t>(i)][static_cast<size_t>(j)](t));
                }
            }
            return r;
        };
        auto pow_modp = [&](Vec4i a, Int e) {
            Vec4i r;
            r.setZero();
            bool started = false;
            while (e > 0) {
                if (e % 2 == 1) {
                    r = started ? mul_modp(r, a) : a;
                    started = true;
                }
                a = mul_modp(a, a);
                e /= 2;
            }
            if (!started) {
                r.setZero();
                r(0) = 1;   // identity assumed at basis index of 1? see below
            }
            return r;
        };
        (void)pow_modp;

        //  radical via frobenius-squared kernel
        MatZ frob(4, 4);
        for (int i = 0; i < 4; ++i) {
            Vec4i e;
            e.setZero();
            e(i) = 1;
            Vec4i cur;
            cur.setZero();
            bool started = false;
            Vec4i base = e;
            Int ex = p;
            while (ex > 0) {
                if (ex % 2 == 1) {
                    cur = started ? mul_modp(cur, base) : base;
                    started = true;
                }
                base = mul_modp(base, base);
                ex /= 2;
            }
            for (int t = 0; t < 4; ++t) frob(t, i) = cur(t);
        }
        MatZ f2(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Int s = 0;
                for (int t = 0; t < 4; ++t) s += frob(i, t) * frob(t, j);
                f2(i, j) = normp(s);
            }
        MatZ rad = kernel_mod_p(f2.transpose(), p);

        // split the semisimple quotient by idempotents; work directly in A
        // with idempotent seeds, searching elements whose minimal polynomial
        // factors
        std::uint64_t pp = p.convert_to<std::uint64_t>();
        Vec4q one_int = integral_from_power(k, k_from_rat(1));
        Vec4i one;
        for (int t = 0; t < 4; ++t) one(t) = normp(numerator(one_int(t)));

        struct Comp {
            Vec4i e;   // idempotent
            int dim;   // f of the component
        };
        std::vector<Comp> comps;
        std::vector<Vec4i> queue{one};
        // dimension helper: rank of {e*b_i} + rad over F_p... we only need
        // the idempotent split; f computed later from ideal norms
        auto minpoly_in_a = [&](const Vec4i& z, const Vec4i& idem) {
            // powers of z within the unital subalgebra idem*A
            std::vector<Vec4i> pows{idem};
            Vec4i cur = idem;
            for (int t = 1; t <= 4; ++t) {
                cur = mul_modp(cur, z);
                pows.push_back(cur);
            }
            // find first linear dependence
            for (int deg = 1; deg <= 4; ++deg) {
                MatZ m(deg + 1, 4);
                for (int i = 0; i <= deg; ++i)
                    for (int t = 0; t < 4; ++t) m(i, t) = pows[static_cast<size_t>(i)](t);
                MatZ kk = kernel_mod_p(m, p);
                if (kk.rows() > 0) {
                    // normalize: c_deg = 1
                    for (int row = 0; row < kk.rows(); ++row) {
                        if (kk(row, deg) != 0) {
                            FpP mp(static_cast<size_t>(deg) + 1);
                            Int inv = powmod(kk(row, deg), p - 2, p);
                            for (int i = 0; i <= deg; ++i)
                                mp[static_cast<size_t>(i)] =
                                    normp(kk(row, i) * inv).convert_to<std::uint64_t>();
                            return mp;
                        }
                    }
                }
            }
            throw invariant_failure("minpoly_in_a failed");
        };

        FpRng rng;
        rng.s ^= pp * 7919;
        while (!queue.empty()) {
            Vec4i e = queue.back();
            queue.pop_back();
            bool split_found = false;
            for (int attempt = 0; attempt < 200 && !split_found; ++attempt) {
                Vec4i z;
                if (attempt < 4) {
                    Vec4i b;
                    b.setZero();
                    b(attempt) = 1;
                    z = mul_modp(e, b);
                } else {
                    Vec4i rd;
                    for (int t = 0; t < 4; ++t) rd(t) = Int(rng.next() % pp);
                    z = mul_modp(e, rd);
                }
                FpP mp = minpoly_in_a(z, e);
                auto fac = fp_factor(mp, pp);
                // strip radical multiplicities: use distinct factors
                if (fac.size() < 2) continue;
                // bezout split: g1 = first factor^mult, g2 = rest
                FpP g1{1};
                for (int t = 0; t < fac[0].second; ++t) g1 = fp_mulp(g1, fac[0].first, pp);
                FpP g2 = fp_div_exact(mp, g1, pp);
                // extended euclid over F_p
                FpP r0 = g1, r1 = g2, s0{1}, s1{};
                while (!fp_trim(r1).empty()) {
                    FpP q = fp_div_exact(fp_trim(r0), fp_trim(r1), pp);
                    // r0 - q r1
                    FpP prod = fp_mulp(q, r1, pp);
                    FpP nr = r0;
                    nr.resize(std::max(nr.size(), prod.size()), 0);
                    for (size_t t = 0; t < prod.size(); ++t) nr[t] = (nr[t] + pp - prod[t]) % pp;
                    nr = fp_trim(std::move(nr));
                    // s0 - q s1
                    FpP prods = fp_mulp(q, s1, pp);
                    FpP ns = s0;
                    ns.resize(std::max(ns.size(), prods.size()), 0);
                    for (size_t t = 0; t < prods.size(); ++t) ns[t] = (ns[t] + pp - prods[t]) % pp;
                    r0 = r1;
                    r1 = nr;
                    s0 = s1;
                    s1 = fp_trim(std::move(ns));
                    if (fp_trim(r0).size() == 1) break;
                }
                // r0 = gcd = const; u = s0/r0 satisfies u g1 = r0 mod g2
                if (fp_trim(r0).size() != 1) continue;
                std::uint64_t cinv = fp_inv(fp_trim(r0)[0], pp);
                FpP u = s0;
                for (auto& cc : u) cc = fp_mul(cc, cinv, pp);
                // e1 = u(z) g1(z) (projector onto the g2 part), e2 = e - e1
                auto eval_poly = [&](const FpP& poly) {
                    Vec4i acc;
                    acc.setZero();
                    Vec4i pw = e;
                    for (size_t t = 0; t < poly.size(); ++t) {
                        if (poly[t]) {
                            Vec4i term = pw;
                            for (int x = 0; x < 4; ++x)
                                acc(x) = normp(acc(x) + Int(poly[t]) * term(x));
                        }
                        pw = mul_modp(pw, z);
                    }
                    return acc;
                };
                Vec4i ug = mul_modp(eval_poly(u), eval_poly(g1));
                Vec4i e2 = ug;   // idempotent onto component with min poly g2
                Vec4i e1;
                for (int t = 0; t < 4; ++t) e1(t) = normp(e(t) - e2(t));
                // degenerate splits can occur when mp had radical structure
                if (mul_modp(e1, e1) == e1 && mul_modp(e2, e2) == e2 &&
                    !(e1 == Vec4i(Vec4i::Zero())) && !(e2 == Vec4i(Vec4i::Zero()))) {
                    queue.push_back(e1);
                    queue.push_back(e2);
                    split_found = true;
                }
            }
            if (!split_found) comps.push_back({e, 0});
        }

        // build prime ideals: p O + rad + (1 - e_i) A
        for (auto& comp : comps) {
            Vec4i em;
            for (int t = 0; t < 4; ++t) em(t) = normp(one(t) - comp.e(t));
            MatQ rows(4 + rad.rows() + 4, 4);
            int r = 0;
            for (int j = 0; j < 4; ++j) rows.row(r++) = Rat(p) * MatQ::Identity(4, 4).row(j);
            for (int j = 0; j < rad.rows(); ++j) {
                for (int t = 0; t < 4; ++t) rows(r, t) = Rat(rad(j, t));
                ++r;
            }
            for (int j = 0; j < 4; ++j) {
                Vec4i b;
                b.setZero();
                b(j) = 1;
                Vec4i prod = mul_modp(em, b);
                for (int t = 0; t < 4; ++t) rows(r, t) = Rat(prod(t));
                ++r;
            }
            PrimeIdeal pi;
            pi.ideal = ideal_from_rows(rows);
            pi.p = p;
            Rat nrm = ideal_norm(k, pi.ideal);
            Int n = numerator(nrm);
            pi.f = 0;
            Int q = n;
            while (q > 1) {
                q /= p;
                pi.f += 1;
            }
            pi.e = 1;
            out.push_back(pi);
        }
        // ramification indices: largest e with p O inside ideal^e
        for (auto& pi : out) {
            KIdeal pw = pi.ideal;
            KIdeal po = ideal_scale(ideal_whole_ring(), Rat(p));
            int e = 1;
            for (int t = 2; t <= 4; ++t) {
                pw = ideal_mul(k, pw, pi.ideal);
                // containment p O in pw
                bool inside = true;
                MatQ prows = po.lat.rows();
                for (int i = 0; i < 4 && inside; ++i)
                    if (!pw.lat.contains(prows.row(i).transpose())) inside = false;
                if (inside)
                    e = t;
                else
                    break;
            }
            pi.e = e;
        }
    }

    // certification: sum e f = 4 and norm product = p^4
    int total = 0;
    for (auto& pi : out) total += pi.e * pi.f;
    if (total != 4)
        throw invariant_failure("prime_ideals_above: sum e*f = " + std::to_string(total) +
                                " for p = " + p.str());
    return out;
}

DecompCondition decomposition_condition(const CMQuartic& k, const Int& p) {
    if (galois_type(k) != GaloisType::cyclic) return DecompCondition::unknown;
    auto primes = prime_ideals_above(k, p);
    bool ramified = false;
    for (auto& pi : primes)
        if (pi.e > 1) ramified = true;
    if (ramified || primes.size() == 2) return DecompCondition::satisfied;
    return DecompCondition::not_satisfied;
}

// ---------------------------------------------------------------------------
// units

namespace {

// fundamental Pell solution for x^2 - d y^2 = +-1 by continued fractions
std::pair<Int, Int> pell_unit(const Int& d) {
    Int a0 = isqrt(d);
    Int m = 0, dd = 1, a = a0;
    Int p0 = 1, p1 = a0, q0 = 0, q1 = 1;
    for (int iter = 0; iter < 100000; ++iter) {
        if (p1 * p1 - d * q1 * q1 == 1 || p1 * p1 - d * q1 * q1 == -1) return {p1, q1};
        m = dd * a - m;
        dd = (d - m * m) / dd;
        a = (a0 + m) / dd;
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        p1 = p2;
        q0 = q1;
        q1 = q2;
    }
    throw invariant_failure("pell_unit: continued fraction did not close");
}

}  // namespace

UnitData unit_data(const CMQuartic& k, unsigned bits) {
    precision_guard g(bits);
    UnitData u;
    auto [x, y] = pell_unit(k.d);

    // fundamental unit of O_{K+}: either x + y sqrt(d) or a half-integral
    // solution of x^2 - d y^2 = +-4 when d = 1 mod 4
    Rat ux(x), uy(y), den(1);
    if (((k.d % 4) + 4) % 4 == 1) {
        for (Int yy = 1; yy <= y; ++yy) {
            Int t1 = k.d * yy * yy - 4, t2 = k.d * yy * yy + 4;
            Int xx;
            bool found = false;
            if (t1 > 0 && is_square(t1)) {
                xx = isqrt(t1);
                if ((xx - yy) % 2 == 0) found = true;
            }
            if (!found && is_square(t2)) {
                xx = isqrt(t2);
                if ((xx - yy) % 2 == 0) found = true;
            }
            if (found) {
                ux = Rat(xx, 2);
                uy = Rat(yy, 2);
                den = 2;
                break;
            }
        }
    }
    Rat inv_b = 1 / k.beta;
    KElem sqrtd;
    sqrtd << -k.alpha * inv_b, Rat(0), inv_b, Rat(0);
    u.eps = k_from_rat(ux) + uy * sqrtd;
    Rat nrm = ux * ux - Rat(k.d) * uy * uy;   // norm over Q of the K+ unit
    u.eps_tot_pos = (nrm == 1);
    u.eps_plus = u.eps_tot_pos ? u.eps : k_mul(k, u.eps, u.eps);
    // real value of eps_plus at the sqrt(d) > 0 place; both embeddings positive
    Real sd = sqrt(to_real(k.d));
    Real e1 = abs(to_real(ux) + to_real(uy) * sd);
    if (!u.eps_tot_pos) e1 = e1 * e1;
    if (e1 < 1) e1 = 1 / e1;
    u.eps_plus_large = e1;

    // roots of unity: T2 = 4 exactly
    {
        MatQ id = MatQ::Identity(4, 4);
        Eigen::MatrixXd g2 = t2_gram(k, id, bits);
        enumerate_short_vectors(g2, 4.5, [&](const VecX<Int>& v) {
            Vec4q c;
            for (int t = 0; t < 4; ++t) c(t) = Rat(v(t));
            KElem z = power_from_integral(k, c);
            if (k_norm(k, z) != 1) return;
            KElem pw = z;
            for (int n = 1; n <= 24; ++n) {
                if (pw == k_from_rat(1)) {
                    u.roots_of_unity.push_back(z);
                    return;
                }
                pw = k_mul(k, pw, z);
            }
        });
    }

    // t = [U+ : N(U_K)]: 1 when eps has norm -1; otherwise search u with
    // u * conj(u) = eps inside the balanced region T2 = 2(e1 + 1/e1)
    if (!u.eps_tot_pos) {
        u.xi_classes = 1;
    } else {
        u.xi_classes = 2;
        MatQ id = MatQ::Identity(4, 4);
        Eigen::MatrixXd g2 = t2_gram(k, id, bits);
        double bound = 2.0 * (u.eps_plus_large.convert_to<double>() +
                              1.0 / u.eps_plus_large.convert_to<double>()) *
                           1.000001 +
                       0.5;
        bool found = false;
        enumerate_short_vectors(g2, bound, [&](const VecX<Int>& v) {
            if (found) return;
            Vec4q c;
            for (int t = 0; t < 4; ++t) c(t) = Rat(v(t));
            KElem z = power_from_integral(k, c);
            if (k_mul(k, z, k_conj(z)) == u.eps) found = true;
        });
        if (found) u.xi_classes = 1;
    }
    return u;
}

// ---------------------------------------------------------------------------
// principality

Eigen::MatrixXd t2_gram(const CMQuartic& k, const MatQ& rows_integral, unsigned bits) {
    precision_guard g(bits);
    const int n = static_cast<int>(rows_integral.rows());
    std::vector<Cplx> e0(static_cast<size_t>(n)), e1(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        KElem x = power_from_integral(k, rows_integral.row(i).transpose());
        e0[static_cast<size_t>(i)] = embed(k, x, 0, bits);
        e1[static_cast<size_t>(i)] = embed(k, x, 1, bits);
    }
    Eigen::MatrixXd gm(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Real v = 2 * (e0[static_cast<size_t>(i)].re * e0[static_cast<size_t>(j)].re +
                          e0[static_cast<size_t>(i)].im * e0[static_cast<size_t>(j)].im) +
                     2 * (e1[static_cast<size_t>(i)].re * e1[static_cast<size_t>(j)].re +
                          e1[static_cast<size_t>(i)].im * e1[static_cast<size_t>(j)].im);
            gm(i, j) = v.convert_to<double>();
        }
    return gm;
}

namespace {

std::optional<KElem> generator_search(const CMQuartic& k, const KIdeal& a, const UnitData& u,
                                      unsigned bits, bool imaginary_only) {
    // integral primitive part
    Rat scale = a.lat.scale;
    MatQ rows(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows(i, j) = Rat(a.lat.basis(i, j));
    Int n = abs(det_bareiss(a.lat.basis));

    MatQ enum_rows = rows;
    Mat4q to_power;   // columns: enum basis in power coords
    if (imaginary_only) {
        // sublattice with conj(x) = -x: integer kernel of rows*(C + I)
        Mat4q conj = Mat4q::Zero();
        conj(0, 0) = 1;
        conj(1, 1) = -1;
        conj(2, 2) = 1;
        conj(3, 3) = -1;
        // map integral coords -> power -> conj -> integral
        Mat4q cmap;
        {
            Mat4q pw = k.ibasis.transpose();   // int -> power (column action)
            cmap = k.ibasis_inv * conj * pw;
        }
        // x (coeffs over rows) with rows^T x mapped to -itself
        MatZ m(4, 4);
        for (int i = 0; i < 4; ++i) {
            Vec4q v = rows.row(i).transpose();
            Vec4q im = cmap * v + v;
            for (int j = 0; j < 4; ++j) {
                if (denominator(im(j)) != 1)
                    throw invariant_failure("imaginary sublattice: non-integral map");
                m(i, j) = numerator(im(j));
            }
        }
        MatZ ker = kernel_int(m);
        if (ker.rows() == 0) return std::nullopt;
        MatQ sub(ker.rows(), 4);
        for (int i = 0; i < ker.rows(); ++i) {
            Vec4q acc;
            acc.setZero();
            for (int t = 0; t < 4; ++t) acc += Rat(ker(i, t)) * rows.row(t).transpose();
            sub.row(i) = acc.transpose();
        }
        enum_rows = sub;
    }

    Eigen::MatrixXd g2 = t2_gram(k, enum_rows, bits);
    double e1 = u.eps_plus_large.convert_to<double>();
    double bound = 2.0 * (e1 + 1.0 / e1) * std::sqrt(n.convert_to<double>()) * 1.0000001 + 1e-6;

    std::vector<KElem> hits;
    enumerate_short_vectors(g2, bound, [&](const VecX<Int>& v) {
        Vec4q c;
        c.setZero();
        for (int t = 0; t < static_cast<int>(enum_rows.rows()); ++t)
            c += Rat(v(t)) * enum_rows.row(t).transpose();
        KElem z = power_from_integral(k, c);
        Rat nz = k_norm(k, z);
        if (abs(numerator(nz)) == n && denominator(nz) == 1) hits.push_back(z);
    });
    if (hits.empty()) return std::nullopt;
    std::sort(hits.begin(), hits.end(), [](const KElem& x, const KElem& y) {
        for (int i = 0; i < 4; ++i)
            if (x(i) != y(i)) return x(i) < y(i);
        return false;
    });
    KElem best = hits.front();
    // restore the fractional scale
    return KElem(best * scale);
}

}  // namespace

std::optional<KElem> principal_generator(const CMQuartic& k, const KIdeal& a, const UnitData& u,
                                         unsigned bits) {
    return generator_search(k, a, u, bits, false);
}

std::optional<KElem> imaginary_generator(const CMQuartic& k, const KIdeal& a, const UnitData& u,
                                         unsigned bits) {
    return generator_search(k, a, u, bits, true);
}

// ---------------------------------------------------------------------------
// class group

ClassGroup class_group(const CMQuartic& k, const UnitData& u, long budget_classes) {
    precision_guard g(320);
    Real mb = Real(3) / (2 * pi_value() * pi_value()) * sqrt(to_real(abs(k.disc)));
    long bound = static_cast<long>(mb.convert_to<double>()) + 1;

    std::vector<KIdeal> gens;
    for (long p = 2; p <= bound; ++p) {
        if (!is_prime(Int(p))) continue;
        for (auto& pi : prime_ideals_above(k, Int(p))) {
            Rat nrm = ideal_norm(k, pi.ideal);
            if (nrm <= Rat(bound)) gens.push_back(pi.ideal);
        }
    }

    ClassGroup cg;
    cg.reps.push_back(ideal_whole_ring());
    auto is_equiv = [&](const KIdeal& a, const KIdeal& b) {
        KIdeal q = ideal_mul(k, a, ideal_inverse(k, b));
        return principal_generator(k, q, u).has_value();
    };
    std::vector<int> queue{0};
    while (!queue.empty()) {
        int cur = queue.back();
        queue.pop_back();
        for (auto& gp : gens) {
            KIdeal prod = ideal_mul(k, cg.reps[static_cast<size_t>(cur)], gp);
            bool known = false;
            for (auto& r : cg.reps)
                if (is_equiv(prod, r)) {
                    known = true;
                    break;
                }
            if (!known) {
                cg.reps.push_back(prod);
                queue.push_back(static_cast<int>(cg.reps.size()) - 1);
                if (static_cast<long>(cg.reps.size()) > budget_classes)
                    throw budget_exceeded("class_group: class budget exceeded");
            }
        }
    }
    return cg;
}

int class_of(const CMQuartic& k, const ClassGroup& cg, const UnitData& u, const KIdeal& a) {
    for (size_t i = 0; i < cg.reps.size(); ++i) {
        KIdeal q = ideal_mul(k, a, ideal_inverse(k, cg.reps[i]));
        if (principal_generator(k, q, u).has_value()) return static_cast<int>(i);
    }
    throw invariant_failure("class_of: ideal not matched to any class");
}

}  // namespace cmq
