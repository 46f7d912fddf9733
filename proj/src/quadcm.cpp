#include "cmq/quadcm.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <numeric>

namespace cmq {

QuadOrder make_quad_order(const Int& disc) {
    if (disc >= 0) throw invalid_input("quad order discriminant must be negative");
    Int m4 = ((disc % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) throw invalid_input("discriminant must be 0 or 1 mod 4");
    QuadOrder o;
    o.disc = disc;
    Int sf = squarefree_part(disc);
    Int d_k = (((sf % 4) + 4) % 4 == 1) ? sf : 4 * sf;
    o.field_disc = d_k;
    o.conductor = isqrt(disc / d_k);
    return o;
}

std::vector<ReducedForm> reduced_forms(const Int& disc) {
    Int m4 = ((disc % 4) + 4) % 4;
    if (disc >= 0 || (m4 != 0 && m4 != 1))
        throw invalid_input("reduced_forms: invalid discriminant " + disc.str());
    std::vector<ReducedForm> out;
    Int amax = isqrt(-disc / 3);
    for (Int a = 1; a <= amax; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if ((((b * b - disc) % (4 * a)) + 4 * a) % (4 * a) != 0) continue;
            if ((((b - disc) % 2) + 2) % 2 != 0) continue;   // b = disc mod 2
            Int c = (b * b - disc) / (4 * a);
            if (c < a) continue;
            if (b < 0 && (c == a)) continue;   // b >= 0 when a = c (|b| = a handled by range)
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end(), [](const ReducedForm& x, const ReducedForm& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    return out;
}

Int class_number(const Int& disc) { return Int(reduced_forms(disc).size()); }

// ---------------------------------------------------------------------------
// q-series machinery

Cplx sl2_reduce(Cplx tau) {
    for (int iter = 0; iter < 10000; ++iter) {
        Real n;
        mpfr_round(n.backend().data(), tau.re.backend().data());
        tau.re -= n;
        if (norm_sq(tau) >= Real("0.999999999")) break;
        tau = -inv(tau);
    }
    return tau;
}

namespace {

// sigma_k(n) for n = 1..nmax
std::vector<Int> divisor_power_sums(long nmax, int k) {
    std::vector<Int> s(static_cast<size_t>(nmax + 1), Int(0));
    for (long d = 1; d <= nmax; ++d) {
        Int dk = pow(Int(d), static_cast<unsigned>(k));
        for (long n = d; n <= nmax; n += d) s[static_cast<size_t>(n)] += dk;
    }
    return s;
}

long series_terms(const Real& log2_abs_q, unsigned bits) {
    // smallest N with N^6 * |q|^N below 2^-(bits+24); crude but safe
    double l = log2_abs_q.convert_to<double>();   // negative
    double target = -(static_cast<double>(bits) + 24.0);
    long n = 8;
    while (static_cast<double>(n) * l + 6.0 * std::log2(static_cast<double>(n)) > target) {
        n += std::max<long>(4, n / 8);
        if (n > 200000000L) throw precision_exhausted("series_terms: tau too close to the real axis");
    }
    return n;
}

struct QSeriesPoint {
    Cplx q;          // exp(2 pi i tau)
    Real log2_abs_q; // for truncation control
};

QSeriesPoint make_q(const Cplx& tau) {
    if (tau.im <= 0) throw invalid_input("tau not in the upper half plane");
    Real two_pi = 2 * pi_value();
    QSeriesPoint p;
    p.q = exp(Cplx(-two_pi * tau.im, two_pi * tau.re));
    p.log2_abs_q = -two_pi * tau.im / log(Real(2));
    return p;
}

Cplx e_series(const Cplx& q, const Real& log2q, unsigned bits, int weight) {
    long n = series_terms(log2q, bits);
    static thread_local std::vector<Int> sig3, sig5;
    auto& tbl = (weight == 4) ? sig3 : sig5;
    if (static_cast<long>(tbl.size()) <= n) tbl = divisor_power_sums(n + 16, weight - 1);
    Cplx sum(Real(1));
    Cplx qk(Real(1));
    const Real factor = (weight == 4) ? Real(240) : Real(-504);
    for (long k = 1; k <= n; ++k) {
        qk = qk * q;
        sum += factor * to_real(tbl[static_cast<size_t>(k)]) * qk;
    }
    return sum;
}

Cplx delta_series(const Cplx& q, const Real& log2q, unsigned bits) {
    // Delta = q * (sum_{k in Z} (-1)^k q^{k(3k-1)/2})^24, pentagonal numbers
    double l = log2q.convert_to<double>();
    Cplx s(Real(1));
    for (long k = 1;; ++k) {
        long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
        if (static_cast<double>(e1) * l < -(static_cast<double>(bits) + 24.0)) break;
        Cplx t = pow_int(q, e1) + pow_int(q, e2);
        s = (k % 2) ? s - t : s + t;
    }
    return q * pow_int(s, 24);
}

}  // namespace

Cplx eisenstein_e4(const Cplx& tau, const PrecisionContext& ctx) {
    precision_guard g(ctx.bits + 32);
    auto p = make_q(tau);
    return e_series(p.q, p.log2_abs_q, ctx.bits, 4);
}

Cplx eisenstein_e6(const Cplx& tau, const PrecisionContext& ctx) {
    precision_guard g(ctx.bits + 32);
    auto p = make_q(tau);
    return e_series(p.q, p.log2_abs_q, ctx.bits, 6);
}

Cplx delta_cusp_form(const Cplx& tau, const PrecisionContext& ctx) {
    precision_guard g(ctx.bits + 32);
    auto p = make_q(tau);
    return delta_series(p.q, p.log2_abs_q, ctx.bits);
}

Cplx j_invariant(const Cplx& tau, const PrecisionContext& ctx) {
    precision_guard g(ctx.bits + 64);
    Cplx t = sl2_reduce(tau);
    auto p = make_q(t);
    Cplx e4 = e_series(p.q, p.log2_abs_q, ctx.bits + 32, 4);
    Cplx dl = delta_series(p.q, p.log2_abs_q, ctx.bits + 32);
    return pow_int(e4, 3) / dl;
}

// ---------------------------------------------------------------------------
// Hilbert class polynomials

IntPoly hilbert_class_polynomial(const Int& disc, const PrecisionContext& ctx) {
    auto forms = reduced_forms(disc);
    if (forms.empty()) throw invalid_input("hilbert_class_polynomial: no forms");
    precision_guard g(ctx.bits + 64);
    Real rt = sqrt(to_real(-disc));
    std::vector<Cplx> roots;
    for (auto& f : forms) {
        Cplx tau{to_real(Rat(-f.b, 2 * f.a)), rt / to_real(2 * f.a)};
        roots.push_back(j_invariant(tau, PrecisionContext{ctx.bits + 32}));
    }
    // expand prod (X - j)
    std::vector<Cplx> coef{Cplx(Real(1))};
    for (auto& r : roots) {
        coef.insert(coef.begin(), Cplx(Real(0)));
        for (size_t i = 0; i + 1 < coef.size(); ++i) coef[i] = coef[i] - r * coef[i + 1];
    }
    IntPoly out;
    long tol = std::max<long>(32, ctx.bits / 4);
    for (auto& c : coef) {
        if (abs(c.im) > ldexp(Real(1), static_cast<int>(-tol)))
            throw precision_exhausted("hilbert_class_polynomial: imaginary residue");
        auto n = recognize_int(c.re, tol);
        if (!n) throw precision_exhausted("hilbert_class_polynomial: integer recognition failed");
        out.c.push_back(*n);
    }
    out.normalize();
    return out;
}

IntPoly hilbert_class_polynomial_auto(const Int& disc, PrecisionContext start) {
    PrecisionContext ctx = start;
    for (int tries = 0; tries < 8; ++tries) {
        try {
            IntPoly a = hilbert_class_polynomial(disc, ctx);
            IntPoly b = hilbert_class_polynomial(disc, ctx.doubled());
            if (a == b) return a;
        } catch (const precision_exhausted&) {
        }
        ctx = ctx.doubled();
    }
    throw precision_exhausted("hilbert_class_polynomial_auto: escalation cap reached for disc " +
                              disc.str());
}

// ---------------------------------------------------------------------------
// Modular polynomials

long psi_degree(long n) {
    long r = n;
    // n * prod_{p | n} (1 + 1/p)
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            r = r / p * (p + 1);
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) r = r / m * (m + 1);
    return r;
}

namespace {

struct Coset {
    long a, b, d;
};

std::vector<Coset> cosets_of_level(long n) {
    std::vector<Coset> out;
    for (long a = 1; a <= n; ++a) {
        if (n % a) continue;
        long d = n / a;
        for (long b = 0; b < d; ++b) {
            if (std::gcd(std::gcd(a, b), d) != 1) continue;
            out.push_back({a, b, d});
        }
    }
    return out;
}

std::filesystem::path cache_file(const std::filesystem::path& dir, long n) {
    return dir / ("modpoly_" + std::to_string(n) + ".txt");
}

std::optional<BivarIntPoly> load_modpoly(const std::filesystem::path& dir, long n) {
    if (dir.empty()) return std::nullopt;
    std::ifstream in(cache_file(dir, n));
    if (!in) return std::nullopt;
    std::string header;
    if (!std::getline(in, header) || header != "modpoly n=" + std::to_string(n))
        return std::nullopt;
    BivarIntPoly p;
    long i, j;
    std::string coeff;
    while (in >> i >> j >> coeff) {
        if (i < 0 || j < 0) return std::nullopt;
        if (static_cast<size_t>(i) >= p.c.size()) p.c.resize(static_cast<size_t>(i) + 1);
        auto& row = p.c[static_cast<size_t>(i)];
        if (static_cast<size_t>(j) >= row.size()) row.resize(static_cast<size_t>(j) + 1, Int(0));
        row[static_cast<size_t>(j)] = Int(coeff);
    }
    return p;
}

void store_modpoly(const std::filesystem::path& dir, long n, const BivarIntPoly& p) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto final_path = cache_file(dir, n);
    auto lock_path = final_path;
    lock_path += ".lock";
    int fd = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd >= 0) ::flock(fd, LOCK_EX);
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << "modpoly n=" << n << "\n";
        for (size_t i = 0; i < p.c.size(); ++i)
            for (size_t j = 0; j < p.c[i].size(); ++j)
                if (p.c[i][j] != 0) out << i << " " << j << " " << p.c[i][j] << "\n";
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (fd >= 0) {
        ::flock(fd, LOCK_UN);
        ::close(fd);
    }
}

// Newton interpolation through (x_t, y_t), exact check deferred to caller.
std::vector<Real> newton_interpolate(const std::vector<Real>& xs, const std::vector<Real>& ys) {
    const size_t m = xs.size();
    std::vector<Real> dd = ys;   // divided differences, in-place
    for (size_t k = 1; k < m; ++k)
        for (size_t i = m - 1; i >= k; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - k]);
            if (i == k) break;
        }
    // expand newton form into monomial coefficients
    std::vector<Real> coef(m, Real(0));
    std::vector<Real> basis(m, Real(0));   // current prod (x - x_0)...(x - x_{k-1})
    basis[0] = 1;
    size_t basis_deg = 0;
    for (size_t k = 0; k < m; ++k) {
        for (size_t i = 0; i <= basis_deg; ++i) coef[i] += dd[k] * basis[i];
        if (k + 1 < m) {
            // basis *= (x - x_k)
            for (size_t i = basis_deg + 1; i > 0; --i)
                basis[i] = (i > basis_deg ? Real(0) : basis[i]) * (-xs[k]) + basis[i - 1];
            basis[0] = basis[0] * (-xs[k]);
            ++basis_deg;
        }
    }
    return coef;
}

}  // namespace

BivarIntPoly modular_polynomial(long n, const PrecisionContext& ctx,
                                const std::filesystem::path& cache_dir) {
    if (n < 1) throw invalid_input("modular_polynomial: n must be >= 1");
    if (n == 1) {
        BivarIntPoly p;
        p.c = {{Int(0), Int(-1)}, {Int(1)}};   // X - Y
        return p;
    }
    if (auto cached = load_modpoly(cache_dir, n)) return *cached;

    const long psi = psi_degree(n);
    const auto cosets = cosets_of_level(n);
    if (static_cast<long>(cosets.size()) != psi)
        throw invariant_failure("modular_polynomial: coset count mismatch");

    precision_guard g(ctx.bits + 64);
    const long nodes = psi + 1;
    std::vector<Real> xs;   // j(tau_t)
    std::vector<std::vector<Real>> cks(static_cast<size_t>(psi + 1));   // coefficient rows
    PrecisionContext jctx{ctx.bits + 32};

    for (long t = 0; t < nodes; ++t) {
        Cplx tau{Real(0), Real("1.013") + Real(t) * Real("0.3") / Real(nodes)};
        Cplx jt = j_invariant(tau, jctx);
        xs.push_back(jt.re);
        // conjugate j values over the cosets
        std::vector<Cplx> vals;
        for (auto& c : cosets) {
            Cplx ct{(Real(c.a) * tau.re + Real(c.b)) / Real(c.d), Real(c.a) * tau.im / Real(c.d)};
            vals.push_back(j_invariant(ct, jctx));
        }
        // elementary symmetric functions -> coefficients of prod (X - val)
        std::vector<Cplx> coef{Cplx(Real(1))};
        for (auto& r : vals) {
            coef.insert(coef.begin(), Cplx(Real(0)));
            for (size_t i = 0; i + 1 < coef.size(); ++i) coef[i] = coef[i] - r * coef[i + 1];
        }
        long tol = std::max<long>(24, ctx.bits / 8);
        for (long k = 0; k <= psi; ++k) {
            if (abs(coef[static_cast<size_t>(k)].im) >
                ldexp(abs(coef[static_cast<size_t>(k)].re) + Real(1), static_cast<int>(-tol)))
                throw precision_exhausted("modular_polynomial: symmetric functions not real");
            cks[static_cast<size_t>(k)].push_back(coef[static_cast<size_t>(k)].re);
        }
    }

    BivarIntPoly p;
    p.c.assign(static_cast<size_t>(psi + 1), {});
    long tol = std::max<long>(32, ctx.bits / 8);
    for (long k = 0; k <= psi; ++k) {
        std::vector<Real> mono = newton_interpolate(xs, cks[static_cast<size_t>(k)]);
        auto& row = p.c[static_cast<size_t>(k)];
        row.assign(mono.size(), Int(0));
        for (size_t m = 0; m < mono.size(); ++m) {
            auto z = recognize_int(mono[m], tol);
            if (!z) throw precision_exhausted("modular_polynomial: coefficient recognition failed");
            row[m] = *z;
        }
        while (!row.empty() && row.back() == 0) row.pop_back();
    }

    if (!p.symmetric())
        throw precision_exhausted("modular_polynomial: result not symmetric");

    // identity check Phi_n(j(n tau), j(tau)) = 0 at a non-node point; the
    // residual is compared against the absolute-value evaluation scale
    {
        Cplx tau{Real("0.1375"), Real("1.21")};
        Cplx jt = j_invariant(tau, jctx);
        Cplx jnt = j_invariant(Cplx{tau.re * Real(n), tau.im * Real(n)}, jctx);
        Cplx val = p.eval(jnt, jt);
        Real ax = abs(jnt), ay = abs(jt);
        Real scale(1);
        Real xi(1);
        for (size_t i = 0; i < p.c.size(); ++i) {
            Real yj(1);
            for (size_t j = 0; j < p.c[i].size(); ++j) {
                if (p.c[i][j] != 0) scale += abs(to_real(p.c[i][j])) * xi * yj;
                yj *= ay;
            }
            xi *= ax;
        }
        Real bound = scale * ldexp(Real(1), static_cast<int>(-std::max<long>(48, ctx.bits / 4)));
        if (abs(val) > bound)
            throw precision_exhausted("modular_polynomial: identity check failed");
    }

    store_modpoly(cache_dir, n, p);
    return p;
}

BivarIntPoly modular_polynomial_auto(long n, const std::filesystem::path& cache_dir) {
    PrecisionContext ctx{n <= 8 ? 512u : (n <= 14 ? 1280u : 2560u)};
    for (int tries = 0; tries < 6; ++tries) {
        try {
            return modular_polynomial(n, ctx, cache_dir);
        } catch (const precision_exhausted&) {
            ctx = ctx.doubled();
        }
    }
    throw precision_exhausted("modular_polynomial_auto: escalation cap for n = " +
                              std::to_string(n));
}

// ---------------------------------------------------------------------------
// Singular moduli bound

SingularModuliReport singular_moduli_bound_check(const QuadOrder& o1, const QuadOrder& o2,
                                                 const PrecisionContext& ctx) {
    if (o1.field_disc == o2.field_disc)
        throw invalid_input("singular_moduli_bound_check: orders lie in the same field");
    IntPoly h1 = hilbert_class_polynomial_auto(o1.disc, ctx);
    IntPoly h2 = hilbert_class_polynomial_auto(o2.disc, ctx);
    SingularModuliReport rep;
    rep.resultant_value = resultant(h1, h2);
    rep.bound = Rat((o1.conductor * o1.conductor * o1.field_disc - 1) *
                        (o2.conductor * o2.conductor * o2.field_disc - 1),
                    4);
    rep.prime_factors = factorize(rep.resultant_value);
    rep.all_primes_below = true;
    for (auto& [q, e] : rep.prime_factors)
        if (Rat(q) > rep.bound) rep.all_primes_below = false;
    return rep;
}

}  // namespace cmq
