#include "cmq/numeric.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace cmq {

Real pi_value() {
    Real p;
    mpfr_const_pi(p.backend().data(), MPFR_RNDN);
    return p;
}

Real to_real(const Rat& q) {
    Real num(numerator(q));
    Real den(denominator(q));
    return num / den;
}

Real to_real(const Int& n) { return Real(n); }

// ---------------------------------------------------------------------------
// Cplx

Cplx operator/(const Cplx& a, const Cplx& b) {
    Real d = norm_sq(b);
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

Cplx inv(const Cplx& z) {
    Real d = norm_sq(z);
    return {z.re / d, -z.im / d};
}

Real abs(const Cplx& a) { return hypot(a.re, a.im); }

Cplx exp(const Cplx& z) {
    Real r = exp(z.re);
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), z.im.backend().data(), MPFR_RNDN);
    return {r * c, r * s};
}

Cplx log(const Cplx& z) { return {log(abs(z)), atan2(z.im, z.re)}; }

Cplx sqrt(const Cplx& z) {
    // principal branch, stable for all quadrants
    Real r = abs(z);
    if (r == 0) return {Real(0), Real(0)};
    Real t = sqrt((r + abs(z.re)) / 2);
    Real u = z.im / (2 * t);
    if (z.re >= 0) return {t, u};
    if (z.im >= 0) return {u < 0 ? -u : u, t};
    return {u < 0 ? -u : u, -t};
}

Cplx pow_int(Cplx z, long k) {
    if (k < 0) {
        z = inv(z);
        k = -k;
    }
    Cplx r(Real(1), Real(0));
    while (k) {
        if (k & 1) r = r * z;
        z = z * z;
        k >>= 1;
    }
    return r;
}

Mat2c mul(const Mat2c& a, const Mat2c& b) {
    Mat2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

Cplx det(const Mat2c& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

Mat2c inverse(const Mat2c& m) {
    Cplx d = det(m);
    Mat2c r;
    r(0, 0) = m(1, 1) / d;
    r(1, 1) = m(0, 0) / d;
    r(0, 1) = -m(0, 1) / d;
    r(1, 0) = -m(1, 0) / d;
    return r;
}

// ---------------------------------------------------------------------------
// Recognition

std::optional<Int> recognize_int(const Real& x, long tol_bits) {
    Real rounded;
    mpfr_round(rounded.backend().data(), x.backend().data());
    Real err = abs(x - rounded);
    Real tol = ldexp(Real(1), static_cast<int>(-tol_bits));
    if (err >= tol) return std::nullopt;
    Int n;
    mpfr_get_z(n.backend().data(), rounded.backend().data(), MPFR_RNDN);
    return n;
}

std::optional<Rat> recognize_rat(const Real& x, const Int& den_cap, long tol_bits) {
    // continued-fraction convergents p_k/q_k of x until q exceeds den_cap
    Real tol = ldexp(Real(1), static_cast<int>(-tol_bits));
    Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real y = x;
    for (int iter = 0; iter < 20000; ++iter) {
        Real fl = floor(y);
        Int a;
        mpfr_get_z(a.backend().data(), fl.backend().data(), MPFR_RNDD);
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > den_cap && q1 > 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (q1 > 0) {
            Rat cand(p1, q1);
            if (abs(x - to_real(cand)) < tol) return cand;
        }
        Real frac = y - fl;
        if (frac == 0) break;
        Real next = 1 / frac;
        // stop once the expansion digs below the meaningful precision of x
        if (next > ldexp(Real(1), static_cast<int>(x.precision() * 3.33))) break;
        y = next;
    }
    if (q1 > 0) {
        Rat cand(p1, q1);
        if (abs(x - to_real(cand)) < tol) return cand;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Number theory

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.backend().data(), 40) != 0;
}

Int next_prime_above(Int n) {
    Int r;
    mpz_nextprime(r.backend().data(), n.backend().data());
    return r;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
    std::vector<bool> sieve(static_cast<size_t>(std::max<std::int64_t>(bound + 1, 2)), true);
    sieve[0] = sieve[1] = false;
    for (std::int64_t i = 2; i * i <= bound; ++i)
        if (sieve[static_cast<size_t>(i)])
            for (std::int64_t j = i * i; j <= bound; j += i) sieve[static_cast<size_t>(j)] = false;
    std::vector<std::int64_t> out;
    for (std::int64_t i = 2; i <= bound; ++i)
        if (sieve[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

namespace {

Int pollard_rho(const Int& n, unsigned long seed) {
    // Brent's cycle variant
    Int x = Int(seed) % n, y = x, c = 1 + Int(seed) / n % 7, d = 1;
    Int ys = y, q = 1;
    const int m = 64;
    int power = 1, lam = 0;
    while (d == 1) {
        x = y;
        for (int i = 0; i < power; ++i) y = (y * y + c) % n;
        int k = 0;
        while (k < power && d == 1) {
            ys = y;
            for (int i = 0; i < std::min(m, power - k); ++i) {
                y = (y * y + c) % n;
                q = q * abs(x - y) % n;
            }
            d = gcd(q, n);
            k += m;
        }
        power *= 2;
        lam += 1;
        if (lam > 64) break;
    }
    if (d == n) {
        d = 1;
        while (d == 1) {
            ys = (ys * ys + c) % n;
            d = gcd(abs(x - ys), n);
        }
    }
    return d;
}

void factor_rec(Int n, std::map<Int, int>& out,
                const std::chrono::steady_clock::time_point& deadline) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    if (std::chrono::steady_clock::now() > deadline)
        throw budget_exceeded("factorization budget exceeded on composite " + n.str());
    for (unsigned long seed = 2;; ++seed) {
        Int d = pollard_rho(n, seed * 2654435761ul % 1000003ul + 2);
        if (d > 1 && d < n) {
            factor_rec(d, out, deadline);
            factor_rec(n / d, out, deadline);
            return;
        }
        if (std::chrono::steady_clock::now() > deadline)
            throw budget_exceeded("factorization budget exceeded on composite " + n.str());
    }
}

}  // namespace

std::map<Int, int> factorize(const Int& n_in, long budget_ms) {
    if (n_in == 0) throw invalid_input("factorize(0)");
    std::map<Int, int> out;
    Int n = abs(n_in);
    static const std::vector<std::int64_t> small = primes_up_to(100000);
    for (auto p : small) {
        if (Int(p) * p > n) break;
        while (n % p == 0) {
            out[Int(p)] += 1;
            n /= p;
        }
    }
    if (n > 1) {
        if (is_prime(n))
            out[n] += 1;
        else
            factor_rec(n, out,
                       std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms));
    }
    return out;
}

int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.backend().data(), n.backend().data());
}

int hilbert_symbol(Int a, Int b, const Int& p) {
    if (a == 0 || b == 0) throw invalid_input("hilbert symbol of 0");
    if (p == 0) {  // infinite place
        return (a < 0 && b < 0) ? -1 : 1;
    }
    if (!is_prime(p)) throw invalid_input("hilbert symbol at composite place");
    auto val = [&](Int& x) {
        long v = 0;
        while (x % p == 0) {
            x /= p;
            ++v;
        }
        return v;
    };
    long alpha = val(a), beta = val(b);
    if (p != 2) {
        // (a,b)_p = (-1)^(alpha*beta*eps(p)) (a/p)^beta (b/p)^alpha
        int sign = 1;
        if ((alpha * beta) % 2 == 1 && ((p - 1) / 2) % 2 == 1) sign = -sign;
        int leg_a = kronecker(a % p, p), leg_b = kronecker(b % p, p);
        if (beta % 2 == 1 && leg_a == -1) sign = -sign;
        if (alpha % 2 == 1 && leg_b == -1) sign = -sign;
        return sign;
    }
    // p = 2, with u = odd part: eps(u) = (u-1)/2, omega(u) = (u^2-1)/8 mod 2
    auto eps = [](const Int& u) { return static_cast<int>(((u - 1) / 2) % 2 != 0); };
    auto omega = [](const Int& u) { return static_cast<int>(((u * u - 1) / 8) % 2 != 0); };
    int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return (e % 2 == 0) ? 1 : -1;
}

Int isqrt(const Int& n) {
    if (n < 0) throw invalid_input("isqrt of negative");
    Int r;
    mpz_sqrt(r.backend().data(), n.backend().data());
    return r;
}

bool is_square(const Int& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.backend().data()) != 0;
}

Int squarefree_part(const Int& n) {
    if (n == 0) return 0;
    auto f = factorize(abs(n));
    Int sf = n < 0 ? -1 : 1;
    for (auto& [p, e] : f)
        if (e % 2) sf *= p;
    return sf;
}

Int powmod(Int base, Int exp, const Int& mod) {
    Int r;
    mpz_powm(r.backend().data(), base.backend().data(), exp.backend().data(),
             mod.backend().data());
    return r;
}

// ---------------------------------------------------------------------------
// HNF and friends (row convention)

MatZ hnf(MatZ a) {
    const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        // gcd-eliminate below-diagonal entries of this column
        for (int i = row + 1; i < m; ++i) {
            if (a(i, col) == 0) continue;
            if (a(row, col) == 0) {
                a.row(row).swap(a.row(i));
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.backend().data(), s.backend().data(), t.backend().data(),
                       a(row, col).backend().data(), a(i, col).backend().data());
            Int u = a(row, col) / g, v = a(i, col) / g;
            // rows (row, i) <- (s*row + t*i, -v*row + u*i)
            for (int j = 0; j < n; ++j) {
                Int x = a(row, j), y = a(i, j);
                a(row, j) = s * x + t * y;
                a(i, j) = u * y - v * x;
            }
        }
        if (a(row, col) == 0) continue;
        if (a(row, col) < 0) a.row(row) = -a.row(row);
        // reduce entries above the pivot
        for (int i = 0; i < row; ++i) {
            Int q;
            mpz_fdiv_q(q.backend().data(), a(i, col).backend().data(),
                       a(row, col).backend().data());
            if (q != 0) a.row(i) -= q * a.row(row).transpose().transpose();
        }
        ++row;
    }
    return a.topRows(row).eval();
}

MatZ kernel_mod_p(const MatZ& a_in, const Int& p) {
    MatZ a = a_in;
    const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
    auto norm = [&](Int x) {
        x %= p;
        if (x < 0) x += p;
        return x;
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = norm(a(i, j));
    // row-reduce a^T? We want v (row, length m) with v * a = 0 mod p.
    // Set up transposed system: a^T * v^T = 0, Gaussian elimination on a^T.
    MatZ t = a.transpose();
    std::vector<int> pivot_col(static_cast<size_t>(t.rows()), -1);
    int r = 0;
    for (int c = 0; c < m && r < t.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < t.rows(); ++i)
            if (t(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        t.row(r).swap(t.row(piv));
        Int inv = powmod(t(r, c), p - 2, p);
        for (int j = 0; j < m; ++j) t(r, j) = norm(t(r, j) * inv);
        for (int i = 0; i < t.rows(); ++i)
            if (i != r && t(i, c) != 0) {
                Int f = t(i, c);
                for (int j = 0; j < m; ++j) t(i, j) = norm(t(i, j) - f * t(r, j));
            }
        pivot_col[static_cast<size_t>(r)] = c;
        ++r;
    }
    std::vector<bool> is_pivot(static_cast<size_t>(m), false);
    for (int i = 0; i < r; ++i) is_pivot[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
    MatZ ker(static_cast<int>(free_cols.size()), m);
    ker.setZero();
    for (size_t k = 0; k < free_cols.size(); ++k) {
        ker(static_cast<int>(k), free_cols[k]) = 1;
        for (int i = 0; i < r; ++i) {
            int pc = pivot_col[static_cast<size_t>(i)];
            ker(static_cast<int>(k), pc) = norm(-t(i, free_cols[k]));
        }
    }
    return ker;
}

MatZ kernel_int(const MatZ& a) {
    // track the transform while reducing: rows of u with h = u * a
    const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
    MatZ work(m, n + m);
    work.leftCols(n) = a;
    work.rightCols(m).setZero();
    for (int i = 0; i < m; ++i) work(i, n + i) = 1;

    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        for (int i = row + 1; i < m; ++i) {
            if (work(i, col) == 0) continue;
            if (work(row, col) == 0) {
                work.row(row).swap(work.row(i));
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.backend().data(), s.backend().data(), t.backend().data(),
                       work(row, col).backend().data(), work(i, col).backend().data());
            Int u = work(row, col) / g, v = work(i, col) / g;
            for (int j = 0; j < n + m; ++j) {
                Int x = work(row, j), y = work(i, j);
                work(row, j) = s * x + t * y;
                work(i, j) = u * y - v * x;
            }
        }
        if (work(row, col) != 0) ++row;
    }
    // rows from `row` on have zero left part
    MatZ ker(m - row, m);
    for (int i = row; i < m; ++i) ker.row(i - row) = work.row(i).tail(m);
    return hnf(std::move(ker));
}

Int det_bareiss(MatZ a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            a.row(k).swap(a.row(piv));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// QLattice

QLattice QLattice::from_rows(const MatQ& rows) {
    Int den = 1;
    for (int i = 0; i < rows.rows(); ++i)
        for (int j = 0; j < rows.cols(); ++j)
            den = lcm(den, denominator(rows(i, j)));
    MatZ zi(rows.rows(), rows.cols());
    for (int i = 0; i < rows.rows(); ++i)
        for (int j = 0; j < rows.cols(); ++j)
            zi(i, j) = numerator(rows(i, j)) * (den / denominator(rows(i, j)));
    MatZ h = hnf(std::move(zi));
    if (h.rows() != h.cols())
        throw invalid_input("QLattice: generators do not have full rank");
    // pull out content to keep entries small-ish
    Int cont = 0;
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j) cont = gcd(cont, h(i, j));
    if (cont > 1)
        for (int i = 0; i < h.rows(); ++i)
            for (int j = 0; j < h.cols(); ++j) h(i, j) /= cont;
    QLattice l;
    l.scale = Rat(cont, den);
    l.basis = std::move(h);
    return l;
}

MatQ QLattice::rows() const {
    MatQ r(basis.rows(), basis.cols());
    for (int i = 0; i < basis.rows(); ++i)
        for (int j = 0; j < basis.cols(); ++j) r(i, j) = scale * Rat(basis(i, j));
    return r;
}

bool QLattice::contains(const VecX<Rat>& v) const {
    // solve x * basis = v / scale over Q, check integrality (basis triangular-ish)
    const int n = dim();
    VecX<Rat> target(n);
    for (int j = 0; j < n; ++j) target(j) = v(j) / scale;
    // back-substitution using HNF structure: find pivot columns
    VecX<Rat> x(n);
    MatQ b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = Rat(basis(i, j));
    // generic solve (n <= 4 here)
    Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic> bt = b.transpose();
    x = bt.fullPivLu().solve(target);
    for (int i = 0; i < n; ++i)
        if (denominator(x(i)) != 1) return false;
    return true;
}

bool QLattice::operator==(const QLattice& o) const {
    return scale == o.scale && basis == o.basis;
}

Rat QLattice::covolume_det() const {
    Rat d(1);
    for (int i = 0; i < dim(); ++i) d *= scale * Rat(basis(i, i));
    return abs(d);
}

QLattice lattice_sum(const QLattice& a, const QLattice& b) {
    MatQ stacked(a.basis.rows() + b.basis.rows(), a.basis.cols());
    stacked << a.rows(), b.rows();
    return QLattice::from_rows(stacked);
}

namespace {

MatQ dual_rows(const QLattice& l) {
    // dual lattice w.r.t. standard dot product: rows of (B^-1)^T
    MatQ b = l.rows();
    MatQ inv = b.fullPivLu().inverse();
    return inv.transpose();
}

}  // namespace

QLattice lattice_intersect(const QLattice& a, const QLattice& b) {
    QLattice da = QLattice::from_rows(dual_rows(a));
    QLattice db = QLattice::from_rows(dual_rows(b));
    QLattice s = lattice_sum(da, db);
    return QLattice::from_rows(dual_rows(s));
}

QLattice lattice_preimage(const QLattice& l, const MatQ& m) {
    // {x : x*m in l} = l * m^-1 (rows transformed)
    MatQ rows = l.rows() * m.fullPivLu().inverse();
    return QLattice::from_rows(rows);
}

// ---------------------------------------------------------------------------
// LLL (exact, delta = 3/4), rows of b

MatZ lll(MatZ b) {
    const int n = static_cast<int>(b.rows());
    auto dot = [&](int i, int j) {
        Rat s(0);
        for (int k = 0; k < b.cols(); ++k) s += Rat(b(i, k)) * Rat(b(j, k));
        return s;
    };
    std::vector<std::vector<Rat>> mu(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    std::vector<Rat> bstar(static_cast<size_t>(n), Rat(0));
    auto recompute = [&]() {
        std::vector<std::vector<Rat>> gs(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(b.cols()), Rat(0)));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < b.cols(); ++k) gs[i][k] = Rat(b(i, k));
            for (int j = 0; j < i; ++j) {
                Rat num(0);
                for (int k = 0; k < b.cols(); ++k) num += Rat(b(i, k)) * gs[j][k];
                mu[i][j] = bstar[j] == 0 ? Rat(0) : num / bstar[j];
                for (int k = 0; k < b.cols(); ++k) gs[i][k] -= mu[i][j] * gs[j][k];
            }
            Rat nb(0);
            for (int k = 0; k < b.cols(); ++k) nb += gs[i][k] * gs[i][k];
            bstar[i] = nb;
        }
    };
    recompute();
    int k = 1;
    int guard = 0;
    while (k < n && ++guard < 100000) {
        for (int j = k - 1; j >= 0; --j) {
            Rat m = mu[k][j];
            Int q = numerator(m) >= 0 ? (2 * numerator(m) + denominator(m)) / (2 * denominator(m))
                                      : -((-2 * numerator(m) + denominator(m)) / (2 * denominator(m)));
            if (q != 0) {
                b.row(k) -= q * b.row(j).transpose().transpose();
                recompute();
            }
        }
        if (bstar[k] >= (Rat(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
        } else {
            b.row(k).swap(b.row(k - 1));
            recompute();
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// IntPoly

void IntPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Int IntPoly::content() const {
    Int g = 0;
    for (auto& x : c) g = gcd(g, x);
    return g;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    if (a.c.empty() || b.c.empty()) return {};
    IntPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.normalize();
    return r;
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.normalize();
    return r;
}

Int poly_eval(const IntPoly& a, const Int& x) {
    Int r = 0;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) r = r * x + *it;
    return r;
}

Cplx poly_eval(const IntPoly& a, const Cplx& x) {
    Cplx r;
    for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) r = r * x + Cplx(Real(*it));
    return r;
}

Int resultant(const IntPoly& a, const IntPoly& b) {
    const int m = a.degree(), n = b.degree();
    if (m < 0 || n < 0) return 0;
    if (m == 0) return pow(a.c[0], static_cast<unsigned>(n));
    if (n == 0) return pow(b.c[0], static_cast<unsigned>(m));
    MatZ s(m + n, m + n);
    s.setZero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s(i, i + j) = a.c[static_cast<size_t>(m - j)];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s(n + i, i + j) = b.c[static_cast<size_t>(n - j)];
    return det_bareiss(std::move(s));
}

int BivarIntPoly::deg_y() const {
    int d = -1;
    for (auto& row : c) d = std::max(d, static_cast<int>(row.size()) - 1);
    return d;
}

bool BivarIntPoly::symmetric() const {
    int dx = deg_x(), dy = deg_y();
    if (dx != dy) return false;
    auto get = [&](int i, int j) -> Int {
        if (i >= static_cast<int>(c.size())) return 0;
        if (j >= static_cast<int>(c[static_cast<size_t>(i)].size())) return 0;
        return c[static_cast<size_t>(i)][static_cast<size_t>(j)];
    };
    for (int i = 0; i <= dx; ++i)
        for (int j = 0; j < i; ++j)
            if (get(i, j) != get(j, i)) return false;
    return true;
}

Cplx BivarIntPoly::eval(const Cplx& x, const Cplx& y) const {
    Cplx r;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        Cplx row;
        for (auto jt = it->rbegin(); jt != it->rend(); ++jt) row = row * y + Cplx(Real(*jt));
        r = r * x + row;
    }
    return r;
}

}  // namespace cmq
