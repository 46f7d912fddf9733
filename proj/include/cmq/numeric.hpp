#pragma once

// Scalar layer: exact integers/rationals (GMP) and arbitrary-precision
// reals/complexes (MPFR), exposed as Eigen-compatible value types.
// Expression templates are off so the types work inside Eigen kernels.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmq {

namespace mp = boost::multiprecision;

using Int  = mp::number<mp::gmp_int, mp::et_off>;
using Rat  = mp::number<mp::gmp_rational, mp::et_off>;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

template <typename S> using Vec4 = Eigen::Matrix<S, 4, 1>;
template <typename S> using Mat4 = Eigen::Matrix<S, 4, 4>;
template <typename S> using Mat2 = Eigen::Matrix<S, 2, 2>;
template <typename S> using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S> using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Vec4q = Vec4<Rat>;
using Mat4q = Mat4<Rat>;
using Mat4z = Mat4<Int>;
using MatZ  = MatX<Int>;
using MatQ  = MatX<Rat>;

// Error taxonomy; the CLI maps these onto exit codes 2/3/4.
struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invariant_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Precision handling. Real carries its precision per value; fresh values pick
// up the the thread's default. Scopes that need P bits set a guard.

inline unsigned bits_to_digits(unsigned bits) {
    return static_cast<unsigned>(bits * 0.3010299956639812) + 4;
}

struct PrecisionContext {
    unsigned bits = 256;

    unsigned digits10() const { return bits_to_digits(bits); }
    PrecisionContext doubled() const { return PrecisionContext{2 * bits}; }
};

class precision_guard {
    unsigned saved_;

  public:
    explicit precision_guard(unsigned bits) : saved_(Real::default_precision()) {
        Real::default_precision(bits_to_digits(bits));
    }
    explicit precision_guard(const PrecisionContext& ctx) : precision_guard(ctx.bits) {}
    ~precision_guard() { Real::default_precision(saved_); }
    precision_guard(const precision_guard&) = delete;
    precision_guard& operator=(const precision_guard&) = delete;
};

Real pi_value();
Real to_real(const Rat& q);
Real to_real(const Int& n);

// ---------------------------------------------------------------------------
// Complex numbers over Real. std::complex is not usable with a
// variable-precision scalar, so the handful of operations needed lives here.

struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(Real r) : re(std::move(r)), im(0) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Cplx(int n) : re(n), im(0) {}

    Cplx operator-() const { return {-re, -im}; }
    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
};

inline Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
inline Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
inline Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Cplx operator*(const Real& s, const Cplx& a) { return {s * a.re, s * a.im}; }
inline Cplx operator*(const Cplx& a, const Real& s) { return {a.re * s, a.im * s}; }
Cplx operator/(const Cplx& a, const Cplx& b);
inline Cplx conj(const Cplx& a) { return {a.re, -a.im}; }
inline Real norm_sq(const Cplx& a) { return a.re * a.re + a.im * a.im; }
Real abs(const Cplx& a);
Cplx exp(const Cplx& z);
Cplx log(const Cplx& z);
Cplx sqrt(const Cplx& z);
Cplx pow_int(Cplx z, long k);   // k may be negative
Cplx inv(const Cplx& z);

using Mat2c = Mat2<Cplx>;
Mat2c mul(const Mat2c& a, const Mat2c& b);
Cplx det(const Mat2c& m);
Mat2c inverse(const Mat2c& m);

// ---------------------------------------------------------------------------
// Recognition of exact values from floating approximations.

// Nearest integer if |x - n| < 2^-tol_bits, else nullopt.
std::optional<Int> recognize_int(const Real& x, long tol_bits);

// Continued-fraction reconstruction: best rational with denominator <= den_cap
// approximating x to within 2^-tol_bits.
std::optional<Rat> recognize_rat(const Real& x, const Int& den_cap, long tol_bits);

// ---------------------------------------------------------------------------
// Elementary number theory on Int.

bool is_prime(const Int& n);
Int next_prime_above(Int n);
std::vector<std::int64_t> primes_up_to(std::int64_t bound);

// Full factorization (trial division + Pollard-Brent rho). Throws
// budget_exceeded if a composite cofactor survives `budget_ms` of effort.
std::map<Int, int> factorize(const Int& n, long budget_ms = 30000);

int kronecker(const Int& a, const Int& n);
// Hilbert symbol (a,b)_p over Q_p; p == 0 encodes the infinite place.
int hilbert_symbol(Int a, Int b, const Int& p);
Int squarefree_part(const Int& n);   // n = squarefree_part * square
bool is_square(const Int& n);
Int isqrt(const Int& n);
Int powmod(Int base, Int exp, const Int& mod);

// ---------------------------------------------------------------------------
// Integer/rational linear algebra helpers (row convention: rows generate).

// Row-style Hermite normal form of an m x n integer matrix; returns the HNF
// with zero rows removed (rank rows, pivots positive, entries above pivots
// reduced into [0, pivot)).
MatZ hnf(MatZ a);

// Kernel of a over F_p as rows (coefficients lifted to [0, p)).
MatZ kernel_mod_p(const MatZ& a, const Int& p);

// Saturated integer kernel {v : v * a = 0} as rows.
MatZ kernel_int(const MatZ& a);

Int det_bareiss(MatZ a);

// Lattice in Q^n of full rank given by rows of B (rational). Canonical form:
// integer HNF matrix plus a positive rational scale, lattice = scale * rows.
struct QLattice {
    Rat scale = 1;
    MatZ basis;   // HNF rows, square nonsingular

    int dim() const { return static_cast<int>(basis.rows()); }
    static QLattice from_rows(const MatQ& rows);
    MatQ rows() const;
    bool contains(const VecX<Rat>& v) const;
    bool operator==(const QLattice& o) const;
    Rat covolume_det() const;   // |det| of a basis = index-type invariant
};

QLattice lattice_sum(const QLattice& a, const QLattice& b);
QLattice lattice_intersect(const QLattice& a, const QLattice& b);
// {x row-vector : x * M in L} for an invertible rational matrix action
// (used for colon ideals via multiplication matrices).
QLattice lattice_preimage(const QLattice& l, const MatQ& m);

// LLL reduction of the rows of an integer matrix (delta = 3/4), exact
// rational Gram-Schmidt; dimensions here are tiny.
MatZ lll(MatZ b);

// ---------------------------------------------------------------------------
// Dense univariate polynomials with exact integer coefficients.

struct IntPoly {
    std::vector<Int> c;   // c[i] = coefficient of X^i; normalized: c.back() != 0

    int degree() const { return static_cast<int>(c.size()) - 1; }
    void normalize();
    Int content() const;
    bool operator==(const IntPoly& o) const { return c == o.c; }
};

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_add(const IntPoly& a, const IntPoly& b);
Int poly_eval(const IntPoly& a, const Int& x);
Cplx poly_eval(const IntPoly& a, const Cplx& x);
Int resultant(const IntPoly& a, const IntPoly& b);   // Sylvester determinant

// Bivariate integer polynomial, coeff[i][j] * X^i * Y^j.
struct BivarIntPoly {
    std::vector<std::vector<Int>> c;

    int deg_x() const { return static_cast<int>(c.size()) - 1; }
    int deg_y() const;
    bool symmetric() const;
    Cplx eval(const Cplx& x, const Cplx& y) const;
};

}  // namespace cmq
