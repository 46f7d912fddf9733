#pragma once

// Small prime fields F_p and their quadratic extensions F_p^2 on uint64
// words, plus enough univariate polynomial arithmetic over F_p^2 to find
// roots of small-degree polynomials (Cantor-Zassenhaus).

#include "cmq/numeric.hpp"

#include <cstdint>
#include <vector>

namespace cmq {

struct Fp2El {
    std::uint64_t x = 0, y = 0;   // x + y*s

    bool operator==(const Fp2El&) const = default;
    bool operator<(const Fp2El& o) const { return x != o.x ? x < o.x : y < o.y; }
};

// F_p[s] / (s^2 + A s + B), irreducible; A = 0 for odd p.
class Fp2Field {
  public:
    explicit Fp2Field(std::uint64_t p);

    std::uint64_t p() const { return p_; }
    std::uint64_t order() const { return p_ * p_; }

    Fp2El from_int(const Int& n) const;
    Fp2El make(std::uint64_t x, std::uint64_t y) const { return {x % p_, y % p_}; }
    bool is_zero(const Fp2El& a) const { return a.x == 0 && a.y == 0; }

    Fp2El add(const Fp2El& a, const Fp2El& b) const;
    Fp2El sub(const Fp2El& a, const Fp2El& b) const;
    Fp2El mul(const Fp2El& a, const Fp2El& b) const;
    Fp2El neg(const Fp2El& a) const;
    Fp2El inv(const Fp2El& a) const;
    Fp2El pow(Fp2El a, Int e) const;
    Fp2El frobenius(const Fp2El& a) const;   // x + ys -> (x+ys)^p

    bool in_prime_field(const Fp2El& a) const { return a.y == 0; }

  private:
    std::uint64_t p_;
    std::uint64_t a_, b_;   // modulus s^2 + a s + b
    std::uint64_t mulp(std::uint64_t x, std::uint64_t y) const;
    std::uint64_t addp(std::uint64_t x, std::uint64_t y) const;
    std::uint64_t subp(std::uint64_t x, std::uint64_t y) const;
    std::uint64_t invp(std::uint64_t x) const;
};

// dense polynomial over F_p^2, c[i] = coefficient of X^i
using Fp2Poly = std::vector<Fp2El>;

Fp2Poly poly_trim(Fp2Poly f);
Fp2Poly poly_mul(const Fp2Field& k, const Fp2Poly& a, const Fp2Poly& b);
Fp2Poly poly_mod(const Fp2Field& k, Fp2Poly a, const Fp2Poly& m);
Fp2Poly poly_gcd(const Fp2Field& k, Fp2Poly a, Fp2Poly b);
Fp2Poly poly_powmod(const Fp2Field& k, Fp2Poly base, Int e, const Fp2Poly& m);
Fp2El poly_eval(const Fp2Field& k, const Fp2Poly& f, const Fp2El& x);
Fp2Poly poly_derivative(const Fp2Field& k, const Fp2Poly& f);

// all distinct roots of f in F_p^2, sorted
std::vector<Fp2El> poly_roots(const Fp2Field& k, const Fp2Poly& f);

}  // namespace cmq
