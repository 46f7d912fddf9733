#include "doctest.h"

#include "cmq/numeric.hpp"

using namespace cmq;

TEST_CASE("precision guard controls fresh value precision") {
    precision_guard g(256);
    Real x = Real(1) / 3;
    CHECK(x.precision() >= 77);
    {
        precision_guard g2(512);
        Real y = Real(1) / 3;
        CHECK(y.precision() >= 154);
    }
    Real z = Real(1) / 3;
    CHECK(z.precision() >= 77);
    CHECK(z.precision() < 150);
}

TEST_CASE("complex arithmetic basics") {
    precision_guard g(256);
    Cplx i(Real(0), Real(1));
    Cplx z = i * i;
    CHECK(abs(z + Cplx(Real(1))) < 1e-70);

    // exp(i pi) = -1
    Cplx w = exp(Cplx(Real(0), pi_value()));
    CHECK(abs(w + Cplx(Real(1))) < 1e-70);

    // sqrt on each quadrant squares back
    for (int a = -3; a <= 3; a += 2)
        for (int b = -3; b <= 3; b += 2) {
            Cplx v{Real(a), Real(b)};
            Cplx s = sqrt(v);
            CHECK(abs(s * s - v) < 1e-70);
            CHECK(s.re >= 0);
        }

    Cplx q = Cplx(Real(3), Real(4)) / Cplx(Real(1), Real(-2));
    CHECK(abs(q * Cplx(Real(1), Real(-2)) - Cplx(Real(3), Real(4))) < 1e-70);
}

TEST_CASE("integer and rational recognition") {
    precision_guard g(256);
    Real x = Real(1728) + ldexp(Real(1), -200);
    auto n = recognize_int(x, 128);
    REQUIRE(n.has_value());
    CHECK(*n == 1728);
    CHECK(!recognize_int(Real("1728.25"), 128).has_value());

    Rat q(-355, 113);
    auto r = recognize_rat(to_real(q) + ldexp(Real(1), -220), Int(1000000), 128);
    REQUIRE(r.has_value());
    CHECK(*r == q);

    // huge denominator rationals round-trip when the cap allows them
    Rat big(Int("123456789123456789"), Int("987654321987654323"));
    auto r2 = recognize_rat(to_real(big), Int("100000000000000000000"), 160);
    REQUIRE(r2.has_value());
    CHECK(*r2 == big);
}

TEST_CASE("primes, factorization, symbols") {
    CHECK(is_prime(Int(10007)));
    CHECK(!is_prime(Int(10006)));
    Int np = next_prime_above(Int(1827904));
    CHECK(np > 1827904);
    CHECK(is_prime(np));
    for (Int k = 1827905; k < np; ++k) CHECK(!is_prime(k));

    auto f = factorize(Int("6272"));
    CHECK(f[Int(2)] == 7);
    CHECK(f[Int(7)] == 2);

    auto g = factorize(-Int(1728));
    CHECK(g[Int(2)] == 6);
    CHECK(g[Int(3)] == 3);

    CHECK(kronecker(Int(-4), Int(101)) == 1);
    CHECK(kronecker(Int(-3), Int(101)) == -1);

    CHECK(squarefree_part(Int(2128)) == 133);
    CHECK(is_square(Int(676)));
    CHECK(!is_square(Int(93)));
}

TEST_CASE("hilbert symbols detect quaternion ramification") {
    // (-1,-1) ramified exactly at 2 and infinity
    CHECK(hilbert_symbol(-1, -1, Int(0)) == -1);
    CHECK(hilbert_symbol(-1, -1, Int(2)) == -1);
    CHECK(hilbert_symbol(-1, -1, Int(3)) == 1);
    CHECK(hilbert_symbol(-1, -1, Int(5)) == 1);
    // (-1,-11) ramified at 11 and infinity, split at 2
    CHECK(hilbert_symbol(-1, -11, Int(2)) == 1);
    CHECK(hilbert_symbol(-1, -11, Int(11)) == -1);
    CHECK(hilbert_symbol(-1, -11, Int(0)) == -1);
    // (-2,-5) ramified at 5 and infinity
    CHECK(hilbert_symbol(-2, -5, Int(2)) == 1);
    CHECK(hilbert_symbol(-2, -5, Int(5)) == -1);
}

TEST_CASE("hnf and integer determinant") {
    MatZ a(3, 3);
    a << 2, 4, 4,
         -6, 6, 12,
         10, 4, 16;
    MatZ h = hnf(a);
    REQUIRE(h.rows() == 3);
    // HNF of this matrix has positive diagonal and det preserved up to sign
    Int d = det_bareiss(h);
    CHECK(abs(d) == abs(det_bareiss(a)));
    for (int i = 0; i < 3; ++i) CHECK(h(i, i) > 0);

    MatZ b(2, 4);
    b << 1, 2, 3, 4,
         2, 4, 6, 8;
    CHECK(hnf(b).rows() == 1);
}

TEST_CASE("kernel mod p") {
    MatZ a(3, 3);
    a << 1, 2, 3,
         2, 4, 6,
         0, 1, 1;
    MatZ k = kernel_mod_p(a, Int(5));
    REQUIRE(k.rows() == 1);
    MatZ prod = k * a;
    for (int j = 0; j < 3; ++j) CHECK(prod(0, j) % 5 == 0);
}

TEST_CASE("qlattice operations") {
    MatQ rows(2, 2);
    rows << Rat(1, 2), Rat(0), Rat(0), Rat(1, 3);
    QLattice l = QLattice::from_rows(rows);
    VecX<Rat> v(2);
    v << Rat(3, 2), Rat(2, 3);
    CHECK(l.contains(v));
    v << Rat(1, 3), Rat(0);
    CHECK(!l.contains(v));

    MatQ r2(2, 2);
    r2 << Rat(1), Rat(0), Rat(0), Rat(1);
    QLattice z2 = QLattice::from_rows(r2);
    QLattice inter = lattice_intersect(l, z2);
    // (1/2)Z x (1/3)Z  intersect  Z x Z = Z x Z
    CHECK(inter == z2);
    QLattice s = lattice_sum(l, z2);
    CHECK(s == l);
}

TEST_CASE("lll finds short vectors") {
    MatZ b(2, 2);
    b << 201, 37,
         1648, 297;
    MatZ r = lll(b);
    Int n0 = r(0, 0) * r(0, 0) + r(0, 1) * r(0, 1);
    // brute-force shortest vector over a box covering the reduced region
    Int best = n0;
    for (int s = -60; s <= 60; ++s)
        for (int t = -60; t <= 60; ++t) {
            if (s == 0 && t == 0) continue;
            Int x = Int(s) * b(0, 0) + Int(t) * b(1, 0);
            Int y = Int(s) * b(0, 1) + Int(t) * b(1, 1);
            Int n = x * x + y * y;
            if (n < best) best = n;
        }
    // LLL in rank 2 returns the first vector within sqrt(2) of the minimum
    CHECK(n0 <= 2 * best);
    CHECK(abs(det_bareiss(r)) == abs(det_bareiss(b)));
}

TEST_CASE("polynomials and resultants") {
    IntPoly x_m_1728{{-1728, 1}};   // X - 1728
    IntPoly x{{0, 1}};              // X
    CHECK(resultant(x, x_m_1728) == -1728);

    // resultant(X^2+1, X^2-2) = (i^2-2)((-i)^2-2) = 9
    IntPoly a{{1, 0, 1}};
    IntPoly b{{-2, 0, 1}};
    CHECK(resultant(a, b) == 9);

    IntPoly p = poly_mul(a, b);
    CHECK(p.degree() == 4);
    CHECK(poly_eval(p, Int(2)) == (4 + 1) * (4 - 2));
}
