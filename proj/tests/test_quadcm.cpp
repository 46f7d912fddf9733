#include "doctest.h"

#include "cmq/quadcm.hpp"

#include <map>
#include <set>

using namespace cmq;

namespace {

// independent oracle: reduce an arbitrary form by Gauss steps
std::array<Int, 3> gauss_reduce(Int a, Int b, Int c) {
    const Int disc = b * b - 4 * a * c;
    auto fdiv = [](const Int& x, const Int& m) {   // floor division, m > 0
        Int r = ((x % m) + m) % m;
        return (x - r) / m;
    };
    for (int guard = 0; guard < 100000; ++guard) {
        if (c < a) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        if (b > a || b <= -a) {
            // shift b into (-a, a]
            Int k = fdiv(a - b, 2 * a);
            b += 2 * a * k;
            c = (b * b - disc) / (4 * a);
            continue;
        }
        if (a == c && b < 0) {
            b = -b;
            continue;
        }
        break;
    }
    return {a, b, c};
}

}  // namespace

TEST_CASE("reduced forms small cases") {
    CHECK(class_number(Int(-3)) == 1);
    CHECK(class_number(Int(-4)) == 1);
    auto f4 = reduced_forms(Int(-4));
    REQUIRE(f4.size() == 1);
    CHECK(f4[0].a == 1);
    CHECK(f4[0].b == 0);
    CHECK(f4[0].c == 1);
    CHECK(class_number(Int(-23)) == 3);
    CHECK(class_number(Int(-47)) == 5);
    CHECK(class_number(Int(-163)) == 1);
    CHECK_THROWS_AS(reduced_forms(Int(-5)), invalid_input);
    CHECK_THROWS_AS(reduced_forms(Int(4)), invalid_input);
}

TEST_CASE("reduced form count matches gauss reduction orbit count") {
    for (long d = -3; d >= -400; --d) {
        Int disc(d);
        Int m4 = ((disc % 4) + 4) % 4;
        if (m4 != 0 && m4 != 1) continue;
        auto forms = reduced_forms(disc);
        // reduce every primitive form with small a and collect distinct results
        std::set<std::array<long, 3>> seen;
        for (long a = 1; a * a * 3 <= -d * 4; ++a)
            for (long b = -2 * a; b <= 2 * a; ++b) {
                Int num = Int(b) * b - disc;
                if (num % (4 * a) != 0) continue;
                Int c = num / (4 * a);
                if (c <= 0) continue;
                if (gcd(gcd(Int(a), Int(b)), c) != 1) continue;
                auto r = gauss_reduce(Int(a), Int(b), c);
                seen.insert({r[0].convert_to<long>(), r[1].convert_to<long>(),
                             r[2].convert_to<long>()});
            }
        CHECK(forms.size() == seen.size());
    }
}

TEST_CASE("j at special points") {
    PrecisionContext ctx{256};
    precision_guard g(320);
    Cplx i{Real(0), Real(1)};
    Cplx j1 = j_invariant(i, ctx);
    CHECK(abs(j1 - Cplx(Real(1728))) < 1e-70);

    // tau = (1 + sqrt(-3))/2 -> j = 0
    Cplx rho{Real(1) / 2, sqrt(Real(3)) / 2};
    CHECK(abs(j_invariant(rho, ctx)) < 1e-70);

    Cplx j2 = j_invariant(Cplx{Real(0), Real(2)}, ctx);
    CHECK(abs(j2 - Cplx(Real(287496))) < 1e-65);

    // sqrt(-2): j = 8000; sqrt(-7)/2 shifted: j = -3375
    Cplx js = j_invariant(Cplx{Real(0), sqrt(Real(2))}, ctx);
    CHECK(abs(js - Cplx(Real(8000))) < 1e-65);
    Cplx j7 = j_invariant(Cplx{Real(1) / 2, sqrt(Real(7)) / 2}, ctx);
    CHECK(abs(j7 - Cplx(Real(-3375))) < 1e-65);

    CHECK_THROWS_AS(j_invariant(Cplx{Real(0), Real(-1)}, ctx), invalid_input);
}

TEST_CASE("j is SL2 invariant") {
    PrecisionContext ctx{256};
    precision_guard g(320);
    Cplx tau{Real("0.3419"), Real("0.87")};
    Cplx jt = j_invariant(tau, ctx);
    // tau + 1 and -1/tau
    CHECK(abs(j_invariant(tau + Cplx(Real(1)), ctx) - jt) < 1e-68);
    CHECK(abs(j_invariant(-inv(tau), ctx) - jt) < 1e-68);
}

TEST_CASE("hilbert class polynomials") {
    PrecisionContext ctx{256};
    auto h4 = hilbert_class_polynomial_auto(Int(-4), ctx);
    REQUIRE(h4.degree() == 1);
    CHECK(h4.c[0] == -1728);
    CHECK(h4.c[1] == 1);

    auto h3 = hilbert_class_polynomial_auto(Int(-3), ctx);
    REQUIRE(h3.degree() == 1);
    CHECK(h3.c[0] == 0);

    auto h23 = hilbert_class_polynomial_auto(Int(-23), ctx);
    REQUIRE(h23.degree() == 3);
    CHECK(h23.c[3] == 1);   // monic
    // no rational root  ->  irreducible for a cubic
    for (auto& [p, e] : factorize(abs(h23.c[0]) + 1)) (void)p;   // just exercise
    bool has_rational_root = false;
    std::vector<Int> divisors{1};
    auto f0 = factorize(abs(h23.c[0]));
    std::vector<Int> ds{1};
    for (auto& [p, e] : f0) {
        std::vector<Int> next;
        for (auto& d : ds) {
            Int pk = 1;
            for (int k = 0; k <= e; ++k) {
                next.push_back(d * pk);
                pk *= p;
            }
        }
        ds = next;
    }
    for (auto& d : ds) {
        if (poly_eval(h23, d) == 0 || poly_eval(h23, -d) == 0) has_rational_root = true;
    }
    CHECK(!has_rational_root);

    // stability under precision doubling
    auto h23b = hilbert_class_polynomial_auto(Int(-23), PrecisionContext{512});
    CHECK(h23 == h23b);
}

TEST_CASE("modular polynomial level 1 and 2") {
    precision_guard g(384);
    auto p1 = modular_polynomial(1, PrecisionContext{128});
    CHECK(p1.c[1][0] == 1);
    CHECK(p1.c[0][1] == -1);

    auto p2 = modular_polynomial_auto(2);
    CHECK(p2.deg_x() == 3);
    CHECK(p2.deg_y() == 3);
    CHECK(p2.symmetric());
    // classical coefficients
    CHECK(p2.c[3][0] == 1);
    CHECK(p2.c[2][2] == -1);
    CHECK(p2.c[2][1] == 1488);
    CHECK(p2.c[2][0] == -162000);
    CHECK(p2.c[1][1] == 40773375);
    CHECK(p2.c[1][0] == 8748000000LL);
    CHECK(p2.c[0][0] == Int("-157464000000000"));

    // Phi_2(j(2i), j(i)) = 0 numerically
    PrecisionContext ctx{320};
    Cplx v = p2.eval(j_invariant(Cplx{Real(0), Real(2)}, ctx),
                     j_invariant(Cplx{Real(0), Real(1)}, ctx));
    CHECK(abs(v) < Real("1e-40"));
}

TEST_CASE("modular polynomial level 3 degree") {
    CHECK(psi_degree(2) == 3);
    CHECK(psi_degree(3) == 4);
    CHECK(psi_degree(4) == 6);
    CHECK(psi_degree(6) == 12);
    CHECK(psi_degree(20) == 36);
    auto p3 = modular_polynomial_auto(3);
    CHECK(p3.deg_x() == 4);
    CHECK(p3.symmetric());
}

TEST_CASE("phi2 root relation at random points") {
    auto p2 = modular_polynomial_auto(2);
    PrecisionContext ctx{320};
    precision_guard g(384);
    // five pseudo-random tau in the fundamental strip
    std::vector<std::pair<double, double>> pts{{0.11, 1.03}, {-0.37, 1.21}, {0.433, 0.91},
                                               {0.05, 1.7},  {-0.21, 1.44}};
    for (auto& [x, y] : pts) {
        Cplx tau{Real(x), Real(y)};
        Cplx v = p2.eval(j_invariant(Cplx{tau.re * 2, tau.im * 2}, ctx), j_invariant(tau, ctx));
        // relative to evaluation scale
        Real scale(1);
        Real ax = abs(j_invariant(Cplx{tau.re * 2, tau.im * 2}, ctx)),
             ay = abs(j_invariant(tau, ctx));
        Real xi(1);
        for (size_t i2 = 0; i2 < p2.c.size(); ++i2) {
            Real yj(1);
            for (size_t j2 = 0; j2 < p2.c[i2].size(); ++j2) {
                scale += abs(to_real(p2.c[i2][j2])) * xi * yj;
                yj *= ay;
            }
            xi *= ax;
        }
        CHECK(abs(v) / scale < Real("1e-30"));
    }
}

TEST_CASE("phi_n(X, X) picks up class polynomials of disc b^2-4n") {
    // n = 2: Phi_2(X, X) = -(X - 1728)(X + 3375)^2 (X - 8000)
    auto p2 = modular_polynomial_auto(2);
    IntPoly diag;
    diag.c.assign(7, Int(0));
    for (size_t i = 0; i < p2.c.size(); ++i)
        for (size_t j = 0; j < p2.c[i].size(); ++j) diag.c[i + j] += p2.c[i][j];
    diag.normalize();
    CHECK(poly_eval(diag, Int(1728)) == 0);    // disc -4
    CHECK(poly_eval(diag, Int(-3375)) == 0);   // disc -7
    CHECK(poly_eval(diag, Int(8000)) == 0);    // disc -8
}

TEST_CASE("singular moduli bound checks") {
    PrecisionContext ctx{256};
    auto o3 = make_quad_order(Int(-3));
    auto o4 = make_quad_order(Int(-4));
    auto o7 = make_quad_order(Int(-7));
    auto o8 = make_quad_order(Int(-8));

    auto r34 = singular_moduli_bound_check(o3, o4, ctx);
    CHECK(abs(r34.resultant_value) == 1728);
    CHECK(r34.bound == Rat(5));
    CHECK(r34.all_primes_below);
    CHECK(r34.prime_factors.size() == 2);
    CHECK(r34.prime_factors[Int(2)] == 6);
    CHECK(r34.prime_factors[Int(3)] == 3);

    auto r37 = singular_moduli_bound_check(o3, o7, ctx);
    CHECK(abs(r37.resultant_value) == 3375);
    CHECK(r37.bound == Rat(8));
    CHECK(r37.all_primes_below);

    auto r48 = singular_moduli_bound_check(o4, o8, ctx);
    CHECK(abs(r48.resultant_value) == 6272);
    CHECK(r48.bound == Rat(45, 4));
    CHECK(r48.all_primes_below);

    CHECK_THROWS_AS(singular_moduli_bound_check(o4, make_quad_order(Int(-16)), ctx),
                    invalid_input);
}

TEST_CASE("eisenstein and delta satisfy e4^3 - e6^2 = 1728 delta") {
    PrecisionContext ctx{256};
    precision_guard g(320);
    Cplx tau{Real("0.313"), Real("1.02")};
    Cplx e4 = eisenstein_e4(tau, ctx);
    Cplx e6 = eisenstein_e6(tau, ctx);
    Cplx dl = delta_cusp_form(tau, ctx);
    CHECK(abs(pow_int(e4, 3) - pow_int(e6, 2) - Real(1728) * dl) / abs(dl) < Real("1e-70"));
}
