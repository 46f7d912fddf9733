#include "doctest.h"

#include "cmq/quadcm.hpp"
#include "cmq/ssgraph.hpp"

#include <set>

using namespace cmq;

namespace {

const std::filesystem::path kCache = "/tmp/cmq-test-cache";

// Hasse-invariant oracle: roots lambda of sum C(m,i)^2 lambda^i over F_p^2,
// mapped through j = 2^8 (l^2-l+1)^3 / (l^2 (l-1)^2), give the supersingular
// j-invariants (p >= 5).
std::set<Fp2El> hasse_supersingular(const Int& p) {
    Fp2Field k(p.convert_to<std::uint64_t>());
    long m = ((p - 1) / 2).convert_to<long>();
    std::vector<Int> binom(static_cast<size_t>(m + 1));
    binom[0] = 1;
    for (long i = 1; i <= m; ++i)
        binom[static_cast<size_t>(i)] = binom[static_cast<size_t>(i - 1)] * (m - i + 1) / i;
    Fp2Poly h;
    for (long i = 0; i <= m; ++i)
        h.push_back(k.from_int(binom[static_cast<size_t>(i)] * binom[static_cast<size_t>(i)]));
    std::set<Fp2El> js;
    for (auto& lam : poly_roots(k, h)) {
        Fp2El l2 = k.mul(lam, lam);
        Fp2El num = k.sub(k.add(l2, k.make(1, 0)), lam);          // l^2 - l + 1
        num = k.mul(k.mul(num, num), num);                        // cubed
        num = k.mul(num, k.from_int(Int(256)));                   // 2^8 ...
        Fp2El den = k.mul(l2, k.mul(k.sub(lam, k.make(1, 0)), k.sub(lam, k.make(1, 0))));
        js.insert(k.mul(num, k.inv(den)));
    }
    return js;
}

}  // namespace

TEST_CASE("fp2 field arithmetic") {
    Fp2Field k(10007);
    Fp2El a = k.make(123, 456), b = k.make(9991, 17);
    CHECK(k.mul(a, k.inv(a)) == k.make(1, 0));
    CHECK(k.add(a, k.neg(a)) == k.make(0, 0));
    CHECK(k.mul(a, b) == k.mul(b, a));
    // frobenius is an involution on F_p^2 fixing F_p
    CHECK(k.frobenius(k.frobenius(a)) == a);
    CHECK(k.frobenius(k.make(77, 0)) == k.make(77, 0));
    // fermat: a^(p^2) = a
    CHECK(k.pow(a, Int(10007) * Int(10007)) == a);

    Fp2Field k2(2);
    Fp2El u = k2.make(1, 1);
    CHECK(k2.mul(u, k2.inv(u)) == k2.make(1, 0));
    CHECK(k2.pow(u, Int(4)) == u);   // F_4
}

TEST_CASE("polynomial roots over fp2") {
    Fp2Field k(10007);
    // (X - 3)(X - 5)(X - s) with s the extension generator
    Fp2El s = k.make(0, 1);
    Fp2Poly f{k.make(1, 0)};
    for (auto r : {k.make(3, 0), k.make(5, 0), s}) {
        Fp2Poly lin{k.neg(r), k.make(1, 0)};
        f = poly_mul(k, f, lin);
    }
    auto roots = poly_roots(k, f);
    REQUIRE(roots.size() == 3);
    std::set<Fp2El> rs(roots.begin(), roots.end());
    CHECK(rs.count(k.make(3, 0)) == 1);
    CHECK(rs.count(k.make(5, 0)) == 1);
    CHECK(rs.count(s) == 1);

    // repeated roots reported once
    Fp2Poly g = poly_mul(k, f, f);
    CHECK(poly_roots(k, g).size() == 3);
}

TEST_CASE("eichler class numbers match the table") {
    struct Row {
        long p, h;
    };
    std::vector<Row> rows{{101, 9},   {211, 18},  {307, 26},  {401, 34},  {503, 43},
                          {601, 50},  {701, 59},  {809, 68},  {907, 76},  {1009, 84},
                          {2003, 168}, {3001, 250}, {4001, 334}, {5003, 418}, {6007, 501},
                          {7001, 584}, {8009, 668}, {9001, 750}, {10007, 835}};
    for (auto& r : rows) CHECK(eichler_class_number(Int(r.p)) == r.h);
    CHECK(eichler_class_number(Int(2)) == 1);
    CHECK(eichler_class_number(Int(13)) == 1);
    CHECK_THROWS_AS(eichler_class_number(Int(100)), invalid_input);
}

TEST_CASE("supersingular sets for tiny p") {
    auto s2 = supersingular_j_invariants(Int(2), kCache);
    REQUIRE(s2.js.size() == 1);
    CHECK(s2.js[0] == Fp2El{0, 0});

    auto s3 = supersingular_j_invariants(Int(3), kCache);
    REQUIRE(s3.js.size() == 1);
    CHECK(s3.js[0] == Fp2El{0, 0});   // 1728 = 0 mod 3

    auto s13 = supersingular_j_invariants(Int(13), kCache);
    REQUIRE(s13.js.size() == 1);
    CHECK(s13.js[0] == Fp2El{5, 0});
}

TEST_CASE("supersingular sets match the hasse oracle") {
    for (long p : {5L, 7L, 11L, 13L, 17L, 19L, 23L, 31L, 37L, 41L, 47L}) {
        auto bfs = supersingular_j_invariants(Int(p), kCache);
        auto oracle = hasse_supersingular(Int(p));
        std::set<Fp2El> got(bfs.js.begin(), bfs.js.end());
        CHECK(got == oracle);
        CHECK(Int(got.size()) == eichler_class_number(Int(p)));
    }
}

TEST_CASE("supersingular set closed under frobenius") {
    auto s = supersingular_j_invariants(Int(101), kCache);
    Fp2Field k(101);
    std::set<Fp2El> set(s.js.begin(), s.js.end());
    for (auto& j : s.js) CHECK(set.count(k.frobenius(j)) == 1);
    CHECK(s.js.size() == 9);
}

TEST_CASE("min cyclic degree basics") {
    auto s = supersingular_j_invariants(Int(101), kCache);
    REQUIRE(s.js.size() >= 2);
    CHECK(*min_cyclic_degree(s.js[0], s.js[0], Int(101), 10, kCache) == 1);
    // symmetry
    auto d01 = min_cyclic_degree(s.js[0], s.js[1], Int(101), 10, kCache);
    auto d10 = min_cyclic_degree(s.js[1], s.js[0], Int(101), 10, kCache);
    REQUIRE(d01.has_value());
    CHECK(*d01 == *d10);
    CHECK(*d01 <= 6);   // N(101) = 6 bounds every pair
    // a pair cannot be linked by degree 1
    CHECK(!min_cyclic_degree(s.js[0], s.js[1], Int(101), 1, kCache).has_value());
}

TEST_CASE("isogeny diameter for p=101") {
    auto row = isogeny_diameter_degree(Int(101), kCache, 2);
    CHECK(row.h == 9);
    CHECK(row.sqrt_col == 10);
    CHECK(row.n_max_min == 6);
    CHECK(row.ratio == "0.600");   // 6/[sqrt(101)] = 6/10, the tabulated convention
}
