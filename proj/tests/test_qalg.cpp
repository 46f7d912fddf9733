#include "doctest.h"

#include "cmq/enumerate.hpp"
#include "cmq/qalg.hpp"

#include <map>
#include <set>

using namespace cmq;

namespace {

Vec4z vz(long a, long b, long c, long d) {
    Vec4z v;
    v << Int(a), Int(b), Int(c), Int(d);
    return v;
}

std::set<std::array<long, 4>> to_set(const std::vector<Vec4z>& vs) {
    std::set<std::array<long, 4>> s;
    for (auto& v : vs)
        s.insert({v(0).convert_to<long>(), v(1).convert_to<long>(), v(2).convert_to<long>(),
                  v(3).convert_to<long>()});
    return s;
}

}  // namespace

TEST_CASE("algebra models certified by Hilbert symbols") {
    CHECK(build_algebra(Int(2)).a == -1);
    CHECK(build_algebra(Int(2)).b == -1);
    auto a11 = build_algebra(Int(11));
    CHECK(a11.a == -1);
    CHECK(a11.b == -11);
    auto a5 = build_algebra(Int(5));
    CHECK(a5.a == -2);
    CHECK(a5.b == -5);
    // p = 1 mod 8 needs the auxiliary prime model
    auto a17 = build_algebra(Int(17));
    CHECK(ramified_exactly_at_p_infinity(a17));
    CHECK_THROWS_AS(build_algebra(Int(10)), invalid_input);
}

TEST_CASE("maximal orders have discriminant p^2") {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 41L, 73L, 97L, 101L, 10007L}) {
        auto alg = build_algebra(Int(p));
        auto o = maximal_order(alg);
        CHECK(det_bareiss(MatZ(o.gram)) == Int(p) * Int(p));
        for (int i = 0; i < 4; ++i) {
            CHECK(o.gram(i, i) % 2 == 0);
            for (int j = 0; j < i; ++j) CHECK(o.gram(i, j) == o.gram(j, i));
        }
        // positive definite: leading minors positive
        for (int k = 1; k <= 4; ++k) {
            MatZ minor = MatZ(o.gram).topLeftCorner(k, k);
            CHECK(det_bareiss(minor) > 0);
        }
        // <1,1> = 2
        Vec4q one;
        one << 1, 0, 0, 0;
        auto c = o.from_algebra(one);
        REQUIRE(c.has_value());
        CHECK(order_norm(o, *c) == 1);
        CHECK(order_trace(o, *c) == 2);
    }
}

TEST_CASE("hurwitz order at p=2 contains the half unit") {
    auto o = maximal_order(build_algebra(Int(2)));
    Vec4q h;
    h << Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2);
    auto c = o.from_algebra(h);
    REQUIRE(c.has_value());
    CHECK(order_norm(o, *c) == 1);
}

TEST_CASE("short vectors match boxed brute force") {
    for (long p : {11L, 101L, 293L}) {
        auto o = maximal_order(build_algebra(Int(p)));
        for (long bound : {1L, 3L, 17L, 50L}) {
            auto fast = short_vectors(o, Rat(bound));
            std::vector<Vec4z> slow;
            Vec4z zero = vz(0, 0, 0, 0);
            slow.push_back(zero);
            Eigen::MatrixXd g(4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) g(i, j) = o.gram(i, j).convert_to<double>();
            enumerate_box_oracle(g, 2.0 * static_cast<double>(bound), [&](const VecX<Int>& x) {
                Vec4z v = x;
                if (order_norm(o, v) <= bound) slow.push_back(v);
            });
            CHECK(fast.size() == slow.size());
            CHECK(to_set(fast) == to_set(slow));
            // closed under negation, count even excluding 0
            CHECK((fast.size() - 1) % 2 == 0);
        }
    }
}

TEST_CASE("short vectors bound=1 contains +-1") {
    auto o = maximal_order(build_algebra(Int(101)));
    auto vs = short_vectors(o, Rat(1));
    auto s = to_set(vs);
    Vec4q one;
    one << 1, 0, 0, 0;
    auto c1 = o.from_algebra(one);
    auto cm1 = o.from_algebra(Vec4q(-one));
    REQUIRE(c1.has_value());
    REQUIRE(cm1.has_value());
    CHECK(s.count({(*c1)(0).convert_to<long>(), (*c1)(1).convert_to<long>(),
                   (*c1)(2).convert_to<long>(), (*c1)(3).convert_to<long>()}) == 1);
    CHECK(s.count({(*cm1)(0).convert_to<long>(), (*cm1)(1).convert_to<long>(),
                   (*cm1)(2).convert_to<long>(), (*cm1)(3).convert_to<long>()}) == 1);
}

TEST_CASE("successive minima bounds of the geometry of numbers") {
    precision_guard g(128);
    Real pi = pi_value();
    for (long p : {2L, 3L, 5L, 11L, 101L, 997L}) {
        auto o = maximal_order(build_algebra(Int(p)));
        auto sm = successive_minima(o);
        CHECK(sm.norm[0] == 1);   // mu_1 = 1
        CHECK(sm.norm[0] <= sm.norm[1]);
        CHECK(sm.norm[1] <= sm.norm[2]);
        CHECK(sm.norm[2] <= sm.norm[3]);

        Real prod = sm.mu(0, 128) * sm.mu(1, 128) * sm.mu(2, 128) * sm.mu(3, 128);
        Real pr = to_real(Int(p));
        CHECK(prod >= pr / (3 * pi * pi) * Real("0.999999"));
        CHECK(prod <= 8 * pr / (pi * pi) * Real("1.000001"));
        // mu_4 <= 2 sqrt2 / pi sqrt p;  mu_2 mu_3 >= sqrt p / 2
        CHECK(sm.mu(3, 128) <= 2 * sqrt(Real(2)) / pi * sqrt(pr) * Real("1.000001"));
        CHECK(sm.mu(1, 128) * sm.mu(2, 128) >= sqrt(pr) / 2 * Real("0.999999"));
        // mu_2^2 <= 4/pi^(4/3) p^(2/3)
        CHECK(to_real(sm.norm[1]) <=
              4 / pow(pi, Real(4) / 3) * pow(pr, Real(2) / 3) * Real("1.000001"));
    }
}

TEST_CASE("p=101 minima agree with exhaustive search") {
    auto o = maximal_order(build_algebra(Int(101)));
    auto sm = successive_minima(o);
    // exhaustive: collect all norms up to ceil(8p/pi^2), find minima greedily
    long cap = static_cast<long>(8.0 * 101 / (M_PI * M_PI)) + 2;
    auto vecs = short_vectors(o, Rat(cap));
    MatQ chosen(4, 4);
    int found = 0;
    std::array<Int, 4> mins;
    for (auto& v : vecs) {
        if (v == Vec4z(vz(0, 0, 0, 0))) continue;
        MatQ m(found + 1, 4);
        for (int r = 0; r < found; ++r) m.row(r) = chosen.row(r);
        for (int j = 0; j < 4; ++j) m(found, j) = Rat(v(j));
        if (m.fullPivLu().rank() == found + 1) {
            mins[static_cast<size_t>(found)] = order_norm(o, v);
            chosen.row(found) = m.row(found);
            if (++found == 4) break;
        }
    }
    REQUIRE(found == 4);
    for (int i = 0; i < 4; ++i) CHECK(mins[static_cast<size_t>(i)] == sm.norm[static_cast<size_t>(i)]);
}

TEST_CASE("minimal quadratic suborder") {
    auto o2 = maximal_order(build_algebra(Int(2)));
    auto q2 = minimal_quadratic_suborder(o2);
    CHECK(order_norm(o2, q2.k) == 1);
    CHECK(q2.disc == -3);
    CHECK(q2.field_disc == -3);
    CHECK(q2.conductor == 1);

    auto o = maximal_order(build_algebra(Int(101)));
    auto q = minimal_quadratic_suborder(o);
    auto sm = successive_minima(o);
    CHECK(order_norm(o, q.k) == sm.norm[1]);
    CHECK(q.disc == q.conductor * q.conductor * q.field_disc);
    CHECK(q.disc < 0);
}

TEST_CASE("small norm elements commute") {
    for (long p : {2L, 101L, 10007L}) {
        auto o = maximal_order(build_algebra(Int(p)));
        auto rep = small_norm_commutativity_check(o);
        CHECK(rep.pass);
        CHECK(rep.count_bound_ok);
        if (p == 2) CHECK(rep.element_count == 0);   // sqrt(2)/8 < 1: vacuous
    }
}

TEST_CASE("simultaneous embedding bound formula") {
    auto r = simultaneous_embedding_bound(Int(-3), Int(1), Int(-4), Int(1));
    CHECK(r.bound == Rat(5));
    CHECK(!r.same_field_warning);
    auto r2 = simultaneous_embedding_bound(Int(-4), Int(1), Int(-4), Int(1));
    CHECK(r2.bound == Rat(25, 4));
    CHECK(r2.same_field_warning);
    auto r3 = simultaneous_embedding_bound(Int(-3), Int(1), Int(-7), Int(1));
    CHECK(r3.bound == Rat(8));
    CHECK_THROWS_AS(simultaneous_embedding_bound(Int(-5), Int(1), Int(-3), Int(1)), invalid_input);
}

TEST_CASE("no maximal order of B_11 contains both Z[zeta3] and Z[i]") {
    // oracle behind the (-3,-4) bound value 5 < 11: elements of norm 1 with
    // disc -3 and disc -4 suborders cannot coexist
    auto o = maximal_order(build_algebra(Int(11)));
    auto vs = short_vectors(o, Rat(1));
    bool has_disc3 = false, has_disc4 = false;
    for (auto& v : vs) {
        Vec4q x = o.to_algebra(v);
        if (x(1) == 0 && x(2) == 0 && x(3) == 0) continue;
        Int d = quadratic_suborder_of(o, v).disc;
        if (d == -3) has_disc3 = true;
        if (d == -4) has_disc4 = true;
    }
    CHECK(!(has_disc3 && has_disc4));
}

TEST_CASE("covolume inequality chain") {
    auto alg = build_algebra(Int(11));
    auto o = maximal_order(alg);
    Vec4q iq, jq;
    iq << 0, 1, 0, 0;
    jq << 0, 0, 1, 0;
    auto ki = o.from_algebra(iq);
    auto kj = o.from_algebra(jq);
    REQUIRE(ki.has_value());
    REQUIRE(kj.has_value());
    auto rep = covolume_inequality_check(o, *ki, *kj);
    CHECK(!rep.degenerate);
    CHECK(rep.chain_holds);

    // commuting pair degenerates
    auto rep2 = covolume_inequality_check(o, *ki, *ki);
    CHECK(rep2.degenerate);

    // mu_2, mu_3 realizers: sqrt(p) <= 2 mu_2 mu_3 via the same chain
    auto o101 = maximal_order(build_algebra(Int(101)));
    auto sm = successive_minima(o101);
    auto rep3 = covolume_inequality_check(o101, sm.realizer[1], sm.realizer[2]);
    CHECK(!rep3.degenerate);
    CHECK(rep3.chain_holds);
    CHECK(Int(101) * 4 <= 16 * sm.norm[1] * sm.norm[2]);   // p <= 4 N(x) N(y)
}

TEST_CASE("trace zero short vectors") {
    auto o = maximal_order(build_algebra(Int(11)));
    auto tz = short_vectors_trace_zero(o, Rat(5));
    CHECK(!tz.empty());
    for (auto& v : tz) {
        CHECK(order_trace(o, v) == 0);
        CHECK(order_norm(o, v) <= 5);
    }
}
