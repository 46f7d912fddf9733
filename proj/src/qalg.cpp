#include "cmq/qalg.hpp"

#include "cmq/enumerate.hpp"

#include <algorithm>
#include <map>

namespace cmq {

namespace {

Eigen::MatrixXd to_double(const Mat4z& m) {
    Eigen::MatrixXd d(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d(i, j) = static_cast<double>(m(i, j).convert_to<double>());
    return d;
}

bool lex_less(const Vec4z& a, const Vec4z& b) {
    for (int i = 0; i < 4; ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

Vec4z canonical_sign(const Vec4z& v) {
    for (int i = 0; i < 4; ++i) {
        if (v(i) != 0) return v(i) > 0 ? v : Vec4z(-v);
    }
    return v;
}

}  // namespace

bool ramified_exactly_at_p_infinity(const QuaternionAlgebra& alg) {
    if (hilbert_symbol(alg.a, alg.b, Int(0)) != -1) return false;
    if (hilbert_symbol(alg.a, alg.b, alg.p) != -1) return false;
    auto places = factorize(2 * alg.a * alg.b);
    for (auto& [q, e] : places) {
        if (q == alg.p) continue;
        if (hilbert_symbol(alg.a, alg.b, q) != 1) return false;
    }
    return true;
}

QuaternionAlgebra build_algebra(const Int& p) {
    if (!is_prime(p)) throw invalid_input("build_algebra: p = " + p.str() + " is not prime");
    QuaternionAlgebra alg;
    alg.p = p;
    if (p == 2) {
        alg.a = -1;
        alg.b = -1;
    } else if (p % 4 == 3) {
        alg.a = -1;
        alg.b = -p;
    } else if (p % 8 == 5) {
        alg.a = -2;
        alg.b = -p;
    } else {
        // p = 1 mod 8: smallest prime q = 3 mod 4 that is a non-residue mod p
        Int q = 3;
        while (!(is_prime(q) && q % 4 == 3 && kronecker(q, p) == -1)) q += 2;
        alg.a = -q;
        alg.b = -p;
    }
    if (!ramified_exactly_at_p_infinity(alg))
        throw invariant_failure("build_algebra: model fails Hilbert symbol certification");
    return alg;
}

Vec4q quat_mul(const QuaternionAlgebra& alg, const Vec4q& x, const Vec4q& y) {
    const Rat a(alg.a), b(alg.b);
    Vec4q r;
    r(0) = x(0) * y(0) + a * x(1) * y(1) + b * x(2) * y(2) - a * b * x(3) * y(3);
    r(1) = x(0) * y(1) + x(1) * y(0) - b * x(2) * y(3) + b * x(3) * y(2);
    r(2) = x(0) * y(2) + x(2) * y(0) + a * x(1) * y(3) - a * x(3) * y(1);
    r(3) = x(0) * y(3) + x(3) * y(0) + x(1) * y(2) - x(2) * y(1);
    return r;
}

Rat quat_norm(const QuaternionAlgebra& alg, const Vec4q& x) {
    const Rat a(alg.a), b(alg.b);
    return x(0) * x(0) - a * x(1) * x(1) - b * x(2) * x(2) + a * b * x(3) * x(3);
}

Vec4q QuaternionOrder::to_algebra(const Vec4z& v) const {
    Vec4q q;
    for (int i = 0; i < 4; ++i) q(i) = Rat(v(i));
    return basis * q;
}

std::optional<Vec4z> QuaternionOrder::from_algebra(const Vec4q& x) const {
    Vec4q c = basis_inv * x;
    Vec4z v;
    for (int i = 0; i < 4; ++i) {
        if (denominator(c(i)) != 1) return std::nullopt;
        v(i) = numerator(c(i));
    }
    return v;
}

QuaternionOrder make_order(const QuaternionAlgebra& alg, const Mat4q& basis_cols) {
    QuaternionOrder o;
    o.alg = alg;
    o.basis = basis_cols;
    o.basis_inv = basis_cols.inverse();

    // gram(i,j) = Tr(v_i conj(v_j))
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Vec4q prod = quat_mul(alg, o.basis.col(i), quat_conj(o.basis.col(j)));
            Rat t = quat_trace(prod);
            if (denominator(t) != 1)
                throw invariant_failure("make_order: trace pairing not integral");
            o.gram(i, j) = numerator(t);
        }

    // ring + integrality certification
    Vec4q one;
    one << 1, 0, 0, 0;
    if (!o.from_algebra(one)) throw invariant_failure("make_order: 1 not in order");
    for (int i = 0; i < 4; ++i) {
        if (o.gram(i, i) % 2 != 0) throw invariant_failure("make_order: odd diagonal");
        for (int j = 0; j < 4; ++j) {
            Vec4q prod = quat_mul(alg, o.basis.col(i), o.basis.col(j));
            if (!o.from_algebra(prod))
                throw invariant_failure("make_order: not closed under multiplication");
        }
        if (!o.from_algebra(quat_conj(o.basis.col(i))))
            throw invariant_failure("make_order: not closed under conjugation");
    }
    return o;
}

namespace {

// Enlarge the order at prime l by adjoining an integral (1/l)-element and
// closing under multiplication; fallback when a textbook basis misses
// maximality.
bool try_saturate_at(QuaternionOrder& o, const Int& l) {
    const Int p2 = o.alg.p * o.alg.p;
    long lm = l.convert_to<long>();
    for (long c0 = 0; c0 < lm; ++c0)
        for (long c1 = 0; c1 < lm; ++c1)
            for (long c2 = 0; c2 < lm; ++c2)
                for (long c3 = 0; c3 < lm; ++c3) {
                    if (c0 + c1 + c2 + c3 == 0) continue;
                    Vec4z v;
                    v << Int(c0), Int(c1), Int(c2), Int(c3);
                    Vec4q x = o.to_algebra(v) / Rat(l);
                    Rat t = quat_trace(x), n = quat_norm(o.alg, x);
                    if (denominator(t) != 1 || denominator(n) != 1) continue;

                    // ring closure of O + Zx
                    MatQ rows(5, 4);
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) rows(i, j) = o.basis(j, i);
                    for (int j = 0; j < 4; ++j) rows(4, j) = x(j);
                    QLattice lat = QLattice::from_rows(rows);
                    bool closed = false;
                    for (int iter = 0; iter < 8; ++iter) {
                        MatQ b = lat.rows();
                        MatQ prods(b.rows() * b.rows() + b.rows(), 4);
                        int r = 0;
                        for (int i = 0; i < b.rows(); ++i) prods.row(r++) = b.row(i);
                        for (int i = 0; i < b.rows(); ++i)
                            for (int j = 0; j < b.rows(); ++j) {
                                Vec4q xi = b.row(i).transpose(), xj = b.row(j).transpose();
                                prods.row(r++) = quat_mul(o.alg, xi, xj).transpose();
                            }
                        QLattice next = QLattice::from_rows(prods.topRows(r));
                        if (next == lat) {
                            closed = true;
                            break;
                        }
                        lat = next;
                        // an order's trace form has det >= p^2; diverging closure bails out
                        if (lat.covolume_det() * lat.covolume_det() * Rat(16) < Rat(p2)) break;
                    }
                    if (!closed) continue;
                    MatQ nb = lat.rows();
                    Mat4q cols;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j) cols(j, i) = nb(i, j);
                    try {
                        QuaternionOrder bigger = make_order(o.alg, cols);
                        if (det_bareiss(MatZ(bigger.gram)) < det_bareiss(MatZ(o.gram))) {
                            o = bigger;
                            return true;
                        }
                    } catch (const invariant_failure&) {
                        continue;
                    }
                }
    return false;
}

QuaternionOrder saturate_to_maximal(QuaternionOrder o) {
    const Int target = o.alg.p * o.alg.p;
    for (int rounds = 0; rounds < 64; ++rounds) {
        Int d = det_bareiss(MatZ(o.gram));
        if (d == target) return o;
        Int ratio = d / target;
        auto fac = factorize(ratio);
        bool progressed = false;
        for (auto& [l, e] : fac) {
            if (try_saturate_at(o, l)) {
                progressed = true;
                break;
            }
        }
        if (!progressed)
            throw invariant_failure("saturate_to_maximal: stuck at det " + d.str());
    }
    throw invariant_failure("saturate_to_maximal: did not converge");
}

}  // namespace

QuaternionOrder maximal_order(const QuaternionAlgebra& alg) {
    const Int& p = alg.p;
    Mat4q cols;
    cols.setZero();
    auto set_col = [&](int idx, Rat c0, Rat c1, Rat c2, Rat c3) {
        cols(0, idx) = c0;
        cols(1, idx) = c1;
        cols(2, idx) = c2;
        cols(3, idx) = c3;
    };
    set_col(0, 1, 0, 0, 0);
    if (p == 2) {
        // Hurwitz order
        set_col(1, 0, 1, 0, 0);
        set_col(2, 0, 0, 1, 0);
        set_col(3, Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1, 2));
    } else if (p % 4 == 3) {
        set_col(1, 0, 1, 0, 0);
        set_col(2, Rat(1, 2), 0, Rat(1, 2), 0);
        set_col(3, 0, Rat(1, 2), 0, Rat(1, 2));
    } else if (p % 8 == 5) {
        set_col(1, 0, 1, 0, 0);
        set_col(2, Rat(1, 2), Rat(1, 2), Rat(1, 2), 0);
        set_col(3, Rat(1, 2), Rat(1, 4), 0, Rat(1, 4));
    } else {
        // p = 1 mod 8, algebra (-q, -p): {1, (1+i)/2, (j+k)/2, (i + c k)/q},
        // c^2 p = -1 mod q; only one root c closes to a ring, so try both.
        Int q = -alg.a;
        set_col(1, Rat(1, 2), Rat(1, 2), 0, 0);
        set_col(2, 0, 0, Rat(1, 2), Rat(1, 2));
        for (Int t = 1; t < q; ++t) {
            if ((t * t * p + 1) % q != 0) continue;
            set_col(3, 0, Rat(1, q), 0, Rat(t, q));
            try {
                QuaternionOrder o = make_order(alg, cols);
                if (det_bareiss(MatZ(o.gram)) == p * p) return o;
            } catch (const invariant_failure&) {
                continue;
            }
        }
        // fall back to saturating the obvious order Z<1, i, j, k>
        set_col(1, 0, 1, 0, 0);
        set_col(2, 0, 0, 1, 0);
        set_col(3, 0, 0, 0, 1);
    }
    QuaternionOrder o = make_order(alg, cols);
    if (det_bareiss(MatZ(o.gram)) != p * p) o = saturate_to_maximal(o);
    if (det_bareiss(MatZ(o.gram)) != p * p)
        throw invariant_failure("maximal_order: discriminant certification failed");
    return o;
}

Int order_norm(const QuaternionOrder& o, const Vec4z& v) {
    // N(x) = (x^T gram x) / 2, exact
    Int s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += v(i) * o.gram(i, j) * v(j);
    return s / 2;
}

Int order_trace(const QuaternionOrder& o, const Vec4z& v) {
    Rat t = quat_trace(o.to_algebra(v));
    return numerator(t);
}

Vec4z order_mul(const QuaternionOrder& o, const Vec4z& x, const Vec4z& y) {
    Vec4q prod = quat_mul(o.alg, o.to_algebra(x), o.to_algebra(y));
    auto v = o.from_algebra(prod);
    if (!v) throw invariant_failure("order_mul: product left the order");
    return *v;
}

Vec4z order_conj(const QuaternionOrder& o, const Vec4z& x) {
    auto v = o.from_algebra(quat_conj(o.to_algebra(x)));
    if (!v) throw invariant_failure("order_conj: conjugate left the order");
    return *v;
}

std::vector<Vec4z> short_vectors(const QuaternionOrder& o, const Rat& bound) {
    if (bound <= 0) throw invalid_input("short_vectors: bound must be positive");
    std::vector<Vec4z> out;
    Vec4z zero;
    zero.setZero();
    out.push_back(zero);
    double b2 = 2.0 * numerator(bound).convert_to<double>() / denominator(bound).convert_to<double>();
    enumerate_short_vectors(to_double(o.gram), b2, [&](const VecX<Int>& x) {
        Vec4z v = x;
        if (Rat(order_norm(o, v)) <= bound) out.push_back(v);
    });
    std::sort(out.begin(), out.end(), [&](const Vec4z& a, const Vec4z& b) {
        Int na = order_norm(o, a), nb = order_norm(o, b);
        if (na != nb) return na < nb;
        return lex_less(a, b);
    });
    return out;
}

std::vector<Vec4z> short_vectors_trace_zero(const QuaternionOrder& o, const Rat& bound) {
    auto all = short_vectors(o, bound);
    std::vector<Vec4z> out;
    for (auto& v : all)
        if (order_trace(o, v) == 0 && !(v(0) == 0 && v(1) == 0 && v(2) == 0 && v(3) == 0))
            out.push_back(v);
    return out;
}

Real SuccessiveMinima::mu(int i, unsigned bits) const {
    precision_guard g(bits);
    return sqrt(to_real(norm[static_cast<size_t>(i)]));
}

SuccessiveMinima successive_minima(const QuaternionOrder& o) {
    // mu_4 <= (2 sqrt2 / pi) sqrt p for End(E), so N <= 8p/pi^2
    double pd = o.alg.p.convert_to<double>();
    Int nbound(static_cast<long>(8.0 * pd / (M_PI * M_PI)) + 2);
    auto vecs = short_vectors(o, Rat(nbound));

    SuccessiveMinima sm;
    MatQ chosen(4, 4);
    int found = 0;
    for (auto& v : vecs) {
        if (v(0) == 0 && v(1) == 0 && v(2) == 0 && v(3) == 0) continue;
        Vec4z c = canonical_sign(v);
        if (c != v) continue;   // one representative per +- pair, lex order kept by sort
        // check independence from already chosen realizers
        MatQ m(found + 1, 4);
        for (int r = 0; r < found; ++r) m.row(r) = chosen.row(r);
        for (int j = 0; j < 4; ++j) m(found, j) = Rat(c(j));
        if (m.fullPivLu().rank() == found + 1) {
            sm.norm[static_cast<size_t>(found)] = order_norm(o, c);
            sm.realizer[static_cast<size_t>(found)] = c;
            chosen.row(found) = m.row(found);
            ++found;
            if (found == 4) break;
        }
    }
    if (found < 4) throw invariant_failure("successive_minima: fewer than 4 independent vectors");
    return sm;
}

QuadraticSuborder quadratic_suborder_of(const QuaternionOrder& o, const Vec4z& k) {
    QuadraticSuborder q;
    q.k = k;
    Int t = order_trace(o, k), n = order_norm(o, k);
    q.disc = t * t - 4 * n;
    if (q.disc >= 0) throw invalid_input("quadratic_suborder_of: k is rational");
    Int sf = squarefree_part(q.disc);   // negative
    Int d_k = (((sf % 4) + 4) % 4 == 1) ? sf : 4 * sf;
    q.field_disc = d_k;
    q.conductor = isqrt(q.disc / d_k);
    return q;
}

QuadraticSuborder minimal_quadratic_suborder(const QuaternionOrder& o) {
    auto sm = successive_minima(o);
    return quadratic_suborder_of(o, sm.realizer[1]);
}

CommutativityReport small_norm_commutativity_check(const QuaternionOrder& o) {
    CommutativityReport rep;
    const Int& p = o.alg.p;
    // N(x) < sqrt(p)/8  <=>  64 N^2 < p
    auto qualifies = [&](const Int& n) { return 64 * n * n < p; };

    Int maxn = isqrt(p) / 8 + 1;
    auto vecs = short_vectors(o, Rat(maxn));
    std::vector<Vec4z> elems;
    std::map<Int, Int> per_norm;
    for (auto& v : vecs) {
        if (v(0) == 0 && v(1) == 0 && v(2) == 0 && v(3) == 0) continue;
        Int n = order_norm(o, v);
        if (!qualifies(n)) continue;
        elems.push_back(v);
        per_norm[n] += 1;
    }
    rep.element_count = Int(elems.size());

    // pairwise commutativity
    for (size_t i = 0; i < elems.size() && rep.pass; ++i)
        for (size_t j = i + 1; j < elems.size(); ++j) {
            Vec4z xy = order_mul(o, elems[i], elems[j]);
            Vec4z yx = order_mul(o, elems[j], elems[i]);
            if (xy != yx) {
                rep.pass = false;
                rep.counterexample = {elems[i], elems[j]};
                break;
            }
        }

    // all non-rational qualifiers lie in one quadratic subfield Q(k)
    std::optional<Vec4z> k;
    for (auto& v : elems) {
        Vec4q x = o.to_algebra(v);
        bool rational = (x(1) == 0 && x(2) == 0 && x(3) == 0);
        if (rational) continue;
        if (!k) {
            k = v;
            continue;
        }
        // v must lie in span_Q(1, k): rank of {1, k, v} as algebra vectors is 2
        MatQ m(3, 4);
        Vec4q one;
        one << 1, 0, 0, 0;
        m.row(0) = one.transpose();
        m.row(1) = o.to_algebra(*k).transpose();
        m.row(2) = x.transpose();
        if (m.fullPivLu().rank() > 2) {
            rep.pass = false;
            rep.counterexample = {*k, v};
            break;
        }
    }
    if (k) rep.suborder_disc = quadratic_suborder_of(o, *k).disc;

    // count bound 4 sqrt(A) + 2 per norm value
    for (auto& [a, cnt] : per_norm) {
        if (cnt <= 2) continue;
        if ((cnt - 2) * (cnt - 2) > 16 * a) rep.count_bound_ok = false;
    }
    if (!rep.count_bound_ok) rep.pass = false;
    return rep;
}

namespace {

bool is_fundamental_disc(const Int& d) {
    if (d >= 0) return false;
    Int m = ((d % 4) + 4) % 4;
    if (m == 1) return squarefree_part(d) == d;
    if (m == 0) {
        Int q = d / 4;
        Int r = ((q % 4) + 4) % 4;
        return squarefree_part(q) == q && (r == 2 || r == 3);
    }
    return false;
}

}  // namespace

EmbeddingBoundResult simultaneous_embedding_bound(const Int& d1, const Int& m1, const Int& d2,
                                                  const Int& m2) {
    if (!is_fundamental_disc(d1) || !is_fundamental_disc(d2))
        throw invalid_input("simultaneous_embedding_bound: discriminants must be negative fundamental");
    if (m1 < 1 || m2 < 1) throw invalid_input("simultaneous_embedding_bound: conductors must be >= 1");
    EmbeddingBoundResult r;
    r.bound = Rat((m1 * m1 * d1 - 1) * (m2 * m2 * d2 - 1), 4);
    r.same_field_warning = (d1 == d2);
    return r;
}

CovolumeReport covolume_inequality_check(const QuaternionOrder& o, const Vec4z& k1,
                                         const Vec4z& k2) {
    CovolumeReport rep;
    Vec4q a1 = o.to_algebra(k1), a2 = o.to_algebra(k2);
    Vec4q prod12 = quat_mul(o.alg, a1, a2);
    Vec4q prod21 = quat_mul(o.alg, a2, a1);
    if (prod12 == prod21) {
        rep.degenerate = true;
        return rep;
    }
    Vec4q one;
    one << 1, 0, 0, 0;
    std::array<Vec4q, 4> gens = {one, a1, a2, prod12};
    Mat4q gram;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            gram(i, j) = quat_trace(quat_mul(o.alg, gens[static_cast<size_t>(i)],
                                             quat_conj(gens[static_cast<size_t>(j)])));
    rep.covol_sq_L = gram.determinant();
    rep.covol_sq_R = o.alg.p * o.alg.p;
    Rat n1 = quat_norm(o.alg, a1), n2 = quat_norm(o.alg, a2);
    rep.upper_sq = Rat(16) * n1 * n1 * n2 * n2;
    rep.chain_holds = Rat(rep.covol_sq_R) <= rep.covol_sq_L && rep.covol_sq_L <= rep.upper_sq;
    return rep;
}

}  // namespace cmq
