#pragma once

// Arithmetic of the definite quaternion algebra B_{p,infinity}: maximal
// orders as rank-4 lattices with the reduced-norm form, short vector
// enumeration, successive minima, and the simultaneous-embedding bound.

#include "cmq/numeric.hpp"

#include <array>
#include <optional>
#include <vector>

namespace cmq {

using Vec4z = Vec4<Int>;

// Basis 1, i, j, k with i^2 = a, j^2 = b, ij = -ji = k (so k^2 = -a*b).
// Invariant: ramified exactly at {p, infinity}.
struct QuaternionAlgebra {
    Int p;
    Int a, b;
};

QuaternionAlgebra build_algebra(const Int& p);
bool ramified_exactly_at_p_infinity(const QuaternionAlgebra& alg);

// Elements in algebra coordinates (exact rationals over 1, i, j, k).
Vec4q quat_mul(const QuaternionAlgebra& alg, const Vec4q& x, const Vec4q& y);
inline Vec4q quat_conj(const Vec4q& x) { return Vec4q(x(0), -x(1), -x(2), -x(3)); }
inline Rat quat_trace(const Vec4q& x) { return 2 * x(0); }
Rat quat_norm(const QuaternionAlgebra& alg, const Vec4q& x);

// A maximal order: columns of `basis` are the Z-basis v1..v4 in algebra
// coordinates; gram(i,j) = Tr(v_i conj(v_j)). Invariants: gram symmetric
// positive definite with even diagonal and det = p^2; 1 in the order;
// closed under multiplication and conjugation.
struct QuaternionOrder {
    QuaternionAlgebra alg;
    Mat4q basis;
    Mat4q basis_inv;
    Mat4z gram;

    Vec4q to_algebra(const Vec4z& v) const;
    std::optional<Vec4z> from_algebra(const Vec4q& x) const;   // nullopt if not in the order
};

QuaternionOrder maximal_order(const QuaternionAlgebra& alg);
// Order with the given basis columns; verifies lattice/ring invariants.
QuaternionOrder make_order(const QuaternionAlgebra& alg, const Mat4q& basis_cols);

Int order_norm(const QuaternionOrder& o, const Vec4z& v);
Int order_trace(const QuaternionOrder& o, const Vec4z& v);
Vec4z order_mul(const QuaternionOrder& o, const Vec4z& x, const Vec4z& y);
Vec4z order_conj(const QuaternionOrder& o, const Vec4z& x);

// All x in O with N(x) <= bound, zero included, closed under negation,
// sorted by (norm, lexicographic coordinates). Deterministic.
std::vector<Vec4z> short_vectors(const QuaternionOrder& o, const Rat& bound);

// Same, restricted to the trace-zero sublattice; returned in order coords.
std::vector<Vec4z> short_vectors_trace_zero(const QuaternionOrder& o, const Rat& bound);

struct SuccessiveMinima {
    std::array<Int, 4> norm;         // mu_i^2 = N(realizer_i), ascending
    std::array<Vec4z, 4> realizer;   // linearly independent

    Real mu(int i, unsigned bits = 64) const;
};

SuccessiveMinima successive_minima(const QuaternionOrder& o);

struct QuadraticSuborder {
    Vec4z k;         // {1, k} is a basis of the suborder
    Int disc;        // disc(Z[k]) = Tr(k)^2 - 4 N(k) < 0
    Int conductor;   // disc = conductor^2 * field_disc
    Int field_disc;  // fundamental
};

QuadraticSuborder minimal_quadratic_suborder(const QuaternionOrder& o);
QuadraticSuborder quadratic_suborder_of(const QuaternionOrder& o, const Vec4z& k);

struct CommutativityReport {
    bool pass = true;
    Int element_count = 0;                    // elements with N < sqrt(p)/8
    std::optional<std::pair<Vec4z, Vec4z>> counterexample;
    Int suborder_disc = 0;                    // 0 when only rational elements qualify
    bool count_bound_ok = true;               // #elements of norm A <= 4 sqrt(A) + 2
};

CommutativityReport small_norm_commutativity_check(const QuaternionOrder& o);

struct EmbeddingBoundResult {
    Rat bound;                 // (m1^2 d1 - 1)(m2^2 d2 - 1) / 4
    bool same_field_warning;   // K1 = K2 hypothesis violated
};

EmbeddingBoundResult simultaneous_embedding_bound(const Int& d1, const Int& m1,
                                                  const Int& d2, const Int& m2);

struct CovolumeReport {
    bool degenerate = false;   // k1 k2 = k2 k1, L not of full rank
    Rat covol_sq_L;            // det Gram(1, k1, k2, k1 k2)
    Int covol_sq_R;            // p^2
    Rat upper_sq;              // (4 N(k1) N(k2))^2
    bool chain_holds = false;  // p^2 <= covol_sq_L <= upper_sq
};

CovolumeReport covolume_inequality_check(const QuaternionOrder& o, const Vec4z& k1,
                                         const Vec4z& k2);

}  // namespace cmq
