#pragma once

// Primitive quartic CM fields K = Q(sqrt d)(sqrt r): construction, maximal
// order, class group at desk scale, unit data, CM types, reflex fields, and
// prime decomposition. Elements live as exact rational vectors over the
// power basis of theta = sqrt(r).

#include "cmq/numeric.hpp"

#include <array>
#include <optional>
#include <vector>

namespace cmq {

using KElem = Vec4q;   // coordinates over {1, theta, theta^2, theta^3}
using Vec4i = Vec4<Int>;

struct CMQuartic {
    Int d;             // K+ = Q(sqrt d), d > 0 squarefree
    Rat alpha, beta;   // r = alpha + beta sqrt(d), totally negative
    IntPoly minpoly;   // x^4 - 2 alpha x^2 + (alpha^2 - beta^2 d)

    Mat4q ibasis;      // rows = integral basis of O_K in power coordinates
    Mat4q ibasis_inv;  // inverse of ibasis^T (power -> integral coords)
    Int disc;          // field discriminant
    std::array<std::array<Vec4i, 4>, 4> mult;   // b_i b_j in integral coords

    // exact data of the two embedding pairs: theta -> i sqrt(t1), i sqrt(t2)
    // where t1 = |alpha + beta sqrt d|, t2 = |alpha - beta sqrt d|
    Rat norm_r() const { return alpha * alpha - beta * beta * Rat(d); }
    Rat trace_r() const { return 2 * alpha; }
};

CMQuartic construct_cm_quartic(const Int& d, const Rat& alpha, const Rat& beta);
// Parse "d=<d> alpha=<a> beta=<b>" (with or without a leading "cmfield").
CMQuartic parse_cm_field(const std::string& descriptor);

bool is_primitive(const CMQuartic& k);
enum class GaloisType { cyclic, non_galois };
GaloisType galois_type(const CMQuartic& k);
Int denominator_bound(const CMQuartic& k);   // 16 d^2 Tr(r)^2

// --- element arithmetic (power coordinates) ---

KElem k_mul(const CMQuartic& k, const KElem& a, const KElem& b);
KElem k_conj(const KElem& a);                 // theta -> -theta
Rat k_trace(const CMQuartic& k, const KElem& a);
Rat k_norm(const CMQuartic& k, const KElem& a);
KElem k_inv(const CMQuartic& k, const KElem& a);
KElem k_from_rat(const Rat& q);
bool k_is_zero(const KElem& a);

// integral <-> power coordinate change
KElem power_from_integral(const CMQuartic& k, const Vec4q& c);
Vec4q integral_from_power(const CMQuartic& k, const KElem& x);
bool in_maximal_order(const CMQuartic& k, const KElem& x);

// complex embeddings: index 0,1 are a CM type (Im(theta) > 0 for both
// pairs); 2,3 are their conjugates (pairing 0<->2, 1<->3)
Cplx embed(const CMQuartic& k, const KElem& x, int which, unsigned bits);

struct CMType {
    int e1;   // 0 or 2
    int e2;   // 1 or 3

    std::array<int, 2> embeddings() const { return {e1, e2}; }
    CMType conjugate() const { return {e1 ^ 2, e2 ^ 2}; }
    bool operator==(const CMType&) const = default;
};

std::vector<CMType> cm_types(const CMQuartic& k);
CMQuartic reflex_field(const CMQuartic& k, const CMType& phi, unsigned check_bits = 256);

// automorphisms as power-coordinate images of theta; cyclic fields have 4,
// non-Galois have {id, conj}
std::vector<Mat4q> field_automorphism_matrices(const CMQuartic& k);

// --- ideals (rows in integral coordinates) ---

struct KIdeal {
    QLattice lat;   // full-rank sublattice of K in integral coordinates

    bool operator==(const KIdeal& o) const { return lat == o.lat; }
};

KIdeal ideal_whole_ring();
KIdeal ideal_from_rows(const MatQ& rows);
KIdeal ideal_mul(const CMQuartic& k, const KIdeal& a, const KIdeal& b);
KIdeal ideal_scale(const KIdeal& a, const Rat& s);
KIdeal ideal_conj(const CMQuartic& k, const KIdeal& a);
KIdeal ideal_inverse(const CMQuartic& k, const KIdeal& a);
KIdeal principal_ideal(const CMQuartic& k, const KElem& g);
Rat ideal_norm(const CMQuartic& k, const KIdeal& a);
KIdeal different_ideal(const CMQuartic& k);
KIdeal apply_matrix_to_ideal(const CMQuartic& k, const Mat4q& power_map, const KIdeal& a);

struct PrimeIdeal {
    KIdeal ideal;
    Int p;
    int e = 1, f = 1;
};

std::vector<PrimeIdeal> prime_ideals_above(const CMQuartic& k, const Int& p);

enum class DecompCondition { satisfied, not_satisfied, unknown };
DecompCondition decomposition_condition(const CMQuartic& k, const Int& p);

// --- units ---

struct UnitData {
    KElem eps;               // fundamental unit of O_{K+} inside K
    bool eps_tot_pos;        // totally positive already
    KElem eps_plus;          // totally positive fundamental unit (eps or eps^2)
    Real eps_plus_large;     // larger real embedding of eps_plus
    int xi_classes;          // t = [U+ : N_{K/K+}(U_K)] in {1, 2}
    std::vector<KElem> roots_of_unity;
};

UnitData unit_data(const CMQuartic& k, unsigned bits = 320);

// --- principality and class group ---

// exact generator when a is principal; certified none otherwise
std::optional<KElem> principal_generator(const CMQuartic& k, const KIdeal& a,
                                         const UnitData& u, unsigned bits = 320);
// generator xi with conj(xi) = -xi (purely imaginary), when one exists
std::optional<KElem> imaginary_generator(const CMQuartic& k, const KIdeal& a,
                                         const UnitData& u, unsigned bits = 320);

struct ClassGroup {
    std::vector<KIdeal> reps;   // reps[0] = O_K

    Int h() const { return Int(reps.size()); }
};

ClassGroup class_group(const CMQuartic& k, const UnitData& u, long budget_classes = 512);
// index into cg.reps of the class of a (throws if not found)
int class_of(const CMQuartic& k, const ClassGroup& cg, const UnitData& u, const KIdeal& a);

// T2 Gram matrix (sum over all embeddings of |phi(row_i)| * |phi(row_j)|
// with conjugation), numeric
Eigen::MatrixXd t2_gram(const CMQuartic& k, const MatQ& rows_integral, unsigned bits);

}  // namespace cmq
