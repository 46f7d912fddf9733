#pragma once

// Imaginary quadratic CM machinery: reduced binary quadratic forms, the
// elliptic modular function j at high precision, Hilbert class polynomials,
// classical modular polynomials Phi_n, and the singular-moduli prime bound.

#include "cmq/numeric.hpp"

#include <filesystem>
#include <vector>

namespace cmq {

struct QuadOrder {
    Int disc;        // negative, = 0 or 1 mod 4
    Int field_disc;  // fundamental part
    Int conductor;   // disc = conductor^2 * field_disc
};

QuadOrder make_quad_order(const Int& disc);

struct ReducedForm {
    Int a, b, c;   // |b| <= a <= c, b >= 0 if |b| = a or a = c, primitive
};

std::vector<ReducedForm> reduced_forms(const Int& disc);
Int class_number(const Int& disc);

// --- genus-1 analytic functions (q-series at a reduced point) ---

// SL2(Z) reduction into |Re| <= 1/2, |tau| >= 1.
Cplx sl2_reduce(Cplx tau);

Cplx j_invariant(const Cplx& tau, const PrecisionContext& ctx);
Cplx eisenstein_e4(const Cplx& tau, const PrecisionContext& ctx);
Cplx eisenstein_e6(const Cplx& tau, const PrecisionContext& ctx);
Cplx delta_cusp_form(const Cplx& tau, const PrecisionContext& ctx);

// --- class polynomials ---

// Monic of degree h(disc). Throws precision_exhausted when integer
// recognition fails at ctx (caller may retry at doubled precision).
IntPoly hilbert_class_polynomial(const Int& disc, const PrecisionContext& ctx);
// Escalating wrapper (doubles precision up to a cap).
IntPoly hilbert_class_polynomial_auto(const Int& disc,
                                      PrecisionContext start = PrecisionContext{256});

// Classical modular polynomial Phi_n, symmetric for n > 1. Disk cache:
// one polynomial per file, `modpoly n=<n>` header then `i j coeff` lines.
BivarIntPoly modular_polynomial(long n, const PrecisionContext& ctx,
                                const std::filesystem::path& cache_dir = {});
BivarIntPoly modular_polynomial_auto(long n, const std::filesystem::path& cache_dir = {});

long psi_degree(long n);   // degree of Phi_n in each variable

struct SingularModuliReport {
    Int resultant_value;
    std::map<Int, int> prime_factors;
    Rat bound;              // (m1^2 d1 - 1)(m2^2 d2 - 1)/4
    bool all_primes_below;  // every prime factor <= bound
};

SingularModuliReport singular_moduli_bound_check(const QuadOrder& o1, const QuadOrder& o2,
                                                 const PrecisionContext& ctx);

}  // namespace cmq
