#pragma once

// Supersingular elliptic curves over F_p^2: enumeration through the
// 2-isogeny graph, Eichler class numbers, and the minimal-isogeny-degree
// statistic N(p).

#include "cmq/fp2.hpp"
#include "cmq/numeric.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cmq {

Int eichler_class_number(const Int& p);

struct SupersingularSet {
    Int p;
    std::vector<Fp2El> js;   // sorted, complete
};

SupersingularSet supersingular_j_invariants(const Int& p,
                                            const std::filesystem::path& cache_dir = {});

// smallest n <= nmax with Phi_n(j1, j2) = 0 in F_p^2 (n = 1 iff j1 = j2);
// nullopt when no n <= nmax links the pair
std::optional<long> min_cyclic_degree(const Fp2El& j1, const Fp2El& j2, const Int& p, long nmax,
                                      const std::filesystem::path& cache_dir = {});

struct IsogenyDegreeTableRow {
    Int p;
    Int h;
    Int sqrt_col;         // [sqrt(p)], rounded as tabulated
    long n_max_min;       // N
    std::string ratio;    // N / sqrt(p), 3 decimals
};

IsogenyDegreeTableRow isogeny_diameter_degree(const Int& p,
                                              const std::filesystem::path& cache_dir = {},
                                              int jobs = 1);

}  // namespace cmq
