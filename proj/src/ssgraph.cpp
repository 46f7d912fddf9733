#include "cmq/ssgraph.hpp"

#include "cmq/quadcm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <thread>

namespace cmq {

Int eichler_class_number(const Int& p) {
    if (!is_prime(p)) throw invalid_input("eichler_class_number: p not prime");
    if (p == 2 || p == 3) return 1;
    Rat h = Rat(p - 1, 12) + Rat(1 - kronecker(Int(-4), p), 4) + Rat(1 - kronecker(Int(-3), p), 3);
    if (denominator(h) != 1) throw invariant_failure("eichler class number not integral");
    return numerator(h);
}

namespace {

// reduce an integer bivariate polynomial mod p for fast Horner evaluation
struct ModPolyModP {
    std::uint64_t p;
    std::vector<std::vector<std::uint64_t>> c;

    ModPolyModP(const BivarIntPoly& poly, std::uint64_t pp) : p(pp) {
        c.resize(poly.c.size());
        for (size_t i = 0; i < poly.c.size(); ++i) {
            c[i].resize(poly.c[i].size());
            for (size_t j = 0; j < poly.c[i].size(); ++j) {
                Int r = ((poly.c[i][j] % Int(pp)) + Int(pp)) % Int(pp);
                c[i][j] = r.convert_to<std::uint64_t>();
            }
        }
    }

    Fp2El eval(const Fp2Field& k, const Fp2El& x, const Fp2El& y) const {
        Fp2El r{0, 0};
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            Fp2El row{0, 0};
            for (auto jt = it->rbegin(); jt != it->rend(); ++jt)
                row = k.add(k.mul(row, y), k.make(*jt, 0));
            r = k.add(k.mul(r, x), row);
        }
        return r;
    }

    // the univariate Phi(x, Y) as a polynomial in Y
    Fp2Poly at_x(const Fp2Field& k, const Fp2El& x) const {
        size_t dy = 0;
        for (auto& row : c) dy = std::max(dy, row.size());
        Fp2Poly out(dy, Fp2El{0, 0});
        Fp2El xi{1, 0};
        for (size_t i = 0; i < c.size(); ++i) {
            for (size_t j = 0; j < c[i].size(); ++j)
                out[j] = k.add(out[j], k.mul(k.make(c[i][j], 0), xi));
            xi = k.mul(xi, x);
        }
        return poly_trim(std::move(out));
    }
};

// first supersingular j-invariant: root mod p of a small Hilbert class
// polynomial whose discriminant is inert or ramified at p
Fp2El supersingular_seed(const Fp2Field& k, const Int& p) {
    for (Int ad = 3; ad < 5000; ++ad) {
        Int d = -ad;
        Int m4 = ((d % 4) + 4) % 4;
        if (m4 != 0 && m4 != 1) continue;
        QuadOrder o = make_quad_order(d);
        if (o.conductor != 1) continue;   // fundamental only
        if (kronecker(d, p) == 1) continue;
        if (class_number(d) > 8) continue;
        IntPoly h = hilbert_class_polynomial_auto(d);
        Fp2Poly hp;
        for (auto& cc : h.c) hp.push_back(k.from_int(cc));
        auto roots = poly_roots(k, hp);
        if (!roots.empty()) return roots.front();
    }
    throw invariant_failure("supersingular_seed: no seed discriminant found");
}

}  // namespace

SupersingularSet supersingular_j_invariants(const Int& p,
                                            const std::filesystem::path& cache_dir) {
    if (p < 2) throw invalid_input("supersingular_j_invariants: p must be >= 2");
    if (!is_prime(p)) throw invalid_input("supersingular_j_invariants: p not prime");
    Fp2Field k(p.convert_to<std::uint64_t>());
    Int h = eichler_class_number(p);

    BivarIntPoly phi2 = modular_polynomial_auto(2, cache_dir);
    ModPolyModP phi2p(phi2, k.p());

    // BFS over the 2-isogeny graph, connected on supersingular vertices
    std::set<Fp2El> seen;
    std::vector<Fp2El> frontier{supersingular_seed(k, p)};
    seen.insert(frontier.front());
    while (!frontier.empty() && Int(seen.size()) < h) {
        std::vector<Fp2El> next;
        for (auto& j : frontier) {
            Fp2Poly fy = phi2p.at_x(k, j);
            for (auto& r : poly_roots(k, fy)) {
                if (seen.insert(r).second) next.push_back(r);
            }
        }
        frontier = std::move(next);
    }
    if (Int(seen.size()) != h)
        throw invariant_failure("supersingular set size " + std::to_string(seen.size()) +
                                " does not match class number " + h.str());
    SupersingularSet s;
    s.p = p;
    s.js.assign(seen.begin(), seen.end());
    return s;
}

std::optional<long> min_cyclic_degree(const Fp2El& j1, const Fp2El& j2, const Int& p, long nmax,
                                      const std::filesystem::path& cache_dir) {
    if (nmax < 1) throw invalid_input("min_cyclic_degree: nmax must be >= 1");
    Fp2Field k(p.convert_to<std::uint64_t>());
    if (j1 == j2) return 1;
    for (long n = 2; n <= nmax; ++n) {
        BivarIntPoly phi = modular_polynomial_auto(n, cache_dir);
        ModPolyModP pm(phi, k.p());
        if (k.is_zero(pm.eval(k, j1, j2))) return n;
    }
    return std::nullopt;
}

IsogenyDegreeTableRow isogeny_diameter_degree(const Int& p,
                                              const std::filesystem::path& cache_dir, int jobs) {
    SupersingularSet ss = supersingular_j_invariants(p, cache_dir);
    Fp2Field k(p.convert_to<std::uint64_t>());
    double pd = p.convert_to<double>();
    long nmax = static_cast<long>(std::ceil(2.0 * std::sqrt(2.0) / M_PI * std::sqrt(pd)));

    struct Pair {
        std::uint32_t i, j;
    };
    std::vector<Pair> unresolved;
    for (std::uint32_t i = 0; i < ss.js.size(); ++i)
        for (std::uint32_t j = i + 1; j < ss.js.size(); ++j) unresolved.push_back({i, j});

    long worst = ss.js.size() <= 1 ? 1 : 0;
    for (long n = 2; n <= nmax && !unresolved.empty(); ++n) {
        BivarIntPoly phi = modular_polynomial_auto(n, cache_dir);
        ModPolyModP pm(phi, k.p());
        std::vector<char> resolved(unresolved.size(), 0);
        auto work = [&](size_t lo, size_t hi) {
            for (size_t t = lo; t < hi; ++t) {
                auto [i, j] = unresolved[t];
                if (k.is_zero(pm.eval(k, ss.js[i], ss.js[j]))) resolved[t] = 1;
            }
        };
        int nthreads = std::max(1, jobs);
        if (nthreads == 1 || unresolved.size() < 256) {
            work(0, unresolved.size());
        } else {
            std::vector<std::thread> pool;
            size_t chunk = (unresolved.size() + nthreads - 1) / nthreads;
            for (int t = 0; t < nthreads; ++t) {
                size_t lo = t * chunk, hi = std::min(unresolved.size(), lo + chunk);
                if (lo < hi) pool.emplace_back(work, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        std::vector<Pair> rest;
        bool any = false;
        for (size_t t = 0; t < unresolved.size(); ++t) {
            if (resolved[t])
                any = true;
            else
                rest.push_back(unresolved[t]);
        }
        if (any) worst = n;
        unresolved = std::move(rest);
    }
    if (!unresolved.empty())
        throw invariant_failure(
            "isogeny_diameter_degree: pairs unlinked within the proven bound (modular "
            "polynomial defect)");

    // proven lower bound N >= 0.3 sqrt(p)
    if (static_cast<double>(worst) < 0.3 * std::sqrt(pd) && ss.js.size() > 1)
        throw invariant_failure("isogeny_diameter_degree: N below the proven lower bound");

    IsogenyDegreeTableRow row;
    row.p = p;
    row.h = Int(ss.js.size());
    // the tabulated [sqrt(p)] column is the rounded square root
    Int r = isqrt(p);
    row.sqrt_col = (p > r * r + r) ? r + 1 : r;
    row.n_max_min = worst;
    double ratio = static_cast<double>(worst) / row.sqrt_col.convert_to<double>();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ratio);
    row.ratio = buf;
    return row;
}

}  // namespace cmq
