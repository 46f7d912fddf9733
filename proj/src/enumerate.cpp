#include "cmq/enumerate.hpp"

#include <cmath>
#include <vector>

namespace cmq {

void enumerate_short_vectors(const Eigen::MatrixXd& gram, double bound,
                             const std::function<void(const VecX<Int>&)>& emit) {
    const int n = static_cast<int>(gram.rows());
    if (bound < 0) return;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw invalid_input("enumerate_short_vectors: form not positive definite");
    Eigen::MatrixXd r = llt.matrixU();   // gram = r^T r

    const double pad = 1e-9 * (bound + 1.0) + 1e-9;
    const double cap = bound * (1.0 + 1e-9) + pad;

    std::vector<long> x(static_cast<size_t>(n), 0);
    std::vector<double> center(static_cast<size_t>(n), 0.0);
    std::vector<double> remaining(static_cast<size_t>(n), 0.0);
    VecX<Int> out(n);

    // recursive descent from the last coordinate
    std::function<void(int, double)> descend = [&](int level, double budget) {
        // center of x[level] given the fixed coordinates above
        double c = 0.0;
        for (int j = level + 1; j < n; ++j) c += r(level, j) * static_cast<double>(x[static_cast<size_t>(j)]);
        c = -c / r(level, level);
        double half_width = std::sqrt(std::max(budget, 0.0)) / r(level, level);
        long lo = static_cast<long>(std::ceil(c - half_width - 1e-9));
        long hi = static_cast<long>(std::floor(c + half_width + 1e-9));
        for (long v = lo; v <= hi; ++v) {
            x[static_cast<size_t>(level)] = v;
            double t = r(level, level) * (static_cast<double>(v) - c);
            double used = t * t;
            if (used > budget + pad) continue;
            if (level == 0) {
                bool all_zero = true;
                for (int j = 0; j < n; ++j) {
                    out(j) = Int(x[static_cast<size_t>(j)]);
                    if (x[static_cast<size_t>(j)] != 0) all_zero = false;
                }
                if (!all_zero) emit(out);
            } else {
                descend(level - 1, budget - used + pad);
            }
        }
        x[static_cast<size_t>(level)] = 0;
    };
    descend(n - 1, cap);
}

void enumerate_box_oracle(const Eigen::MatrixXd& gram, double bound,
                          const std::function<void(const VecX<Int>&)>& emit) {
    const int n = static_cast<int>(gram.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    double lam_min = es.eigenvalues().minCoeff();
    if (lam_min <= 0) throw invalid_input("enumerate_box_oracle: form not positive definite");
    long radius = static_cast<long>(std::floor(std::sqrt(bound / (lam_min * 0.999)) + 1.0));

    VecX<Int> x(n);
    std::function<void(int)> rec = [&](int level) {
        if (level == n) {
            bool all_zero = true;
            for (int j = 0; j < n; ++j)
                if (x(j) != 0) all_zero = false;
            if (!all_zero) emit(x);
            return;
        }
        for (long v = -radius; v <= radius; ++v) {
            x(level) = Int(v);
            rec(level + 1);
        }
    };
    rec(0);
}

}  // namespace cmq
