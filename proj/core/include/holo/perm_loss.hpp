#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "holo/power.hpp"

namespace holo {

template <typename T>
struct PermLossResult {
    double loss = 0.0;
    double invariant_term = 0.0;
    double bound_term = 0.0;
    std::vector<int> assignment;  // estimated row i is matched to reference row assignment[i]
};

namespace detail {

/// Candidate cost for one row assignment. The selected row costs are sorted
/// before summation so that any reference-row permutation reproducing the
/// same multiset of row costs sums to the bitwise-identical total; this makes
/// the min over permutations exactly invariant, not just approximately.
inline double sorted_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

}  // namespace detail

/// Minimum over all reference-row permutations of the squared L2 distance,
/// plus a hinge penalty for entries outside [0,1].
template <typename T>
PermLossResult<T> permutation_loss_detail(const LaserPowerMatrix<T>& est, const LaserPowerMatrix<T>& opt) {
    if (est.subframes != opt.subframes || est.primaries != opt.primaries)
        throw std::invalid_argument("permutation_invariant_loss: shape mismatch");
    if (!opt.in_unit_range(1e-9))
        throw std::invalid_argument("permutation_invariant_loss: reference powers outside [0,1]");
    const int F = est.subframes;
    const int P = est.primaries;

    // rowcost[i][j]: squared distance between estimated row i and reference row j.
    std::vector<double> rowcost(static_cast<size_t>(F) * F, 0.0);
    for (int i = 0; i < F; ++i)
        for (int j = 0; j < F; ++j) {
            double c = 0.0;
            for (int p = 0; p < P; ++p) {
                const double d = static_cast<double>(est.at(i, p)) - static_cast<double>(opt.at(j, p));
                c += d * d;
            }
            rowcost[static_cast<size_t>(i) * F + j] = c;
        }

    std::vector<int> perm(static_cast<size_t>(F));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> picked(static_cast<size_t>(F));
    do {
        for (int i = 0; i < F; ++i) picked[i] = rowcost[static_cast<size_t>(i) * F + perm[i]];
        const double cost = detail::sorted_sum(picked);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    PermLossResult<T> result;
    result.invariant_term = best_cost;
    result.assignment = best;
    double bound = 0.0;
    for (const T& v : est.values) {
        const double x = static_cast<double>(v);
        if (x < 0.0) bound += -x;
        if (x > 1.0) bound += x - 1.0;
    }
    result.bound_term = bound;
    result.loss = best_cost + bound;
    return result;
}

template <typename T>
double permutation_invariant_loss(const LaserPowerMatrix<T>& est, const LaserPowerMatrix<T>& opt) {
    return permutation_loss_detail(est, opt).loss;
}

/// Gradient with respect to the estimated matrix, through the minimizing
/// assignment; the hinge uses the zero subgradient at its kinks.
template <typename T>
LaserPowerMatrix<T> permutation_invariant_loss_grad(const LaserPowerMatrix<T>& est,
                                                    const LaserPowerMatrix<T>& opt,
                                                    double* loss_out = nullptr) {
    const PermLossResult<T> r = permutation_loss_detail(est, opt);
    if (loss_out) *loss_out = r.loss;
    LaserPowerMatrix<T> grad(est.subframes, est.primaries, T(0));
    for (int i = 0; i < est.subframes; ++i)
        for (int p = 0; p < est.primaries; ++p) {
            const double x = static_cast<double>(est.at(i, p));
            double g = 2.0 * (x - static_cast<double>(opt.at(r.assignment[i], p)));
            if (x < 0.0) g -= 1.0;
            if (x > 1.0) g += 1.0;
            grad.at(i, p) = static_cast<T>(g);
        }
    return grad;
}

}  // namespace holo
