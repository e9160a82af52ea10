#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holo/parallel.hpp"

namespace holo {

/// First and second moment estimates for one flat parameter array.
template <typename T>
struct AdamState {
    std::vector<T> m;
    std::vector<T> v;
    int64_t step = 0;

    AdamState() = default;
    explicit AdamState(size_t n) : m(n, T(0)), v(n, T(0)) {}

    size_t size() const { return m.size(); }
};

/// In-place bias-corrected Adam update. Moments update first, then
/// params[i] -= lr * m_hat / (sqrt(v_hat) + eps). Update math runs in
/// double and is elementwise, so results do not depend on threading.
template <typename T>
void adam_step(T* params, const T* grads, size_t n, AdamState<T>& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8) {
    if (state.m.size() != n || state.v.size() != n)
        throw std::invalid_argument("adam_step: state size does not match parameter count");
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double corr1 = 1.0 - std::pow(beta1, t);
    const double corr2 = 1.0 - std::pow(beta2, t);
    T* m = state.m.data();
    T* v = state.v.data();
    parallel_for(0, static_cast<int64_t>(n), [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            const double g = static_cast<double>(grads[i]);
            const double mi = beta1 * static_cast<double>(m[i]) + (1.0 - beta1) * g;
            const double vi = beta2 * static_cast<double>(v[i]) + (1.0 - beta2) * g * g;
            m[i] = static_cast<T>(mi);
            v[i] = static_cast<T>(vi);
            const double m_hat = mi / corr1;
            const double v_hat = vi / corr2;
            params[i] = static_cast<T>(static_cast<double>(params[i]) - lr * m_hat / (std::sqrt(v_hat) + epsilon));
        }
    });
}

template <typename T>
void adam_step(std::vector<T>& params, const std::vector<T>& grads, AdamState<T>& state, double lr,
               double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8) {
    if (params.size() != grads.size()) throw std::invalid_argument("adam_step: param/grad size mismatch");
    adam_step(params.data(), grads.data(), params.size(), state, lr, beta1, beta2, epsilon);
}

/// Linear decay from lr_start at step 0 to lr_end at step steps-1.
inline double lr_schedule(int64_t step, int64_t steps, double lr_start, double lr_end) {
    if (step < 0 || step >= steps) throw std::out_of_range("lr_schedule: step outside [0, steps)");
    if (steps == 1) return lr_start;
    const double frac = static_cast<double>(step) / static_cast<double>(steps - 1);
    return lr_start + (lr_end - lr_start) * frac;
}

}  // namespace holo
