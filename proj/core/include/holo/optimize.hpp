#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/adam.hpp"
#include "holo/loss.hpp"
#include "holo/rng.hpp"

namespace holo {

struct OptimizationConfig {
    int steps = 500;
    double lr_start = 0.025;
    double lr_end = 0.005;
    double scale = 1.8;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    uint64_t seed = 0;

    void validate() const {
        if (steps < 1) throw std::invalid_argument("OptimizationConfig: steps must be >= 1");
        if (!(lr_end > 0.0) || !(lr_end <= lr_start))
            throw std::invalid_argument("OptimizationConfig: need 0 < lr_end <= lr_start");
        if (!(scale > 0.0)) throw std::invalid_argument("OptimizationConfig: scale must be positive");
    }
};

enum class PowerMode { co_optimize, frozen };

/// State after `step` parameter updates.
template <typename T>
struct OptimizeSnapshot {
    int step = 0;
    PhaseHologramSet<T> phases;
    LaserPowerMatrix<T> powers;
};

template <typename T>
struct OptimizeResult {
    PhaseHologramSet<T> phases;
    LaserPowerMatrix<T> powers;
    LaserPowerMatrix<T> initial_powers;
    std::vector<double> history;  // loss before each update; size == steps
    double final_loss = 0.0;      // loss after the last update
    uint64_t initial_phase_hash = 0;
    std::vector<OptimizeSnapshot<T>> snapshots;  // at requested steps, ascending
};

namespace detail {

template <typename T>
PhaseHologramSet<T> random_phase_init(int subframes, int height, int width, double anchor_wavelength,
                                      uint64_t seed) {
    PhaseHologramSet<T> set;
    set.anchor_wavelength = anchor_wavelength;
    Rng rng(seed);
    const double pi = 3.14159265358979323846;
    for (int f = 0; f < subframes; ++f) {
        Grid2<T> phase(height, width);
        for (auto& v : phase.data) v = static_cast<T>(rng.uniform(-pi, pi));
        set.phases.push_back(std::move(phase));
    }
    return set;
}

template <typename T>
uint64_t phase_set_hash(const PhaseHologramSet<T>& set) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (const auto& phase : set.phases)
        h = fnv1a64(reinterpret_cast<const unsigned char*>(phase.data.data()),
                    phase.data.size() * sizeof(T), h);
    return h;
}

}  // namespace detail

/// Joint projected Adam descent on subframe phases and the power matrix.
/// Powers are clamped to [0,1] after every update; pass PowerMode::frozen to
/// keep initial_powers fixed. initial_powers == nullptr starts uniform at
/// scale/subframes. snapshot_steps (each in [0, steps]) records intermediate
/// state without disturbing the schedule.
template <typename T>
OptimizeResult<T> optimize_multicolor(const TargetScene<T>& scene, const std::vector<double>& wavelengths,
                                      double anchor_wavelength, const OptimizationConfig& config,
                                      const LaserPowerMatrix<T>* initial_powers = nullptr,
                                      PowerMode power_mode = PowerMode::co_optimize, int subframes = 3,
                                      const std::vector<int>* snapshot_steps = nullptr) {
    config.validate();
    scene.validate();
    if (wavelengths.empty()) throw std::invalid_argument("optimize_multicolor: no wavelengths");
    if (!(anchor_wavelength > 0.0))
        throw std::invalid_argument("optimize_multicolor: anchor wavelength must be positive");
    if (subframes < 1) throw std::invalid_argument("optimize_multicolor: subframes must be >= 1");

    std::vector<int> snaps;
    if (snapshot_steps) {
        snaps = *snapshot_steps;
        std::sort(snaps.begin(), snaps.end());
        snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
        for (int s : snaps)
            if (s < 0 || s > config.steps)
                throw std::invalid_argument("optimize_multicolor: snapshot step " + std::to_string(s) +
                                            " outside [0, steps]");
    }

    const int F = subframes;
    const int P = static_cast<int>(wavelengths.size());

    OptimizeResult<T> result;
    if (initial_powers) {
        if (initial_powers->subframes != F || initial_powers->primaries != P)
            throw std::invalid_argument("optimize_multicolor: initial power matrix shape mismatch");
        if (!initial_powers->in_unit_range(1e-9))
            throw std::invalid_argument("optimize_multicolor: initial powers outside [0,1]");
        result.powers = *initial_powers;
        result.powers.clamp01();
    } else {
        result.powers = LaserPowerMatrix<T>::uniform(F, P, static_cast<T>(config.scale / F));
        result.powers.clamp01();
    }
    result.initial_powers = result.powers;

    result.phases =
        detail::random_phase_init<T>(F, scene.height(), scene.width(), anchor_wavelength, config.seed);
    result.initial_phase_hash = detail::phase_set_hash(result.phases);

    TransferCache<T> cache(scene.height(), scene.width(), scene.pitch);
    const size_t n = static_cast<size_t>(scene.height()) * scene.width();
    std::vector<AdamState<T>> phase_states;
    for (int f = 0; f < F; ++f) phase_states.emplace_back(n);
    AdamState<T> power_state(result.powers.values.size());

    size_t snap_idx = 0;
    const auto take_snapshots = [&](int completed_updates) {
        while (snap_idx < snaps.size() && snaps[snap_idx] == completed_updates) {
            result.snapshots.push_back({completed_updates, result.phases, result.powers});
            ++snap_idx;
        }
    };

    result.history.reserve(static_cast<size_t>(config.steps));
    for (int step = 0; step < config.steps; ++step) {
        take_snapshots(step);
        const double lr = lr_schedule(step, config.steps, config.lr_start, config.lr_end);
        LossGradients<T> grads =
            loss_gradients(result.phases, result.powers, scene, config.scale, wavelengths, &cache);
        if (!std::isfinite(grads.loss))
            throw std::runtime_error("optimize_multicolor: non-finite loss at step " + std::to_string(step));
        result.history.push_back(grads.loss);

        for (int f = 0; f < F; ++f)
            adam_step(result.phases.phases[f].data.data(), grads.phase_grads[f].data.data(), n,
                      phase_states[f], lr, config.beta1, config.beta2, config.epsilon);
        if (power_mode == PowerMode::co_optimize) {
            adam_step(result.powers.values.data(), grads.power_grads.values.data(),
                      result.powers.values.size(), power_state, lr, config.beta1, config.beta2,
                      config.epsilon);
            result.powers.clamp01();
        }
    }

    take_snapshots(config.steps);

    result.final_loss = image_loss(result.phases, result.powers, scene, config.scale, wavelengths, &cache);
    if (!std::isfinite(result.final_loss))
        throw std::runtime_error("optimize_multicolor: non-finite final loss");
    return result;
}

/// One phase per primary driven at identity powers, optimized with the same
/// descent loop; primaries decouple because off-diagonal powers are zero.
template <typename T>
OptimizeResult<T> optimize_single_color(const TargetScene<T>& scene, const std::vector<double>& wavelengths,
                                        double anchor_wavelength, const OptimizationConfig& config) {
    const int P = static_cast<int>(wavelengths.size());
    const LaserPowerMatrix<T> identity = LaserPowerMatrix<T>::identity(P);
    return optimize_multicolor(scene, wavelengths, anchor_wavelength, config, &identity, PowerMode::frozen,
                               P);
}

}  // namespace holo
