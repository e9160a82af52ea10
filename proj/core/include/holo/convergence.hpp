#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "holo/estimator.hpp"
#include "holo/metrics.hpp"
#include "holo/optimize.hpp"
#include "holo/scene.hpp"

namespace holo {

/// Per-primary focal-stack composite: each pixel takes its intensity from the
/// reconstruction at the plane that owns it.
template <typename T>
std::vector<Grid2<T>> composite_reconstruction(const PhaseHologramSet<T>& phases,
                                               const LaserPowerMatrix<T>& powers,
                                               const TargetScene<T>& scene,
                                               const std::vector<double>& wavelengths) {
    scene.validate();
    const int P = static_cast<int>(wavelengths.size());
    if (scene.primaries() != P)
        throw std::invalid_argument("composite_reconstruction: wavelength count does not match scene channels");
    std::vector<Grid2<T>> out(static_cast<size_t>(P), Grid2<T>(scene.height(), scene.width()));
    for (int k = 0; k < scene.planes(); ++k) {
        const auto recon =
            reconstruct_intensity(phases, powers, wavelengths, scene.plane_distances[k], scene.pitch);
        const auto& mask = scene.plane_masks[k];
        for (int p = 0; p < P; ++p)
            for (size_t i = 0; i < mask.size(); ++i)
                if (mask.data[i]) out[p].data[i] = recon[p].data[i];
    }
    return out;
}

struct ConvergenceConfig {
    OptimizationConfig opt;               // opt.steps defaults to 300 here
    std::vector<int> checkpoints{70, 300};
    std::vector<double> wavelengths{473e-9, 515e-9, 639e-9};
    double anchor_wavelength = 515e-9;
    int subframes = 3;

    ConvergenceConfig() { opt.steps = 300; }

    void validate() const;
};

struct ConvergenceTarget {
    std::string id;
    TargetScene<float> scene;
};

/// One optimization arm of one target. loss_at / psnr_at / ssim_at are
/// parallel to ConvergenceReport::checkpoints.
struct ArmReport {
    std::vector<double> history;
    double final_loss = 0.0;
    std::vector<double> loss_at;
    std::vector<double> psnr_at;
    std::vector<double> ssim_at;
    int steps_to_threshold = -1;  // updates needed to reach the cold arm's final loss; -1 = never
    uint64_t phase_hash = 0;      // hash of the shared random phase init
    LaserPowerMatrix<float> initial_powers;
};

struct ConvergenceTargetReport {
    std::string id;
    ArmReport cold;
    ArmReport warm;
};

struct ConvergenceReport {
    int steps = 0;
    std::vector<int> checkpoints;
    std::vector<double> wavelengths;
    double anchor_wavelength = 0.0;
    std::vector<ConvergenceTargetReport> targets;  // successfully evaluated targets
    std::vector<std::string> failures;             // "id: reason" for targets that errored

    // Means over successful targets (zeros when none), parallel to checkpoints.
    std::vector<double> mean_cold_loss_at, mean_warm_loss_at;
    std::vector<double> mean_cold_psnr_at, mean_warm_psnr_at;
    std::vector<double> mean_cold_ssim_at, mean_warm_ssim_at;
    double mean_cold_final = 0.0, mean_warm_final = 0.0;
};

/// Called with the mask-composited reconstruction at every checkpoint;
/// arm is "cold" or "warm". Invoked serially in target order.
using ConvergenceSnapshotSink = std::function<void(
    const std::string& target_id, const std::string& arm, int step, const std::vector<Grid2<float>>& composite)>;

/// Runs a cold-start arm (uniform powers) and a warm-start arm (powers
/// predicted by the estimator) per target with identical seeds and schedules,
/// recording losses and image metrics at the configured checkpoints. Targets
/// that fail are reported in `failures`; the rest of the report is preserved.
ConvergenceReport run_convergence_experiment(const std::vector<ConvergenceTarget>& targets,
                                             const EstimatorNet<float>& model, const ConvergenceConfig& config,
                                             const ConvergenceSnapshotSink& sink = nullptr);

std::string report_to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const std::string& text);

/// One row per target: losses, PSNR and SSIM per arm at every checkpoint,
/// plus steps-to-threshold.
std::string report_to_csv(const ConvergenceReport& report);

}  // namespace holo
