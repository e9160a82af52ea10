#include "holo/convergence.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace holo {

namespace {

using nlohmann::json;

std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return std::string(buf);
}

uint64_t hash_from_hex(const std::string& s) {
    if (s.size() != 16) throw std::runtime_error("convergence report: bad phase hash '" + s + "'");
    uint64_t h = 0;
    for (char c : s) {
        h <<= 4;
        if (c >= '0' && c <= '9') h |= static_cast<uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') h |= static_cast<uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') h |= static_cast<uint64_t>(c - 'A' + 10);
        else throw std::runtime_error("convergence report: bad phase hash '" + s + "'");
    }
    return h;
}

json powers_to_json(const LaserPowerMatrix<float>& m) {
    json rows = json::array();
    for (int f = 0; f < m.subframes; ++f) {
        json row = json::array();
        for (int p = 0; p < m.primaries; ++p) row.push_back(m.at(f, p));
        rows.push_back(std::move(row));
    }
    return rows;
}

LaserPowerMatrix<float> powers_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw std::runtime_error("convergence report: power matrix must be an array of rows");
    const int f = static_cast<int>(rows.size());
    const int p = static_cast<int>(rows[0].size());
    LaserPowerMatrix<float> m(f, p, 0.0f);
    for (int i = 0; i < f; ++i) {
        if (static_cast<int>(rows[i].size()) != p)
            throw std::runtime_error("convergence report: ragged power matrix");
        for (int j = 0; j < p; ++j) m.at(i, j) = rows[i][j].get<float>();
    }
    return m;
}

json arm_to_json(const ArmReport& arm) {
    json j;
    j["history"] = arm.history;
    j["final_loss"] = arm.final_loss;
    j["loss_at"] = arm.loss_at;
    j["psnr_at"] = arm.psnr_at;
    j["ssim_at"] = arm.ssim_at;
    j["steps_to_threshold"] = arm.steps_to_threshold;
    j["phase_hash"] = hash_hex(arm.phase_hash);
    j["initial_powers"] = powers_to_json(arm.initial_powers);
    return j;
}

ArmReport arm_from_json(const json& j) {
    ArmReport arm;
    arm.history = j.at("history").get<std::vector<double>>();
    arm.final_loss = j.at("final_loss").get<double>();
    arm.loss_at = j.at("loss_at").get<std::vector<double>>();
    arm.psnr_at = j.at("psnr_at").get<std::vector<double>>();
    arm.ssim_at = j.at("ssim_at").get<std::vector<double>>();
    arm.steps_to_threshold = j.at("steps_to_threshold").get<int>();
    arm.phase_hash = hash_from_hex(j.at("phase_hash").get<std::string>());
    arm.initial_powers = powers_from_json(j.at("initial_powers"));
    return arm;
}

/// Loss after `checkpoint` updates: history[c] was measured at that state,
/// and final_loss covers c == steps.
double loss_at_checkpoint(const std::vector<double>& history, double final_loss, int checkpoint) {
    if (checkpoint < static_cast<int>(history.size())) return history[static_cast<size_t>(checkpoint)];
    return final_loss;
}

int steps_to_reach(const std::vector<double>& history, double final_loss, double threshold, int steps) {
    for (size_t i = 0; i < history.size(); ++i)
        if (history[i] <= threshold) return static_cast<int>(i);
    if (final_loss <= threshold) return steps;
    return -1;
}

}  // namespace

void ConvergenceConfig::validate() const {
    opt.validate();
    if (checkpoints.empty()) throw std::invalid_argument("ConvergenceConfig: needs at least one checkpoint");
    for (int c : checkpoints)
        if (c < 0 || c > opt.steps)
            throw std::invalid_argument("ConvergenceConfig: checkpoint " + std::to_string(c) +
                                        " outside [0, steps]");
    if (wavelengths.empty()) throw std::invalid_argument("ConvergenceConfig: no wavelengths");
    if (!(anchor_wavelength > 0.0))
        throw std::invalid_argument("ConvergenceConfig: anchor wavelength must be positive");
    if (subframes < 1) throw std::invalid_argument("ConvergenceConfig: subframes must be >= 1");
}

ConvergenceReport run_convergence_experiment(const std::vector<ConvergenceTarget>& targets,
                                             const EstimatorNet<float>& model, const ConvergenceConfig& config,
                                             const ConvergenceSnapshotSink& sink) {
    config.validate();

    ConvergenceReport report;
    report.steps = config.opt.steps;
    report.checkpoints = config.checkpoints;
    std::sort(report.checkpoints.begin(), report.checkpoints.end());
    report.checkpoints.erase(std::unique(report.checkpoints.begin(), report.checkpoints.end()),
                             report.checkpoints.end());
    report.wavelengths = config.wavelengths;
    report.anchor_wavelength = config.anchor_wavelength;

    const size_t C = report.checkpoints.size();

    for (size_t ti = 0; ti < targets.size(); ++ti) {
        const ConvergenceTarget& target = targets[ti];
        try {
            target.scene.validate();
            const LaserPowerMatrix<float> predicted = estimate_powers(model, target.scene.intensity);

            OptimizationConfig opt = config.opt;  // per-target seed; arms share it
            opt.seed = config.opt.seed + ti;

            ConvergenceTargetReport tr;
            tr.id = target.id;

            struct ArmSpec {
                const char* name;
                const LaserPowerMatrix<float>* init;
                ArmReport* out;
            };
            ArmSpec arms[2] = {{"cold", nullptr, &tr.cold}, {"warm", &predicted, &tr.warm}};
            for (const ArmSpec& arm : arms) {
                OptimizeResult<float> run = optimize_multicolor<float>(
                    target.scene, config.wavelengths, config.anchor_wavelength, opt, arm.init,
                    PowerMode::co_optimize, config.subframes, &report.checkpoints);
                arm.out->history = std::move(run.history);
                arm.out->final_loss = run.final_loss;
                arm.out->phase_hash = run.initial_phase_hash;
                arm.out->initial_powers = run.initial_powers;
                for (size_t c = 0; c < C; ++c) {
                    const int step = report.checkpoints[c];
                    arm.out->loss_at.push_back(loss_at_checkpoint(arm.out->history, arm.out->final_loss, step));
                    const OptimizeSnapshot<float>& snap = run.snapshots.at(c);
                    const auto composite = composite_reconstruction(snap.phases, snap.powers, target.scene,
                                                                    config.wavelengths);
                    std::vector<Grid2<float>> reference;
                    for (const auto& ch : target.scene.intensity) {
                        Grid2<float> ref = ch;
                        for (auto& v : ref.data) v *= static_cast<float>(config.opt.scale);
                        reference.push_back(std::move(ref));
                    }
                    arm.out->psnr_at.push_back(psnr(composite, reference, config.opt.scale));
                    arm.out->ssim_at.push_back(ssim(composite, reference, config.opt.scale));
                    if (sink) sink(target.id, arm.name, step, composite);
                }
            }
            const double threshold = tr.cold.final_loss;
            tr.cold.steps_to_threshold =
                steps_to_reach(tr.cold.history, tr.cold.final_loss, threshold, report.steps);
            tr.warm.steps_to_threshold =
                steps_to_reach(tr.warm.history, tr.warm.final_loss, threshold, report.steps);
            report.targets.push_back(std::move(tr));
        } catch (const std::exception& e) {
            report.failures.push_back(target.id + ": " + e.what());
        }
    }

    report.mean_cold_loss_at.assign(C, 0.0);
    report.mean_warm_loss_at.assign(C, 0.0);
    report.mean_cold_psnr_at.assign(C, 0.0);
    report.mean_warm_psnr_at.assign(C, 0.0);
    report.mean_cold_ssim_at.assign(C, 0.0);
    report.mean_warm_ssim_at.assign(C, 0.0);
    if (!report.targets.empty()) {
        const double n = static_cast<double>(report.targets.size());
        for (const auto& tr : report.targets) {
            for (size_t c = 0; c < C; ++c) {
                report.mean_cold_loss_at[c] += tr.cold.loss_at[c] / n;
                report.mean_warm_loss_at[c] += tr.warm.loss_at[c] / n;
                report.mean_cold_psnr_at[c] += tr.cold.psnr_at[c] / n;
                report.mean_warm_psnr_at[c] += tr.warm.psnr_at[c] / n;
                report.mean_cold_ssim_at[c] += tr.cold.ssim_at[c] / n;
                report.mean_warm_ssim_at[c] += tr.warm.ssim_at[c] / n;
            }
            report.mean_cold_final += tr.cold.final_loss / n;
            report.mean_warm_final += tr.warm.final_loss / n;
        }
    }
    return report;
}

std::string report_to_json(const ConvergenceReport& report) {
    json j;
    j["format"] = "convergence-report";
    j["version"] = 1;
    j["steps"] = report.steps;
    j["checkpoints"] = report.checkpoints;
    j["wavelengths"] = report.wavelengths;
    j["anchor_wavelength"] = report.anchor_wavelength;
    json targets = json::array();
    for (const auto& tr : report.targets) {
        json t;
        t["id"] = tr.id;
        t["cold"] = arm_to_json(tr.cold);
        t["warm"] = arm_to_json(tr.warm);
        targets.push_back(std::move(t));
    }
    j["targets"] = std::move(targets);
    j["failures"] = report.failures;
    json agg;
    agg["mean_cold_loss_at"] = report.mean_cold_loss_at;
    agg["mean_warm_loss_at"] = report.mean_warm_loss_at;
    agg["mean_cold_psnr_at"] = report.mean_cold_psnr_at;
    agg["mean_warm_psnr_at"] = report.mean_warm_psnr_at;
    agg["mean_cold_ssim_at"] = report.mean_cold_ssim_at;
    agg["mean_warm_ssim_at"] = report.mean_warm_ssim_at;
    agg["mean_cold_final"] = report.mean_cold_final;
    agg["mean_warm_final"] = report.mean_warm_final;
    j["aggregates"] = std::move(agg);
    return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("convergence report: invalid JSON: ") + e.what());
    }
    if (j.value("format", "") != "convergence-report")
        throw std::runtime_error("convergence report: unexpected format field");
    ConvergenceReport report;
    report.steps = j.at("steps").get<int>();
    report.checkpoints = j.at("checkpoints").get<std::vector<int>>();
    report.wavelengths = j.at("wavelengths").get<std::vector<double>>();
    report.anchor_wavelength = j.at("anchor_wavelength").get<double>();
    for (const auto& t : j.at("targets")) {
        ConvergenceTargetReport tr;
        tr.id = t.at("id").get<std::string>();
        tr.cold = arm_from_json(t.at("cold"));
        tr.warm = arm_from_json(t.at("warm"));
        report.targets.push_back(std::move(tr));
    }
    report.failures = j.at("failures").get<std::vector<std::string>>();
    const json& agg = j.at("aggregates");
    report.mean_cold_loss_at = agg.at("mean_cold_loss_at").get<std::vector<double>>();
    report.mean_warm_loss_at = agg.at("mean_warm_loss_at").get<std::vector<double>>();
    report.mean_cold_psnr_at = agg.at("mean_cold_psnr_at").get<std::vector<double>>();
    report.mean_warm_psnr_at = agg.at("mean_warm_psnr_at").get<std::vector<double>>();
    report.mean_cold_ssim_at = agg.at("mean_cold_ssim_at").get<std::vector<double>>();
    report.mean_warm_ssim_at = agg.at("mean_warm_ssim_at").get<std::vector<double>>();
    report.mean_cold_final = agg.at("mean_cold_final").get<double>();
    report.mean_warm_final = agg.at("mean_warm_final").get<double>();
    return report;
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::string out = "id";
    const auto col = [&](const char* prefix, int step, const char* what) {
        out += ',';
        out += prefix;
        out += '_';
        out += what;
        out += '@';
        out += std::to_string(step);
    };
    for (int c : report.checkpoints) {
        col("cold", c, "loss");
        col("warm", c, "loss");
    }
    for (int c : report.checkpoints) {
        col("cold", c, "psnr");
        col("warm", c, "psnr");
        col("cold", c, "ssim");
        col("warm", c, "ssim");
    }
    out += ",cold_steps_to_threshold,warm_steps_to_threshold\n";

    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += ',';
        out += buf;
    };
    for (const auto& tr : report.targets) {
        out += tr.id;
        for (size_t c = 0; c < report.checkpoints.size(); ++c) {
            num(tr.cold.loss_at[c]);
            num(tr.warm.loss_at[c]);
        }
        for (size_t c = 0; c < report.checkpoints.size(); ++c) {
            num(tr.cold.psnr_at[c]);
            num(tr.warm.psnr_at[c]);
            num(tr.cold.ssim_at[c]);
            num(tr.warm.ssim_at[c]);
        }
        out += ',';
        out += std::to_string(tr.cold.steps_to_threshold);
        out += ',';
        out += std::to_string(tr.warm.steps_to_threshold);
        out += '\n';
    }
    return out;
}

}  // namespace holo
