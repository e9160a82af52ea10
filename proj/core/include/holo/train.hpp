#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holo/adam.hpp"
#include "holo/estimator.hpp"
#include "holo/perm_loss.hpp"
#include "holo/rng.hpp"

namespace holo {

template <typename T>
struct TrainItem {
    Tensor4<T> image;  // (1, C, H, W)
    LaserPowerMatrix<T> powers;
};

struct TrainingConfig {
    int epochs = 40;
    double lr_start = 0.002;
    double lr_end = 0.0005;
    int batch_size = 8;
    uint64_t seed = 0;
    double val_fraction = 0.1;

    void validate() const {
        if (epochs < 1) throw std::invalid_argument("TrainingConfig: epochs must be >= 1");
        if (!(lr_end > 0.0) || !(lr_end <= lr_start))
            throw std::invalid_argument("TrainingConfig: need 0 < lr_end <= lr_start");
        if (batch_size < 1) throw std::invalid_argument("TrainingConfig: batch_size must be >= 1");
        if (!(val_fraction >= 0.0) || !(val_fraction < 1.0))
            throw std::invalid_argument("TrainingConfig: val_fraction must be in [0,1)");
    }
};

struct EpochLog {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;
};

template <typename T>
struct TrainState {
    EstimatorNet<T> model;
    std::vector<AdamState<T>> adam;  // parallel to model.parameters()
    int completed_epochs = 0;

    explicit TrainState(EstimatorNet<T> m) : model(std::move(m)) {
        for (const auto& ref : model.parameters()) adam.emplace_back(ref.values->size());
    }
};

template <typename T>
struct TrainOutcome {
    std::vector<EpochLog> log;          // one entry per epoch run in this call
    double initial_val_loss = 0.0;      // eval-mode loss before the first update here
    std::vector<size_t> val_indices;    // held-out item indices
};

template <typename T>
TrainState<T> make_train_state(const TrainingConfig& config, int in_channels = 3) {
    return TrainState<T>(EstimatorNet<T>(config.seed, in_channels));
}

namespace detail {

template <typename T>
Tensor4<T> make_batch(const std::vector<TrainItem<T>>& items, const std::vector<size_t>& order, size_t lo,
                      size_t hi) {
    const Tensor4<T>& first = items[order[lo]].image;
    Tensor4<T> batch(static_cast<int>(hi - lo), first.c, first.h, first.w);
    const size_t stride = static_cast<size_t>(first.c) * first.h * first.w;
    for (size_t b = lo; b < hi; ++b) {
        const Tensor4<T>& img = items[order[b]].image;
        if (img.c != first.c || img.h != first.h || img.w != first.w)
            throw std::invalid_argument("train: all images must share one shape");
        std::copy(img.data.begin(), img.data.end(), batch.data.begin() + (b - lo) * stride);
    }
    return batch;
}

template <typename T>
LaserPowerMatrix<T> output_row(const Tensor4<T>& out, int b) {
    LaserPowerMatrix<T> est(out.h, out.w, T(0));
    for (int f = 0; f < out.h; ++f)
        for (int p = 0; p < out.w; ++p) est.at(f, p) = out.at(b, 0, f, p);
    return est;
}

template <typename T>
void shuffle(std::vector<size_t>& v, Rng& rng) {
    for (size_t i = v.size(); i-- > 1;) std::swap(v[i], v[rng.uniform_int(i + 1)]);
}

}  // namespace detail

/// Mean eval-mode permutation-invariant loss over the indexed items.
template <typename T>
double mean_eval_loss(const EstimatorNet<T>& model, const std::vector<TrainItem<T>>& items,
                      const std::vector<size_t>& indices, int batch_size) {
    if (indices.empty()) return 0.0;
    double sum = 0.0;
    for (size_t lo = 0; lo < indices.size(); lo += static_cast<size_t>(batch_size)) {
        const size_t hi = std::min(indices.size(), lo + static_cast<size_t>(batch_size));
        const Tensor4<T> out = model.forward(detail::make_batch(items, indices, lo, hi), false, nullptr);
        for (size_t b = lo; b < hi; ++b)
            sum += permutation_invariant_loss(detail::output_row(out, static_cast<int>(b - lo)),
                                              items[indices[b]].powers);
    }
    return sum / static_cast<double>(indices.size());
}

/// Deterministic seeded split: indices are shuffled once by the config seed
/// and the first round(val_fraction * N) become the held-out set.
template <typename T>
void split_dataset(size_t count, const TrainingConfig& config, std::vector<size_t>* train_indices,
                   std::vector<size_t>* val_indices) {
    std::vector<size_t> order(count);
    for (size_t i = 0; i < count; ++i) order[i] = i;
    Rng rng(splitmix64(config.seed ^ 0x5A11C0DEULL));
    detail::shuffle<T>(order, rng);
    size_t val_n = static_cast<size_t>(std::llround(config.val_fraction * static_cast<double>(count)));
    if (val_n >= count) val_n = count - 1;
    val_indices->assign(order.begin(), order.begin() + val_n);
    train_indices->assign(order.begin() + val_n, order.end());
}

template <typename T>
using EpochCallback = std::function<void(const TrainState<T>&, const EpochLog&)>;

/// Runs epochs [state.completed_epochs, config.epochs). Mini-batch Adam on
/// the mean permutation-invariant loss; the learning rate is linear in the
/// epoch index. With an empty validation split, val_loss logs the epoch's
/// training loss.
template <typename T>
TrainOutcome<T> run_training(TrainState<T>& state, const std::vector<TrainItem<T>>& items,
                             const TrainingConfig& config, const EpochCallback<T>& on_epoch = {}) {
    config.validate();
    if (items.empty()) throw std::invalid_argument("train: dataset is empty");
    for (const auto& item : items)
        if (!item.powers.in_unit_range(1e-9))
            throw std::invalid_argument("train: reference powers outside [0,1]");

    TrainOutcome<T> outcome;
    std::vector<size_t> train_idx;
    split_dataset<T>(items.size(), config, &train_idx, &outcome.val_indices);

    const std::vector<size_t>& eval_idx = outcome.val_indices.empty() ? train_idx : outcome.val_indices;
    outcome.initial_val_loss = mean_eval_loss(state.model, items, eval_idx, config.batch_size);

    std::vector<ParamRef<T>> params = state.model.parameters();
    Rng shuffle_root(splitmix64(config.seed ^ 0xE90C45ULL));

    for (int epoch = state.completed_epochs; epoch < config.epochs; ++epoch) {
        const double lr = lr_schedule(epoch, config.epochs, config.lr_start, config.lr_end);
        Rng rng = shuffle_root.fork(static_cast<uint64_t>(epoch) + 1);
        std::vector<size_t> order = train_idx;
        detail::shuffle<T>(order, rng);

        double loss_sum = 0.0;
        for (size_t lo = 0; lo < order.size(); lo += static_cast<size_t>(config.batch_size)) {
            const size_t hi = std::min(order.size(), lo + static_cast<size_t>(config.batch_size));
            const int B = static_cast<int>(hi - lo);
            EstimatorTrace<T> trace;
            const Tensor4<T> out = state.model.forward(detail::make_batch(items, order, lo, hi), true, &trace);
            Tensor4<T> grad_out(out.n, out.c, out.h, out.w, T(0));
            for (int b = 0; b < B; ++b) {
                double item_loss = 0.0;
                const LaserPowerMatrix<T> grad = permutation_invariant_loss_grad(
                    detail::output_row(out, b), items[order[lo + b]].powers, &item_loss);
                if (!std::isfinite(item_loss))
                    throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                             ", batch " + std::to_string(lo / config.batch_size));
                loss_sum += item_loss;
                for (int f = 0; f < out.h; ++f)
                    for (int p = 0; p < out.w; ++p)
                        grad_out.at(b, 0, f, p) = grad.at(f, p) / static_cast<T>(B);
            }
            const std::vector<std::vector<T>> grads = state.model.backward(trace, grad_out);
            for (size_t g = 0; g < params.size(); ++g)
                adam_step(params[g].values->data(), grads[g].data(), params[g].values->size(),
                          state.adam[g], lr);
        }
        const double train_loss = loss_sum / static_cast<double>(order.size());
        const double val_loss = outcome.val_indices.empty()
                                    ? train_loss
                                    : mean_eval_loss(state.model, items, outcome.val_indices,
                                                     config.batch_size);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw std::runtime_error("train: non-finite epoch loss at epoch " + std::to_string(epoch + 1));

        state.completed_epochs = epoch + 1;
        EpochLog entry{epoch + 1, train_loss, val_loss, lr};
        outcome.log.push_back(entry);
        if (on_epoch) on_epoch(state, entry);
    }
    return outcome;
}

/// Fresh model + full run, the common case.
template <typename T>
std::pair<TrainState<T>, TrainOutcome<T>> train_estimator(const std::vector<TrainItem<T>>& items,
                                                          const TrainingConfig& config,
                                                          const EpochCallback<T>& on_epoch = {}) {
    TrainState<T> state = make_train_state<T>(config, items.empty() ? 3 : items[0].image.c);
    TrainOutcome<T> outcome = run_training(state, items, config, on_epoch);
    return {std::move(state), std::move(outcome)};
}

/// Estimator checkpoint: manifest.json plus one f32le blob per tensor
/// (weights, batch-norm buffers, Adam moments), byte-deterministic.
void save_checkpoint(const std::filesystem::path& dir, const TrainState<float>& state,
                     const TrainingConfig& config);
TrainState<float> load_checkpoint(const std::filesystem::path& dir, TrainingConfig* config_out = nullptr);

}  // namespace holo
