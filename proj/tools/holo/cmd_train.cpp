#include "commands.hpp"
#include "options.hpp"

#include "holo/dataset.hpp"
#include "holo/serialize.hpp"
#include "holo/train.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <optional>

namespace holo::cli {

namespace po = boost::program_options;
using nlohmann::json;

int cmd_train(const std::vector<std::string>& args) {
    po::options_description desc("train options");
    // clang-format off
    desc.add_options()
        ("config", po::value<std::string>(), "flat JSON config file")
        ("corpus", po::value<std::string>(), "input corpus directory (required)")
        ("out", po::value<std::string>(), "output directory (required)")
        ("epochs", po::value<std::string>(), "training epochs")
        ("batch-size", po::value<std::string>(), "mini-batch size")
        ("lr-start", po::value<std::string>(), "initial learning rate")
        ("lr-end", po::value<std::string>(), "final learning rate")
        ("val-fraction", po::value<std::string>(), "held-out validation fraction")
        ("seed", po::value<std::string>(), "init + shuffle seed")
        ("resume", po::value<std::string>(), "checkpoint directory to continue from")
        ("jobs", po::value<std::string>(), "worker thread cap");
    // clang-format on
    Options options("train", desc, args);
    apply_jobs(options);

    // Parse every flag before touching the filesystem so value errors (64)
    // surface ahead of missing-input errors (66). Flag values land on top of
    // a resumed checkpoint's saved config, so stage them first.
    const std::filesystem::path corpus = options.require("corpus");
    const std::filesystem::path out = options.require("out");
    TrainingConfig flag_view;
    flag_view.epochs = options.get("epochs", flag_view.epochs);
    flag_view.batch_size = options.get("batch-size", flag_view.batch_size);
    flag_view.lr_start = options.get("lr-start", flag_view.lr_start);
    flag_view.lr_end = options.get("lr-end", flag_view.lr_end);
    flag_view.val_fraction = options.get("val-fraction", flag_view.val_fraction);
    flag_view.seed = options.get("seed", flag_view.seed);
    try {
        flag_view.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitUsage, e.what());
    }

    require_exists(corpus / "manifest.json", "corpus manifest");

    std::vector<std::string> ids;
    std::vector<TrainItem<float>> items;
    try {
        ids = corpus_record_ids(corpus);
        for (const std::string& id : ids) {
            const DatasetRecord record = load_record(corpus / id);
            items.push_back({image_to_tensor(record.target), record.powers});
        }
    } catch (const std::exception& e) {
        throw CliError(kExitData, e.what());
    }
    if (items.empty()) throw CliError(kExitData, "corpus " + corpus.string() + " has no records");

    TrainingConfig config;
    std::optional<TrainState<float>> state;
    if (options.has("resume")) {
        const std::filesystem::path resume = options.get("resume", std::string());
        require_exists(resume / "manifest.json", "checkpoint manifest");
        try {
            state.emplace(load_checkpoint(resume, &config));
        } catch (const std::exception& e) {
            throw CliError(kExitData, e.what());
        }
    }
    if (options.has("epochs")) config.epochs = flag_view.epochs;
    if (options.has("batch-size")) config.batch_size = flag_view.batch_size;
    if (options.has("lr-start")) config.lr_start = flag_view.lr_start;
    if (options.has("lr-end")) config.lr_end = flag_view.lr_end;
    if (options.has("val-fraction")) config.val_fraction = flag_view.val_fraction;
    if (options.has("seed")) config.seed = flag_view.seed;
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitUsage, e.what());
    }
    if (!state) state.emplace(make_train_state<float>(config, items[0].image.c));

    ensure_out_dir(out);
    options.echo["corpus"] = corpus.string();
    options.echo["out"] = out.string();
    options.echo["epochs"] = config.epochs;
    options.echo["batch-size"] = config.batch_size;
    options.echo["lr-start"] = config.lr_start;
    options.echo["lr-end"] = config.lr_end;
    options.echo["val-fraction"] = config.val_fraction;
    options.echo["seed"] = config.seed;
    if (options.has("resume")) options.echo["resume"] = options.get("resume", std::string());
    options.write_echo(out);

    const TrainOutcome<float> outcome =
        run_training<float>(*state, items, config, [&](const TrainState<float>&, const EpochLog& entry) {
            std::printf("epoch %d/%d  train %.6g  val %.6g  lr %.6g\n", entry.epoch, config.epochs,
                        entry.train_loss, entry.val_loss, entry.lr);
            std::fflush(stdout);
        });

    try {
        save_checkpoint(out / "checkpoint", *state, config);
        json log;
        log["initial_val_loss"] = outcome.initial_val_loss;
        json val_ids = json::array();
        for (size_t idx : outcome.val_indices) val_ids.push_back(ids.at(idx));
        log["val_ids"] = std::move(val_ids);
        json epochs = json::array();
        for (const EpochLog& entry : outcome.log) {
            json e;
            e["epoch"] = entry.epoch;
            e["train_loss"] = entry.train_loss;
            e["val_loss"] = entry.val_loss;
            e["lr"] = entry.lr;
            epochs.push_back(std::move(e));
        }
        log["epochs"] = std::move(epochs);
        write_text_file(out / "training_log.json", log.dump(2) + "\n");
    } catch (const std::exception& e) {
        throw CliError(kExitIo, e.what());
    }

    if (!outcome.log.empty())
        std::printf("final train %.6g  val %.6g (initial val %.6g)\n", outcome.log.back().train_loss,
                    outcome.log.back().val_loss, outcome.initial_val_loss);
    else
        std::printf("no epochs to run (checkpoint already at %d)\n", state->completed_epochs);
    return kExitOk;
}

}  // namespace holo::cli
