#include <catch2/catch.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "holo/dataset.hpp"
#include "holo/png_io.hpp"
#include "holo/procedural.hpp"
#include "support/test_util.hpp"

using namespace holo;
using holo::test::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

CorpusConfig tiny_corpus_config() {
    CorpusConfig cfg;
    cfg.count = 2;
    cfg.resolution = 32;
    cfg.base_seed = 7;
    cfg.opt.steps = 4;
    return cfg;
}

double channel_mean(const Grid2<float>& g) {
    double s = 0.0;
    for (float v : g.data) s += v;
    return s / static_cast<double>(g.size());
}

}  // namespace

TEST_CASE("procedural targets are deterministic per seed") {
    auto a = generate_procedural_target(5, 48, 64);
    auto b = generate_procedural_target(5, 48, 64);
    REQUIRE(a.channels.size() == 3);
    for (size_t c = 0; c < 3; ++c) REQUIRE(a.channels[c].data == b.channels[c].data);
    REQUIRE(a.depth.data == b.depth.data);
    REQUIRE(a.channels[0].height == 48);
    REQUIRE(a.channels[0].width == 64);
}

TEST_CASE("procedural targets stay in range and span most of it") {
    auto t = generate_procedural_target(11, 64, 64);
    for (const auto& chan : t.channels) {
        float lo = 1.0f, hi = 0.0f;
        for (float v : chan.data) {
            REQUIRE(v >= 0.0f);
            REQUIRE(v <= 1.0f);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        REQUIRE(lo <= 0.05f);
        REQUIRE(hi >= 0.95f);
    }
    float dlo = 1.0f, dhi = 0.0f;
    for (float v : t.depth.data) {
        REQUIRE(v >= 0.0f);
        REQUIRE(v <= 1.0f);
        dlo = std::min(dlo, v);
        dhi = std::max(dhi, v);
    }
    REQUIRE(dlo <= 0.05f);
    REQUIRE(dhi >= 0.95f);

    REQUIRE_THROWS_AS(generate_procedural_target(1, 16, 64), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_procedural_target(1, 64, 16), std::invalid_argument);
}

TEST_CASE("different seeds give measurably different images") {
    auto a = generate_procedural_target(100, 64, 64);
    auto b = generate_procedural_target(101, 64, 64);
    double max_mean_gap = 0.0;
    for (size_t c = 0; c < 3; ++c)
        max_mean_gap = std::max(max_mean_gap,
                                std::abs(channel_mean(a.channels[c]) - channel_mean(b.channels[c])));
    REQUIRE(max_mean_gap > 0.01);

    // Channel means spread out across a seed sweep rather than clustering.
    double lo = 1.0, hi = 0.0;
    for (uint64_t seed = 0; seed < 12; ++seed) {
        const auto t = generate_procedural_target(seed, 32, 32);
        for (const auto& chan : t.channels) {
            const double m = channel_mean(chan);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    REQUIRE(hi - lo > 0.1);
}

TEST_CASE("depth quantization") {
    SECTION("one plane takes everything") {
        Grid2<float> depth(8, 8, 0.37f);
        auto masks = quantize_depth(depth, 1);
        REQUIRE(masks.size() == 1);
        for (uint8_t v : masks[0].data) REQUIRE(v == 1);
    }
    SECTION("zero depth lands in the first bin") {
        Grid2<float> depth(8, 8, 0.0f);
        auto masks = quantize_depth(depth, 3);
        REQUIRE(masks.size() == 3);
        for (uint8_t v : masks[0].data) REQUIRE(v == 1);
        for (uint8_t v : masks[1].data) REQUIRE(v == 0);
        for (uint8_t v : masks[2].data) REQUIRE(v == 0);
    }
    SECTION("a uniform ramp splits into near-equal thirds") {
        const int h = 30, w = 10;
        Grid2<float> depth(h, w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) depth.at(y, x) = static_cast<float>(y) / (h - 1);
        auto masks = quantize_depth(depth, 3);
        for (int k = 0; k < 3; ++k) {
            int count = 0;
            for (uint8_t v : masks[static_cast<size_t>(k)].data) count += v;
            INFO("plane " << k);
            REQUIRE(count >= (h / 3 - 1) * w);
            REQUIRE(count <= (h / 3 + 1) * w);
        }
    }
    SECTION("masks always partition") {
        auto t = generate_procedural_target(3, 32, 32);
        for (int planes : {1, 2, 3, 5}) {
            auto masks = quantize_depth(t.depth, planes);
            REQUIRE(masks.size() == static_cast<size_t>(planes));
            for (size_t i = 0; i < t.depth.size(); ++i) {
                int sum = 0;
                for (const auto& m : masks) sum += m.data[i];
                REQUIRE(sum == 1);
            }
        }
    }
    SECTION("invalid plane count") {
        Grid2<float> depth(8, 8, 0.5f);
        REQUIRE_THROWS_AS(quantize_depth(depth, 0), std::invalid_argument);
    }
}

TEST_CASE("records round-trip bitwise through the directory format") {
    CorpusConfig cfg = tiny_corpus_config();
    RecordSource source;
    auto t = generate_procedural_target(42, 32, 32);
    source.channels = t.channels;
    source.depth = t.depth;
    source.generator_seed = 42;

    auto record = build_record("000042", source, cfg);
    REQUIRE_NOTHROW(record.validate());
    REQUIRE(record.powers.subframes == 3);
    REQUIRE(record.powers.primaries == 3);
    REQUIRE(record.powers.in_unit_range());
    REQUIRE(std::isfinite(record.final_loss));

    TempDir dir("holo-record");
    save_record(record, dir.path());
    auto loaded = load_record(dir.path());

    REQUIRE(loaded.id == record.id);
    for (size_t c = 0; c < record.target.size(); ++c)
        REQUIRE(loaded.target[c].data == record.target[c].data);
    REQUIRE(loaded.depth.data == record.depth.data);
    for (size_t k = 0; k < record.plane_masks.size(); ++k)
        REQUIRE(loaded.plane_masks[k].data == record.plane_masks[k].data);
    REQUIRE(loaded.powers.values == record.powers.values);
    REQUIRE(loaded.final_loss == record.final_loss);
    REQUIRE(loaded.generator_seed == record.generator_seed);
    REQUIRE(loaded.opt.steps == record.opt.steps);
    REQUIRE(loaded.opt.seed == record.opt.seed);
    REQUIRE(loaded.wavelengths == record.wavelengths);
    REQUIRE(loaded.anchor_wavelength == record.anchor_wavelength);
    REQUIRE(loaded.pitch == record.pitch);
    REQUIRE(loaded.plane_distances == record.plane_distances);

    // The reconstructed scene passes validation and matches the masks.
    auto scene = record_to_scene(loaded);
    REQUIRE_NOTHROW(scene.validate());
    REQUIRE(scene.planes() == static_cast<int>(cfg.plane_distances.size()));
}

TEST_CASE("record loading reports which file is broken") {
    CorpusConfig cfg = tiny_corpus_config();
    RecordSource source;
    auto t = generate_procedural_target(43, 32, 32);
    source.channels = t.channels;
    source.depth = t.depth;
    source.generator_seed = 43;
    auto record = build_record("000043", source, cfg);

    SECTION("truncated image blob") {
        TempDir dir("holo-trunc");
        save_record(record, dir.path());
        const auto png = dir.path() / "target.png";
        const std::string full = slurp(png);
        std::ofstream out(png, std::ios::binary | std::ios::trunc);
        out.write(full.data(), static_cast<std::streamsize>(full.size() / 2));
        out.close();
        REQUIRE_THROWS_WITH(load_record(dir.path()), Catch::Contains("target.png"));
    }
    SECTION("corrupt metadata json") {
        TempDir dir("holo-corrupt");
        save_record(record, dir.path());
        std::ofstream out(dir.path() / "powers.json", std::ios::binary | std::ios::trunc);
        out << "{not json";
        out.close();
        REQUIRE_THROWS_WITH(load_record(dir.path()), Catch::Contains("powers.json"));
    }
    SECTION("missing directory") {
        REQUIRE_THROWS(load_record(std::filesystem::path("/nonexistent/record/dir")));
    }
}

TEST_CASE("corpus builds are reproducible byte for byte", "[slow]") {
    CorpusConfig cfg = tiny_corpus_config();

    TempDir dir1("holo-corpus1");
    auto s1 = build_dataset(cfg, dir1.path());
    REQUIRE(s1.requested == 2);
    REQUIRE(s1.built.size() == 2);
    REQUIRE(s1.failed.empty());
    REQUIRE(std::isfinite(s1.mean_final_loss));

    const auto ids = corpus_record_ids(dir1.path());
    REQUIRE(ids == std::vector<std::string>({"000000", "000001"}));
    for (const auto& id : ids) {
        auto rec = load_record(dir1.path() / id);
        REQUIRE(rec.powers.in_unit_range());
        REQUIRE(rec.target[0].height == 32);
    }

    TempDir dir2("holo-corpus2");
    auto s2 = build_dataset(cfg, dir2.path());
    REQUIRE(s2.built == s1.built);
    for (const auto& id : ids) {
        REQUIRE(slurp(dir1.path() / id / "powers.json") == slurp(dir2.path() / id / "powers.json"));
        REQUIRE(slurp(dir1.path() / id / "target.png") == slurp(dir2.path() / id / "target.png"));
        REQUIRE(slurp(dir1.path() / id / "meta.json") == slurp(dir2.path() / id / "meta.json"));
    }
    REQUIRE(slurp(dir1.path() / "manifest.json") == slurp(dir2.path() / "manifest.json"));
}

TEST_CASE("per-record failures are skipped, not fatal") {
    CorpusConfig cfg = tiny_corpus_config();
    TempDir dir("holo-fail");
    // A plain file squatting on the first record's directory name forces a
    // filesystem error for that record only.
    std::ofstream blocker(dir.path() / "000000");
    blocker << "in the way";
    blocker.close();

    auto summary = build_dataset(cfg, dir.path());
    REQUIRE(summary.requested == 2);
    REQUIRE(summary.built == std::vector<std::string>({"000001"}));
    REQUIRE(summary.failed.size() == 1);
    REQUIRE(summary.failed[0].find("000000") == 0);

    // The manifest lists only what was actually built.
    REQUIRE(corpus_record_ids(dir.path()) == std::vector<std::string>({"000001"}));
}

TEST_CASE("make_scene validates input consistency") {
    auto t = generate_procedural_target(9, 32, 32);
    auto masks = quantize_depth(t.depth, 3);
    auto scene = make_scene(t.channels, masks, {-0.005, 0.0, 0.005}, 8e-6);
    REQUIRE_NOTHROW(scene.validate());

    REQUIRE_THROWS_AS(make_scene(t.channels, masks, {0.0}, 8e-6), std::invalid_argument);
    REQUIRE_THROWS_AS(make_scene(t.channels, masks, {-0.005, 0.0, 0.005}, -1.0), std::invalid_argument);
}

TEST_CASE("external RGBD pairs import through PNG") {
    auto t = generate_procedural_target(77, 32, 32);
    TempDir dir("holo-rgbd");
    const auto rgb = dir.path() / "rgb.png";
    const auto depth = dir.path() / "depth.png";
    write_png_rgb8(rgb, t.channels);
    write_png_gray16(depth, t.depth);

    auto source = load_rgbd_pair(rgb, depth);
    REQUIRE(source.channels.size() == 3);
    REQUIRE(source.channels[0].height == 32);
    REQUIRE(source.depth.height == 32);
    for (size_t c = 0; c < 3; ++c)
        for (float v : source.channels[c].data) {
            REQUIRE(v >= 0.0f);
            REQUIRE(v <= 1.0f);
        }

    REQUIRE_THROWS(load_rgbd_pair(dir.path() / "missing.png", depth));

    // Mismatched dimensions between color and depth are rejected.
    auto small = generate_procedural_target(78, 32, 48);
    const auto depth2 = dir.path() / "depth2.png";
    write_png_gray16(depth2, small.depth);
    REQUIRE_THROWS_AS(load_rgbd_pair(rgb, depth2), std::invalid_argument);
}
