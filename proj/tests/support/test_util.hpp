#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "holo/hologram.hpp"
#include "holo/rng.hpp"
#include "holo/scene.hpp"

namespace holo::test {

inline std::vector<double> wavelengths_for(int primaries) {
    const std::vector<double> base = {473e-9, 515e-9, 639e-9};
    std::vector<double> out;
    for (int p = 0; p < primaries; ++p)
        out.push_back(p < 3 ? base[static_cast<size_t>(p)] : base[2] + 40e-9 * (p - 2));
    return out;
}

inline std::vector<double> plane_distances_for(int planes) {
    std::vector<double> out;
    for (int k = 0; k < planes; ++k) out.push_back((k - (planes - 1) / 2.0) * 0.005);
    return out;
}

template <typename T>
Grid2<T> random_grid(Rng& rng, int h, int w, double lo, double hi) {
    Grid2<T> g(h, w);
    for (auto& v : g.data) v = static_cast<T>(rng.uniform(lo, hi));
    return g;
}

/// Random intensities plus a random-but-valid plane partition.
template <typename T>
TargetScene<T> random_scene(uint64_t seed, int h, int w, int primaries, int planes, double pitch = 8e-6) {
    Rng rng(seed);
    TargetScene<T> scene;
    scene.pitch = pitch;
    scene.plane_distances = plane_distances_for(planes);
    for (int p = 0; p < primaries; ++p) scene.intensity.push_back(random_grid<T>(rng, h, w, 0.0, 1.0));
    scene.plane_masks.assign(static_cast<size_t>(planes), Grid2<uint8_t>(h, w, 0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            scene.plane_masks[rng.uniform_int(static_cast<uint64_t>(planes))].at(y, x) = 1;
    return scene;
}

template <typename T>
TargetScene<T> constant_scene(double value, int h, int w, int primaries, int planes, double pitch = 8e-6) {
    TargetScene<T> scene;
    scene.pitch = pitch;
    scene.plane_distances = plane_distances_for(planes);
    for (int p = 0; p < primaries; ++p)
        scene.intensity.emplace_back(h, w, static_cast<T>(value));
    scene.plane_masks.assign(static_cast<size_t>(planes), Grid2<uint8_t>(h, w, 0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) scene.plane_masks[static_cast<size_t>(y % planes)].at(y, x) = 1;
    return scene;
}

template <typename T>
PhaseHologramSet<T> random_phases(uint64_t seed, int subframes, int h, int w, double anchor) {
    Rng rng(seed);
    PhaseHologramSet<T> set(subframes, h, w, anchor);
    for (auto& phase : set.phases)
        for (auto& v : phase.data) v = static_cast<T>(rng.uniform(-3.14159265358979323846, 3.14159265358979323846));
    return set;
}

/// Self-deleting unique temp directory.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        std::string tmpl = (std::filesystem::temp_directory_path() / (tag + ".XXXXXX")).string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed for " + tmpl);
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace holo::test
