#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace holo {

/// Dense row-major 2D grid.
template <typename T>
struct Grid2 {
    int height = 0;
    int width = 0;
    std::vector<T> data;

    Grid2() = default;
    Grid2(int h, int w, T fill = T{}) : height(h), width(w), data(checked_area(h, w), fill) {}

    static size_t checked_area(int h, int w) {
        if (h < 0 || w < 0) throw std::invalid_argument("Grid2: negative dimensions");
        return static_cast<size_t>(h) * static_cast<size_t>(w);
    }

    T& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

    size_t size() const { return data.size(); }
    bool same_shape(const Grid2& other) const { return height == other.height && width == other.width; }
};

template <typename T>
bool all_finite(const Grid2<T>& g) {
    for (const T& v : g.data)
        if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
}

inline void require_shape(int height, int width, int min_dim, const char* what) {
    if (height < min_dim || width < min_dim)
        throw std::invalid_argument(std::string(what) + ": dimensions must be at least " +
                                    std::to_string(min_dim) + ", got " + std::to_string(height) + "x" +
                                    std::to_string(width));
}

}  // namespace holo
