#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace holo {

/// Normalized light-source powers: rows are subframes, columns are color
/// primaries. Entry (f, p) is the power of primary p while subframe f is
/// displayed, in [0, 1] after projection.
template <typename T>
struct LaserPowerMatrix {
    int subframes = 0;  // F, rows
    int primaries = 0;  // P, columns
    std::vector<T> values;

    LaserPowerMatrix() = default;
    LaserPowerMatrix(int f, int p, T fill = T{})
        : subframes(f), primaries(p), values(static_cast<size_t>(f) * p, fill) {
        if (f < 1 || p < 1) throw std::invalid_argument("LaserPowerMatrix: needs at least one row and column");
    }

    T& at(int f, int p) { return values[static_cast<size_t>(f) * primaries + p]; }
    const T& at(int f, int p) const { return values[static_cast<size_t>(f) * primaries + p]; }

    /// Field-sequential preset: subframe f lights only primary f.
    static LaserPowerMatrix identity(int n) {
        LaserPowerMatrix m(n, n, T(0));
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    static LaserPowerMatrix uniform(int f, int p, T value) { return LaserPowerMatrix(f, p, value); }

    void clamp01() {
        for (T& v : values) v = std::clamp(v, T(0), T(1));
    }

    bool in_unit_range(double tol = 0.0) const {
        for (const T& v : values)
            if (static_cast<double>(v) < -tol || static_cast<double>(v) > 1.0 + tol) return false;
        return true;
    }

    /// Total power requested from primary p across all subframes.
    double column_sum(int p) const {
        double s = 0.0;
        for (int f = 0; f < subframes; ++f) s += static_cast<double>(at(f, p));
        return s;
    }
};

}  // namespace holo
