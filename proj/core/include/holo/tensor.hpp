#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace holo {

/// Dense NCHW tensor.
template <typename T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_, T fill = T{})
        : n(n_), c(c_), h(h_), w(w_), data(static_cast<size_t>(n_) * c_ * h_ * w_, fill) {
        if (n_ < 1 || c_ < 1 || h_ < 1 || w_ < 1)
            throw std::invalid_argument("Tensor4: all dimensions must be >= 1");
    }

    size_t size() const { return data.size(); }

    size_t index(int i, int j, int y, int x) const {
        return ((static_cast<size_t>(i) * c + j) * h + y) * w + x;
    }
    T& at(int i, int j, int y, int x) { return data[index(i, j, y, x)]; }
    const T& at(int i, int j, int y, int x) const { return data[index(i, j, y, x)]; }

    T* plane(int i, int j) { return data.data() + (static_cast<size_t>(i) * c + j) * h * w; }
    const T* plane(int i, int j) const { return data.data() + (static_cast<size_t>(i) * c + j) * h * w; }

    bool same_shape(const Tensor4& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }
};

template <typename T>
bool all_finite(const Tensor4<T>& t) {
    for (const T& v : t.data)
        if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
}

}  // namespace holo
