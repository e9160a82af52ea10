#pragma once

#include <complex>
#include <stdexcept>

#include "holo/grid.hpp"

namespace holo {

/// Scalar complex wavefield sampled on a regular grid with physical pitch.
template <typename T>
struct ComplexField {
    Grid2<std::complex<T>> grid;
    double pitch = 0.0;  // meters per pixel

    ComplexField() = default;
    ComplexField(int h, int w, double pitch_m) : grid(h, w), pitch(pitch_m) {
        require_shape(h, w, 2, "ComplexField");
        if (!(pitch_m > 0.0)) throw std::invalid_argument("ComplexField: pitch must be positive");
    }

    int height() const { return grid.height; }
    int width() const { return grid.width; }

    /// Total energy sum(|u|^2), accumulated in double.
    double energy() const {
        double e = 0.0;
        for (const auto& v : grid.data) {
            const double re = static_cast<double>(v.real());
            const double im = static_cast<double>(v.imag());
            e += re * re + im * im;
        }
        return e;
    }
};

template <typename T>
bool all_finite(const ComplexField<T>& f) {
    for (const auto& v : f.grid.data)
        if (!std::isfinite(static_cast<double>(v.real())) || !std::isfinite(static_cast<double>(v.imag())))
            return false;
    return true;
}

}  // namespace holo
