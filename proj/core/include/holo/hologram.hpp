#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "holo/field.hpp"
#include "holo/grid.hpp"
#include "holo/power.hpp"
#include "holo/propagation.hpp"

namespace holo {

/// F per-subframe phase maps in radians, calibrated to the anchor
/// wavelength. A primary at wavelength w sees each phase scaled by
/// w / anchor_wavelength.
template <typename T>
struct PhaseHologramSet {
    std::vector<Grid2<T>> phases;
    double anchor_wavelength = 0.0;  // meters

    PhaseHologramSet() = default;
    PhaseHologramSet(int f, int h, int w, double anchor)
        : phases(static_cast<size_t>(f), Grid2<T>(h, w)), anchor_wavelength(anchor) {
        if (f < 1) throw std::invalid_argument("PhaseHologramSet: needs at least one subframe");
        if (!(anchor > 0.0)) throw std::invalid_argument("PhaseHologramSet: anchor wavelength must be positive");
    }

    int count() const { return static_cast<int>(phases.size()); }
    int height() const { return phases.empty() ? 0 : phases[0].height; }
    int width() const { return phases.empty() ? 0 : phases[0].width; }
};

/// sqrt(power) * exp(i * (wavelength / anchor_wavelength) * phase), elementwise.
template <typename T>
ComplexField<T> phase_to_field(const Grid2<T>& phase, double power, double wavelength,
                               double anchor_wavelength, double pitch) {
    if (!(wavelength > 0.0) || !(anchor_wavelength > 0.0))
        throw std::invalid_argument("phase_to_field: wavelengths must be positive");
    constexpr double kPowerTol = 1e-9;
    if (power < -kPowerTol || power > 1.0 + kPowerTol)
        throw std::invalid_argument("phase_to_field: power outside [0, 1]");
    const double clamped = std::clamp(power, 0.0, 1.0);

    ComplexField<T> field(phase.height, phase.width, pitch);
    const T amplitude = static_cast<T>(std::sqrt(clamped));
    const T ratio = static_cast<T>(wavelength / anchor_wavelength);
    const size_t n = phase.size();
    for (size_t i = 0; i < n; ++i) {
        const T a = ratio * phase.data[i];
        field.grid.data[i] = std::complex<T>(amplitude * std::cos(a), amplitude * std::sin(a));
    }
    return field;
}

/// Adds pi to every odd row. Export-only transform for off-axis setups that
/// image at the half-diffraction-order position; the displayed hologram is
/// then exp(-i * output). Values are intentionally not wrapped.
template <typename T>
Grid2<T> apply_linear_grating(const Grid2<T>& phase) {
    Grid2<T> out = phase;
    const T pi = static_cast<T>(std::numbers::pi);
    for (int y = 1; y < out.height; y += 2)
        for (int x = 0; x < out.width; ++x) out.at(y, x) += pi;
    return out;
}

/// Per-primary intensity at one plane: I_p = sum_f |prop(sqrt(l(f,p)) * exp(i*r_p*phi_f))|^2.
/// Per-pixel subframe sums accumulate in double.
template <typename T>
std::vector<Grid2<T>> reconstruct_intensity(const PhaseHologramSet<T>& holograms,
                                            const LaserPowerMatrix<T>& powers,
                                            const std::vector<double>& wavelengths, double distance,
                                            double pitch) {
    const int F = holograms.count();
    const int P = static_cast<int>(wavelengths.size());
    if (powers.subframes != F || powers.primaries != P)
        throw std::invalid_argument("reconstruct_intensity: power matrix shape does not match subframes/primaries");

    const int h = holograms.height();
    const int w = holograms.width();
    const size_t n = static_cast<size_t>(h) * w;

    std::vector<Grid2<T>> intensity(P, Grid2<T>(h, w));
    std::vector<Grid2<double>> acc(P, Grid2<double>(h, w, 0.0));

    for (int p = 0; p < P; ++p) {
        const auto tf = make_transfer_function<T>(wavelengths[p], distance, h, w, pitch);
        for (int f = 0; f < F; ++f) {
            const double power = static_cast<double>(powers.at(f, p));
            if (power == 0.0) continue;
            const auto field =
                phase_to_field(holograms.phases[f], power, wavelengths[p], holograms.anchor_wavelength, pitch);
            const auto u = propagate(field, tf);
            for (size_t i = 0; i < n; ++i) {
                const double re = static_cast<double>(u.grid.data[i].real());
                const double im = static_cast<double>(u.grid.data[i].imag());
                acc[p].data[i] += re * re + im * im;
            }
        }
        for (size_t i = 0; i < n; ++i) intensity[p].data[i] = static_cast<T>(acc[p].data[i]);
    }
    return intensity;
}

}  // namespace holo
