#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "holo/fft.hpp"
#include "holo/field.hpp"

namespace holo {

/// Angular-spectrum transfer function for one (wavelength, distance) pair.
/// Pure phase inside the retained frequency band, zero outside.
template <typename T>
struct TransferFunction {
    int height = 0;
    int width = 0;
    double wavelength = 0.0;  // meters
    double distance = 0.0;    // meters, signed
    double pitch = 0.0;       // meters per pixel
    std::vector<std::complex<T>> data;
    std::vector<uint8_t> band_mask;
};

/// Band-limited angular-spectrum kernel
///   H(fx, fy) = exp(i * 2*pi * (d / lambda) * sqrt(1 - (lambda*fx)^2 - (lambda*fy)^2))
/// zeroed on evanescent frequencies and outside the band limit
///   |fx| <= 1 / (lambda * sqrt((2*d*dfx)^2 + 1)),   dfx = 1/(width*pitch)
/// (and likewise for fy), which suppresses the aliased replicas of the
/// sampled kernel at finite propagation distances.
template <typename T>
TransferFunction<T> make_transfer_function(double wavelength, double distance, int height, int width,
                                           double pitch) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("make_transfer_function: wavelength must be positive");
    if (!(pitch > 0.0)) throw std::invalid_argument("make_transfer_function: pitch must be positive");
    require_shape(height, width, 2, "make_transfer_function");

    TransferFunction<T> tf;
    tf.height = height;
    tf.width = width;
    tf.wavelength = wavelength;
    tf.distance = distance;
    tf.pitch = pitch;
    tf.data.resize(static_cast<size_t>(height) * width);
    tf.band_mask.resize(tf.data.size());

    const double dfx = 1.0 / (static_cast<double>(width) * pitch);
    const double dfy = 1.0 / (static_cast<double>(height) * pitch);
    const double fx_lim = 1.0 / (wavelength * std::sqrt(4.0 * distance * distance * dfx * dfx + 1.0));
    const double fy_lim = 1.0 / (wavelength * std::sqrt(4.0 * distance * distance * dfy * dfy + 1.0));
    const double phase_scale = 2.0 * std::numbers::pi * distance / wavelength;

    for (int y = 0; y < height; ++y) {
        const double fy = fft_freq(y, height, pitch);
        const double ly = wavelength * fy;
        for (int x = 0; x < width; ++x) {
            const double fx = fft_freq(x, width, pitch);
            const double lx = wavelength * fx;
            const double arg = 1.0 - lx * lx - ly * ly;
            const size_t i = static_cast<size_t>(y) * width + x;
            const bool in_band = arg > 0.0 && std::abs(fx) <= fx_lim && std::abs(fy) <= fy_lim;
            tf.band_mask[i] = in_band ? 1 : 0;
            if (in_band) {
                const double phase = phase_scale * std::sqrt(arg);
                tf.data[i] = std::complex<T>(static_cast<T>(std::cos(phase)), static_cast<T>(std::sin(phase)));
            } else {
                tf.data[i] = std::complex<T>(0, 0);
            }
        }
    }
    return tf;
}

template <typename T>
void check_propagation_shapes(const ComplexField<T>& field, const TransferFunction<T>& tf) {
    if (field.height() != tf.height || field.width() != tf.width)
        throw std::invalid_argument("propagate: field and transfer dimensions differ");
    if (field.pitch != tf.pitch)
        throw std::invalid_argument("propagate: field and transfer pitch differ");
}

/// IFFT( FFT(field) * H ). `conjugate_kernel` multiplies by conj(H) instead,
/// which is the adjoint of the propagation operator under this FFT
/// normalization (equivalently, propagation by -distance).
template <typename T>
ComplexField<T> propagate(const ComplexField<T>& field, const TransferFunction<T>& tf,
                          bool conjugate_kernel = false) {
    check_propagation_shapes(field, tf);
    ComplexField<T> out = field;
    fft2_forward(out.grid.data.data(), out.height(), out.width());
    const size_t n = out.grid.size();
    if (conjugate_kernel) {
        for (size_t i = 0; i < n; ++i) out.grid.data[i] *= std::conj(tf.data[i]);
    } else {
        for (size_t i = 0; i < n; ++i) out.grid.data[i] *= tf.data[i];
    }
    fft2_inverse(out.grid.data.data(), out.height(), out.width());
    return out;
}

template <typename T>
ComplexField<T> propagate_adjoint(const ComplexField<T>& field, const TransferFunction<T>& tf) {
    return propagate(field, tf, true);
}

/// Immutable shared transfer functions keyed by (wavelength, distance) for a
/// fixed grid geometry. Safe to use from multiple threads.
template <typename T>
class TransferCache {
  public:
    TransferCache(int height, int width, double pitch) : height_(height), width_(width), pitch_(pitch) {}

    std::shared_ptr<const TransferFunction<T>> get(double wavelength, double distance) {
        const auto key = std::make_pair(wavelength, distance);
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto tf = std::make_shared<const TransferFunction<T>>(
            make_transfer_function<T>(wavelength, distance, height_, width_, pitch_));
        cache_.emplace(key, tf);
        return tf;
    }

    int height() const { return height_; }
    int width() const { return width_; }
    double pitch() const { return pitch_; }

  private:
    int height_, width_;
    double pitch_;
    std::mutex mu_;
    std::map<std::pair<double, double>, std::shared_ptr<const TransferFunction<T>>> cache_;
};

}  // namespace holo
