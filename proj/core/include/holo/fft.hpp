#pragma once

#include <complex>

namespace holo {

// In-place 2D FFTs over row-major h x w data. Forward transforms are
// unnormalized; inverse transforms scale by 1/(h*w), so ifft2(fft2(x)) == x
// up to roundoff. Plans are cached per shape; execution is thread-safe.

void fft2_forward(std::complex<float>* data, int h, int w);
void fft2_inverse(std::complex<float>* data, int h, int w);
void fft2_forward(std::complex<double>* data, int h, int w);
void fft2_inverse(std::complex<double>* data, int h, int w);

/// FFT frequency coordinate for bin i of n samples spaced `step` apart,
/// in standard FFT ordering (non-negative frequencies first).
inline double fft_freq(int i, int n, double step) {
    const int half = (n - 1) / 2;
    const int k = i <= half ? i : i - n;
    return static_cast<double>(k) / (static_cast<double>(n) * step);
}

}  // namespace holo
