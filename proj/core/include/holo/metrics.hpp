#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "holo/grid.hpp"

namespace holo {

template <typename T>
double mse(const Grid2<T>& a, const Grid2<T>& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mse: shape mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

/// 10*log10(peak^2 / MSE), capped at 100 dB; identical images hit the cap.
template <typename T>
double psnr(const Grid2<T>& a, const Grid2<T>& b, double peak) {
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
    const double m = mse(a, b);
    if (m == 0.0) return 100.0;
    return std::min(100.0, 10.0 * std::log10(peak * peak / m));
}

/// Channel-pooled MSE variant.
template <typename T>
double psnr(const std::vector<Grid2<T>>& a, const std::vector<Grid2<T>>& b, double peak) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("psnr: channel count mismatch");
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
    double m = 0.0;
    for (size_t c = 0; c < a.size(); ++c) m += mse(a[c], b[c]);
    m /= static_cast<double>(a.size());
    if (m == 0.0) return 100.0;
    return std::min(100.0, 10.0 * std::log10(peak * peak / m));
}

namespace detail {

/// Normalized 11x11 Gaussian (sigma 1.5) window weights.
inline const std::array<double, 121>& ssim_window() {
    static const std::array<double, 121> w = [] {
        std::array<double, 121> out{};
        double sum = 0.0;
        for (int y = -5; y <= 5; ++y)
            for (int x = -5; x <= 5; ++x) {
                const double v = std::exp(-(y * y + x * x) / (2.0 * 1.5 * 1.5));
                out[(y + 5) * 11 + (x + 5)] = v;
                sum += v;
            }
        for (double& v : out) v /= sum;
        return out;
    }();
    return w;
}

}  // namespace detail

/// Mean SSIM over all valid 11x11 window positions (no boundary padding).
/// Variance and covariance use matching expressions so ssim(a, a) is exactly
/// 1 for every finite image.
template <typename T>
double ssim(const Grid2<T>& a, const Grid2<T>& b, double peak = 1.0) {
    if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
    if (a.height < 11 || a.width < 11) throw std::invalid_argument("ssim: image smaller than the 11x11 window");
    if (!(peak > 0.0)) throw std::invalid_argument("ssim: peak must be positive");
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const auto& window = detail::ssim_window();

    double total = 0.0;
    int64_t count = 0;
    for (int y0 = 0; y0 + 11 <= a.height; ++y0)
        for (int x0 = 0; x0 + 11 <= a.width; ++x0) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int y = 0; y < 11; ++y)
                for (int x = 0; x < 11; ++x) {
                    const double w = window[y * 11 + x];
                    mu_a += w * static_cast<double>(a.at(y0 + y, x0 + x));
                    mu_b += w * static_cast<double>(b.at(y0 + y, x0 + x));
                }
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int y = 0; y < 11; ++y)
                for (int x = 0; x < 11; ++x) {
                    const double w = window[y * 11 + x];
                    const double da = static_cast<double>(a.at(y0 + y, x0 + x)) - mu_a;
                    const double db = static_cast<double>(b.at(y0 + y, x0 + x)) - mu_b;
                    var_a += w * da * da;
                    var_b += w * db * db;
                    cov += w * da * db;
                }
            const double numer = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double denom = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += numer / denom;
            ++count;
        }
    return total / static_cast<double>(count);
}

/// Channel-averaged variant.
template <typename T>
double ssim(const std::vector<Grid2<T>>& a, const std::vector<Grid2<T>>& b, double peak = 1.0) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("ssim: channel count mismatch");
    double sum = 0.0;
    for (size_t c = 0; c < a.size(); ++c) sum += ssim(a[c], b[c], peak);
    return sum / static_cast<double>(a.size());
}

}  // namespace holo
