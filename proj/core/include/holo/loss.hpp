#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "holo/hologram.hpp"
#include "holo/parallel.hpp"
#include "holo/power.hpp"
#include "holo/propagation.hpp"
#include "holo/scene.hpp"

namespace holo {

template <typename T>
struct LossGradients {
    double loss = 0.0;
    std::vector<Grid2<T>> phase_grads;   // one map per subframe
    LaserPowerMatrix<T> power_grads;     // F x P
};

/// Mean over the pixels selected by each plane mask of (I - scale*t)^2,
/// summed over planes and primaries. Exposed for direct testing of the
/// reduction; intensities usually come from reconstruct_intensity.
template <typename T>
double masked_residual_loss(const Grid2<T>& intensity, const Grid2<T>& target,
                            const Grid2<uint8_t>& mask, double scale) {
    if (!intensity.same_shape(target) || intensity.height != mask.height || intensity.width != mask.width)
        throw std::invalid_argument("masked_residual_loss: shape mismatch");
    double sum = 0.0;
    int64_t count = 0;
    for (size_t i = 0; i < intensity.size(); ++i) {
        if (!mask.data[i]) continue;
        const double r = static_cast<double>(intensity.data[i]) - scale * static_cast<double>(target.data[i]);
        sum += r * r;
        ++count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

namespace detail {

template <typename T>
void check_loss_shapes(const PhaseHologramSet<T>& holograms, const LaserPowerMatrix<T>& powers,
                       const TargetScene<T>& scene, const std::vector<double>& wavelengths) {
    const int P = static_cast<int>(wavelengths.size());
    if (scene.primaries() != P)
        throw std::invalid_argument("image_loss: scene channels do not match wavelengths");
    if (powers.primaries != P || powers.subframes != holograms.count())
        throw std::invalid_argument("image_loss: power matrix shape mismatch");
    if (holograms.height() != scene.height() || holograms.width() != scene.width())
        throw std::invalid_argument("image_loss: hologram and scene dimensions differ");
}

/// Forward loss and, when `grads` is non-null, its exact gradients via the
/// adjoint of the propagation operator.
///
/// With unit subframe fields a_pf = exp(i*c_p*phi_f) (c_p = lambda_p/lambda_a)
/// and u_pfk = Prop_k(a_pf):
///   I_pk      = sum_f l(f,p) |u_pfk|^2
///   g_pk      = (2/N_k) (I_pk - s*t_p)            on mask k, else 0
///   dL/dl(f,p)= sum_k sum_x g_pk |u_pfk|^2
///   w_pf      = IFFT( sum_k conj(H_pk) . FFT(g_pk . u_pfk) )
///   dL/dphi_f = sum_p 2 c_p l(f,p) Im( conj(a_pf) w_pf )
template <typename T>
double loss_forward_backward(const PhaseHologramSet<T>& holograms, const LaserPowerMatrix<T>& powers,
                             const TargetScene<T>& scene, double scale,
                             const std::vector<double>& wavelengths, TransferCache<T>* cache,
                             LossGradients<T>* grads) {
    check_loss_shapes(holograms, powers, scene, wavelengths);

    const int F = holograms.count();
    const int P = static_cast<int>(wavelengths.size());
    const int K = scene.planes();
    const int h = holograms.height();
    const int w = holograms.width();
    const size_t n = static_cast<size_t>(h) * w;

    std::unique_ptr<TransferCache<T>> local_cache;
    if (!cache) {
        local_cache = std::make_unique<TransferCache<T>>(h, w, scene.pitch);
        cache = local_cache.get();
    }
    std::vector<std::shared_ptr<const TransferFunction<T>>> tfs(static_cast<size_t>(P) * K);
    for (int p = 0; p < P; ++p)
        for (int k = 0; k < K; ++k) tfs[p * K + k] = cache->get(wavelengths[p], scene.plane_distances[k]);

    std::vector<int64_t> mask_count(K, 0);
    for (int k = 0; k < K; ++k)
        for (size_t i = 0; i < n; ++i) mask_count[k] += scene.plane_masks[k].data[i] ? 1 : 0;

    using C = std::complex<T>;
    // Unit subframe fields and their spectra, indexed by p*F+f.
    std::vector<std::vector<C>> unit(static_cast<size_t>(P) * F);
    std::vector<std::vector<C>> spectrum(static_cast<size_t>(P) * F);
    parallel_for(0, static_cast<int64_t>(P) * F, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const int p = static_cast<int>(j) / F;
            const int f = static_cast<int>(j) % F;
            const T ratio = static_cast<T>(wavelengths[p] / holograms.anchor_wavelength);
            auto& a = unit[j];
            a.resize(n);
            const T* phi = holograms.phases[f].data.data();
            for (size_t i = 0; i < n; ++i) {
                const T ang = ratio * phi[i];
                a[i] = C(std::cos(ang), std::sin(ang));
            }
            spectrum[j] = a;
            fft2_forward(spectrum[j].data(), h, w);
        }
    });

    // Propagated unit fields per (p, f, k).
    std::vector<std::vector<C>> prop(static_cast<size_t>(P) * F * K);
    parallel_for(0, static_cast<int64_t>(P) * F * K, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const int k = static_cast<int>(j % K);
            const int pf = static_cast<int>(j / K);
            auto& u = prop[j];
            u = spectrum[pf];
            const C* tf = tfs[(pf / F) * K + k]->data.data();
            for (size_t i = 0; i < n; ++i) u[i] *= tf[i];
            fft2_inverse(u.data(), h, w);
        }
    });

    // Per-(p, k) intensity, masked residual field, and loss contribution.
    std::vector<double> loss_part(static_cast<size_t>(P) * K, 0.0);
    std::vector<std::vector<T>> residual(static_cast<size_t>(P) * K);
    parallel_for(0, static_cast<int64_t>(P) * K, [&](int64_t lo, int64_t hi) {
        for (int64_t j = lo; j < hi; ++j) {
            const int p = static_cast<int>(j) / K;
            const int k = static_cast<int>(j) % K;
            auto& g = residual[j];
            g.assign(n, T(0));
            const uint8_t* mask = scene.plane_masks[k].data.data();
            const T* target = scene.intensity[p].data.data();
            const double inv_count = mask_count[k] > 0 ? 1.0 / static_cast<double>(mask_count[k]) : 0.0;
            double part = 0.0;
            for (size_t i = 0; i < n; ++i) {
                double inten = 0.0;
                for (int f = 0; f < F; ++f) {
                    const C u = prop[(static_cast<size_t>(p) * F + f) * K + k][i];
                    const double re = static_cast<double>(u.real());
                    const double im = static_cast<double>(u.imag());
                    inten += static_cast<double>(powers.at(f, p)) * (re * re + im * im);
                }
                if (!mask[i]) continue;
                const double r = inten - scale * static_cast<double>(target[i]);
                part += r * r * inv_count;
                g[i] = static_cast<T>(2.0 * r * inv_count);
            }
            loss_part[j] = part;
        }
    });

    double loss = 0.0;
    for (double part : loss_part) loss += part;

    if (!grads) return loss;

    grads->loss = loss;
    grads->phase_grads.assign(static_cast<size_t>(F), Grid2<T>(h, w, T(0)));
    grads->power_grads = LaserPowerMatrix<T>(F, P, T(0));

    // Per-(p, f) adjoint field and power gradient.
    std::vector<std::vector<T>> phase_part(static_cast<size_t>(P) * F);
    parallel_for(0, static_cast<int64_t>(P) * F, [&](int64_t lo, int64_t hi) {
        std::vector<C> scratch(n), accum(n);
        for (int64_t j = lo; j < hi; ++j) {
            const int p = static_cast<int>(j) / F;
            const int f = static_cast<int>(j) % F;
            std::fill(accum.begin(), accum.end(), C(0, 0));
            double dl_sum_total = 0.0;
            for (int k = 0; k < K; ++k) {
                const auto& u = prop[(static_cast<size_t>(p) * F + f) * K + k];
                const auto& g = residual[static_cast<size_t>(p) * K + k];
                double dl_sum = 0.0;
                for (size_t i = 0; i < n; ++i) {
                    const double re = static_cast<double>(u[i].real());
                    const double im = static_cast<double>(u[i].imag());
                    dl_sum += static_cast<double>(g[i]) * (re * re + im * im);
                    scratch[i] = C(g[i] * u[i].real(), g[i] * u[i].imag());
                }
                dl_sum_total += dl_sum;
                fft2_forward(scratch.data(), h, w);
                const C* tf = tfs[static_cast<size_t>(p) * K + k]->data.data();
                for (size_t i = 0; i < n; ++i) accum[i] += std::conj(tf[i]) * scratch[i];
            }
            grads->power_grads.at(f, p) = static_cast<T>(dl_sum_total);
            fft2_inverse(accum.data(), h, w);

            auto& dphi = phase_part[j];
            dphi.resize(n);
            const T factor = static_cast<T>(2.0 * (wavelengths[p] / holograms.anchor_wavelength) *
                                            static_cast<double>(powers.at(f, p)));
            const auto& a = unit[j];
            for (size_t i = 0; i < n; ++i) {
                // Im(conj(a) * w)
                const T im = a[i].real() * accum[i].imag() - a[i].imag() * accum[i].real();
                dphi[i] = factor * im;
            }
        }
    });

    parallel_for(0, F, [&](int64_t lo, int64_t hi) {
        for (int64_t f = lo; f < hi; ++f) {
            T* out = grads->phase_grads[f].data.data();
            for (int p = 0; p < P; ++p) {
                const T* part = phase_part[static_cast<size_t>(p) * F + f].data();
                for (size_t i = 0; i < n; ++i) out[i] += part[i];
            }
        }
    });

    return loss;
}

}  // namespace detail

template <typename T>
double image_loss(const PhaseHologramSet<T>& holograms, const LaserPowerMatrix<T>& powers,
                  const TargetScene<T>& scene, double scale, const std::vector<double>& wavelengths,
                  TransferCache<T>* cache = nullptr) {
    return detail::loss_forward_backward<T>(holograms, powers, scene, scale, wavelengths, cache, nullptr);
}

template <typename T>
LossGradients<T> loss_gradients(const PhaseHologramSet<T>& holograms, const LaserPowerMatrix<T>& powers,
                                const TargetScene<T>& scene, double scale,
                                const std::vector<double>& wavelengths, TransferCache<T>* cache = nullptr) {
    LossGradients<T> grads;
    detail::loss_forward_backward<T>(holograms, powers, scene, scale, wavelengths, cache, &grads);
    return grads;
}

}  // namespace holo
