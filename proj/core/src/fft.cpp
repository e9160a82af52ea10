#include "holo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace holo {

namespace {

// FFTW planning is not thread-safe; new-array execution of an existing plan
// is. Plans are created once per (shape, direction) with FFTW_UNALIGNED so
// they can run on any buffer.
std::mutex g_plan_mutex;

fftwf_plan plan_f(int h, int w, int sign) {
    static std::map<std::tuple<int, int, int>, fftwf_plan> cache;
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    auto key = std::make_tuple(h, w, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftwf_complex* tmp = fftwf_alloc_complex(static_cast<size_t>(h) * w);
    fftwf_plan p = fftwf_plan_dft_2d(h, w, tmp, tmp, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftwf_free(tmp);
    cache.emplace(key, p);
    return p;
}

fftw_plan plan_d(int h, int w, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    auto key = std::make_tuple(h, w, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftw_complex* tmp = fftw_alloc_complex(static_cast<size_t>(h) * w);
    fftw_plan p = fftw_plan_dft_2d(h, w, tmp, tmp, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(tmp);
    cache.emplace(key, p);
    return p;
}

}  // namespace

void fft2_forward(std::complex<float>* data, int h, int w) {
    fftwf_complex* p = reinterpret_cast<fftwf_complex*>(data);
    fftwf_execute_dft(plan_f(h, w, FFTW_FORWARD), p, p);
}

void fft2_inverse(std::complex<float>* data, int h, int w) {
    fftwf_complex* p = reinterpret_cast<fftwf_complex*>(data);
    fftwf_execute_dft(plan_f(h, w, FFTW_BACKWARD), p, p);
    const float scale = 1.0f / (static_cast<float>(h) * static_cast<float>(w));
    const size_t n = static_cast<size_t>(h) * w;
    for (size_t i = 0; i < n; ++i) data[i] *= scale;
}

void fft2_forward(std::complex<double>* data, int h, int w) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_d(h, w, FFTW_FORWARD), p, p);
}

void fft2_inverse(std::complex<double>* data, int h, int w) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_d(h, w, FFTW_BACKWARD), p, p);
    const double scale = 1.0 / (static_cast<double>(h) * static_cast<double>(w));
    const size_t n = static_cast<size_t>(h) * w;
    for (size_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace holo
