/* Copyright 2026 The clinaug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "clinaug/stft.hpp"

#include "clinaug/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace clinaug {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

// numpy-style 'reflect' indexing (edge sample not repeated).
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
  }
  return w;
}

struct Stft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Stft::Stft(int n_fft, int hop, int win_length)
    : n_fft_(n_fft), hop_(hop), win_length_(win_length > 0 ? win_length : n_fft) {
  if (n_fft_ < 2 || hop_ < 1 || win_length_ > n_fft_) {
    throw Error("invalid STFT geometry: n_fft=" + std::to_string(n_fft) +
                " hop=" + std::to_string(hop) + " win_length=" + std::to_string(win_length));
  }
  window_.assign(static_cast<std::size_t>(n_fft_), 0.0);
  const auto w = hann_window(win_length_);
  const int left = (n_fft_ - win_length_) / 2;
  std::copy(w.begin(), w.end(), window_.begin() + left);

  plans_ = std::make_unique<Plans>();
  RealBuffer real(static_cast<std::size_t>(n_fft_));
  ComplexBuffer cplx(static_cast<std::size_t>(bins()));
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(n_fft_, real.data, cplx.data, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(n_fft_, cplx.data, real.data, FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->inverse) throw Error("FFTW planning failed");
}

Stft::~Stft() = default;
Stft::Stft(Stft&&) noexcept = default;
Stft& Stft::operator=(Stft&&) noexcept = default;

ComplexSpec Stft::forward(std::span<const float> signal) const {
  if (signal.empty()) throw Error("STFT of an empty signal");
  const int frames = frames_for(signal.size());
  const int nb = bins();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(signal.size());
  const std::ptrdiff_t pad = n_fft_ / 2;

  ComplexSpec out(nb, frames);
  RealBuffer frame(static_cast<std::size_t>(n_fft_));
  ComplexBuffer spec(static_cast<std::size_t>(nb));
  for (int t = 0; t < frames; ++t) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t) * hop_ - pad;
    for (int j = 0; j < n_fft_; ++j) {
      const std::ptrdiff_t idx = reflect_index(start + j, n);
      frame.data[j] = window_[j] * static_cast<double>(signal[static_cast<std::size_t>(idx)]);
    }
    fftw_execute_dft_r2c(plans_->forward, frame.data, spec.data);
    for (int b = 0; b < nb; ++b) out(b, t) = {spec.data[b][0], spec.data[b][1]};
  }
  return out;
}

std::vector<float> Stft::inverse(const ComplexSpec& spec, std::size_t length) const {
  const int nb = bins();
  if (spec.rows() != nb) {
    throw Error("ISTFT expects " + std::to_string(nb) + " bins, got " + std::to_string(spec.rows()));
  }
  const auto frames = static_cast<std::size_t>(spec.cols());
  const std::size_t total = static_cast<std::size_t>(n_fft_) + (frames - 1) * hop_;
  std::vector<double> acc(total, 0.0), norm(total, 0.0);

  RealBuffer frame(static_cast<std::size_t>(n_fft_));
  ComplexBuffer buf(static_cast<std::size_t>(nb));
  for (std::size_t t = 0; t < frames; ++t) {
    for (int b = 0; b < nb; ++b) {
      buf.data[b][0] = spec(b, static_cast<Eigen::Index>(t)).real();
      buf.data[b][1] = spec(b, static_cast<Eigen::Index>(t)).imag();
    }
    // DC and Nyquist bins of a real signal have no imaginary part.
    buf.data[0][1] = 0.0;
    if (n_fft_ % 2 == 0) buf.data[nb - 1][1] = 0.0;
    fftw_execute_dft_c2r(plans_->inverse, buf.data, frame.data);
    const std::size_t offset = t * hop_;
    for (int j = 0; j < n_fft_; ++j) {
      acc[offset + j] += window_[j] * frame.data[j] / n_fft_;
      norm[offset + j] += window_[j] * window_[j];
    }
  }
  const double tiny = 1e-10;
  const std::size_t pad = static_cast<std::size_t>(n_fft_ / 2);
  std::vector<float> out(length, 0.0f);
  for (std::size_t i = 0; i < length && pad + i < total; ++i) {
    const double w = norm[pad + i];
    out[i] = static_cast<float>(w > tiny ? acc[pad + i] / w : acc[pad + i]);
  }
  return out;
}

std::vector<double> magnitude_spectrum(std::span<const float> signal) {
  const int n = static_cast<int>(signal.size());
  if (n < 2) throw Error("spectrum needs at least 2 samples");
  RealBuffer in(static_cast<std::size_t>(n));
  ComplexBuffer out(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data, out.data, FFTW_ESTIMATE);
  }
  for (int i = 0; i < n; ++i) in.data[i] = signal[static_cast<std::size_t>(i)];
  fftw_execute(plan);
  std::vector<double> mag(static_cast<std::size_t>(n / 2 + 1));
  for (std::size_t b = 0; b < mag.size(); ++b) mag[b] = std::hypot(out.data[b][0], out.data[b][1]);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return mag;
}

double peak_frequency(std::span<const float> signal, int sample_rate) {
  const auto mag = magnitude_spectrum(signal);
  const auto it = std::max_element(mag.begin() + 1, mag.end());
  const auto bin = static_cast<double>(std::distance(mag.begin(), it));
  return bin * sample_rate / static_cast<double>(signal.size());
}

}  // namespace clinaug
