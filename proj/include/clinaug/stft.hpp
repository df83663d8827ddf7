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

#pragma once

#include <Eigen/Core>

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace clinaug {

// Complex spectrogram, (n_fft / 2 + 1) bins by frames.
using ComplexSpec = Eigen::MatrixXcd;

// Periodic Hann window of the given length.
std::vector<double> hann_window(int length);

// Short-time Fourier transform with centered, reflect-padded frames.
// A signal of n samples yields 1 + n / hop frames.
class Stft {
 public:
  Stft(int n_fft, int hop, int win_length = 0);
  ~Stft();
  Stft(Stft&&) noexcept;
  Stft& operator=(Stft&&) noexcept;
  Stft(const Stft&) = delete;
  Stft& operator=(const Stft&) = delete;

  int n_fft() const { return n_fft_; }
  int hop() const { return hop_; }
  int bins() const { return n_fft_ / 2 + 1; }
  int frames_for(std::size_t n_samples) const {
    return 1 + static_cast<int>(n_samples / static_cast<std::size_t>(hop_));
  }

  ComplexSpec forward(std::span<const float> signal) const;

  // Weighted overlap-add inverse; `length` trims the centered output.
  std::vector<float> inverse(const ComplexSpec& spec, std::size_t length) const;

 private:
  struct Plans;
  int n_fft_;
  int hop_;
  int win_length_;
  std::vector<double> window_;
  std::unique_ptr<Plans> plans_;
};

// Magnitude spectrum of the whole signal (no windowing), n / 2 + 1 bins.
std::vector<double> magnitude_spectrum(std::span<const float> signal);

// Frequency in Hz of the largest bin of magnitude_spectrum.
double peak_frequency(std::span<const float> signal, int sample_rate);

}  // namespace clinaug
