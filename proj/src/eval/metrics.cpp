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

#include "clinaug/metrics.hpp"

#include "clinaug/errors.hpp"

#include <string>
#include <vector>

namespace clinaug {

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  if (y_true.empty()) throw Error("macro_f1 of empty input");
  if (y_true.size() != y_pred.size()) throw Error("macro_f1: length mismatch");
  if (n_classes < 1) throw Error("macro_f1: n_classes must be positive");
  std::vector<long> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
      throw Error("macro_f1: label out of range at index " + std::to_string(i));
    }
    if (t == p) {
      ++tp[t];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    // F1 = 2TP / (2TP + FP + FN); zero when TP == 0.
    const long denom = 2 * tp[c] + fp[c] + fn[c];
    if (tp[c] > 0) sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
  }
  return sum / n_classes;
}

}  // namespace clinaug
