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

#include <span>

namespace clinaug {

// Unweighted mean over classes of per-class F1 = 2PR / (P + R). A class with
// no true positives contributes F1 = 0, including when it never occurs in
// either vector. Throws on empty or mismatched input and out-of-range labels.
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred, int n_classes);

}  // namespace clinaug
