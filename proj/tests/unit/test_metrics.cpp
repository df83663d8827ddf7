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

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace clinaug {
namespace {

TEST(MacroF1, PerfectAndAllWrong) {
  const std::vector<int> y{0, 1, 2, 3, 4, 5, 0, 1};
  EXPECT_DOUBLE_EQ(macro_f1(y, y, 6), 1.0);
  std::vector<int> wrong(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) wrong[i] = (y[i] + 1) % 6;
  EXPECT_DOUBLE_EQ(macro_f1(y, wrong, 6), 0.0);
}

TEST(MacroF1, HandComputedTwoClassExample) {
  // class 0: P = 1, R = 1/2, F1 = 2/3; class 1: P = 2/3, R = 1, F1 = 4/5.
  const std::vector<int> t{0, 0, 1, 1}, p{0, 1, 1, 1};
  EXPECT_NEAR(macro_f1(t, p, 2), (2.0 / 3.0 + 0.8) / 2.0, 1e-9);
  EXPECT_NEAR(macro_f1(t, p, 2), 0.7333333333, 1e-9);
}

TEST(MacroF1, AbsentClassCountsAsZero) {
  // Class 2 is never true nor predicted and contributes F1 = 0.
  const std::vector<int> t{0, 1}, p{0, 1};
  EXPECT_NEAR(macro_f1(t, p, 3), 2.0 / 3.0, 1e-12);
}

TEST(MacroF1, InvariantUnderRelabeling) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(0, 5);
  std::vector<int> t(200), p(200);
  for (int i = 0; i < 200; ++i) {
    t[i] = d(rng);
    p[i] = d(rng) < 3 ? t[i] : d(rng);
  }
  const std::vector<int> perm{3, 5, 0, 1, 4, 2};
  std::vector<int> t2(200), p2(200);
  for (int i = 0; i < 200; ++i) {
    t2[i] = perm[t[i]];
    p2[i] = perm[p[i]];
  }
  EXPECT_NEAR(macro_f1(t, p, 6), macro_f1(t2, p2, 6), 1e-12);
}

TEST(MacroF1, Errors) {
  EXPECT_THROW(macro_f1(std::vector<int>{}, std::vector<int>{}, 6), Error);
  EXPECT_THROW(macro_f1(std::vector<int>{0, 1}, std::vector<int>{0}, 6), Error);
  EXPECT_THROW(macro_f1(std::vector<int>{0, 7}, std::vector<int>{0, 1}, 6), Error);
}

}  // namespace
}  // namespace clinaug
