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

#include <array>
#include <string>
#include <string_view>

namespace clinaug {

// The six surgical-action classes. Ids follow alphabetical order of names.
enum class ClassLabel : int {
  kAdjustment = 0,
  kCoagulation = 1,
  kInsertion = 2,
  kReaming = 3,
  kSawing = 4,
  kSuction = 5,
};

inline constexpr int kNumClasses = 6;

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::kAdjustment, ClassLabel::kCoagulation, ClassLabel::kInsertion,
    ClassLabel::kReaming,    ClassLabel::kSawing,      ClassLabel::kSuction};

std::string_view class_name(ClassLabel label);

// Throws clinaug::Error for names outside the six classes.
ClassLabel parse_class(std::string_view name);

ClassLabel class_from_id(int id);

constexpr int class_id(ClassLabel label) { return static_cast<int>(label); }

}  // namespace clinaug
