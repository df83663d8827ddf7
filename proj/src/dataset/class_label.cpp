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

#include "clinaug/class_label.hpp"

#include "clinaug/errors.hpp"

#include <string>

namespace clinaug {

namespace {
constexpr std::array<std::string_view, kNumClasses> kNames = {
    "Adjustment", "Coagulation", "Insertion", "Reaming", "Sawing", "Suction"};
}  // namespace

std::string_view class_name(ClassLabel label) {
  return kNames.at(static_cast<std::size_t>(class_id(label)));
}

ClassLabel parse_class(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kNames[i] == name) return static_cast<ClassLabel>(i);
  }
  throw Error("unknown class name '" + std::string(name) + "'");
}

ClassLabel class_from_id(int id) {
  if (id < 0 || id >= kNumClasses) {
    throw Error("class id out of range: " + std::to_string(id));
  }
  return static_cast<ClassLabel>(id);
}

}  // namespace clinaug
