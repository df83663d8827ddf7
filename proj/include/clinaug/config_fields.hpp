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

#include "clinaug/errors.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <string>

namespace clinaug {

// Reads optional fields of one config section. Wrong types and unknown keys
// raise ConfigError naming "<section>.<key>".
class ConfigFields {
 public:
  ConfigFields(const nlohmann::json& doc, std::string section) : doc_(doc), section_(std::move(section)) {
    if (!doc.is_object()) throw ConfigError(section_ + ": expected an object");
  }

  template <typename T>
  ConfigFields& read(const std::string& key, T& value) {
    seen_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return *this;
    try {
      if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw ConfigError(field(key) + ": expected a number");
      }
      value = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(field(key) + ": wrong type");
    }
    return *this;
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  const nlohmann::json& at(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  // Rejects keys that no read() asked for.
  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key) + ": unknown field");
    }
  }

  std::string field(const std::string& key) const { return section_ + "." + key; }

 private:
  const nlohmann::json& doc_;
  std::string section_;
  std::set<std::string> seen_;
};

}  // namespace clinaug
