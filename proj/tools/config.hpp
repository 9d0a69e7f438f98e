// Copyright 2026 The fracdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/errors.hpp"
#include "json.hpp"

namespace fracdyn::cli {

using json = nlohmann::json;

/// Config problem at a JSON path; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
  /// From a message that already carries its path.
  explicit ConfigError(const std::string& located) : std::runtime_error(located) {}
};

/// Read-only view of a config object that knows its path and rejects keys it was not asked about.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  std::string child(std::string_view key) const { return path_ + "." + std::string(key); }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!j_->is_object()) throw ConfigError(path_, "expected an object");
    for (const auto& [k, v] : j_->items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || k == a;
      if (!ok) throw ConfigError(child(k), "unknown key");
    }
  }

  bool has(std::string_view key) const { return j_->contains(key); }

  Node at(std::string_view key) const {
    if (!has(key)) throw ConfigError(child(key), "missing");
    return {j_->at(key), child(key)};
  }

  double number(std::string_view key) const {
    const Node n = at(key);
    if (!n.raw().is_number()) throw ConfigError(n.path(), "expected a number");
    return n.raw().get<double>();
  }
  double number(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(std::string_view key) const {
    const double v = number(key);
    if (!(v > 0.0)) throw ConfigError(child(key), "must be positive");
    return v;
  }
  double positive(std::string_view key, double fallback) const { return has(key) ? positive(key) : fallback; }

  long long integer(std::string_view key) const {
    const Node n = at(key);
    if (!n.raw().is_number_integer()) throw ConfigError(n.path(), "expected an integer");
    return n.raw().get<long long>();
  }
  long long integer(std::string_view key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::string string(std::string_view key) const {
    const Node n = at(key);
    if (!n.raw().is_string()) throw ConfigError(n.path(), "expected a string");
    return n.raw().get<std::string>();
  }
  std::string string(std::string_view key, std::string fallback) const { return has(key) ? string(key) : fallback; }

  std::string choice(std::string_view key, std::initializer_list<std::string_view> options, std::string fallback) const {
    const std::string s = string(key, fallback);
    for (auto o : options)
      if (s == o) return s;
    std::string msg = "expected one of";
    for (auto o : options) msg += " \"" + std::string(o) + "\"";
    throw ConfigError(child(key), msg);
  }

  std::vector<Node> elements(std::string_view key) const {
    const Node n = at(key);
    if (!n.raw().is_array()) throw ConfigError(n.path(), "expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < n.raw().size(); ++i) out.emplace_back(n.raw()[i], n.path() + "[" + std::to_string(i) + "]");
    return out;
  }

  std::vector<double> numbers(std::string_view key) const {
    std::vector<double> v;
    for (const auto& e : elements(key)) {
      if (!e.raw().is_number()) throw ConfigError(e.path(), "expected a number");
      v.push_back(e.raw().get<double>());
    }
    return v;
  }

 private:
  const json* j_;
  std::string path_;
};

}  // namespace fracdyn::cli
