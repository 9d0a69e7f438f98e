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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/fitting.hpp"
#include "fracdyn/fracsolve.hpp"
#include "fracdyn/lindblad.hpp"
#include "fracdyn/spinboson.hpp"
#include "fracdyn/subordination.hpp"
#include "json.hpp"

namespace fracdyn::io {

using json = nlohmann::json;

// Matrices are flat row-major lists of [re, im] pairs. The `path` argument of
// the readers prefixes ValidationError messages (e.g. "$.generator").

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, int dim, const std::string& path);

/// {dim, hamiltonian, channels: [{jump, rate}]}
json to_json(const GKSLGenerator& gen);
GKSLGenerator generator_from_json(const json& j, const std::string& path = "$");

/// {dim, rho}
json to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j, const std::string& path = "$");

/// {eta, chi, omega_c, beta}; beta may be the string "inf".
json to_json(const BathSpec& bath);
BathSpec bath_from_json(const json& j, const std::string& path = "$");

/// {alpha, lambda, u_inf?, window: {t_start, t_end}, rmse, converged, evaluations}
json to_json(const FitResult& fit);

/// Shortest representation that reads back to the same double.
std::string format_double(double x);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// CSV with a block of '#' comment lines ahead of the column names.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns, const std::vector<std::string>& comments = {});

  void row(const std::vector<double>& values);
  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }
  std::size_t columns() const noexcept { return columns_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

/// `t,re_u,im_u,abs_u`
std::vector<std::string> series_columns();
void write_series(CsvWriter& csv, const CoherenceSeries& series);

/// `t,re_u,im_u,abs_u` in scalar mode, else `t,re_00,im_00,...` over row-major entries.
std::vector<std::string> trajectory_columns(const FracTrajectory& traj);
void write_trajectory(CsvWriter& csv, const FracTrajectory& traj);

}  // namespace fracdyn::io
