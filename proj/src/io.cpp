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

#include "fracdyn/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "fracdyn/errors.hpp"

namespace fracdyn::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto key : keys) ok = ok || k == key;
    if (!ok) fail(path + "." + k, "unknown key");
  }
}

const json& required(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  return j.at(key);
}

}  // namespace

json to_json(const CMatrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back({m(r, c).real(), m(r, c).imag()});
  return a;
}

CMatrix matrix_from_json(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim) * dim)
    fail(path, "expected " + std::to_string(dim * dim) + " [re, im] pairs");
  CMatrix m(dim, dim);
  for (int k = 0; k < dim * dim; ++k) {
    const auto& e = j[k];
    const std::string p = path + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) fail(p, "expected [re, im]");
    m(k / dim, k % dim) = {number(e[0], p + "[0]"), number(e[1], p + "[1]")};
  }
  return m;
}

json to_json(const GKSLGenerator& gen) {
  json ch = json::array();
  for (const auto& c : gen.channels()) ch.push_back({{"jump", to_json(c.jump)}, {"rate", c.rate}});
  return {{"dim", gen.dim()}, {"hamiltonian", to_json(gen.hamiltonian())}, {"channels", ch}};
}

static int read_dim(const json& j, const std::string& path) {
  const auto& d = required(j, path, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) fail(path + ".dim", "expected a positive integer");
  return d.get<int>();
}

GKSLGenerator generator_from_json(const json& j, const std::string& path) {
  only_keys(j, path, {"dim", "hamiltonian", "channels"});
  const int d = read_dim(j, path);
  CMatrix h = matrix_from_json(required(j, path, "hamiltonian"), d, path + ".hamiltonian");
  std::vector<Channel> channels;
  if (j.contains("channels")) {
    const auto& cs = j.at("channels");
    if (!cs.is_array()) fail(path + ".channels", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string p = path + ".channels[" + std::to_string(i) + "]";
      only_keys(cs[i], p, {"jump", "rate"});
      channels.push_back({matrix_from_json(required(cs[i], p, "jump"), d, p + ".jump"),
                          number(required(cs[i], p, "rate"), p + ".rate")});
    }
  }
  try {
    return GKSLGenerator(std::move(h), std::move(channels));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

json to_json(const DensityMatrix& rho) { return {{"dim", rho.dim()}, {"rho", to_json(rho.matrix())}}; }

DensityMatrix state_from_json(const json& j, const std::string& path) {
  only_keys(j, path, {"dim", "rho"});
  const int d = read_dim(j, path);
  CMatrix m = matrix_from_json(required(j, path, "rho"), d, path + ".rho");
  try {
    return DensityMatrix(std::move(m));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

json to_json(const BathSpec& bath) {
  json j = {{"eta", bath.eta}, {"chi", bath.chi}, {"omega_c", bath.omega_c}};
  if (bath.zero_temperature())
    j["beta"] = "inf";
  else
    j["beta"] = bath.beta;
  return j;
}

BathSpec bath_from_json(const json& j, const std::string& path) {
  only_keys(j, path, {"eta", "chi", "omega_c", "beta"});
  BathSpec b{number(required(j, path, "eta"), path + ".eta"), number(required(j, path, "chi"), path + ".chi"),
             j.contains("omega_c") ? number(j.at("omega_c"), path + ".omega_c") : 1.0};
  if (j.contains("beta")) {
    const auto& beta = j.at("beta");
    if (beta.is_string() && beta.get<std::string>() == "inf")
      b.beta = std::numeric_limits<double>::infinity();
    else
      b.beta = number(beta, path + ".beta");
  }
  try {
    b.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return b;
}

json to_json(const FitResult& fit) {
  json j = {{"alpha", fit.alpha.value()},
            {"lambda", fit.lambda},
            {"window", {{"t_start", fit.window.t_start}, {"t_end", fit.window.t_end}}},
            {"rmse", fit.rmse},
            {"converged", fit.converged},
            {"evaluations", fit.evaluations}};
  if (fit.u_inf) j["u_inf"] = *fit.u_inf;
  return j;
}

std::string format_double(double x) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int n = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &n, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < n; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns, const std::vector<std::string>& comments)
    : out_(out), columns_(std::move(columns)) {
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

std::vector<std::string> series_columns() { return {"t", "re_u", "im_u", "abs_u"}; }

void write_series(CsvWriter& csv, const CoherenceSeries& series) {
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const auto u = series.values[k];
    csv.row({series.times[k], u.real(), u.imag(), std::abs(u)});
  }
}

std::vector<std::string> trajectory_columns(const FracTrajectory& traj) {
  if (traj.is_scalar()) return series_columns();
  std::vector<std::string> cols{"t"};
  const auto d = traj.states.front().rows();
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const std::string idx = std::to_string(r) + std::to_string(c);
      cols.push_back("re_" + idx);
      cols.push_back("im_" + idx);
    }
  return cols;
}

void write_trajectory(CsvWriter& csv, const FracTrajectory& traj) {
  for (std::size_t n = 0; n < traj.size(); ++n) {
    if (traj.is_scalar()) {
      csv.row({traj.time(n), traj.scalar[n], 0.0, std::abs(traj.scalar[n])});
      continue;
    }
    std::vector<double> v{traj.time(n)};
    const auto& m = traj.states[n];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        v.push_back(m(r, c).real());
        v.push_back(m(r, c).imag());
      }
    csv.row(v);
  }
}

}  // namespace fracdyn::io
