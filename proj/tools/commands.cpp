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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "fracdyn/fitting.hpp"
#include "fracdyn/fracsolve.hpp"
#include "fracdyn/io.hpp"
#include "fracdyn/kernels.hpp"
#include "fracdyn/spinboson.hpp"
#include "fracdyn/subordination.hpp"

#ifndef FRACDYN_VERSION
#define FRACDYN_VERSION "dev"
#endif

namespace fracdyn::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> header(const std::string& command, const RunContext& ctx,
                                 const std::vector<std::string>& columns) {
  std::string schema;
  for (const auto& c : columns) schema += (schema.empty() ? "" : ",") + c;
  return {"fracdyn " FRACDYN_VERSION " " + command, "config sha256 " + ctx.digest,
          "seed " + std::to_string(ctx.seed), "columns " + schema};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix, const std::string& ext) {
  auto p = out;
  p.replace_filename(out.stem().string() + suffix + ext);
  return p;
}

// Emits one CSV to a string so failures never leave partial files behind.
class Table {
 public:
  Table(const std::string& command, const RunContext& ctx, std::vector<std::string> columns,
        std::vector<std::string> extra = {})
      : csv_(buf_, columns, merge(header(command, ctx, columns), extra)) {}

  void row(const std::vector<double>& v) { csv_.row(v); }
  io::CsvWriter& csv() { return csv_; }
  std::string str() const { return buf_.str(); }

 private:
  static std::vector<std::string> merge(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  std::ostringstream buf_;
  io::CsvWriter csv_;
};

std::vector<double> read_grid(const Node& g) {
  g.expect_object({"t_min", "t_max", "n_points", "spacing"});
  const double a = g.number("t_min"), b = g.number("t_max");
  const long long n = g.integer("n_points");
  const std::string spacing = g.choice("spacing", {"linear", "log"}, "linear");
  if (n < 1) throw ConfigError(g.child("n_points"), "must be at least 1");
  if (a < 0.0) throw ConfigError(g.child("t_min"), "must be nonnegative");
  if (n > 1 && !(b > a)) throw ConfigError(g.child("t_max"), "must exceed t_min");
  if (spacing == "log" && !(a > 0.0)) throw ConfigError(g.child("t_min"), "log spacing needs t_min > 0");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double s = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    t[i] = spacing == "log" ? std::exp(std::log(a) + s * (std::log(b) - std::log(a))) : a + s * (b - a);
  }
  if (n > 1) t.back() = b;
  return t;
}

BathSpec read_bath(const Node& n) {
  try {
    return io::bath_from_json(n.raw(), n.path());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

FitWindow read_window(const Node& n) {
  n.expect_object({"t_start", "t_end"});
  FitWindow w{n.number("t_start"), n.number("t_end")};
  if (!(w.t_start > 0.0 && w.t_end > w.t_start)) throw ConfigError(n.path(), "need 0 < t_start < t_end");
  return w;
}

FractionalOrder read_alpha(const Node& root) {
  const double a = root.number("alpha");
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError(root.child("alpha"), "must lie in (0, 1]");
  return FractionalOrder(a);
}

// Physical system: a scalar relaxation mode, the dephasing qubit, or a generator.
struct System {
  bool scalar = false;
  double lambda = 0.0;  // scalar: D^alpha u = -lambda u
  double init = 1.0;
  std::optional<GKSLGenerator> gen;
};

System read_system(const Node& n, bool allow_scalar) {
  if (allow_scalar)
    n.expect_object({"scalar", "dephasing", "generator"});
  else
    n.expect_object({"dephasing", "generator"});
  if (n.raw().size() != 1) throw ConfigError(n.path(), "give exactly one system");
  System s;
  if (n.has("scalar")) {
    const Node c = n.at("scalar");
    c.expect_object({"lambda", "init"});
    s.scalar = true;
    s.lambda = c.number("lambda");
    if (!(s.lambda >= 0.0)) throw ConfigError(c.child("lambda"), "must be nonnegative");
    s.init = c.number("init", 1.0);
  } else if (n.has("dephasing")) {
    const Node c = n.at("dephasing");
    c.expect_object({"epsilon", "gamma"});
    const double g = c.number("gamma");
    if (!(g >= 0.0)) throw ConfigError(c.child("gamma"), "must be nonnegative");
    s.gen = dephasing_qubit(c.number("epsilon", 0.0), g);
  } else {
    try {
      s.gen = io::generator_from_json(n.at("generator").raw(), n.child("generator"));
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }
  return s;
}

DensityMatrix read_state(const Node& root, int dim) {
  if (!root.has("initial_state")) {
    if (dim != 2) throw ConfigError(root.child("initial_state"), "missing (no default beyond qubits)");
    return qubit_state_with_coherence(0.5);  // |+><+|
  }
  const Node n = root.at("initial_state");
  try {
    auto rho = io::state_from_json(n.raw(), n.path());
    if (rho.dim() != dim) throw ConfigError(n.child("dim"), "does not match the generator");
    return rho;
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

CMatrix read_observable(const Node& root, int dim) {
  if (!root.has("observable")) {
    if (dim != 2) throw ConfigError(root.child("observable"), "missing (no default beyond qubits)");
    return pauli_x();
  }
  try {
    return io::matrix_from_json(root.at("observable").raw(), dim, root.child("observable"));
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

double expectation(const CMatrix& o, const CMatrix& rho) { return (o * rho).trace().real(); }

// ---------------------------------------------------------------------------

int cmd_exact(const RunContext& ctx) {
  const Node root(ctx.config, "$");
  root.expect_object({"command", "seed", "baths", "grid", "regime"});
  const auto t = read_grid(root.at("grid"));
  const std::string regime = root.choice("regime", {"short", "long"}, "short");
  std::vector<BathSpec> baths;
  for (const auto& b : root.elements("baths")) baths.push_back(read_bath(b));
  if (baths.empty()) throw ConfigError(root.child("baths"), "empty");

  struct Block {
    std::vector<double> q, qa;
    double amplitude;
  };
  std::vector<Block> blocks;
  std::vector<std::string> notes;
  for (std::size_t i = 0; i < baths.size(); ++i) {
    const auto& b = baths[i];
    const Regime r = regime == "short" ? Regime::ShortTime
                     : b.chi < 1.0     ? Regime::SubOhmic
                     : b.chi == 1.0    ? Regime::Ohmic
                                       : Regime::SuperOhmic;
    Block blk;
    double num = 0.0, den = 0.0;
    for (double x : t) {
      blk.q.push_back(dephasing_Q(b, x));
      blk.qa.push_back(asymptotic_Q(b, x, r));
      num += blk.q.back() * blk.qa.back();
      den += blk.qa.back() * blk.qa.back();
    }
    // One least-squares amplitude per bath rescales the tabulated form.
    blk.amplitude = den > 0.0 ? num / den : 1.0;
    notes.push_back("bath " + std::to_string(i) + " " + io::to_json(b).dump() + " amplitude " +
                    io::format_double(blk.amplitude));
    blocks.push_back(std::move(blk));
  }
  Table tab("exact", ctx, {"bath", "t", "Q", "absu", "Q_asym", "absu_asym"}, notes);
  for (std::size_t i = 0; i < baths.size(); ++i)
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double qa = blocks[i].amplitude * blocks[i].qa[k];
      tab.row({double(i), t[k], blocks[i].q[k], std::exp(-blocks[i].q[k]), qa, std::exp(-qa)});
    }
  write_file(ctx.out, tab.str());
  return 0;
}

int cmd_markov(const RunContext& ctx) {
  const Node root(ctx.config, "$");
  root.expect_object({"command", "seed", "bath", "grid", "window", "epsilon"});
  const BathSpec bath = read_bath(root.at("bath"));
  const auto t = read_grid(root.at("grid"));
  const FitWindow w = read_window(root.at("window"));
  const double eps = root.number("epsilon", 0.0);
  const auto exact = exact_coherence(bath, eps, t);
  double gamma;
  try {
    gamma = markov_fit_rate(exact, {w.t_start, w.t_end});
  } catch (const ValidationError& e) {
    throw ConfigError(root.child("window"), e.what());
  }
  const auto markov = markov_coherence(gamma, eps, t);
  const auto tcl = tcl_coherence(bath, eps, t);
  Table tab("markov", ctx, {"t", "absu_exact", "absu_markov", "absu_tcl", "dev_markov", "dev_tcl"},
            {"gamma " + io::format_double(gamma)});
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double e = std::abs(exact.values[k]), m = std::abs(markov.values[k]), c = std::abs(tcl.values[k]);
    tab.row({t[k], e, m, c, std::abs(m - e), std::abs(c - e)});
  }
  write_file(ctx.out, tab.str());
  return 0;
}

int cmd_fracfit(const RunContext& ctx) {
  const Node root(ctx.config, "$");
  root.expect_object({"command", "seed", "bath", "grid", "window", "plateau", "epsilon"});
  const BathSpec bath = read_bath(root.at("bath"));
  const auto t = read_grid(root.at("grid"));
  const double eps = root.number("epsilon", 0.0);

  FitWindow w;
  if (root.has("window") && root.at("window").raw().is_object()) {
    w = read_window(root.at("window"));
  } else {
    if (root.string("window", "auto") != "auto") throw ConfigError(root.child("window"), "expected an object or \"auto\"");
    w = default_window(bath_correlation_time(bath));
  }

  Plateau plateau;
  if (root.has("plateau") && root.at("plateau").raw().is_number()) {
    const double p = root.number("plateau");
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError(root.child("plateau"), "must lie in [0, 1)");
    plateau = Plateau::fixed(p);
  } else if (root.choice("plateau", {"none", "auto"}, "none") == "auto") {
    plateau = Plateau::automatic(bath);
  }

  const auto exact = exact_coherence(bath, eps, t);
  const FitResult fit = [&] {
    try {
      return fit_fractional(exact, w, plateau);
    } catch (const ValidationError& e) {
      throw ConfigError(root.child("window"), e.what());
    }
  }();

  Table tab("fracfit", ctx, {"t", "absu_exact", "absu_fit", "deviation"});
  double max_dev = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double e = std::abs(exact.values[k]);
    const double m = fractional_model(fit.alpha, fit.lambda, t[k], fit.u_inf);
    max_dev = std::max(max_dev, std::abs(m - e));
    tab.row({t[k], e, m, std::abs(m - e)});
  }
  write_file(ctx.out, tab.str());

  io::json j = io::to_json(fit);
  j["bath"] = io::to_json(bath);
  j["max_deviation"] = max_dev;
  j["config_sha256"] = ctx.digest;
  j["version"] = FRACDYN_VERSION;
  write_file(sibling(ctx.out, "", ".json"), j.dump(2) + "\n");
  return fit.converged ? 0 : 4;
}

int cmd_subordinate(const RunContext& ctx) {
  const Node root(ctx.config, "$");
  root.expect_object({"command", "seed", "alpha", "system", "initial_state", "observable", "times", "samples", "defect"});
  const FractionalOrder alpha = read_alpha(root);
  const System sys = read_system(root.at("system"), false);
  const GKSLGenerator& gen = *sys.gen;
  const DensityMatrix rho0 = read_state(root, gen.dim());
  const CMatrix obs = read_observable(root, gen.dim());
  const auto times = root.numbers("times");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] > 0.0)) throw ConfigError(root.child("times") + "[" + std::to_string(i) + "]", "must be positive");
  std::vector<long long> samples;
  if (root.has("samples"))
    for (const auto& e : root.elements("samples")) {
      if (!e.raw().is_number_integer() || e.raw().get<long long>() < 2) throw ConfigError(e.path(), "expected an integer >= 2");
      samples.push_back(e.raw().get<long long>());
    }
  if (!samples.empty() && alpha.value() >= 1.0) throw ConfigError(root.child("samples"), "sampling needs alpha < 1");

  Table tab("subordinate", ctx, {"t", "mean", "stderr", "M", "seed", "quad", "ml"});
  for (double t : times) {
    const double quad = expectation(obs, subordinated_propagate(gen, alpha, t, rho0).matrix());
    const double ml = expectation(obs, ml_propagate(gen, alpha, t, rho0).matrix());
    if (samples.empty()) tab.row({t, kNaN, kNaN, 0.0, double(ctx.seed), quad, ml});
    for (long long m : samples) {
      const auto est = trajectory_estimate(gen, alpha, t, rho0, obs, m, ctx.seed, ctx.threads);
      tab.row({t, est.mean, est.std_error, double(m), double(ctx.seed), quad, ml});
    }
  }
  write_file(ctx.out, tab.str());

  if (root.has("defect")) {
    const Node d = root.at("defect");
    d.expect_object({"lambda", "pairs"});
    const double lambda = d.positive("lambda");
    Table def("subordinate", ctx, {"t", "tau", "defect"}, {"lambda " + io::format_double(lambda)});
    for (const auto& p : d.elements("pairs")) {
      const auto& r = p.raw();
      if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw ConfigError(p.path(), "expected [t, tau]");
      const double t = r[0].get<double>(), tau = r[1].get<double>();
      if (!(tau > 0.0 && t > tau)) throw ConfigError(p.path(), "need 0 < tau < t");
      def.row({t, tau, divisibility_defect(alpha, lambda, t, tau)});
    }
    write_file(sibling(ctx.out, "_defect", ".csv"), def.str());
  }
  return 0;
}

struct SolveSetup {
  FractionalOrder alpha{1.0};
  System sys;
  std::optional<DensityMatrix> rho0;
  WeightScheme scheme = WeightScheme::StandardDFF;
  std::string history;
  double soe_tol = 1e-9;
};

FracTrajectory run_solver(const SolveSetup& s, double h, int steps) {
  if (s.history == "ml") {
    FracTrajectory tr{s.alpha, h, s.scheme, {}, {}};
    for (int n = 0; n <= steps; ++n) {
      const double t = n * h;
      if (s.sys.scalar)
        tr.scalar.push_back(s.sys.init * mittag_leffler(s.alpha, -s.sys.lambda * std::pow(t, s.alpha.value())));
      else
        tr.states.push_back(ml_propagate(*s.sys.gen, s.alpha, t, *s.rho0).matrix());
    }
    return tr;
  }
  if (s.history == "soe") {
    const SOEKernel soe = soe_compress(s.alpha, h, steps * h, s.soe_tol);
    return s.sys.scalar ? fam_solve_soe(s.sys.lambda, s.alpha, h, steps, s.sys.init, soe, s.scheme)
                        : fam_solve_soe(*s.sys.gen, s.alpha, h, steps, *s.rho0, soe, s.scheme);
  }
  return s.sys.scalar ? fam_solve(s.sys.lambda, s.alpha, h, steps, s.sys.init, s.scheme)
                      : fam_solve(*s.sys.gen, s.alpha, h, steps, *s.rho0, s.scheme);
}

int cmd_solve(const RunContext& ctx) {
  const Node root(ctx.config, "$");
  root.expect_object({"command", "seed", "alpha", "system", "initial_state", "h", "steps", "scheme", "history",
                      "soe_tol", "convergence"});
  SolveSetup s;
  s.alpha = read_alpha(root);
  s.sys = read_system(root.at("system"), true);
  if (!s.sys.scalar) s.rho0 = read_state(root, s.sys.gen->dim());
  s.scheme = root.choice("scheme", {"standard", "paper_printed"}, "standard") == "paper_printed" ? WeightScheme::PaperPrinted
                                                                                 : WeightScheme::StandardDFF;
  s.history = root.choice("history", {"dense", "soe", "ml"}, "dense");
  s.soe_tol = root.positive("soe_tol", 1e-9);
  if (s.history == "soe" && s.scheme != WeightScheme::StandardDFF)
    throw ConfigError(root.child("scheme"), "the compressed history supports only the standard weights");

  if (!root.has("convergence")) {
    const double h = root.positive("h");
    const long long steps = root.integer("steps");
    if (steps < 1 || steps > 10'000'000) throw ConfigError(root.child("steps"), "must lie in [1, 1e7]");
    const auto tr = run_solver(s, h, static_cast<int>(steps));
    Table tab("solve", ctx, io::trajectory_columns(tr));
    io::write_trajectory(tab.csv(), tr);
    write_file(ctx.out, tab.str());
    return 0;
  }

  const Node c = root.at("convergence");
  c.expect_object({"horizon", "h"});
  if (s.history == "ml") throw ConfigError(root.child("history"), "convergence study needs a time-stepping history");
  const double horizon = c.positive("horizon");
  const auto hs = c.numbers("h");
  if (hs.empty()) throw ConfigError(c.child("h"), "empty");
  const cplx ref_scalar =
      s.sys.scalar ? s.sys.init * mittag_leffler(s.alpha, -s.sys.lambda * std::pow(horizon, s.alpha.value())) : 0.0;
  const CMatrix ref = s.sys.scalar ? CMatrix() : ml_propagate(*s.sys.gen, s.alpha, horizon, *s.rho0).matrix();

  Table tab("solve", ctx, {"h", "error", "order"});
  double prev_h = kNaN, prev_e = kNaN;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string p = c.child("h") + "[" + std::to_string(i) + "]";
    const double h = hs[i];
    if (!(h > 0.0)) throw ConfigError(p, "must be positive");
    const double steps = std::round(horizon / h);
    if (steps < 1 || std::abs(steps * h - horizon) > 1e-9 * horizon) throw ConfigError(p, "must divide the horizon");
    const auto tr = run_solver(s, h, static_cast<int>(steps));
    const double err = s.sys.scalar ? std::abs(tr.scalar.back() - ref_scalar) : (tr.states.back() - ref).norm();
    const double order = i == 0 ? kNaN : std::log(prev_e / err) / std::log(prev_h / h);
    tab.row({h, err, order});
    prev_h = h;
    prev_e = err;
  }
  write_file(ctx.out, tab.str());
  return 0;
}

}  // namespace

int run_command(const std::string& command, const RunContext& ctx) {
  static const std::map<std::string, std::function<int(const RunContext&)>> table{
      {"exact", cmd_exact}, {"markov", cmd_markov}, {"fracfit", cmd_fracfit},
      {"subordinate", cmd_subordinate}, {"solve", cmd_solve}};
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("command", "unknown command \"" + command + "\"");
  return it->second(ctx);
}

}  // namespace fracdyn::cli
