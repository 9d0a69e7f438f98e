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

// Acceptance driver: `acceptance <id|all> [--cli PATH] [--configs DIR]`.
// Prints one PASS/FAIL line per criterion; the exit status is nonzero if any
// requested criterion fails. Wall-clock budgets are part of each criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracdyn/fitting.hpp"
#include "fracdyn/fracsolve.hpp"
#include "fracdyn/kernels.hpp"
#include "fracdyn/lindblad.hpp"
#include "fracdyn/specfun.hpp"
#include "fracdyn/spinboson.hpp"
#include "fracdyn/subordination.hpp"
#include "quad.hpp"

using namespace fracdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Options {
  std::string cli;
  fs::path configs;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

double max_abs_dev(const CoherenceSeries& a, const std::vector<double>& model) {
  double m = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) m = std::max(m, std::abs(model[k] - std::abs(a.values[k])));
  return m;
}

// ---------------------------------------------------------------------------

Outcome c01_special_functions(const Options&) {
  double e1 = 0.0, e2 = 0.0;
  for (double z : linspace(-30.0, 5.0, 3501))
    e1 = std::max(e1, std::abs(mittag_leffler(FractionalOrder(1.0), z) - std::exp(z)));
  for (double x : linspace(0.0, 5.0, 501))
    e2 = std::max(e2, std::abs(mittag_leffler(FractionalOrder(0.5), -x) - std::exp(x * x) * std::erfc(x)));
  const double e3 = std::abs(gamma_fn(0.5) - std::sqrt(std::numbers::pi));
  return {e1 <= 1e-12 && e2 <= 1e-10 && e3 <= 1e-13,
          fmt("max|E_1(z)-e^z| = %.2e, max|E_1/2(-x)-e^{x^2}erfc(x)| = %.2e, |Gamma(1/2)-sqrt(pi)| = %.2e", e1, e2, e3)};
}

Outcome c02_subordination_identity(const Options&) {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7, 0.9})
    for (double lambda : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 5.0}) {
        // The dephasing coherence decays as exp(-2 gamma u) along operational time.
        const auto gen = dephasing_qubit(0.0, lambda / 2.0);
        const auto rho = subordinated_propagate(gen, FractionalOrder(a), t, qubit_state_with_coherence(0.5));
        const double mixed = std::real(qubit_coherence(rho.matrix())) / 0.5;
        const double ml = mittag_leffler(FractionalOrder(a), -lambda * std::pow(t, a));
        worst = std::max(worst, std::abs(mixed - ml));
      }
  return {worst <= 1e-6, fmt("max |int f e^{-lambda u} du - E_alpha(-lambda t^alpha)| = %.2e over 36 cases", worst)};
}

Outcome c03_density(const Options&) {
  double min_f = INFINITY, worst = 0.0;
  for (double a : {0.3, 0.5, 0.7, 0.9})
    for (double t : {0.5, 1.0, 5.0}) {
      const OperationalClock clock(FractionalOrder(a), t);
      const double scale = std::pow(t, a);
      for (double z : linspace(0.0, 30.0, 3001)) min_f = std::min(min_f, levy_density(clock, z * scale));
      const auto f = [&](double u) { return levy_density(clock, u); };
      const double mass = quad::finite(f, 0.0, scale, 1e-13) + quad::upper(f, scale, 1e-13);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
  return {min_f >= 0.0 && worst <= 1e-6, fmt("min f = %.3e, max |int f du - 1| = %.2e", min_f, worst)};
}

double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome c04_solver_order(const Options&) {
  bool pass = true;
  std::string detail;
  for (double a : {0.4, 0.6, 0.8}) {
    const FractionalOrder alpha(a);
    const double ref = mittag_leffler(alpha, -1.0);
    std::vector<double> hs, dff, printed;
    for (int n : {50, 100, 200}) {
      hs.push_back(1.0 / n);
      dff.push_back(std::abs(fam_solve(1.0, alpha, 1.0 / n, n, 1.0).scalar.back() - ref));
      printed.push_back(std::abs(fam_solve(1.0, alpha, 1.0 / n, n, 1.0, WeightScheme::PaperPrinted).scalar.back() - ref));
    }
    const double p = fitted_order(hs, dff), pp = fitted_order(hs, printed);
    pass = pass && p >= 1.0 + a - 0.25;
    detail += fmt("%salpha=%.1f: p=%.3f (need >= %.2f), PaperPrinted p=%.3f", detail.empty() ? "" : "; ", a, p,
                  1.0 + a - 0.25, pp);
  }
  return {pass, detail};
}

Outcome c05_cptp(const Options&) {
  const auto gen = dephasing_qubit(1.0, 0.5);
  double min_eig = INFINITY, defect = 0.0;
  for (double t : {0.1, 1.0, 10.0}) {
    const auto r = map_diagnostics(subordinated_map(gen, FractionalOrder(0.5), t), 2);
    min_eig = std::min(min_eig, r.min_choi_eig);
    defect = std::max(defect, r.trace_defect);
  }
  return {min_eig >= -1e-8 && defect <= 1e-10, fmt("min Choi eigenvalue %.3e, max trace defect %.2e", min_eig, defect)};
}

Outcome c06_divisibility(const Options&) {
  const double d = divisibility_defect(FractionalOrder(0.5), 1.0, 2.0, 1.0);
  const double d1 = divisibility_defect(FractionalOrder(1.0), 1.0, 2.0, 1.0);
  return {std::abs(d - 0.153) <= 0.002 && d1 <= 1e-12, fmt("defect(0.5) = %.6f, defect(1) = %.2e", d, d1)};
}

Outcome c07_power_law(const Options&) {
  const double t = 1e4;
  const double v = mittag_leffler(FractionalOrder(0.5), -std::sqrt(t)) * std::sqrt(t) * gamma_fn(0.5);
  return {std::abs(v - 1.0) <= 0.02, fmt("E_1/2(-t^1/2) sqrt(t) Gamma(1/2) = %.6f at t = 1e4", v)};
}

Outcome c08_table1(const Options&) {
  bool pass = true;
  std::string detail = "short-time ratios";
  for (double chi : {0.5, 1.0, 1.5}) {
    const BathSpec b{1.0, chi, 1.0};
    const double t = 1e-2;
    const double r = dephasing_Q(b, t) / (0.5 * std::tgamma(chi + 1.0) * t * t);
    pass = pass && r >= 0.98 && r <= 1.02;
    detail += fmt(" %.4f", r);
  }
  const BathSpec ohmic{1.0, 1.0, 1.0};
  double lo = INFINITY, hi = -INFINITY;
  for (double lt = 2.0; lt <= 3.0 + 1e-12; lt += 0.125) {
    const double t = std::pow(10.0, lt), f = 1.01;
    const double s = (dephasing_Q(ohmic, t / f) - dephasing_Q(ohmic, t * f)) / std::log(f * f);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  pass = pass && lo >= -1.05 && hi <= -0.95;
  const double u = std::exp(-dephasing_Q({1.0, 1.5, 1.0}, 1e3));
  const double plateau = std::exp(-(2.0 / std::numbers::pi) * std::tgamma(0.5));
  pass = pass && std::abs(u / plateau - 1.0) <= 0.02;
  detail += fmt(" (need [0.98, 1.02]); Ohmic slope in [%.4f, %.4f] (need [-1.05, -0.95]); |u(1e3)|/e^{-Q_inf} - 1 = %.4f",
                lo, hi, u / plateau - 1.0);
  return {pass, detail};
}

Outcome c09_tcl(const Options&) {
  const auto t = linspace(0.0, 100.0, 1001);
  double worst = 0.0;
  for (double chi : {0.5, 1.0, 1.5}) {
    const BathSpec b{1.0, chi, 1.0};
    const auto ex = exact_coherence(b, 0.0, t);
    const auto tcl = tcl_coherence(b, 0.0, t);
    for (std::size_t k = 0; k < t.size(); ++k) worst = std::max(worst, std::abs(tcl.values[k] - ex.values[k]));
  }
  return {worst <= 1e-6, fmt("max |u_tcl - u_exact| = %.2e on t in [0, 100]", worst)};
}

Outcome c10_markov(const Options&) {
  const BathSpec b{1.0, 1.0, 1.0};
  const auto t = linspace(0.0, 200.0, 1001);
  const auto ex = exact_coherence(b, 0.0, t);
  const double gamma = markov_fit_rate(ex, {2.0, 60.0});
  const auto mk = markov_coherence(gamma, 0.0, t);
  std::vector<double> m;
  for (const auto& v : mk.values) m.push_back(std::abs(v));
  const double dev = max_abs_dev(ex, m);
  return {dev > 0.05, fmt("gamma = %.5f, max deviation %.4f (need > 0.05)", gamma, dev)};
}

double fit_deviation(const CoherenceSeries& ex, const FitResult& r) {
  std::vector<double> m;
  for (double t : ex.times) m.push_back(fractional_model(r.alpha, r.lambda, t, r.u_inf));
  return max_abs_dev(ex, m);
}

Outcome c11_fit(const Options&) {
  const auto t = linspace(0.0, 100.0, 501);
  const BathSpec sub{1.0, 0.5, 1.0};
  const auto ex = exact_coherence(sub, 0.0, t);
  const auto r = fit_fractional(ex, {2.0, 60.0});
  const double dev = fit_deviation(ex, r);
  bool pass = dev < 0.02 && r.alpha.value() > 0.5 && r.alpha.value() < 1.0;
  std::string detail = fmt("chi=0.5: alpha=%.4f lambda=%.4f dev=%.4f (need < 0.02)", r.alpha.value(), r.lambda, dev);
  for (double chi : {1.2, 1.5, 1.8}) {
    const BathSpec b{1.0, chi, 1.0};
    const auto e = exact_coherence(b, 0.0, t);
    const double plain = fit_deviation(e, fit_fractional(e, {2.0, 20.0}));
    const double anchored = fit_deviation(e, fit_fractional(e, {2.0, 20.0}, Plateau::automatic(b)));
    pass = pass && plain > 0.05 && anchored <= 0.05;
    detail += fmt("; chi=%.1f: plain %.4f (need > 0.05), anchored %.4f (need <= 0.05)", chi, plain, anchored);
  }
  return {pass, detail};
}

Outcome c12_estimators(const Options&) {
  const auto ex = exact_coherence({1.0, 0.5, 1.0}, 0.0, linspace(5.0, 500.0, 496));
  const double a = local_order_estimate(ex);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ua(0.1, 1.0), ul(-2.0, 1.0), ut(0.1, 20.0);
  double worst = 0.0;
  int n = 0;
  while (n < 200) {
    const FractionalOrder al(ua(rng));
    const double lambda = std::pow(10.0, ul(rng)), t = ut(rng);
    const double u = fractional_model(al, lambda, t);
    if (!(u > 1e-12 && u < 1.0 - 1e-9)) continue;
    worst = std::max(worst, std::abs(lambda_from_point(al, t, u) / lambda - 1.0));
    ++n;
  }
  return {std::abs(a - 0.5) <= 0.1 && worst <= 1e-8,
          fmt("alpha_loc = %.4f (need 0.5 +- 0.1), lambda round-trip max rel error %.2e over 200 draws", a, worst)};
}

Outcome c13_monte_carlo(const Options&) {
  const auto gen = dephasing_qubit(1.0, 0.5);
  const FractionalOrder alpha(0.5);
  const double t = 1.0;
  const auto rho0 = qubit_state_with_coherence(0.5);
  const CMatrix sx = pauli_x();
  const double quad = (sx * subordinated_propagate(gen, alpha, t, rho0).matrix()).trace().real();
  const std::int64_t m = 25000;
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  double s1 = 0.0, s4 = 0.0, worst_z = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto a = trajectory_estimate(gen, alpha, t, rho0, sx, m, seed, threads);
    const auto b = trajectory_estimate(gen, alpha, t, rho0, sx, 4 * m, seed + 100, threads);
    s1 += a.std_error;
    s4 += b.std_error;
    worst_z = std::max({worst_z, std::abs(a.mean - quad) / a.std_error, std::abs(b.mean - quad) / b.std_error});
  }
  const double ratio = s4 / s1;
  return {ratio >= 0.42 && ratio <= 0.58 && worst_z <= 4.0,
          fmt("stderr(4M)/stderr(M) = %.4f (need [0.42, 0.58]), max |mean - quad|/stderr = %.2f", ratio, worst_z)};
}

Outcome c14_truncation(const Options&) {
  int fail_neg = 0, fail_pos = 0, total = 0;
  double worst_ratio = 0.0;
  for (double a : {0.3, 0.5, 0.8})
    for (int n = 0; n <= 20; ++n)
      for (double z : linspace(-2.0, 2.0, 33)) {
        const auto p = ml_partial_sum(FractionalOrder(a), z, n);
        const double exact = mittag_leffler(FractionalOrder(a), z);
        const double err = std::abs(p.value - exact);
        // Allowance: a few ulp of E for the floating-point evaluation itself.
        const bool ok = err <= p.bound + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(exact);
        ++total;
        if (!ok) {
          (z > 0 ? fail_pos : fail_neg)++;
          worst_ratio = std::max(worst_ratio, err / p.bound);
        }
      }
  return {fail_neg + fail_pos == 0,
          fmt("%d of %d grid points violate the bound (%d with z <= 0, %d with z > 0; worst error/bound %.3f)",
              fail_neg + fail_pos, total, fail_neg, fail_pos, worst_ratio)};
}

Outcome c15_soe(const Options&) {
  using clock = std::chrono::steady_clock;
  const auto gen = dephasing_qubit(1.0, 0.5);
  const FractionalOrder alpha(0.5);
  const int n = 20000;
  const double h = 1e-3;
  const auto rho0 = qubit_state_with_coherence(0.5);
  const auto t0 = clock::now();
  const auto dense = fam_solve(gen, alpha, h, n, rho0);
  const auto t1 = clock::now();
  const auto soe = soe_compress(alpha, h, n * h, 1e-9);
  const auto fast = fam_solve_soe(gen, alpha, h, n, rho0, soe);
  const auto t2 = clock::now();
  double diff = 0.0;
  for (int k = 0; k <= n; ++k) diff = std::max(diff, (dense.states[k] - fast.states[k]).norm());
  const double td = std::chrono::duration<double>(t1 - t0).count(), ts = std::chrono::duration<double>(t2 - t1).count();
  return {diff <= 1e-5 && td / ts >= 5.0,
          fmt("max |dense - soe| = %.2e, %zu terms, dense %.2f s, soe %.3f s, speedup %.1fx", diff, soe.terms.size(), td,
              ts, td / ts)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome c16_determinism(const Options& opt) {
  if (opt.cli.empty()) return {false, "no --cli given"};
  const fs::path dir = fs::temp_directory_path() / ("fracdyn_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool pass = true;
  std::string detail;
  const std::vector<std::pair<std::string, std::string>> runs{{"subordinate", "subordinate_dephasing.json"},
                                                             {"solve", "solve_generator.json"}};
  for (const auto& [command, config] : runs) {
    std::vector<std::string> outputs;
    for (const char* extra : {"--seed 42 --threads 1", "--seed 42 --threads 1", "--seed 42 --threads 4"}) {
      const auto out = dir / (command + std::to_string(outputs.size()) + ".csv");
      const std::string cmd = opt.cli + " " + command + " --config '" + (opt.configs / config).string() + "' --out '" +
                              out.string() + "' " + extra;
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, command + " run failed: " + cmd};
      outputs.push_back(slurp(out));
    }
    const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2] && !outputs[0].empty();
    pass = pass && same;
    detail += fmt("%s%s: %s (%zu bytes)", detail.empty() ? "" : "; ", command.c_str(),
                  same ? "identical across 3 runs (threads 1, 1, 4)" : "outputs differ", outputs[0].size());
  }
  fs::remove_all(dir);
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  Outcome (*run)(const Options&);
};

const Criterion kCriteria[] = {
    {1, "special-function accuracy", 1, c01_special_functions},
    {2, "subordination identity", 10, c02_subordination_identity},
    {3, "inverse-stable density", 5, c03_density},
    {4, "solver order", 10, c04_solver_order},
    {5, "CPTP along fractional flow", 5, c05_cptp},
    {6, "non-divisibility witness", 1, c06_divisibility},
    {7, "power-law tail", 1, c07_power_law},
    {8, "asymptotic regimes", 60, c08_table1},
    {9, "TCL identity", 60, c09_tcl},
    {10, "Markovian inadequacy", 10, c10_markov},
    {11, "fractional fit quality", 300, c11_fit},
    {12, "optimization-free estimators", 10, c12_estimators},
    {13, "Monte-Carlo scaling", 60, c13_monte_carlo},
    {14, "ML truncation bound", 5, c14_truncation},
    {15, "SOE speedup and fidelity", 60, c15_soe},
    {16, "determinism", 30, c16_determinism},
};

bool run_one(const Criterion& c, const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run(opt);
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < c.budget_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %02d %s %s: %s [%.2f s of %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
              secs, c.budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc)
      opt.cli = argv[++i];
    else if (a == "--configs" && i + 1 < argc)
      opt.configs = argv[++i];
    else
      which = a;
  }
  bool ok = true;
  bool found = false;
  for (const auto& c : kCriteria) {
    if (which != "all" && std::stoi(which) != c.id) continue;
    found = true;
    ok = run_one(c, opt) && ok;
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion %s\n", which.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
