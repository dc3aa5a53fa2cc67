// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dirinfo/decomposition.hpp"
#include "dirinfo/design.hpp"
#include "dirinfo/montecarlo.hpp"

using namespace dirinfo;
using cplx = std::complex<double>;

namespace {

const FrequencyGrid kGrid{4096};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

LoopModel loop(TransferFunction p, TransferFunction k) {
  LoopModel m;
  m.plant = std::move(p);
  m.controller = std::move(k);
  return m;
}

TransferFunction plant_with_poles(const std::vector<cplx>& poles) {
  std::vector<double> num(poles.size() + 1, 0.0);
  num.back() = 1.0;
  return {Polynomial(num), Polynomial::from_roots(poles)};
}

double unstable_log_sum(const std::vector<cplx>& poles) {
  double s = 0.0;
  for (const auto& p : poles) s += std::log(std::max(1.0, std::abs(p)));
  return s;
}

// Plants with unstable pole sets and a stabilizing, stable controller each.
std::vector<std::pair<std::vector<cplx>, LoopModel>> unstable_suite() {
  std::vector<std::pair<std::vector<cplx>, LoopModel>> out;
  auto add = [&](std::vector<cplx> poles, TransferFunction k) {
    out.emplace_back(poles, loop(plant_with_poles(poles), std::move(k)));
  };
  add({2.0}, TransferFunction::gain(-2.0));
  add({-3.0}, TransferFunction::gain(3.0));
  add({2.0, -3.0}, TransferFunction::gain(-6.5));
  const TransferFunction p15 = plant_with_poles({1.5, 1.5});
  const std::vector<cplx> targets{0.7, 0.8, 0.9};
  add({1.5, 1.5}, place_poles(p15, targets));
  return out;
}

Outcome identity_suite() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int passed = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const DecompositionReport r = decompose({random_stabilized_loop(seed), kGrid});
    worst = std::max(worst, std::abs(r.residual));
    if (std::abs(r.residual) < 1e-8) ++passed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {passed == 200 && secs < 30.0,
          std::to_string(passed) + "/200 loops, max |residual| " + fmt("%.3g", worst) + ", " +
              fmt("%.1f", secs) + " s (limit 30 s)"};
}

Outcome bode_poles() {
  double worst_unstable = 0.0;
  bool ok = true;
  for (const auto& [poles, m] : unstable_suite()) {
    ok = ok && m.controller.is_stable() && is_stabilizing(m).stabilizing;
    const double control = decompose({m, kGrid}).control_term;
    worst_unstable = std::max(worst_unstable, std::abs(control - unstable_log_sum(poles)));
  }
  double worst_stable = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    worst_stable = std::max(worst_stable, std::abs(decompose({random_stable_plant_loop(seed), kGrid}).control_term));
  }
  ok = ok && worst_unstable < 1e-6 && worst_stable < 1e-8;
  return {ok, "unstable sets max gap " + fmt("%.3g", worst_unstable) + " (tol 1e-6), 50 stable plants max |value| " +
                  fmt("%.3g", worst_stable) + " (tol 1e-8)"};
}

Outcome white_noise_formula() {
  double worst = 0.0;
  int cases = 0;
  for (auto [poles, m] : unstable_suite()) {
    for (double ratio : {0.0, 0.5, 1.0, 3.0, 10.0}) {
      for (double sw : {1.0, 2.5}) {
        m.channel_noise = NoiseSpec::white(sw);
        m.output_disturbance = NoiseSpec::white(ratio * sw);
        const double total = decompose({m, kGrid}).total_rate;
        const double expected = unstable_log_sum(poles) + 0.5 * std::log1p(ratio);
        worst = std::max(worst, std::abs(total - expected));
        ++cases;
      }
    }
  }
  return {worst < 1e-6, std::to_string(cases) + " cases, max gap " + fmt("%.3g", worst) + " (tol 1e-6)"};
}

Outcome controller_independence() {
  LoopModel m = loop(plant_with_poles({2.0}), TransferFunction::gain(-2.0));
  m.output_disturbance = NoiseSpec::colored(1.0, TransferFunction(Polynomial{1.0}, Polynomial{1.0, -0.5}));
  const std::vector<TransferFunction> ks{TransferFunction::gain(-2.0), TransferFunction::gain(-2.5),
                                         TransferFunction::gain(-1.5), TransferFunction::gain(-1.2)};
  const IndependenceReport r = controller_independence_check(m, ks, kGrid);
  return {r.pass && r.max_deviation < 1e-9,
          std::to_string(ks.size()) + " controllers, max deviation " + fmt("%.3g", r.max_deviation) + " (tol 1e-9)"};
}

Outcome entropy_chain() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const LoopModel m = random_stabilized_loop(seed);
    const ClosedLoop cl = close_loop(m);
    const SpectrumSamples sw = noise_psd(m.channel_noise, kGrid);
    const SpectrumSamples sy = output_psd(cl, sw, noise_psd(m.output_disturbance, kGrid));
    const double direct = directed_info_rate({m, kGrid});
    worst = std::max(worst, std::abs(direct - (gaussian_entropy_rate(sy) - gaussian_entropy_rate(sw))));
  }
  return {worst < 1e-10, "200 loops, max gap " + fmt("%.3g", worst) + " (tol 1e-10)"};
}

Outcome monte_carlo() {
  const auto start = std::chrono::steady_clock::now();
  LoopModel stable = loop(plant_with_poles({0.5}), TransferFunction::gain(-0.3));
  const std::vector<std::pair<std::string, LoopModel>> refs{
      {"P=0", loop(TransferFunction::gain(0.0), TransferFunction::gain(0.0))},
      {"stable P", stable},
      {"P=1/(z-2)", loop(plant_with_poles({2.0}), TransferFunction::gain(-2.0))},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, m] : refs) {
    const double analytic = decompose({m, kGrid}).total_rate;
    std::vector<double> rates;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SimulationConfig cfg;
      cfg.model = m;
      cfg.seed = seed;
      rates.push_back(empirical_directed_info(simulate_loop(cfg), WelchParams{}, kGrid).rate);
    }
    std::sort(rates.begin(), rates.end());
    const double med = 0.5 * (rates[4] + rates[5]);
    const double gap = std::abs(med - analytic);
    ok = ok && gap <= 0.03;
    detail += name + " gap " + fmt("%.2e", gap) + ", ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 60.0;
  return {ok, detail + "tol 0.03 nats, " + fmt("%.1f", secs) + " s (limit 60 s)"};
}

Outcome jensen_calibration() {
  auto integral = [](double a) {
    return log_integral(sample_spectrum([a](double w) { return 1.0 - 2.0 * a * std::cos(w) + a * a; }, kGrid));
  };
  const double inside = std::abs(integral(0.5));
  const double outside = std::abs(integral(2.0) - 2.0 * std::numbers::ln2);
  return {inside < 1e-9 && outside < 1e-9,
          "a=0.5 error " + fmt("%.3g", inside) + ", a=2 error " + fmt("%.3g", outside) + " (tol 1e-9)"};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("dirinfo_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path cfg = dir / "loop.json";
  std::ofstream(cfg) << R"({
    "plant": {"num": [0, 1], "den": [1, -2]},
    "controller": {"num": [-2], "den": [1]},
    "channel_noise": {"kind": "white", "variance": 1},
    "output_disturbance": {"kind": "colored", "variance": 1, "shaping": {"num": [1], "den": [1, -0.5]}}
  })";
  std::vector<std::string> outputs;
  int code = 0;
  for (int run = 0; run < 2; ++run) {
    std::ostringstream out, err;
    code |= cli::run_cli({"simulate", cfg.string(), "--seed", "7"}, out, err);
    outputs.push_back(out.str());
  }
  fs::remove_all(dir);
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same && code == 0, std::string(same ? "identical" : "different") + " records (" +
                                 std::to_string(outputs[0].size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 decomposition identity", identity_suite},
      {"2 Bode pole formula", bode_poles},
      {"3 white-noise closed form", white_noise_formula},
      {"4 controller independence", controller_independence},
      {"5 entropy-rate chain", entropy_chain},
      {"6 Monte Carlo agreement", monte_carlo},
      {"7 quadrature calibration", jensen_calibration},
      {"8 simulate determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
