// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "pacslab/cli/scenarios.hpp"
#include "pacslab/downconversion.hpp"
#include "pacslab/identities.hpp"
#include "pacslab/jaynes_cummings.hpp"
#include "pacslab/pacs.hpp"
#include "pacslab/special.hpp"

namespace {

using namespace pacslab;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    passed = passed && ok;
    notes.push_back((ok ? "" : "FAILED ") + what);
  }
};

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const std::vector<double> kAlphas = {0.5, 0.8, 1.5};
const std::vector<double> kRs = {0.1, 0.5, 1.0, 2.0};

Outcome ideal_pacs() {
  Outcome o;
  double worst = 0.0;
  for (double a : kAlphas)
    for (double r : kRs) {
      const TwoModeState s = dc_evolve_closed({a, r, 0.0, 0, 0});
      for (unsigned m = 0; m <= 4; ++m) {
        const Projection pr = project_b(s, m);
        const FockVector ideal =
            pacs_state({conditioned_amplitude(a, r), m}, s.dim_a(), Normalization::normalized);
        worst = std::max(worst, 1.0 - fidelity(pr.state, ideal));
      }
    }
  o.check(worst <= 1e-10, "max 1-F = " + sci(worst) + " (limit 1e-10)");
  return o;
}

Outcome factorization() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double a : kAlphas)
    for (double r : kRs)
      for (double phi : {0.0, std::numbers::pi / 3.0}) {
        const DcParams p{a, r, phi, 0, 0};
        worst = std::max(worst, 1.0 - fidelity(dc_evolve_closed(p), dc_evolve_numeric(p)));
      }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(worst <= 1e-8, "max 1-F = " + sci(worst) + " (limit 1e-8)");
  o.check(secs < 60.0, "runtime " + sci(secs) + " s (limit 60 s)");
  return o;
}

Outcome spacs_overlap() {
  Outcome o;
  double worst = 0.0;
  for (double a : kAlphas)
    for (double r : kRs) worst = std::max(worst, std::abs(spacs_overlap_closed(a, r) - spacs_overlap_numeric(a, r)));
  o.check(worst <= 1e-8, "closed vs brute force max |diff| = " + sci(worst) + " (limit 1e-8)");
  o.check(spacs_overlap_closed(0.8, 0.0) == 1.0, "r = 0 gives exactly 1");
  const double sat = spacs_overlap_saturation(0.8);
  o.check(std::abs(spacs_overlap_closed(0.8, 20.0) - sat) <= 1e-6,
          "r = 20 within 1e-6 of saturation " + sci(sat));
  o.check(std::abs(sat - 0.321519) <= 1e-6, "saturation(0.8) = 0.321519");
  return o;
}

Outcome p_m_checks() {
  Outcome o;
  double worst = 0.0;
  for (double a : kAlphas)
    for (double r : kRs) {
      const TwoModeState s = dc_evolve_numeric({a, r, 0.0, 0, 0});
      for (unsigned m = 0; m <= 6; ++m)
        worst = std::max(worst, std::abs(p_m(a, r, m) - project_b(s, m).probability));
    }
  o.check(worst <= 1e-8, "P_m vs projection max |diff| = " + sci(worst) + " (limit 1e-8)");
  double sum = 0.0;
  for (unsigned m = 0; m <= 60; ++m) sum += p_m(0.8, 1.0, m);
  o.check(std::abs(sum - 1.0) <= 1e-10, "|sum_{m<=60} P_m - 1| = " + sci(std::abs(sum - 1.0)) + " (limit 1e-10)");
  const double p1 = p_m(0.8, 1.0, 1);
  char buf[80];
  std::snprintf(buf, sizeof buf, "P_1(0.8, 1) = %.7f vs 0.213212 +- 1e-5", p1);
  o.check(std::abs(p1 - 0.213212) <= 1e-5, buf);
  return o;
}

Outcome jc_series() {
  Outcome o;
  double worst = 0.0;
  for (double bt : {0.1, 1.0, 5.0}) {
    const JcParams p{0.8, bt, 0};
    const JointAtomFieldState ex = jc_evolve_exact(p);
    const JointAtomFieldState se = jc_evolve_series(p, 40);
    const cplx ov = inner_product(ex.field_e, se.field_e) + inner_product(ex.field_g, se.field_g);
    worst = std::max(worst, 1.0 - std::norm(ov) / (ex.norm_sq() * se.norm_sq()));
  }
  o.check(worst <= 1e-12, "series vs exact max 1-F = " + sci(worst) + " (limit 1e-12)");
  const double bt = 0.01;
  const JointAtomFieldState ex = jc_evolve_exact({0.8, bt, 0});
  const JointAtomFieldState st = jc_short_time({0.8, bt, 0});
  const double dev = std::sqrt((ex.field_e.amp() - st.field_e.amp()).squaredNorm() +
                               (ex.field_g.amp() - st.field_g.amp()).squaredNorm());
  o.check(dev <= 5.0 * bt * bt, "short-time deviation " + sci(dev) + " (limit " + sci(5.0 * bt * bt) + ")");
  return o;
}

Outcome short_time_anchors() {
  Outcome o;
  const std::vector<unsigned> ms = {1, 2, 3};
  const std::vector<double> origin = {1e-6};
  const auto c0 = jc_overlap_curve(0.8, origin, ms);
  const double expect[3] = {1.0, 0.73980, 0.39261};
  for (int i = 0; i < 3; ++i) {
    const double v = *c0[i].overlap_modulus;
    o.check(std::abs(v - expect[i]) <= 1e-4,
            "m=" + std::to_string(i + 1) + " modulus " + std::to_string(v));
  }
  const std::vector<double> near = {1e-3, 0.05, 0.1, 0.2};
  bool ordered = true;
  const auto cn = jc_overlap_curve(0.8, near, ms);
  for (std::size_t g = 0; g < near.size(); ++g)
    ordered = ordered && *cn[3 * g].overlap_modulus > *cn[3 * g + 1].overlap_modulus &&
              *cn[3 * g + 1].overlap_modulus > *cn[3 * g + 2].overlap_modulus;
  o.check(ordered, "near-origin ordering m=1 > m=2 > m=3");
  cli::RunConfig cfg;
  cfg.scenario = cli::Scenario::jc_curve;
  cfg.m_list = ms;
  const cli::RunResult res = cli::run_scenario(cfg);
  o.check(res.records.size() == 61 * 3, "jc-curve full grid emitted " + std::to_string(res.records.size()) + " rows");
  return o;
}

Outcome mpacs_reconstruction() {
  Outcome o;
  const MpacsExpansion ex = mpacs_expansion({0.8, 0.5, 0}, 20);
  o.check(ex.matching_fidelity >= 1.0 - 1e-8, "convention " + std::string(to_string(ex.matching)) +
                                                  ", 1-F = " + sci(1.0 - ex.matching_fidelity) + " (limit 1e-8)");
  return o;
}

Outcome seed_round_trip() {
  Outcome o;
  const cplx seed = seed_amplitude(0.8, 1.0);
  o.check(std::abs(seed.real() - 1.2344646) <= 1e-7, "seed amplitude " + std::to_string(seed.real()));
  const TwoModeState s = dc_evolve_closed({seed, 1.0, 0.0, 0, 0});
  const Projection pr = project_b(s, 1);
  const double f = fidelity(pr.state, pacs_state({0.8, 1}, s.dim_a(), Normalization::normalized));
  o.check(std::abs(1.0 - f) <= 1e-10, "|1-F| = " + sci(std::abs(1.0 - f)) + " (limit 1e-10)");
  return o;
}

Outcome identity_suite() {
  Outcome o;
  const double e7 = normal_ordering_error(24, 8);
  const double e8 = ladder_reordering_error(24, 6);
  o.check(e7 <= 1e-9, "normal ordering n<=8 scaled error " + sci(e7));
  o.check(e8 <= 1e-9, "ladder reordering k<=6 scaled error " + sci(e8));
  o.check(stirling2(3, 2) == 3 && stirling2(4, 2) == 7, "S(3,2)=3, S(4,2)=7");
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("pacslab_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::string> scenarios = {"jc-curve", "dc-overlap", "dc-pm", "dc-ideal-check", "verify"};
  for (const auto& sc : scenarios)
    for (const std::string fmt : {"csv", "json"}) {
      std::string bytes[2];
      for (int run = 0; run < 2; ++run) {
        const auto file = dir / (sc + "." + fmt + "." + std::to_string(run));
        const std::string cmd = std::string("\"") + PACSLAB_CLI_PATH + "\" --scenario " + sc + " --format " + fmt +
                                " --out \"" + file.string() + "\" > /dev/null";
        const int rc = std::system(cmd.c_str());
        (void)rc;
        bytes[run] = slurp(file);
      }
      o.check(!bytes[0].empty() && bytes[0] == bytes[1], sc + "/" + fmt + " byte-identical");
    }
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"conditioned a-mode equals PACS(alpha/cosh r, m)", ideal_pacs},
      {"disentangled evolution matches direct exponentiation", factorization},
      {"single-photon-added overlap closed form", spacs_overlap},
      {"b-mode photon-count distribution", p_m_checks},
      {"Jaynes-Cummings series and short-time form", jc_series},
      {"overlap curve anchors", short_time_anchors},
      {"multi-photon expansion reconstruction", mpacs_reconstruction},
      {"seed amplitude round trip", seed_round_trip},
      {"operator identities and Stirling values", identity_suite},
      {"byte-identical CLI output", determinism},
  };
  return list;
}

bool run_one(std::size_t n) {
  const Criterion& c = criteria()[n - 1];
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  std::string detail;
  for (std::size_t i = 0; i < o.notes.size(); ++i) detail += (i ? "; " : "") + o.notes[i];
  std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << n << ": " << c.title << " [" << detail << "]\n";
  return o.passed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pacslab acceptance suite"};
  std::size_t only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (std::size_t n = 1; n <= criteria().size(); ++n)
    if (only == 0 || only == n) all = run_one(n) && all;
  return all ? 0 : 1;
}
