#ifndef PACSLAB_CLI_SCENARIOS_HPP
#define PACSLAB_CLI_SCENARIOS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pacslab/cli/config.hpp"
#include "pacslab/cli/records.hpp"
#include "pacslab/downconversion.hpp"
#include "pacslab/identities.hpp"
#include "pacslab/jaynes_cummings.hpp"
#include "pacslab/pacs.hpp"
#include "pacslab/special.hpp"

namespace pacslab::cli {

namespace detail {

inline std::vector<unsigned> m_list_or(const RunConfig& c, std::vector<unsigned> fallback) {
  return c.m_list.empty() ? fallback : c.m_list;
}

inline std::vector<double> r_grid_or(const RunConfig& c, Grid fallback) {
  return (c.r ? *c.r : fallback).values();
}

inline DcParams dc_params(const RunConfig& c, double r) { return {c.alpha, r, c.phi, c.dim_a, c.dim_b}; }

inline Field num(std::string name, double v) { return {std::move(name), v}; }
inline Field integer(std::string name, long long v) { return {std::move(name), v}; }

}  // namespace detail

inline RunResult run_jc_curve(const RunConfig& c) {
  RunResult res;
  std::vector<double> grid;
  std::vector<double> times;
  if (c.beta) {
    times = c.t->values();
    for (double t : times) grid.push_back(*c.beta * t);
  } else {
    grid = (c.beta_t ? *c.beta_t : Grid{0.0, 6.0, 61}).values();
  }
  const auto ms = detail::m_list_or(c, {1, 2, 3});
  const auto curve = jc_overlap_curve(c.alpha, grid, ms, c.dim_a);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const CurvePoint& pt = curve[i];
    ResultRecord rec;
    if (c.beta) rec.params.push_back(detail::num("t", times[i / ms.size()]));
    rec.params.push_back(detail::num("beta_t", pt.beta_t));
    rec.params.push_back(detail::integer("m", pt.m));
    rec.outputs.emplace_back("overlap_modulus", pt.overlap_modulus ? Cell(*pt.overlap_modulus) : Cell());
    rec.outputs.emplace_back("overlap_sq", pt.overlap_sq ? Cell(*pt.overlap_sq) : Cell());
    rec.outputs.push_back(detail::num("ground_prob", pt.ground_prob));
    rec.provenance = Provenance::closed_form;
    res.records.push_back(std::move(rec));
  }
  res.points = grid.size();
  return res;
}

inline RunResult run_dc_overlap(const RunConfig& c) {
  RunResult res;
  for (double r : detail::r_grid_or(c, {0.0, 2.0, 41})) {
    const double closed = spacs_overlap_closed(c.alpha, r);
    const double numeric = spacs_overlap_numeric(c.alpha, r, c.dim_a);
    const double dev = std::abs(closed - numeric);
    res.max_deviation = std::max(res.max_deviation, dev);
    ResultRecord rec;
    rec.params.push_back(detail::num("r", r));
    rec.outputs.push_back(detail::num("overlap_closed", closed));
    rec.outputs.push_back(detail::num("overlap_numeric", numeric));
    rec.outputs.push_back(detail::num("deviation", dev));
    rec.outputs.push_back(detail::num("saturation", spacs_overlap_saturation(c.alpha)));
    rec.provenance = Provenance::both;
    res.records.push_back(std::move(rec));
    ++res.points;
  }
  return res;
}

inline RunResult run_dc_pm(const RunConfig& c) {
  RunResult res;
  const auto ms = detail::m_list_or(c, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  for (double r : detail::r_grid_or(c, {1.0, 1.0, 1})) {
    const DcParams p = detail::dc_params(c, r);
    const TwoModeState numeric = dc_evolve_numeric(p, c.tol);
    double p_sum = 0.0;
    for (std::size_t m = numeric.dim_b(); m-- > 0;) p_sum += p_m(c.alpha, r, static_cast<unsigned>(m));
    for (unsigned m : ms) {
      if (m >= numeric.dim_b()) throw DomainError("dc-pm: m = " + std::to_string(m) + " exceeds dim-b");
      const double closed = p_m(c.alpha, r, m);
      const double oracle = numeric.amp().col(static_cast<Eigen::Index>(m)).squaredNorm();
      const double dev = std::abs(closed - oracle);
      res.max_deviation = std::max(res.max_deviation, dev);
      ResultRecord rec;
      rec.params.push_back(detail::num("r", r));
      rec.params.push_back(detail::integer("m", m));
      rec.outputs.push_back(detail::num("p_m_closed", closed));
      rec.outputs.push_back(detail::num("p_m_numeric", oracle));
      rec.outputs.push_back(detail::num("deviation", dev));
      rec.outputs.push_back(detail::num("p_sum_closed", p_sum));
      rec.outputs.push_back(detail::num("norm_numeric", numeric.norm_sq()));
      rec.provenance = Provenance::both;
      res.records.push_back(std::move(rec));
      ++res.points;
    }
  }
  return res;
}

inline RunResult run_dc_ideal_check(const RunConfig& c) {
  RunResult res;
  const auto ms = detail::m_list_or(c, {0, 1, 2, 3, 4});
  for (double r : detail::r_grid_or(c, {0.5, 2.0, 4})) {
    const DcParams p = detail::dc_params(c, r);
    const TwoModeState closed = dc_evolve_closed(p, Truncation::strict, c.tol);
    const TwoModeState numeric = dc_evolve_numeric(p, c.tol);
    const double factorization = fidelity(closed, numeric);
    res.max_deviation = std::max(res.max_deviation, 1.0 - factorization);
    for (unsigned m : ms) {
      ResultRecord rec;
      rec.params.push_back(detail::num("r", r));
      rec.params.push_back(detail::integer("m", m));
      const cplx at = conditioned_amplitude(c.alpha, r);
      rec.outputs.push_back(detail::num("alpha_tilde_re", at.real()));
      rec.outputs.push_back(detail::num("alpha_tilde_im", at.imag()));
      const double prob = p_m(c.alpha, r, m);
      rec.outputs.push_back(detail::num("probability", prob));
      if (prob < kEmptyBranchProbability) {
        rec.outputs.emplace_back("fidelity_ideal_closed", Cell());
        rec.outputs.emplace_back("fidelity_ideal_numeric", Cell());
      } else {
        const double fc = conditional_mpacs(closed, m, c.alpha, r).ideal_fidelity;
        const double fn = conditional_mpacs(numeric, m, c.alpha, r).ideal_fidelity;
        res.max_deviation = std::max({res.max_deviation, 1.0 - fc, 1.0 - fn});
        rec.outputs.push_back(detail::num("fidelity_ideal_closed", fc));
        rec.outputs.push_back(detail::num("fidelity_ideal_numeric", fn));
      }
      rec.outputs.push_back(detail::num("factorization_fidelity", factorization));
      rec.provenance = Provenance::both;
      res.records.push_back(std::move(rec));
      ++res.points;
    }
  }
  return res;
}

// --- verify ----------------------------------------------------------------

struct Check {
  std::string name;
  double value;
  double limit;
  bool at_least;  ///< pass iff value >= limit; otherwise value <= limit
  bool passed() const { return at_least ? value >= limit : value <= limit; }
};

/// Invariant battery across all modules. `tol` is the evolution tolerance;
/// identity checks keep their fixed bounds.
inline std::vector<Check> verification_checks(double tol) {
  std::vector<Check> out;
  auto upper = [&out](std::string n, double v, double lim) { out.push_back({std::move(n), v, lim, false}); };
  auto lower = [&out](std::string n, double v, double lim) { out.push_back({std::move(n), v, lim, true}); };
  const cplx alpha(0.8, 0.0);

  {  // ladder algebra on the interior block
    const std::size_t dim = 24;
    const Eigen::MatrixXcd a = annihilation_matrix(dim).entries();
    const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    const auto k = static_cast<Eigen::Index>(dim - 1);
    upper("fock.commutator_interior",
          (comm.topLeftCorner(k, k) - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-12);
  }
  upper("fock.coherent_norm", std::abs(coherent_state(alpha, 32).norm_sq() - 1.0), 1e-12);
  {
    const double theta = 0.7;
    const FockVector rotated =
        expm_apply(cplx(0.0, -theta) * number_matrix(32), coherent_state(alpha, 32), tol);
    upper("fock.expm_phase_rotation",
          1.0 - fidelity(rotated, coherent_state(alpha * std::polar(1.0, -theta), 32)), tol);
  }
  upper("special.stirling_normal_ordering", normal_ordering_error(24, 8), 1e-9);
  upper("special.ladder_reordering", ladder_reordering_error(24, 6), 1e-9);
  {
    const double t = 0.5;
    const double x = -0.3;
    double s = 0.0;
    double tm = 1.0;
    for (unsigned m = 0; m <= 200; ++m, tm *= t) s += tm * laguerre(m, x);
    upper("special.laguerre_generating_function", std::abs(s - std::exp(x * t / (t - 1.0)) / (1.0 - t)), 1e-10);
  }
  {
    double worst = 0.0;
    for (double a : {0.0, 0.5, 0.8, 1.5})
      for (unsigned m = 0; m <= 5; ++m)
        worst = std::max(worst, std::abs(pacs_state({a, m}, 64, Normalization::unnormalized).norm_sq() -
                                         pacs_norm_sq({a, m})) / pacs_norm_sq({a, m}));
    upper("pacs.norm_consistency", worst, 1e-9);
  }
  {
    const auto [mean, var] = photon_number_moments(pacs_state({alpha, 1}, 48, Normalization::normalized));
    upper("pacs.spacs_mandel_q", (var - mean) / mean, 0.0 - 1e-12);
  }
  {
    const Eigen::MatrixXcd g = pacs_gram(alpha, 4, 48);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    lower("pacs.gram_min_eigenvalue", es.eigenvalues().minCoeff(), 1e-8);
  }
  {
    double worst = 0.0;
    for (double bt : {0.1, 1.0, 5.0, 20.0})
      worst = std::max(worst, std::abs(jc_evolve_exact({alpha, bt, 0}).norm_sq() - 1.0));
    upper("jc.unitarity", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double bt : {0.1, 1.0, 5.0}) {
      const auto ex = jc_evolve_exact({alpha, bt, 0});
      const auto se = jc_evolve_series({alpha, bt, 0}, 40);
      const cplx ov = inner_product(ex.field_e, se.field_e) + inner_product(ex.field_g, se.field_g);
      worst = std::max(worst, 1.0 - std::norm(ov) / (ex.norm_sq() * se.norm_sq()));
    }
    upper("jc.series_vs_exact", worst, 1e-12);
  }
  {
    const std::vector<double> grid = {1e-6};
    const std::vector<unsigned> ms = {1, 2, 3};
    const auto curve = jc_overlap_curve(alpha, grid, ms);
    upper("jc.short_time_overlap_m1", std::abs(*curve[0].overlap_modulus - 1.0), 1e-4);
    upper("jc.short_time_overlap_m2", std::abs(*curve[1].overlap_modulus - 0.7397947974), 1e-4);
    upper("jc.short_time_overlap_m3", std::abs(*curve[2].overlap_modulus - 0.3926070897), 1e-4);
  }
  {
    const MpacsExpansion ex = mpacs_expansion({alpha, 0.5, 0}, 20);
    lower("jc.mpacs_reconstruction_fidelity", ex.matching_fidelity, 1.0 - 1e-8);
  }
  {
    double worst_fact = 0.0;
    double worst_ideal = 0.0;
    double worst_pm = 0.0;
    for (double r : {0.5, 1.0}) {
      const DcParams p{alpha, r, std::numbers::pi / 3.0, 0, 0};
      const TwoModeState closed = dc_evolve_closed(p, Truncation::strict, tol);
      const TwoModeState numeric = dc_evolve_numeric(p, tol);
      worst_fact = std::max(worst_fact, 1.0 - fidelity(closed, numeric));
      for (unsigned m = 0; m <= 4; ++m) {
        worst_ideal = std::max(worst_ideal, 1.0 - conditional_mpacs(closed, m, alpha, r).ideal_fidelity);
        worst_pm = std::max(worst_pm, std::abs(p_m(alpha, r, m) - numeric.amp().col(m).squaredNorm()));
      }
    }
    upper("dc.factorization", worst_fact, 1e-8);
    upper("dc.ideal_pacs", worst_ideal, 1e-10);
    upper("dc.p_m_vs_projection", worst_pm, 1e-8);
  }
  {
    double s = 0.0;
    for (unsigned m = 0; m <= 60; ++m) s += p_m(alpha, 1.0, m);
    upper("dc.p_m_closure", std::abs(s - 1.0), 1e-10);
  }
  {
    double worst = 0.0;
    for (double r : {0.1, 0.5, 1.0, 2.0})
      worst = std::max(worst, std::abs(spacs_overlap_closed(alpha, r) - spacs_overlap_numeric(alpha, r)));
    upper("dc.spacs_overlap_closed_vs_bruteforce", worst, 1e-8);
    upper("dc.spacs_overlap_saturation",
          std::abs(spacs_overlap_closed(alpha, 30.0) - spacs_overlap_saturation(alpha)), 1e-6);
  }
  {
    const double r = 1.0;
    const cplx seed = seed_amplitude(alpha, r);
    const TwoModeState s = dc_evolve_closed({seed, r, 0.0, 0, 0}, Truncation::strict, tol);
    const FockVector target = pacs_state({alpha, 1}, s.dim_a(), Normalization::normalized);
    upper("dc.seed_round_trip", 1.0 - fidelity(project_b(s, 1).state, target), 1e-10);
  }
  return out;
}

inline RunResult run_verify(const RunConfig& c) {
  RunResult res;
  for (const Check& chk : verification_checks(c.tol)) {
    ResultRecord rec;
    rec.params.emplace_back("check", chk.name);
    rec.outputs.push_back(detail::num("value", chk.value));
    rec.outputs.push_back(detail::num("limit", chk.limit));
    rec.outputs.emplace_back("bound", std::string(chk.at_least ? "lower" : "upper"));
    rec.outputs.push_back(detail::integer("passed", chk.passed() ? 1 : 0));
    rec.provenance = Provenance::both;
    if (!chk.passed()) res.checks_passed = false;
    if (!chk.at_least) res.max_deviation = std::max(res.max_deviation, chk.value);
    res.records.push_back(std::move(rec));
    ++res.points;
  }
  return res;
}

inline RunResult run_scenario(const RunConfig& c) {
  RunResult res;
  switch (c.scenario) {
    case Scenario::jc_curve: res = run_jc_curve(c); break;
    case Scenario::dc_overlap: res = run_dc_overlap(c); break;
    case Scenario::dc_pm: res = run_dc_pm(c); break;
    case Scenario::dc_ideal_check: res = run_dc_ideal_check(c); break;
    case Scenario::verify: res = run_verify(c); break;
  }
  res.scenario = std::string(to_string(c.scenario));
  res.fingerprint = fingerprint(c);
  return res;
}

inline std::string serialize(const RunResult& res, OutputFormat f) {
  return f == OutputFormat::csv ? to_csv(res) : to_json(res);
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

inline std::string summary_line(const RunResult& res) {
  return "scenario=" + res.scenario + " points=" + std::to_string(res.points) +
         " max_oracle_deviation=" + format_number(res.max_deviation) +
         (res.scenario == "verify" ? std::string(" all_passed=") + (res.checks_passed ? "true" : "false")
                                   : std::string());
}

/// Runs a scenario and writes its records. With an output path the summary
/// goes to `out`; without one the records go to `out` and the summary to
/// `err`. Returns the process exit code.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RunResult res;
  try {
    res = run_scenario(c);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidDimension& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitValidation;
  }
  const std::string payload = serialize(res, c.format);
  if (c.out.empty()) {
    out << payload;
    err << summary_line(res) << "\n";
  } else {
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    if (f) f << payload;
    if (!f) {
      err << "cannot write output file '" << c.out << "'\n";
      return kExitIo;
    }
    out << summary_line(res) << "\n";
  }
  return res.checks_passed ? kExitOk : kExitChecksFailed;
}

/// Full entry point: parse, run, map errors to exit codes.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  for (const auto& a : args) {
    if (a == "-h" || a == "--help") {
      out << usage();
      return kExitOk;
    }
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  return run(cfg, out, err);
}

}  // namespace pacslab::cli

#endif  // PACSLAB_CLI_SCENARIOS_HPP
