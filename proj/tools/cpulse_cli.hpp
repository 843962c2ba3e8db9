#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process; tools/cpulse.cpp only forwards argv.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 verification failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpulse/cpulse.hpp"

namespace cpulse::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kVerify = 3 };

inline constexpr int kVerifyPoints = 501;
inline constexpr double kVerifyGMin = -1.2;
inline constexpr double kVerifyGMax = 0.3;
inline constexpr double kVerifyTolerance = 1e-9;

struct RunConfig {
  std::string subcommand;
  std::string family = "pb1";
  double theta_deg = 90.0;
  std::optional<double> ideal_deg;
  std::optional<double> g_min;
  std::optional<double> g_max;
  int samples = 801;
  double tol = kDefaultTolerance;
  double point = 0.0;
  int order = 2;
  int spin = kDefaultPhaseSpin;
  std::string sign = "+";
  std::string out;
  bool verify = false;
  bool cancel_only = false;

  PhaseBranch branch() const { return sign == "-" ? PhaseBranch::kMinus : PhaseBranch::kPlus; }
  double theta() const { return deg_to_rad(theta_deg); }
  double ideal() const { return deg_to_rad(ideal_deg.value_or(theta_deg)); }
  // Identity-referenced curves default to the suppression window around g=-1.
  double curve_gmin() const { return g_min.value_or(ideal() == 0.0 ? -2.0 : -1.0); }
  double curve_gmax() const { return g_max.value_or(ideal() == 0.0 ? 0.0 : 1.0); }
};

/// Cross-field checks that CLI11 validators cannot express.
inline void validate(const RunConfig& c) {
  if (!(c.theta_deg > 0.0 && c.theta_deg <= 360.0)) throw CLI::ValidationError("--theta", "must lie in (0, 360]");
  if (c.subcommand == "curve") {
    if (!(c.curve_gmin() < c.curve_gmax())) throw CLI::ValidationError("--gmin/--gmax", "need gmin < gmax");
  }
  if (c.subcommand == "thresholds" && !(c.tol > 0.0 && c.tol < 1.0)) {
    throw CLI::ValidationError("--tol", "must lie in (0, 1)");
  }
}

namespace detail {

struct Sinks {
  std::ostream* data;
  std::ostream* summary;
};

inline void add_common(CLI::App* sub, RunConfig& c, bool with_family = true) {
  if (with_family) {
    sub->add_option("--family", c.family, "Sequence family")
        ->check(CLI::IsMember({"simple", "bb1", "nb1", "pb1"}))
        ->capture_default_str();
  }
  sub->add_option("--theta", c.theta_deg, "Target rotation angle in degrees")->capture_default_str();
  sub->add_option("--sign", c.sign, "Branch of the phase formula")
      ->check(CLI::IsMember({"+", "-"}))
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: standard output)");
}

inline double max_equivalence_deviation(const PulseSequence& seq, const IsingSchedule& sched) {
  const Quaternion ideal_q = quat_from_pulse(seq.target_angle, 0.0);
  const Propagator ideal_u = ideal_ising_gate(seq.target_angle);
  const Propagator identity = Propagator::Identity();
  double worst = 0.0;
  for (double g : uniform_grid(kVerifyGMin, kVerifyGMax, kVerifyPoints)) {
    const Quaternion q = net_quaternion(seq, g);
    const Propagator u = schedule_propagator(sched, g);
    worst = std::max(worst, std::abs(propagator_fidelity(u, ideal_u) - quaternion_fidelity(q, ideal_q)));
    worst = std::max(worst, std::abs(propagator_fidelity(u, identity) - quaternion_fidelity(q, kNullQuaternion)));
  }
  return worst;
}

inline int cmd_sequence(const RunConfig& c, Sinks s) {
  write_sequence_dump(*s.data, build(parse_family(c.family), c.theta(), c.branch()));
  return kOk;
}

inline int cmd_curve(const RunConfig& c, Sinks s) {
  const PulseSequence seq = build(parse_family(c.family), c.theta(), c.branch());
  const auto curve = infidelity_curve(seq, c.ideal(), c.curve_gmin(), c.curve_gmax(), c.samples);
  write_curve_csv(*s.data, curve);
  const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end(),
                                            [](const auto& a, const auto& b) { return a.fidelity < b.fidelity; });
  *s.summary << "curve family=" << c.family << " theta_deg=" << format_double(c.theta_deg)
             << " ideal_deg=" << format_double(rad_to_deg(c.ideal())) << " g=[" << format_double(c.curve_gmin())
             << "," << format_double(c.curve_gmax()) << "] samples=" << c.samples
             << " min_F=" << format_double(lo->fidelity) << " max_F=" << format_double(hi->fidelity) << '\n';
  return kOk;
}

inline int cmd_thresholds(const RunConfig& c, Sinks s) {
  Json all = Json::array();
  for (Family f : {Family::kSimple, Family::kBB1, Family::kNB1, Family::kPB1}) {
    all.push_back(to_json(threshold_report(build(f, c.theta(), c.branch()), c.tol)));
  }
  *s.data << all.dump(2) << '\n';
  *s.summary << "thresholds theta_deg=" << c.theta_deg << " tol=" << c.tol
             << " families=4\n";
  return kOk;
}

inline int cmd_compile(const RunConfig& c, Sinks s) {
  const PulseSequence seq = build(parse_family(c.family), c.theta(), c.branch());
  const IsingSchedule sched =
      compile_ising(seq, c.spin, c.cancel_only ? PulseMerge::kCancelOnly : PulseMerge::kCombine);
  *s.data << to_json(sched).dump(2) << '\n';
  *s.summary << "compile family=" << c.family << " total_t_units=" << format_double(sched.total_duration())
             << " items=" << sched.items.size() << '\n';
  if (seq.family != Family::kSimple) {
    const auto odd = nonconforming_pulses(sched, seq.phi1);
    if (!odd.empty()) {
      *s.summary << "note: " << odd.size() << " pulse(s) with flip angle outside {phi1, 2 phi1}\n";
    }
  }
  if (!c.verify) return kOk;
  const double dev = max_equivalence_deviation(seq, sched);
  *s.summary << "verify g_points=" << kVerifyPoints << " g=[" << kVerifyGMin << "," << kVerifyGMax
             << "] max_deviation=" << format_double(dev) << '\n';
  return dev < kVerifyTolerance ? kOk : kVerify;
}

inline int cmd_expand(const RunConfig& c, Sinks s) {
  const PulseSequence seq = build(parse_family(c.family), c.theta(), c.branch());
  write_expansion_table(*s.data, error_expansion(seq, c.theta(), c.point, c.order));
  return kOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Composite rotation workbench: sequences, fidelity curves, thresholds, Ising schedules"};
  app.require_subcommand(1);

  auto* seq = app.add_subcommand("sequence", "Dump a composite sequence as angle/phase lines");
  detail::add_common(seq, c);

  auto* curve = app.add_subcommand("curve", "Fidelity against an ideal rotation as a function of g (CSV)");
  detail::add_common(curve, c);
  curve->add_option("--ideal", c.ideal_deg, "Reference rotation in degrees (0 = identity; default theta)");
  curve->add_option("--gmin", c.g_min, "Lower end of the g range");
  curve->add_option("--gmax", c.g_max, "Upper end of the g range");
  curve->add_option("--samples", c.samples, "Number of samples")->check(CLI::Range(2, 10000000))->capture_default_str();

  auto* thr = app.add_subcommand("thresholds", "Epsilon/delta tolerance thresholds for all families (JSON)");
  detail::add_common(thr, c, false);
  thr->add_option("--tol", c.tol, "Infidelity tolerance")->capture_default_str();

  auto* comp = app.add_subcommand("compile", "Compile to a two-qubit Ising schedule (JSON)");
  detail::add_common(comp, c);
  comp->add_option("--spin", c.spin, "Spin carrying the phase pulses")->check(CLI::IsMember({0, 1}))->capture_default_str();
  comp->add_flag("--verify", c.verify, "Check propagator/quaternion fidelity equivalence over a g grid");
  comp->add_flag("--cancel-only", c.cancel_only, "Only remove inverse pulse pairs; keep same-sense pulses separate");

  auto* exp = app.add_subcommand("expand", "Finite-difference error series at g=0 or g=-1");
  detail::add_common(exp, c);
  exp->add_option("--point", c.point, "Expansion point")->check(CLI::IsMember({0.0, -1.0}))->capture_default_str();
  exp->add_option("--order", c.order, "Highest derivative order")
      ->check(CLI::Range(1, kMaxExpansionOrder))
      ->capture_default_str();

  std::vector<const char*> argv{"cpulse"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    c.subcommand = app.get_subcommands().front()->get_name();
    validate(c);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::ofstream file;
  detail::Sinks sinks{&out, &err};
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << c.out << " for writing\n";
      return kIo;
    }
    sinks = {&file, &out};
  }

  int code = kOk;
  try {
    if (c.subcommand == "sequence") code = detail::cmd_sequence(c, sinks);
    if (c.subcommand == "curve") code = detail::cmd_curve(c, sinks);
    if (c.subcommand == "thresholds") code = detail::cmd_thresholds(c, sinks);
    if (c.subcommand == "compile") code = detail::cmd_compile(c, sinks);
    if (c.subcommand == "expand") code = detail::cmd_expand(c, sinks);
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (file.is_open()) {
    file.flush();
    if (!file) {
      err << "error: write to " << c.out << " failed\n";
      return kIo;
    }
  }
  return code;
}

}  // namespace cpulse::cli
