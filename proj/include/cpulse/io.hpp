#pragma once

// Text, CSV and JSON encodings used by the command-line tool.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpulse/analysis.hpp"
#include "cpulse/ising_gate.hpp"
#include "cpulse/sequences.hpp"

namespace cpulse {

using Json = nlohmann::ordered_json;

/// %.17g: round-trips every double and is locale independent for the
/// values we print.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header comment, then one `angle_deg<TAB>phase_deg` line per pulse.
inline void write_sequence_dump(std::ostream& os, const PulseSequence& seq) {
  os << "# family=" << family_name(seq.family) << " theta_deg=" << format_double(rad_to_deg(seq.target_angle))
     << " phi1_deg=" << format_double(rad_to_deg(seq.phi1)) << '\n';
  for (const auto& e : seq.elements) {
    os << format_double(rad_to_deg(e.nominal_angle)) << '\t' << format_double(rad_to_deg(e.display_phase()))
       << '\n';
  }
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "g,F\n";
  for (const auto& p : curve) os << format_double(p.g) << ',' << format_double(p.fidelity) << '\n';
}

inline Json threshold_value_json(const Threshold& t) {
  if (!t.bounded) return ">=1";
  return t.value;
}

inline Json to_json(const ThresholdReport& r) {
  Json j;
  j["family"] = std::string(family_name(r.family));
  j["theta_deg"] = rad_to_deg(r.theta);
  j["tol"] = r.tol;
  j["epsilon"] = threshold_value_json(r.epsilon);
  j["delta"] = threshold_value_json(r.delta);
  return j;
}

inline Json to_json(const ScheduleItem& item) {
  Json j;
  if (const auto* d = std::get_if<FreeEvolution>(&item)) {
    j["type"] = "delay";
    j["t_units"] = d->t_units;
  } else {
    const auto& p = std::get<YPulse>(item);
    j["type"] = "pulse";
    j["spin"] = p.spin;
    j["angle_deg"] = rad_to_deg(p.angle);
    j["axis"] = p.axis_sign > 0 ? "+y" : "-y";
  }
  return j;
}

inline Json to_json(const IsingSchedule& s) {
  Json j;
  j["family"] = std::string(family_name(s.family));
  j["theta_deg"] = rad_to_deg(s.theta);
  j["total_t_units"] = s.total_duration();
  Json items = Json::array();
  for (const auto& item : s.items) items.push_back(to_json(item));
  j["items"] = std::move(items);
  return j;
}

inline void write_expansion_table(std::ostream& os, const ExpansionReport& r) {
  static constexpr const char* kNames[4] = {"w", "x", "y", "z"};
  char line[160];
  os << "# expansion point g=" << format_double(r.point) << " step=" << format_double(r.step)
     << " refined_step=" << format_double(r.refined_step) << " (central differences + Richardson)\n";
  std::snprintf(line, sizeof line, "%-5s %-4s %14s %12s %12s  %s\n", "order", "comp", "derivative", "trunc_err",
                "noise_floor", "status");
  os << line;
  for (const auto& o : r.orders) {
    for (int c = 0; c < 4; ++c) {
      const char* status = !o.feasible ? "infeasible" : o.below_floor(c) ? "vanishes" : "nonzero";
      std::snprintf(line, sizeof line, "%-5d %-4s %14.6e %12.3e %12.3e  %s\n", o.order, kNames[c],
                    o.derivative[c], o.truncation_error[c], o.noise_floor, status);
      os << line;
    }
  }
}

}  // namespace cpulse
