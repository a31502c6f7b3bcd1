#pragma once

#include "anapt/baselines.hpp"
#include "anapt/calibration.hpp"
#include "anapt/core.hpp"
#include "anapt/estimator.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace anapt {

namespace detail {

inline std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s == "inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (s == "-inf") {
    out = -std::numeric_limits<double>::infinity();
    return true;
  }
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace detail

// Diagram CSV: fixed header, 17 significant digits, the essential class as a
// final row with death = inf.
template <class Scalar>
void write_diagram_csv(std::ostream& os, const PersistenceDiagram<Scalar>& dgm,
                       const std::vector<PairLabel>* labels = nullptr) {
  os << "birth,death,lifetime,birth_index,death_index";
  if (labels) os << ",label";
  os << "\n";
  for (std::size_t i = 0; i < dgm.pairs.size(); ++i) {
    const auto& p = dgm.pairs[i];
    os << detail::fmt17(static_cast<double>(p.birth)) << ','
       << detail::fmt17(static_cast<double>(p.death)) << ','
       << detail::fmt17(static_cast<double>(p.lifetime())) << ',' << p.birth_index << ','
       << p.death_index;
    if (labels) os << ',' << ((*labels)[i] == PairLabel::signal ? "signal" : "noise");
    os << "\n";
  }
  os << detail::fmt17(static_cast<double>(dgm.essential_birth)) << ",inf,inf,"
     << dgm.essential_birth_index << ",-1";
  if (labels) os << ",essential";
  os << "\n";
}

inline PersistenceDiagram<double> read_diagram_csv(std::istream& is) {
  PersistenceDiagram<double> dgm;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("birth,", 0) == 0) continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() < 5) throw ParseError("diagram CSV: expected >= 5 columns");
    double b, d;
    if (!detail::parse_double(f[0], b) || !detail::parse_double(f[1], d))
      throw ParseError("diagram CSV: bad number in: " + line);
    if (std::isinf(d)) {
      dgm.essential_birth = b;
      dgm.essential_birth_index = std::stoll(f[3]);
    } else {
      dgm.pairs.push_back({b, d, std::stoll(f[3]), std::stoll(f[4])});
    }
  }
  return dgm;
}

template <class Scalar>
void write_series_csv(std::ostream& os, const TimeSeries<Scalar>& series) {
  os << "time,value\n";
  for (Eigen::Index i = 0; i < series.size(); ++i)
    os << detail::fmt17(series.time_at(i)) << ','
       << detail::fmt17(static_cast<double>(series.values[i])) << "\n";
}

// One column (value) or two columns (time,value); header optional; time
// stamps must be uniform to 1e-6 relative jitter.
inline TimeSeries<double> read_series_csv(std::istream& is, double default_rate = 1.0) {
  std::vector<double> times, vals;
  std::string line;
  bool first = true;
  bool two_col = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    double a, b;
    if (first) {
      first = false;
      two_col = f.size() >= 2;
      if (!detail::parse_double(f[0], a)) continue;  // header line
    }
    if (f.size() != (two_col ? 2u : 1u)) throw ParseError("series CSV: inconsistent column count");
    if (two_col) {
      if (!detail::parse_double(f[0], a) || !detail::parse_double(f[1], b))
        throw ParseError("series CSV: bad number in: " + line);
      times.push_back(a);
      vals.push_back(b);
    } else {
      if (!detail::parse_double(f[0], a)) throw ParseError("series CSV: bad number in: " + line);
      vals.push_back(a);
    }
  }
  if (vals.size() < 2) throw SeriesTooShort("series CSV: need >= 2 samples");

  TimeSeries<double> out;
  out.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  if (two_col) {
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0)) throw ParseError("series CSV: nonincreasing time stamps");
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double step = times[i] - times[i - 1];
      if (std::abs(step - dt) > 1e-6 * std::abs(dt))
        throw ParseError("series CSV: nonuniform sampling (jitter above 1e-6 relative)");
    }
    out.sample_rate = 1.0 / dt;
    out.t0 = times.front();
  } else {
    out.sample_rate = default_rate;
  }
  return out;
}

inline nlohmann::json report_to_json(const CutoffReport& rep) {
  return nlohmann::json{{"family", family_name(rep.family)},
                        {"alpha", rep.alpha},
                        {"n", rep.n},
                        {"median_lifetime", rep.median_lifetime},
                        {"raw_param", rep.raw_param},
                        {"raw_cutoff", rep.raw_cutoff},
                        {"delta", rep.delta},
                        {"r_factor", rep.r_factor},
                        {"compensated_param", rep.compensated_param},
                        {"compensated_cutoff", rep.compensated_cutoff},
                        {"signal_pairs", rep.signal_pairs},
                        {"noise_pairs", rep.noise_pairs},
                        {"reliable", rep.reliable}};
}

inline nlohmann::json calibration_to_json(const CalibrationTables& t) {
  nlohmann::json families = nlohmann::json::object();
  for (int f = 0; f < 4; ++f) {
    const auto& e = t.entries[static_cast<std::size_t>(f)];
    families[family_name(static_cast<Family>(f))] = {{"rho", e.rho.rho},
                                                     {"rho_sd", e.rho.sd},
                                                     {"c1", e.constants.c1},
                                                     {"c2", e.constants.c2}};
  }
  return nlohmann::json{{"provenance", t.recalibrated ? "recalibrated" : "defaults"},
                        {"seed", t.seed},
                        {"trials", t.trials},
                        {"families", families}};
}

inline CalibrationTables calibration_from_json(const nlohmann::json& j) {
  CalibrationTables t = CalibrationTables::defaults();
  if (j.contains("provenance")) t.recalibrated = j["provenance"] == "recalibrated";
  if (j.contains("seed")) t.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("trials")) t.trials = j["trials"].get<int>();
  const auto& fams = j.at("families");
  for (int f = 0; f < 4; ++f) {
    const auto name = family_name(static_cast<Family>(f));
    if (!fams.contains(name)) continue;
    auto& e = t.entries[static_cast<std::size_t>(f)];
    const auto& jf = fams[name];
    if (jf.contains("rho")) e.rho.rho = jf["rho"].get<double>();
    if (jf.contains("rho_sd")) e.rho.sd = jf["rho_sd"].get<double>();
    if (jf.contains("c1")) e.constants.c1 = jf["c1"].get<double>();
    if (jf.contains("c2")) e.constants.c2 = jf["c2"].get<double>();
  }
  return t;
}

// SVG scatter of a diagram: diagonal line, points, and a shaded band of width
// `cutoff` above the diagonal marking the noise region.
template <class Scalar>
void render_svg(std::ostream& os, const PersistenceDiagram<Scalar>& dgm, double cutoff_value,
                int size_px = 480) {
  double lo = 0, hi = 1;
  if (!dgm.pairs.empty()) {
    lo = hi = static_cast<double>(dgm.pairs[0].birth);
    for (const auto& p : dgm.pairs) {
      lo = std::min(lo, static_cast<double>(p.birth));
      hi = std::max(hi, static_cast<double>(p.death));
    }
  }
  const double pad = (hi - lo) * 0.08 + 1e-12;
  lo -= pad;
  hi += pad;
  const double span = hi - lo;
  auto X = [&](double v) { return (v - lo) / span * size_px; };
  auto Y = [&](double v) { return size_px - (v - lo) / span * size_px; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\""
     << size_px << "\" viewBox=\"0 0 " << size_px << ' ' << size_px << "\">\n";
  // Noise band: birth <= death <= birth + cutoff.
  os << "<polygon points=\"" << X(lo) << ',' << Y(lo) << ' ' << X(hi) << ',' << Y(hi) << ' '
     << X(hi - cutoff_value) << ',' << Y(hi) << ' ' << X(lo) << ',' << Y(lo + cutoff_value)
     << "\" fill=\"#f8c0c0\" fill-opacity=\"0.6\"/>\n";
  os << "<line x1=\"" << X(lo) << "\" y1=\"" << Y(lo) << "\" x2=\"" << X(hi) << "\" y2=\""
     << Y(hi) << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (const auto& p : dgm.pairs)
    os << "<circle cx=\"" << X(static_cast<double>(p.birth)) << "\" cy=\""
       << Y(static_cast<double>(p.death)) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  os << "</svg>\n";
}

}  // namespace anapt
