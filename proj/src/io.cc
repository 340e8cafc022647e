#include "mosquito/io.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mosquito::io {
namespace {

using nlohmann::json;

Stability stability_from(const std::string& s) {
  for (Stability v : {Stability::Attracting, Stability::Repelling,
                      Stability::Saddle, Stability::NonHyperbolic}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown stability label: " + s);
}

PointKind kind_from(const std::string& s) {
  if (s == to_string(PointKind::Origin)) return PointKind::Origin;
  if (s == to_string(PointKind::Interior)) return PointKind::Interior;
  throw std::invalid_argument("unknown point kind: " + s);
}

Regime regime_from(const std::string& s) {
  if (s == to_string(Regime::OriginOnly)) return Regime::OriginOnly;
  if (s == to_string(Regime::TwoFixedPoints)) return Regime::TwoFixedPoints;
  throw std::invalid_argument("unknown regime: " + s);
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> number_or_null(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json point_json(const FixedPoint& p) {
  return {{"kind", to_string(p.kind)},
          {"x", p.location.x},
          {"y", p.location.y},
          {"stability", to_string(p.stability)},
          {"residual", p.residual}};
}

FixedPoint point_from(const json& j) {
  FixedPoint p;
  p.kind = kind_from(j.at("kind").get<std::string>());
  p.location = {j.at("x").get<double>(), j.at("y").get<double>()};
  p.stability = stability_from(j.at("stability").get<std::string>());
  p.residual = j.at("residual").get<double>();
  return p;
}

json analysis_json(const JacobianAnalysis& a) {
  json eig = json::array();
  for (const auto& ev : a.eigenvalues) {
    eig.push_back(
        {{"re", ev.real()}, {"im", ev.imag()}, {"modulus", std::abs(ev)}});
  }
  json out = {{"matrix", a.matrix},
              {"eigenvalues", eig},
              {"A", a.A},
              {"B", a.B},
              {"Lambda1", a.Lambda1},
              {"Lambda2", a.Lambda2},
              {"notes", a.notes}};
  out["alpha1"] = a.thresholds ? json(a.thresholds->alpha1) : json(nullptr);
  out["alpha2"] = a.thresholds ? json(a.thresholds->alpha2) : json(nullptr);
  return out;
}

JacobianAnalysis analysis_from(const json& j) {
  JacobianAnalysis a;
  a.matrix = j.at("matrix").get<Matrix2>();
  const json& eig = j.at("eigenvalues");
  for (std::size_t i = 0; i < 2; ++i) {
    a.eigenvalues[i] = {eig.at(i).at("re").get<double>(),
                        eig.at(i).at("im").get<double>()};
  }
  a.A = j.at("A").get<double>();
  a.B = j.at("B").get<double>();
  a.Lambda1 = j.at("Lambda1").get<double>();
  a.Lambda2 = j.at("Lambda2").get<double>();
  if (!j.at("alpha1").is_null()) {
    a.thresholds = AlphaThresholds{j.at("alpha1").get<double>(),
                                   j.at("alpha2").get<double>()};
  }
  a.notes = j.at("notes").get<std::vector<std::string>>();
  return a;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "n,x,y\n";
  for (const auto& p : traj.points) {
    os << p.n << ',' << format_double(p.state.x) << ','
       << format_double(p.state.y) << '\n';
  }
}

std::vector<TrajectoryPoint> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "n,x,y") {
    throw std::invalid_argument("trajectory csv: missing header n,x,y");
  }
  std::vector<TrajectoryPoint> points;
  while (std::getline(is, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::invalid_argument("trajectory csv: malformed row: " + line);
    }
    TrajectoryPoint p;
    const auto res = std::from_chars(line.data(), line.data() + c1, p.n);
    if (res.ec != std::errc() || res.ptr != line.data() + c1) {
      throw std::invalid_argument("trajectory csv: bad index: " + line);
    }
    p.state.x = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
    p.state.y = parse_double(line.substr(c2 + 1));
    points.push_back(p);
  }
  return points;
}

void write_trajectory_json(std::ostream& os, const Trajectory& traj) {
  // Hand-written so the numbers carry the same 17 digits as the CSV.
  os << "[";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const auto& p = traj.points[i];
    os << (i == 0 ? "\n" : ",\n") << "  {\"n\": " << p.n
       << ", \"x\": " << format_double(p.state.x)
       << ", \"y\": " << format_double(p.state.y) << "}";
  }
  os << "\n]\n";
}

void write_basin_csv(std::ostream& os, const BasinGrid& grid) {
  os << "x0,y0,verdict,iterations\n";
  for (std::size_t j = 0; j < grid.y.count; ++j) {
    for (std::size_t i = 0; i < grid.x.count; ++i) {
      const BasinCell& c = grid.at(i, j);
      os << format_double(grid.x.at(i)) << ',' << format_double(grid.y.at(j))
         << ',' << to_string(c.verdict) << ',' << c.iterations << '\n';
    }
  }
}

json to_json(const FixedPointReport& r) {
  json origin = point_json(r.origin);
  origin["eigenvalues"] = r.origin_eigenvalues;

  json thresholds = {
      {"threshold_beta", r.constants.threshold_beta},
      {"y_limit", r.constants.y_limit},
      {"allee_threshold_gamma",
       optional_number(r.constants.allee_threshold_gamma)}};
  thresholds["alpha1"] =
      r.thresholds ? json(r.thresholds->alpha1) : json(nullptr);
  thresholds["alpha2"] =
      r.thresholds ? json(r.thresholds->alpha2) : json(nullptr);

  return {{"regime", to_string(r.regime)},
          {"origin", origin},
          {"interior", r.interior ? point_json(*r.interior) : json(nullptr)},
          {"analysis", r.analysis ? analysis_json(*r.analysis) : json(nullptr)},
          {"thresholds", thresholds}};
}

FixedPointReport report_from_json(const json& j) {
  FixedPointReport r;
  r.regime = regime_from(j.at("regime").get<std::string>());
  r.origin = point_from(j.at("origin"));
  r.origin_eigenvalues =
      j.at("origin").at("eigenvalues").get<std::array<double, 2>>();
  if (!j.at("interior").is_null()) r.interior = point_from(j.at("interior"));
  if (!j.at("analysis").is_null()) r.analysis = analysis_from(j.at("analysis"));

  const json& t = j.at("thresholds");
  r.constants.threshold_beta = t.at("threshold_beta").get<double>();
  r.constants.y_limit = t.at("y_limit").get<double>();
  r.constants.allee_threshold_gamma =
      number_or_null(t.at("allee_threshold_gamma"));
  if (!t.at("alpha1").is_null()) {
    r.thresholds = AlphaThresholds{t.at("alpha1").get<double>(),
                                   t.at("alpha2").get<double>()};
  }
  return r;
}

}  // namespace mosquito::io
