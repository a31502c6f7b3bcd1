#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anapt/io.hpp"
#include "anapt/baselines.hpp"

#include <sstream>

using namespace anapt;

namespace {

PersistenceDiagram<double> sample_diagram() {
  PersistenceDiagram<double> d;
  d.pairs.push_back({0.125, 2.5, 3, 7});
  d.pairs.push_back({-1.0, 0.1234567890123456789, 11, 12});
  d.essential_birth = -2.25;
  d.essential_birth_index = 0;
  d.n_samples = 20;
  return d;
}

}  // namespace

TEST_CASE("diagram CSV round-trips with full precision") {
  const auto d = sample_diagram();
  std::stringstream ss;
  write_diagram_csv(ss, d);
  const std::string text = ss.str();
  CHECK(text.rfind("birth,death,lifetime,birth_index,death_index\n", 0) == 0);
  CHECK(text.find(",inf,inf,0,-1") != std::string::npos);

  std::stringstream in(text);
  const auto back = read_diagram_csv(in);
  REQUIRE(back.pairs.size() == 2);
  CHECK(back.pairs[0].birth == d.pairs[0].birth);
  CHECK(back.pairs[1].death == d.pairs[1].death);  // 17 digits: bit-exact
  CHECK(back.pairs[1].birth_index == 11);
  CHECK(back.essential_birth == -2.25);
  CHECK(back.essential_birth_index == 0);
}

TEST_CASE("diagram CSV carries an optional label column") {
  const auto d = sample_diagram();
  const std::vector<PairLabel> labels{PairLabel::signal, PairLabel::noise};
  std::stringstream ss;
  write_diagram_csv(ss, d, &labels);
  const std::string text = ss.str();
  CHECK(text.find(",label\n") != std::string::npos);
  CHECK(text.find(",signal\n") != std::string::npos);
  CHECK(text.find(",noise\n") != std::string::npos);
  CHECK(text.find(",essential\n") != std::string::npos);
}

TEST_CASE("infinite essential birth serializes as -inf") {
  PersistenceDiagram<double> d;
  d.essential_birth = -std::numeric_limits<double>::infinity();
  d.essential_birth_index = 4;
  std::stringstream ss;
  write_diagram_csv(ss, d);
  CHECK(ss.str().find("-inf,inf,inf,4,-1") != std::string::npos);
  std::stringstream in(ss.str());
  const auto back = read_diagram_csv(in);
  CHECK(std::isinf(back.essential_birth));
  CHECK(back.essential_birth < 0);
}

TEST_CASE("malformed diagram rows raise ParseError") {
  std::stringstream bad1("birth,death,lifetime,birth_index,death_index\n1,2\n");
  CHECK_THROWS_AS((void)read_diagram_csv(bad1), ParseError);
  std::stringstream bad2("0,zebra,1,0,1\n");
  CHECK_THROWS_AS((void)read_diagram_csv(bad2), ParseError);
}

TEST_CASE("series CSV round-trips time grid and values") {
  TimeSeries<double> s;
  s.sample_rate = 4.0;
  s.t0 = 1.5;
  s.values.resize(5);
  s.values << 0.0, -1.25, 3.75, 2.0, 0.5;
  std::stringstream ss;
  write_series_csv(ss, s);
  std::stringstream in(ss.str());
  const auto back = read_series_csv(in);
  CHECK(back.values == s.values);
  CHECK(back.sample_rate == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(back.t0 == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("single-column series uses the default rate") {
  std::stringstream in("value\n1\n2\n3\n");
  const auto s = read_series_csv(in, 50.0);
  CHECK(s.values.size() == 3);
  CHECK(s.sample_rate == 50.0);
  CHECK(s.t0 == 0.0);
}

TEST_CASE("series CSV rejects jittered and nonincreasing time stamps") {
  std::stringstream jitter("0.0,1\n1.0,2\n2.5,3\n");
  CHECK_THROWS_AS((void)read_series_csv(jitter), ParseError);
  std::stringstream backwards("1.0,1\n0.5,2\n0.0,3\n");
  CHECK_THROWS_AS((void)read_series_csv(backwards), ParseError);
  std::stringstream tiny("value\n1\n");
  CHECK_THROWS_AS((void)read_series_csv(tiny), SeriesTooShort);
}

TEST_CASE("report JSON exposes every pipeline field") {
  CutoffReport rep;
  rep.family = Family::rayleigh;
  rep.alpha = 0.01;
  rep.n = 500;
  rep.median_lifetime = 0.9;
  rep.raw_param = 0.9225;
  rep.raw_cutoff = 4.0;
  rep.delta = 0.2;
  rep.r_factor = 1.1;
  rep.compensated_param = 1.01475;
  rep.compensated_cutoff = 4.4;
  rep.signal_pairs = {0, 3};
  rep.noise_pairs = {1, 2};
  rep.reliable = true;
  const auto j = report_to_json(rep);
  CHECK(j["family"] == "rayleigh");
  CHECK(j["n"] == 500);
  CHECK(j["raw_cutoff"] == 4.0);
  CHECK(j["r_factor"] == 1.1);
  CHECK(j["signal_pairs"] == std::vector<std::size_t>({0, 3}));
  CHECK(j["reliable"] == true);
}

TEST_CASE("calibration JSON round-trips, defaults fill gaps") {
  auto t = CalibrationTables::defaults();
  t.recalibrated = true;
  t.seed = 77;
  t.trials = 30;
  t.at(Family::uniform).constants = {0.9, 0.65};
  const auto j = calibration_to_json(t);
  const auto back = calibration_from_json(j);
  CHECK(back.recalibrated);
  CHECK(back.seed == 77);
  CHECK(back.trials == 30);
  CHECK(back.at(Family::uniform).constants.c1 == 0.9);
  CHECK(back.at(Family::gaussian).constants.c1 == doctest::Approx(0.845));

  // Partial documents keep defaults for the missing families.
  const auto partial = calibration_from_json(nlohmann::json{
      {"families", {{"exponential", {{"c1", 0.5}}}}}});
  CHECK(partial.at(Family::exponential).constants.c1 == 0.5);
  CHECK(partial.at(Family::exponential).constants.c2 == doctest::Approx(0.393));
  CHECK(partial.at(Family::rayleigh).rho.rho == doctest::Approx(1.136));
}

TEST_CASE("svg rendering emits points, diagonal, and noise band") {
  const auto d = sample_diagram();
  std::stringstream ss;
  render_svg(ss, d, 0.5);
  const std::string svg = ss.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polygon") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
  // One circle per finite pair.
  std::size_t circles = 0, pos = 0;
  while ((pos = svg.find("<circle", pos)) != std::string::npos) {
    ++circles;
    ++pos;
  }
  CHECK(circles == d.pairs.size());
  CHECK(svg.find("</svg>") != std::string::npos);
}
