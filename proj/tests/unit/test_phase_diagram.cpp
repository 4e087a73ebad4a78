#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "lrquench/errors.hpp"
#include "lrquench/phase_diagram.hpp"

using namespace lrq;

TEST_CASE("nonphysical inputs are classified, not rejected") {
  CHECK(classify_point(-1.0, 0.5, 1.0, 1.5).cls == PhaseClass::kNonPhysical);
  CHECK(classify_point(-1.0, 0.5, 1.0, -1.0).cls == PhaseClass::kNonPhysical);
  CHECK(classify_point(-1.0, 0.5, 1.0, -1.2).cls == PhaseClass::kNonPhysical);
  const ClassicalParams p{-1.0, 2.25};
  CHECK(classify_point(-1.0, 0.5, 2.25, potential_minimum(p) + 0.01).cls == PhaseClass::kNonPhysical);
  const auto freqs = continuum_frequencies(0.5, 8);
  CHECK(classify_point(-1.0, freqs, 1.2, -0.7, 5.0).cls == PhaseClass::kNonPhysical);
  // No local minimum of V at all.
  CHECK(classify_point(-1.0, 0.5, 0.1, -0.2).cls == PhaseClass::kNonPhysical);
}

TEST_CASE("classes along eps = 2.25 are ordered from the minimum toward r") {
  const ClassicalParams p{-1.0, 2.25};
  const double top = potential_minimum(p);
  int last = static_cast<int>(PhaseClass::kClassical);
  bool saw_classical = false, saw_zero = false;
  for (int i = 0; i < 50; ++i) {
    const double mu0 = top - (top - p.r) * i / 50.0;
    const auto pt = classify_point(p.r, 0.5, p.epsilon, mu0);
    const int c = static_cast<int>(pt.cls);
    CAPTURE(mu0);
    REQUIRE(pt.cls != PhaseClass::kNonPhysical);
    CHECK(c >= last);
    last = c;
    saw_classical |= pt.cls == PhaseClass::kClassical;
    saw_zero |= pt.cls == PhaseClass::kResonantZero;
  }
  CHECK(saw_classical);
  CHECK(saw_zero);
}

TEST_CASE("multiple resonances at low energy") {
  const auto pt = classify_point(-1.0, 0.5, 0.6, -0.99);
  CHECK(pt.cls == PhaseClass::kMultiResonant);
  CHECK(pt.lowest_resonant == 0);
  CHECK(pt.resonant_count >= 2);
  PhaseOptions small;
  small.m_max = 1;
  const auto sat = classify_point(-1.0, 0.5, 0.6, -0.99, small);
  CHECK(sat.saturated);
  CHECK(sat.resonant_count == 2);
}

TEST_CASE("positive r is resonance free") {
  ScanAxes axes{0.2, 3.0, 0.5, 2.4, 10, 10};
  const auto grid = scan(0.5, 0.5, axes, {}, 1);
  REQUIRE(grid.cells.size() == 100);
  for (const auto& c : grid.cells) {
    CHECK((c.cls == PhaseClass::kClassical || c.cls == PhaseClass::kNonPhysical));
  }
}

TEST_CASE("single-cell grid") {
  ScanAxes axes{1.2, 1.2, -0.7, -0.7, 1, 1};
  const auto grid = scan(-1.0, 0.5, axes, {}, 1);
  REQUIRE(grid.cells.size() == 1);
  const auto pt = classify_point(-1.0, 0.5, 1.2, -0.7);
  CHECK(grid.cells[0].cls == pt.cls);
  CHECK(grid.cells[0].resonant_count == pt.resonant_count);
  CHECK(grid.cells[0].cls == PhaseClass::kResonantZero);
  CHECK_THROWS_AS(scan(-1.0, 0.5, ScanAxes{1, 2, -0.9, 0, 0, 3}), InvalidArgument);
}

TEST_CASE("scan is deterministic across thread counts") {
  ScanAxes axes{0.5, 3.0, -1.0, 0.5, 12, 12};
  const auto a = scan(-1.0, 0.5, axes, {}, 1);
  const auto b = scan(-1.0, 0.5, axes, {}, 3);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].cls == b.cells[i].cls);
    CHECK(a.cells[i].resonant_count == b.cells[i].resonant_count);
    CHECK(a.cells[i].max_det_deviation == b.cells[i].max_det_deviation);
  }
  std::ostringstream x, y;
  write_csv(x, a);
  write_csv(y, b);
  CHECK(x.str() == y.str());
}

TEST_CASE("more modes only change multi-resonant counts") {
  ScanAxes axes{0.5, 3.0, -1.0, 0.5, 10, 10};
  PhaseOptions wide;
  wide.m_max = 128;
  const auto a = scan(-1.0, 0.5, axes, {}, 1);
  const auto b = scan(-1.0, 0.5, axes, wide, 1);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].cls == b.cells[i].cls);
    if (a.cells[i].cls != PhaseClass::kMultiResonant) {
      CHECK(a.cells[i].resonant_count == b.cells[i].resonant_count);
    }
  }
}

TEST_CASE("resonant cells violate positivity for their lowest resonant mode") {
  ScanAxes axes{0.5, 3.0, -1.0, 0.5, 14, 14};
  const auto grid = scan(-1.0, 0.5, axes, {}, 1);
  const auto freqs = continuum_frequencies(0.5, 64);
  int resonant = 0;
  for (const auto& c : grid.cells) {
    if (c.cls != PhaseClass::kResonantZero && c.cls != PhaseClass::kMultiResonant) continue;
    ++resonant;
    const auto orbit = make_orbit({-1.0, c.epsilon}, c.mu0, 0.0);
    const double low = orbit.degenerate ? orbit.mu0 : orbit.mu_minus;
    REQUIRE(c.lowest_resonant >= 0);
    CHECK(low + freqs[static_cast<std::size_t>(c.lowest_resonant)] <= 0.0);
    CHECK(c.max_det_deviation < 1e-8);
  }
  CHECK(resonant > 0);
}

TEST_CASE("grid outputs") {
  ScanAxes axes{1.0, 2.0, -0.9, -0.5, 2, 3};
  const auto grid = scan(-1.0, 0.5, axes, {}, 1);
  CHECK(grid.at(1, 2).epsilon == 2.0);
  CHECK(grid.at(1, 2).mu0 == -0.5);
  std::ostringstream out;
  write_csv(out, grid);
  const std::string text = out.str();
  CHECK(text.rfind("epsilon,mu0,class_code,resonant_count\n1,-0.9,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  const auto j = nlohmann::json::parse(sidecar_json(grid));
  CHECK(j["r"] == -1.0);
  CHECK(j["alpha"] == 0.5);
  CHECK(j["m_max"] == 64);
  CHECK(j["epsilon_points"] == 2);
  CHECK(j["class_codes"]["2"] == "resonant-zero");
  CHECK(to_string(PhaseClass::kMarginalBoundary) == "marginal-boundary");
}
