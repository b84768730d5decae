#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "satsec/linkdesign.hpp"
#include "satsec/scenario_io.hpp"

using namespace satsec;

TEST(Presets, StoredValuesMatchTheirDefinition) {
  const auto s = find_preset("geo-bw5-mu6-leo");
  EXPECT_EQ(s.rho_B_km, 35786.0);
  EXPECT_EQ(s.rho_E_km, 1200.0);
  EXPECT_NEAR(s.eve().mu, 2.0, 1e-14);
  EXPECT_NEAR(s.eve().gamma_n, 1.0, 1e-14);
  EXPECT_EQ(s.pattern.theta_3dB_deg, 5.0);
  const auto u = find_preset("uav-low");
  EXPECT_NEAR(u.eve().mu, 0.05, 1e-15);
  EXPECT_NEAR(u.eve().gamma_n, 3.0, 1e-14);
  EXPECT_EQ(u.r, 3.0);
  EXPECT_TRUE(u.reference_never);
  EXPECT_THROW(find_preset("nope"), ConfigError);
  EXPECT_EQ(table_presets().size(), 11u);
}

TEST(Presets, RoundTripBitExactlyThroughScenarioText) {
  for (const auto& s : table_presets()) {
    const auto text = write_scenario_text(s);
    const auto back = parse_scenario_text(text).scenario;
    EXPECT_EQ(back.mu_dB, s.mu_dB) << s.name;
    EXPECT_EQ(back.gamma_n_dB, s.gamma_n_dB) << s.name;
    EXPECT_EQ(back.rho, s.rho) << s.name;
    EXPECT_EQ(back.reference_deg, s.reference_deg) << s.name;
    EXPECT_EQ(write_scenario_text(back), text) << s.name;
  }
}

TEST(Presets, DvbS2Frames) {
  EXPECT_EQ(dvbs2(DvbS2Frame::Short).n, 16200);
  EXPECT_EQ(dvbs2(DvbS2Frame::Medium).n, 32400);
  EXPECT_DOUBLE_EQ(dvbs2(DvbS2Frame::Medium).rho, 1.0 / 3.0);
  EXPECT_THROW(parse_frame("long"), ConfigError);
}

TEST(RegionStudy, UavLowNeverDegradedAndResiduals) {
  const auto rows = run_region_study(table_presets());
  for (const auto& r : rows) {
    if (r.scenario == "uav-low") {
      EXPECT_TRUE(r.result.never_degraded());
      EXPECT_TRUE(r.matches(0.0));
      EXPECT_FALSE(r.residual_deg());
    } else {
      ASSERT_TRUE(r.residual_deg()) << r.scenario;
    }
  }
  const auto csv = region_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "scenario,verdict,theta_star_deg,first_crossing_deg,reference_deg,residual_deg");
  EXPECT_NE(csv.find("uav-low,never-degraded,,,never,"), std::string::npos);
}

TEST(Tradeoff, EndpointsAndRates) {
  const auto preset = dvbs2(DvbS2Frame::Short);
  const std::vector<double> grid{0.0, 0.1, 0.18, 1.0 / 3.0};
  const auto rows = run_tradeoff(preset, 0.5, 1.0, grid);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_GE(rows.front().leak.bound, 1.0);
  EXPECT_DOUBLE_EQ(rows.back().rho_s, 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].leak.bound, rows[i - 1].leak.bound);
  const std::vector<double> bad{0.5};
  EXPECT_THROW(run_tradeoff(preset, 0.5, 1.0, bad), DomainError);
  const auto csv = tradeoff_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rho_sac,s_star,exponent_bits,bound,rho_s");
}

TEST(Tradeoff, MediumFrameNeverWorseWhenExponentPositive) {
  const std::vector<double> grid{0.12, 0.18, 0.25, 0.3};
  for (double g : {0.2, 0.5, 0.7}) {
    const auto s = run_tradeoff(dvbs2(DvbS2Frame::Short), g, 1.0, grid);
    const auto m = run_tradeoff(dvbs2(DvbS2Frame::Medium), g, 1.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (m[i].leak.exponent_bits > 0) EXPECT_LE(m[i].leak.bound, s[i].leak.bound);
  }
}

TEST(SpatialMap, TwoDimensionalLongFormat) {
  auto s = find_preset("geo-bw10-mu0-meo");
  const std::vector<double> theta{10, 20, 30};
  const std::vector<double> rho{1200, 15000};
  const auto rows = run_spatial_map(s, theta, rho);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].rho_E_km, 1200.0);
  EXPECT_EQ(rows[5].rho_E_km, 15000.0);
  EXPECT_EQ(rows[4].theta_deg, 20.0);
  const auto csv = spatial_csv(rows, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rho_E_km,theta_deg,gamma_g0,exponent_bits,bound,guaranteed");
  const auto flat = spatial_csv(rows, false);
  EXPECT_EQ(flat.substr(0, flat.find('\n')), "theta_deg,gamma_g0,exponent_bits,bound,guaranteed");
}

TEST(SpatialMap, FarSideLobeReachesFloor) {
  auto s = find_preset("geo-bw10-mu0-meo");
  s.rho_E_km = 200000.0;
  const std::vector<double> theta{90.0};
  const auto rows = run_spatial_map(s, theta);
  EXPECT_TRUE(rows[0].guaranteed);
  EXPECT_EQ(rows[0].bound, kBoundFloor);
}

TEST(Csv, DeterministicAndRoundTripFormatting) {
  const std::vector<double> g{0.0, 0.25, 1.0 / 3.0};
  const std::vector<double> s{-10.0, 3.3};
  const auto a = capacity_csv(capacity_surface(g, s));
  const auto b = capacity_csv(capacity_surface(g, s));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("0.3333333333333333,"), std::string::npos);
}

TEST(Csv, AtomicWriteReplacesFile) {
  const auto dir = std::filesystem::temp_directory_path() / "satsec_atomic_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_file_atomic(path, "a\n");
  write_file_atomic(path, "b\n");
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "b");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  std::filesystem::remove_all(dir);
}

TEST(ScenarioFile, ParsesExperimentSection) {
  const auto f = parse_scenario_text(
      "# sample\n[scenario]\nname = t\nrho_E_km = 15000\ntheta_3dB_deg = 10\n"
      "[experiment]\nstudy = spatial\ntheta_grid_deg = 10:20:11\nrho_E_grid_km = 1200, 15000\nmode = literal-min\n");
  EXPECT_EQ(f.scenario.name, "t");
  EXPECT_EQ(f.scenario.pattern.theta_3dB_deg, 10.0);
  EXPECT_EQ(f.experiment.study, "spatial");
  ASSERT_EQ(f.experiment.theta_grid_deg.size(), 11u);
  EXPECT_DOUBLE_EQ(f.experiment.theta_grid_deg[1], 11.0);
  EXPECT_EQ(f.experiment.rho_E_grid_km, (std::vector<double>{1200, 15000}));
  EXPECT_EQ(f.experiment.mode, ExponentMode::LiteralMin);
}

TEST(ScenarioFile, MaskPattern) {
  const auto f = parse_scenario_text("[scenario]\nmask = 0:0, 10:-20, 40:-40\npattern = mask\n");
  EXPECT_EQ(f.scenario.pattern.kind, AntennaPattern::Kind::RegulatoryMask);
  ASSERT_EQ(f.scenario.pattern.mask.size(), 3u);
  EXPECT_EQ(f.scenario.pattern.mask[2].gain_db, -40.0);
  const auto back = parse_scenario_text(write_scenario_text(f.scenario));
  EXPECT_EQ(back.scenario.pattern.mask.size(), 3u);
}

TEST(ScenarioFile, ErrorsNameTheField) {
  auto field_of = [](const std::string& text) {
    try {
      parse_scenario_text(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of("[scenario]\nrho_B_km = fast\n"), "scenario.rho_B_km");
  EXPECT_EQ(field_of("[scenario]\nwavelength = 3\n"), "scenario.wavelength");
  EXPECT_EQ(field_of("[scenario]\n[experiment]\nstudy = orbit\n"), "experiment.study");
  EXPECT_EQ(field_of("[scenario]\n[experiment]\ntheta_grid_deg = 1:2\n"), "experiment.theta_grid_deg");
  EXPECT_EQ(field_of("[scenario]\n[extra]\na = 1\n"), "extra");
  EXPECT_EQ(field_of("[experiment]\nstudy = region\n"), "scenario");
  EXPECT_EQ(field_of("[scenario]\nn = 1.5\n"), "scenario.n");
  EXPECT_EQ(field_of("[scenario]\nr = 1\n"), "scenario.r");
  EXPECT_EQ(field_of("[scenario]\nmu_dB = inf\n"), "scenario.mu_dB");
}
