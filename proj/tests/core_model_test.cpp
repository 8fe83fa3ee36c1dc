#include "pdw/core_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>

#include "pdw/scenarios.hpp"
#include "test_support.hpp"

namespace pdw {
namespace {

SpeedProfile converging_predecessor() { return builtin_scenario(BuiltinId::kS1).predecessor; }

PairScenario constant_pair(double v_pred, double v_fol, double d0, double t_f = 60.0) {
  return {"constant", SpeedProfile::constant(v_pred, t_f), SpeedProfile::constant(v_fol, t_f),
          d0, t_f, 200.0};
}

const SeparationSample& sample_at(const SeparationTrace& trace, double t, bool pre = false) {
  for (const auto& s : trace.samples) {
    if (std::abs(s.t_min - t) < 1e-9 && s.pre_event == pre) return s;
  }
  throw std::runtime_error("no sample at requested time");
}

TEST(SpeedAt, ScenarioPredecessorSegments) {
  const auto p = converging_predecessor();
  EXPECT_EQ(speed_at(p, 5.0), 600.0);
  EXPECT_EQ(speed_at(p, 10.0), 650.0);
  EXPECT_EQ(speed_at(p, 0.0), 600.0);
  EXPECT_EQ(speed_at(p, 60.0), 650.0);
}

TEST(SpeedAt, ConstantProfile) {
  EXPECT_EQ(speed_at(SpeedProfile::constant(700.0, 60.0), 42.0), 700.0);
}

TEST(SpeedAt, OutsideDomainThrows) {
  const auto p = converging_predecessor();
  EXPECT_THROW(speed_at(p, -0.1), DomainError);
  EXPECT_THROW(speed_at(p, 60.1), DomainError);
  EXPECT_THROW(speed_at(p, std::nan("")), DomainError);
}

TEST(SpeedAt, LeftLimitAtBreakpoint) {
  const auto p = converging_predecessor();
  EXPECT_EQ(p.speed_before(10.0), 600.0);
  EXPECT_EQ(p.speed_before(10.5), 650.0);
  EXPECT_EQ(p.speed_before(0.0), 600.0);
  EXPECT_EQ(p.speed_before(60.0), 650.0);
}

TEST(SpeedAt, RightContinuityProperty) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    const auto p = testing::random_profile(rng, 60.0);
    const auto bps = p.breakpoints();
    for (std::size_t k = 0; k < bps.size(); ++k) {
      ASSERT_EQ(p.speed_at(bps[k].t_start_min), bps[k].v_kmh) << "iter " << iter;
      if (k > 0) {
        ASSERT_EQ(p.speed_before(bps[k].t_start_min), bps[k - 1].v_kmh) << "iter " << iter;
      }
    }
  }
}

TEST(SpeedProfile, RejectsInvalidBreakpoints) {
  EXPECT_THROW(SpeedProfile({}, 60.0), ValidationError);
  EXPECT_THROW(SpeedProfile({{1.0, 600.0}}, 60.0), ValidationError);
  EXPECT_THROW(SpeedProfile({{0.0, 600.0}, {10.0, 650.0}, {10.0, 600.0}}, 60.0), ValidationError);
  EXPECT_THROW(SpeedProfile({{0.0, 600.0}, {60.0, 650.0}}, 60.0), ValidationError);
  EXPECT_THROW(SpeedProfile({{0.0, 0.0}}, 60.0), ValidationError);
  EXPECT_THROW(SpeedProfile({{0.0, 600.0}}, 0.0), ValidationError);
  try {
    SpeedProfile({{0.0, 600.0}, {20.0, 650.0}, {15.0, 600.0}}, 60.0);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "breakpoints[2].t_min");
  }
}

TEST(SeparationRate, Examples) {
  EXPECT_EQ(separation_rate(600.0, 700.0), -100.0);
  EXPECT_EQ(separation_rate(700.0, 700.0), 0.0);
  EXPECT_EQ(separation_rate(700.0, 600.0), 100.0);
}

TEST(SampleGrid, AugmentsUniformGridWithBreakpoints) {
  const auto grid = sample_grid(builtin_scenario(BuiltinId::kS1));
  // 601 uniform times on [0, 60]; the five breakpoints coincide with uniform
  // points and each adds one pre-event duplicate.
  ASSERT_EQ(grid.size(), 606u);
  EXPECT_EQ(grid.front(), (GridPoint{0.0, false}));
  EXPECT_EQ(grid.back(), (GridPoint{60.0, false}));
  int duplicates = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    ASSERT_GE(grid[i].t_min, grid[i - 1].t_min);
    if (grid[i].t_min == grid[i - 1].t_min) {
      ++duplicates;
      EXPECT_TRUE(grid[i - 1].pre_event);
      EXPECT_FALSE(grid[i].pre_event);
    }
  }
  EXPECT_EQ(duplicates, 5);
}

TEST(SampleGrid, OffGridBreakpointAndRaggedHorizon) {
  PairScenario s{"ragged", SpeedProfile({{0.0, 600.0}, {0.25, 620.0}}, 1.05),
                 SpeedProfile::constant(650.0, 1.05), 10.0, 1.05, 200.0, 0.5};
  const auto grid = sample_grid(s);
  const std::vector<GridPoint> expected{
      {0.0, false}, {0.25, true}, {0.25, false}, {0.5, false}, {1.0, false}, {1.05, false}};
  EXPECT_EQ(grid, expected);
}

TEST(IntegrateSeparation, ConstantClosure) {
  const auto trace = integrate_separation(constant_pair(600.0, 700.0, 150.0));
  EXPECT_NEAR(sample_at(trace, 30.0).d_km, 100.0, 1e-12);
  EXPECT_EQ(sample_at(trace, 30.0).ddot_kmh, -100.0);
}

TEST(IntegrateSeparation, ConvergingScenarioEndpoint) {
  // Oracle: hand transcription of the six 10-minute segments of s1,
  // (rate km/h, duration min).
  const std::vector<std::pair<double, double>> segments{
      {600 - 700, 10}, {650 - 700, 10}, {600 - 700, 10},
      {650 - 670, 10}, {600 - 670, 10}, {650 - 670, 10}};
  double d = 150.0;
  for (const auto& [rate, duration] : segments) d += rate * duration / 60.0;
  ASSERT_NEAR(d, 90.0, 1e-12);

  const auto trace = integrate_separation(builtin_scenario(BuiltinId::kS1));
  EXPECT_NEAR(trace.samples.back().d_km, d, 1e-9);
  EXPECT_EQ(trace.samples.back().t_min, 60.0);
  EXPECT_NEAR(trace.min_separation_km, 90.0, 1e-9);
  EXPECT_FALSE(trace.unsafe_since_min.has_value());
}

TEST(IntegrateSeparation, EqualSpeedsHoldSeparation) {
  const auto trace = integrate_separation(constant_pair(700.0, 700.0, 50.0));
  for (const auto& s : trace.samples) {
    ASSERT_EQ(s.d_km, 50.0);
    ASSERT_EQ(s.ddot_kmh, 0.0);
  }
}

TEST(IntegrateSeparation, TraceInvariants) {
  const auto scenario = builtin_scenario(BuiltinId::kS1);
  const auto trace = integrate_separation(scenario);
  const auto& s = trace.samples;
  EXPECT_EQ(s.front().t_min, 0.0);
  EXPECT_EQ(s.back().t_min, 60.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_GT(s[i].d_km, 0.0);
    ASSERT_LT(std::abs(s[i].ddot_kmh), scenario.ddot_max_kmh);
    if (i == 0) continue;
    if (s[i].t_min == s[i - 1].t_min) {
      // Jump in rate, continuous separation.
      ASSERT_TRUE(s[i - 1].pre_event);
      ASSERT_EQ(s[i].d_km, s[i - 1].d_km);
      continue;
    }
    ASSERT_GT(s[i].t_min, s[i - 1].t_min);
    ASSERT_EQ(s[i].ddot_kmh, s[i - 1].ddot_kmh) << "rate changes only at breakpoints";
    const double slope = (s[i].d_km - s[i - 1].d_km) / (s[i].t_min - s[i - 1].t_min) * 60.0;
    ASSERT_NEAR(slope, s[i].ddot_kmh, 1e-6);
  }
  // Pre-event rows carry the rate of the segment that just ended.
  EXPECT_EQ(sample_at(trace, 10.0, true).ddot_kmh, -100.0);
  EXPECT_EQ(sample_at(trace, 10.0, false).ddot_kmh, -50.0);
}

TEST(IntegrateSeparation, ConflictReportsEarliestCrossing) {
  // 20 km closed at 100 km/h: contact after 12 minutes.
  try {
    integrate_separation(constant_pair(600.0, 700.0, 20.0));
    FAIL() << "expected ConflictError";
  } catch (const ConflictError& e) {
    EXPECT_NEAR(e.time_min(), 12.0, 1e-9);
  }
  // Crossing inside the second segment: 10 km lost in the first 6 min at
  // 100 km/h, remaining 5 km at 50 km/h takes 6 more minutes.
  PairScenario s{"two-phase", SpeedProfile({{0.0, 600.0}, {6.0, 650.0}}, 30.0),
                 SpeedProfile::constant(700.0, 30.0), 15.0, 30.0, 200.0};
  try {
    integrate_separation(s);
    FAIL() << "expected ConflictError";
  } catch (const ConflictError& e) {
    EXPECT_NEAR(e.time_min(), 12.0, 1e-9);
  }
}

TEST(IntegrateSeparation, RateBoundViolation) {
  auto s = constant_pair(500.0, 700.0, 500.0);
  EXPECT_THROW(integrate_separation(s), ParameterViolation);
  s.ddot_max_kmh = 200.0 + 1e-9;
  EXPECT_NO_THROW(integrate_separation(s));
}

TEST(IntegrateSeparation, StructuralValidation) {
  EXPECT_THROW(integrate_separation(constant_pair(600.0, 700.0, 0.0)), ValidationError);
  auto s = constant_pair(600.0, 700.0, 150.0);
  s.sample_dt_min = 0.0;
  EXPECT_THROW(integrate_separation(s), ValidationError);
  s = constant_pair(600.0, 700.0, 150.0);
  s.t_f_min = 30.0;  // profiles still end at 60
  EXPECT_THROW(integrate_separation(s), ValidationError);
}

TEST(IntegrateSeparation, UnsafeAdvisoryDoesNotAbort) {
  // 20 km at -100 km/h drops below 9.26 km after (20 - 9.26) / 100 h.
  const auto trace = integrate_separation(constant_pair(600.0, 700.0, 20.0, 10.0));
  ASSERT_TRUE(trace.unsafe_since_min.has_value());
  EXPECT_NEAR(*trace.unsafe_since_min, (20.0 - 9.26) / 100.0 * 60.0, 1e-9);
  EXPECT_NEAR(trace.min_separation_km, 20.0 - 100.0 / 6.0, 1e-9);
}

TEST(BruteForce, ConstantClosure) {
  const auto trace = brute_force_separation(constant_pair(600.0, 700.0, 150.0), 0.001);
  EXPECT_NEAR(sample_at(trace, 30.0).d_km, 100.0, 0.01);
}

TEST(BruteForce, AgreesWithExactOnConvergingScenario) {
  const auto scenario = builtin_scenario(BuiltinId::kS1);
  const auto exact = integrate_separation(scenario);
  const auto brute = brute_force_separation(scenario, 0.001);
  ASSERT_EQ(exact.samples.size(), brute.samples.size());
  for (std::size_t i = 0; i < exact.samples.size(); ++i) {
    ASSERT_EQ(exact.samples[i].t_min, brute.samples[i].t_min);
    ASSERT_NEAR(exact.samples[i].d_km, brute.samples[i].d_km, 1e-3);
    ASSERT_EQ(exact.samples[i].ddot_kmh, brute.samples[i].ddot_kmh);
  }
}

TEST(BruteForce, ZeroRateIsExact) {
  const auto s = constant_pair(650.0, 650.0, 42.0);
  const auto exact = integrate_separation(s);
  const auto brute = brute_force_separation(s, 0.001);
  ASSERT_EQ(exact.samples.size(), brute.samples.size());
  for (std::size_t i = 0; i < exact.samples.size(); ++i) {
    ASSERT_EQ(exact.samples[i].d_km, brute.samples[i].d_km);
  }
}

TEST(BruteForce, StepPreconditionAndErrors) {
  const auto s = constant_pair(600.0, 700.0, 150.0);
  EXPECT_THROW(brute_force_separation(s, 0.01), DomainError);
  EXPECT_THROW(brute_force_separation(s, 0.0), DomainError);
  try {
    brute_force_separation(constant_pair(600.0, 700.0, 20.0), 0.001);
    FAIL() << "expected ConflictError";
  } catch (const ConflictError& e) {
    EXPECT_NEAR(e.time_min(), 12.0, 1e-3);
  }
  EXPECT_THROW(brute_force_separation(constant_pair(500.0, 700.0, 500.0), 0.001),
               ParameterViolation);
}

TEST(BruteForce, AgreesWithExactOnRandomScenarios) {
  std::mt19937_64 rng(2024);
  for (int iter = 0; iter < 60; ++iter) {
    const auto scenario = testing::random_scenario(rng);
    const auto exact = integrate_separation(scenario);
    const auto brute = brute_force_separation(scenario, 1e-3);
    ASSERT_EQ(exact.samples.size(), brute.samples.size()) << "iter " << iter;
    for (std::size_t i = 0; i < exact.samples.size(); ++i) {
      const auto& e = exact.samples[i];
      const auto& b = brute.samples[i];
      ASSERT_EQ(e.t_min, b.t_min) << "iter " << iter;
      ASSERT_NEAR(e.d_km, b.d_km, 1e-3) << "iter " << iter << " t " << e.t_min;
      ASSERT_EQ(e.ddot_kmh, b.ddot_kmh) << "iter " << iter << " t " << e.t_min;
      ASSERT_GT(e.d_km, 0.0);
      ASSERT_LT(std::abs(e.ddot_kmh), scenario.ddot_max_kmh);
    }
  }
}

TEST(IntegrateSeparation, SwappingProfilesNegatesDisplacement) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    auto s = testing::random_scenario(rng);
    auto swapped = s;
    std::swap(swapped.predecessor, swapped.follower);
    const auto a = integrate_separation(s);
    const auto b = integrate_separation(swapped);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      ASSERT_NEAR(a.samples[i].d_km - s.d0_km, -(b.samples[i].d_km - s.d0_km), 1e-9)
          << "iter " << iter;
      ASSERT_EQ(a.samples[i].ddot_kmh, -b.samples[i].ddot_kmh);
    }
  }
}

TEST(MergeJumps, KeepsPostEventRows) {
  const auto merged = merge_jumps(integrate_separation(builtin_scenario(BuiltinId::kS1)));
  ASSERT_EQ(merged.samples.size(), 601u);
  for (std::size_t i = 1; i < merged.samples.size(); ++i) {
    ASSERT_GT(merged.samples[i].t_min, merged.samples[i - 1].t_min);
  }
  EXPECT_EQ(sample_at(merged, 10.0).ddot_kmh, -50.0);
}

}  // namespace
}  // namespace pdw
