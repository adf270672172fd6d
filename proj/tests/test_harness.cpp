// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>

#include "antsim/experiments.hpp"

using namespace antsim;

namespace {

ExperimentConfig small_boulder_config() {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::BoulderWall;
    cfg.trials = 2;
    cfg.base_seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("boulder-wall summary arithmetic is consistent") {
    ExperimentConfig cfg = small_boulder_config();
    ExperimentSummary summary = run_boulder_wall(cfg);
    REQUIRE(summary.conditions.size() == 3);
    CHECK(summary.trial_results.size() == 3 * 2);
    CHECK(summary.records.size() == 3 * 2);
    for (const ConditionSummary& c : summary.conditions) {
        CHECK(c.trials == 2);
        CHECK(c.successes + c.jams + c.missed_contacts + c.stuck + c.timeouts +
                  c.other_failures ==
              c.trials);
        CHECK(c.success_rate() == doctest::Approx(c.successes / 2.0));
    }
    CHECK(summary.condition("descending").condition == "descending");
    CHECK_THROWS_AS(summary.condition("nope"), std::out_of_range);
}

TEST_CASE("boulder-wall trials are seed-deterministic and distinct across seeds") {
    ExperimentConfig cfg = small_boulder_config();
    ExperimentSummary a = run_boulder_wall(cfg);
    ExperimentSummary b = run_boulder_wall(cfg);
    REQUIRE(a.trial_results.size() == b.trial_results.size());
    for (std::size_t i = 0; i < a.trial_results.size(); ++i) {
        CHECK(a.trial_results[i].classification == b.trial_results[i].classification);
        CHECK(a.trial_results[i].peak_force == b.trial_results[i].peak_force);
        CHECK(a.trial_results[i].coverage == b.trial_results[i].coverage);
    }
    // consecutive seeds per condition
    CHECK(a.trial_results[0].seed == 42);
    CHECK(a.trial_results[1].seed == 43);
}

TEST_CASE("boulder-wall trial records carry a sensible timeline") {
    ExperimentConfig cfg = small_boulder_config();
    cfg.trials = 1;
    ExperimentSummary summary = run_boulder_wall(cfg);
    for (const TrialRecord& r : summary.records) {
        REQUIRE_FALSE(r.timeline.empty());
        CHECK(r.scenario.rfind("boulder_wall:", 0) == 0);
        double prev = -1.0;
        for (const TimelineEntry& e : r.timeline) {
            CHECK(e.t > prev);
            prev = e.t;
            CHECK(e.frame.bend_left >= 0.0);
            CHECK(e.frame.bend_left <= 1.0);
        }
        // traverse covers the whole wall plus the approach margins
        CHECK(r.path_length ==
              doctest::Approx(cfg.boulder.spacing * (cfg.boulder.boulder_count - 1) + 0.16)
                  .epsilon(0.05));
    }
}

TEST_CASE("descending profile succeeds where the uniform profiles fail") {
    ExperimentConfig cfg = small_boulder_config();
    cfg.trials = 5;
    ExperimentSummary summary = run_boulder_wall(cfg);
    const ConditionSummary& desc = summary.condition("descending");
    const ConditionSummary& stiff = summary.condition("uniform_stiff");
    const ConditionSummary& soft = summary.condition("uniform_compliant");
    CHECK(desc.successes >= stiff.successes);
    CHECK(desc.successes >= soft.successes);
    // failure modes split by mechanism: stiff jams, compliant slips past
    CHECK(stiff.jams >= stiff.missed_contacts);
    CHECK(soft.missed_contacts >= soft.jams);
}

TEST_CASE("tunnel experiment pairs closed- and open-loop runs per seed") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Tunnel;
    cfg.trials = 2;
    cfg.base_seed = 42;
    ExperimentSummary summary = run_tunnel(cfg);
    REQUIRE(summary.conditions.size() == 2);
    CHECK(summary.conditions[0].condition == "closed_loop");
    CHECK(summary.conditions[1].condition == "open_loop");
    REQUIRE(summary.trial_results.size() == 4);
    CHECK(summary.trial_results[0].seed == summary.trial_results[1].seed);
    CHECK(summary.trial_results[0].condition == "closed_loop");
    CHECK(summary.trial_results[1].condition == "open_loop");
    CHECK(summary.trial_results[2].seed == summary.trial_results[0].seed + 1);
    for (const TrialRecord& r : summary.records) {
        CHECK((r.scenario == "tunnel:closed_loop" || r.scenario == "tunnel:open_loop"));
        CHECK_FALSE(r.timeline.empty());
        CHECK(r.elapsed > 0.0);
    }
}

TEST_CASE("tunnel runs are deterministic") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Tunnel;
    cfg.trials = 1;
    cfg.base_seed = 7;
    ExperimentSummary a = run_tunnel(cfg);
    ExperimentSummary b = run_tunnel(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        REQUIRE(a.records[i].timeline.size() == b.records[i].timeline.size());
        CHECK(a.records[i].outcome == b.records[i].outcome);
        for (std::size_t k = 0; k < a.records[i].timeline.size(); ++k) {
            CHECK(a.records[i].timeline[k].head_pose.position ==
                  b.records[i].timeline[k].head_pose.position);
            CHECK(a.records[i].timeline[k].maneuver == b.records[i].timeline[k].maneuver);
        }
    }
}

TEST_CASE("scenario guards reject mismatched configs") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::Tunnel;
    CHECK_THROWS_AS(run_boulder_wall(cfg), std::invalid_argument);
    cfg.scenario = Scenario::BoulderWall;
    CHECK_THROWS_AS(run_tunnel(cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_calibration_sweep(cfg), std::invalid_argument);
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("calibration sweep recovers the sigmoid at every traverse speed") {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::CalibrationSweep;
    CalibrationSweepResult result = run_calibration_sweep(cfg);

    REQUIRE(result.per_speed.size() == 3);
    CHECK(result.rows.size() == 3 * cfg.sweep.levels);
    CHECK(result.combined.slope == doctest::Approx(cfg.calibration.slope).epsilon(0.05));
    CHECK(result.combined.midpoint ==
          doctest::Approx(cfg.calibration.midpoint).epsilon(0.05));
    CHECK(result.fitted.contact_threshold ==
          doctest::Approx(cfg.calibration.contact_threshold));

    // fits should not depend on how fast the indenter moved
    for (const auto& [speed, fit] : result.per_speed) {
        CHECK(fit.slope == doctest::Approx(result.combined.slope).epsilon(0.05));
        CHECK(fit.midpoint == doctest::Approx(result.combined.midpoint).epsilon(0.05));
    }

    // rows are grouped by the configured speeds
    for (std::size_t si = 0; si < cfg.sweep.speeds.size(); ++si)
        for (int i = 0; i < cfg.sweep.levels; ++i)
            CHECK(result.rows[si * cfg.sweep.levels + i].speed ==
                  doctest::Approx(cfg.sweep.speeds[si]));
}
