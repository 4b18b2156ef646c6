#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "lbsim/config.hpp"

using namespace lbsim;

TEST_CASE("defaults validate and describe the full-size scenario") {
  SimConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.horizon_epochs == 1440);
  CHECK(cfg.num_bs == 4);
  CHECK(cfg.bs_positions.size() == 4);
  CHECK(cfg.ttis_per_epoch() == 60000);
  CHECK(cfg.hp.episodes == 100);
  CHECK(cfg.hp.epsilon == 0.8);
  CHECK(cfg.hp.memory_capacity == 480);
  CHECK(cfg.hp.batch_size == 150);
  CHECK(cfg.hp.gamma == 0.9);
  CHECK(cfg.hp.learning_rate == 0.01);
}

TEST_CASE("desk scale shrinks the horizon and windows consistently") {
  SimConfig cfg;
  apply_desk_scale(cfg);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.horizon_epochs == 120);
  CHECK(cfg.morning_start_epoch == 35);
  CHECK(cfg.morning_end_epoch == 45);
  CHECK(cfg.evening_start_epoch == 85);
  CHECK(cfg.evening_end_epoch == 95);
  CHECK(cfg.hp.episodes == 20);
}

TEST_CASE("config files override individual keys") {
  std::istringstream in(
      "# comment line\n"
      "rb_per_bs = 100\n"
      "num_ue = 40\n"
      "\n"
      "epsilon = 0.6\n"
      "rng_seed = 77\n");
  const SimConfig cfg = parse_config(in, "<test>");
  CHECK(cfg.rb_per_bs == 100);
  CHECK(cfg.num_ue == 40);
  CHECK(cfg.hp.epsilon == 0.6);
  CHECK(cfg.rng_seed == 77);
  // Untouched keys keep their defaults.
  CHECK(cfg.noise_dbm == -95.0);
}

TEST_CASE("parse starts from the supplied base config") {
  SimConfig base;
  apply_desk_scale(base);
  std::istringstream in("episodes = 5\n");
  const SimConfig cfg = parse_config(in, "<test>", base);
  CHECK(cfg.horizon_epochs == 120);  // from the base
  CHECK(cfg.hp.episodes == 5);       // from the file
}

TEST_CASE("unknown keys are rejected with their location") {
  std::istringstream in("rb_per_bs = 50\nnot_a_key = 3\n");
  try {
    parse_config(in, "<test>");
    FAIL("expected an exception");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    CHECK(what.find("not_a_key") != std::string::npos);
    CHECK(what.find("<test>:2") != std::string::npos);
  }
}

TEST_CASE("malformed lines are rejected") {
  std::istringstream in("rb_per_bs 50\n");
  CHECK_THROWS_AS(parse_config(in, "<test>"), std::exception);
  std::istringstream bad_num("rb_per_bs = fifty\n");
  CHECK_THROWS_AS(parse_config(bad_num, "<test>"), std::exception);
}

TEST_CASE("validation rejects inconsistent configurations") {
  SimConfig cfg;

  SUBCASE("bs count must match positions") {
    cfg.num_bs = 3;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("bs positions must lie inside the area") {
    cfg.bs_positions[0] = {-5.0, 100.0};
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("epoch must hold an integral number of ttis") {
    cfg.tti_ms = 7.0;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("commute windows must be ordered and inside the horizon") {
    cfg.morning_end_epoch = cfg.morning_start_epoch;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("evening must follow morning") {
    cfg.evening_start_epoch = cfg.morning_end_epoch - 1;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("windows beyond the horizon fail") {
    cfg.evening_end_epoch = cfg.horizon_epochs + 1;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("demand range must be ordered and positive") {
    cfg.demand_min_bits = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
    cfg.demand_min_bits = 1e9;
    cfg.demand_max_bits = 1e8;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("zones must fit the area") {
    cfg.office_rect.x1 = cfg.area_x_m + 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("learner fields must be sane") {
    cfg.hp.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("batch cannot exceed the replay capacity") {
    cfg.hp.batch_size = cfg.hp.memory_capacity + 1;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
  SUBCASE("epsilon is a probability") {
    cfg.hp.epsilon = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::exception);
  }
}
