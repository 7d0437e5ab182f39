#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lipquot/errors.hpp"
#include "lipquot/harness.hpp"
#include "lipquot/instances.hpp"
#include "lipquot/json_io.hpp"

using namespace lipquot;

TEST(Suite, EmptyTagListIsAnEmptyPass) {
  ExperimentConfig c;
  const SuiteReport r = run_suite(c);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.document["tags"].empty());
}

TEST(Suite, UnknownTagIsAnInputError) {
  ExperimentConfig c;
  c.tags = {"uniform", "nonsense"};
  EXPECT_THROW(run_suite(c), InputError);
}

TEST(Suite, UniformTwentySeeds) {
  ExperimentConfig c;
  c.tags = {"uniform"};
  c.trials = 20;
  c.max_n = 40;
  const SuiteReport r = run_suite(c);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.document["tags"]["uniform"]["passed"], 20);
}

TEST(Suite, ReportHeader) {
  ExperimentConfig c;
  c.seed = 17;
  c.tags = {"twopiece"};
  c.trials = 2;
  const Json doc = run_suite(c).document;
  EXPECT_EQ(doc["tool"], "lipquot");
  EXPECT_EQ(doc["version"], kToolVersion);
  EXPECT_EQ(doc["seed"], 17);
  EXPECT_EQ(doc["config_hash"], config_hash(c));
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
}

TEST(Suite, DeterministicAcrossThreadCounts) {
  ExperimentConfig c;
  c.tags = {"twopiece", "freenorm", "leafext", "coproduct"};
  c.trials = 8;
  const std::string one = run_suite(c).document.dump();
  c.threads = 3;
  EXPECT_EQ(run_suite(c).document.dump(), one);
  EXPECT_EQ(config_hash(c), config_hash(ExperimentConfig{c.seed, c.trials, c.min_n, c.max_n, c.tags, c.tolerance, 1}));
}

TEST(Suite, ConfigHashTracksFields) {
  ExperimentConfig a, b;
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), config_hash(config_from_json(config_to_json(a))));
}

TEST(Suite, TrialsAreOrderIndependent) {
  ExperimentConfig c;
  c.tags = {"wreath"};
  c.trials = 5;
  const TrialResult direct = run_trial("wreath", c, 3);
  const SuiteReport r = run_suite(c);
  (void)r;
  EXPECT_EQ(run_trial("wreath", c, 3).summary.dump(), direct.summary.dump());
  EXPECT_EQ(direct.seed, c.seed + 3);
}

TEST(Suite, ReplayReproducesTheTrial) {
  ExperimentConfig c;
  c.tags = {"subsetcomponents"};
  c.trials = 4;
  const TrialResult t = run_trial("subsetcomponents", c, 2);
  Json witness;
  witness["tag"] = "subsetcomponents";
  witness["trial"] = 2;
  witness["seed"] = t.seed;
  witness["config"] = config_to_json(c);
  const TrialResult again = replay(witness);
  EXPECT_EQ(again.summary.dump(), t.summary.dump());
  EXPECT_EQ(again.passed, t.passed);
  EXPECT_THROW(replay(Json::object()), InputError);
}

TEST(Suite, ToleranceFromEnvironment) {
  ::setenv("LIPQUOT_TOL", "1e-6", 1);
  EXPECT_DOUBLE_EQ(default_tolerance(), 1e-6);
  ::setenv("LIPQUOT_TOL", "junk", 1);
  EXPECT_DOUBLE_EQ(default_tolerance(), 1e-9);
  ::unsetenv("LIPQUOT_TOL");
}

TEST(Json, SpaceAndFreeVectorRoundTrip) {
  Rng rng(5);
  const FiniteMetricSpace s = random_planar_space(rng, 6).with_basepoint(2);
  EXPECT_EQ(space_from_json(Json::parse(space_to_json(s).dump())), s);
  const FreeVector mu = random_free_vector(rng, 6);
  const FreeVector back = free_vector_from_json(Json::parse(free_vector_to_json(mu).dump()), 6);
  EXPECT_EQ(back.support, mu.support);
  EXPECT_EQ(back.coeffs, mu.coeffs);
  const ScalarMap m{"x", {0.5, 1.5}};
  EXPECT_EQ(map_from_json(map_to_json(m)).values, m.values);
}

TEST(Json, SchemaMismatchIsExplicit) {
  Json doc = space_to_json(FiniteMetricSpace::on_line(std::vector<double>{0, 1}));
  doc["schema_version"] = 99;
  try {
    space_from_json(doc);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("99"), std::string::npos);
  }
}

TEST(Json, ParseErrorHasLocation) {
  const auto path = std::filesystem::temp_directory_path() / "lipquot_bad.json";
  std::ofstream(path) << "{\"dist\": [[0, 1], [1 0]]}";
  try {
    read_json_file(path);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(Json, BadRowsAreInputErrors) {
  const Json doc = Json::parse(R"({"dist": [[0, 1], [1]]})");
  EXPECT_THROW(space_from_json(doc), InputError);
}
