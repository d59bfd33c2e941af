#include <doctest.h>

#include <cmath>
#include <set>

#include "bohm/experiments.hpp"

using namespace bohm;

TEST_CASE("parameter values round-trip through text") {
  for (double x : {0.1, 1e-10, -3.25, 1000.0, 0.30000000000000004}) {
    const auto v = parse_value(ParamType::real, format_value(x));
    CHECK(std::get<double>(v) == x);
  }
  CHECK(std::get<std::int64_t>(parse_value(ParamType::integer, "-12")) == -12);
  CHECK(std::get<std::uint64_t>(parse_value(ParamType::seed, "18446744073709551615")) ==
        18446744073709551615ull);
  CHECK(std::get<std::string>(parse_value(ParamType::text, "a,b")) == "a,b");
  CHECK_THROWS(parse_value(ParamType::real, "1.0x"));
  CHECK_THROWS(parse_value(ParamType::real, "inf"));
  CHECK_THROWS(parse_value(ParamType::integer, "1.5"));
  CHECK_THROWS(parse_value(ParamType::seed, "-1"));
  CHECK_THROWS(parse_value(ParamType::real, ""));
}

TEST_CASE("catalog") {
  const auto& cat = experiment_catalog();
  std::set<std::string> names;
  for (const auto& e : cat) {
    names.insert(e.name);
    std::set<std::string> keys;
    for (const auto& p : e.params) {
      CHECK(keys.insert(p.key).second);
      CHECK(type_of(p.default_value) == p.type);
    }
  }
  CHECK(names == std::set<std::string>{"exp_momentum_basic", "exp_born", "exp_contextuality",
                                       "exp_coordinate", "exp_sequential_uncertainty",
                                       "exp_decoherence"});
  CHECK(find_experiment("exp_born")->figure == "Fig. 2");
  CHECK(find_experiment("exp_sequential_uncertainty")->figure == "Figs. 4–6");
  CHECK(find_experiment("exp_momentum_basic")->figure == "Fig. 1");
  CHECK(find_experiment("nope") == nullptr);
  CHECK_THROWS_AS(run_named("exp_born", {{"lamda", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(run_named("exp_born", {{"samples", "many"}}), std::invalid_argument);
  CHECK_THROWS_AS(run_named("nope"), std::invalid_argument);
}

TEST_CASE("coordinate experiment") {
  const auto r = run_named("exp_coordinate");
  CHECK(r.acceptance_passed());
  CHECK(r.check("linear_needle_law").value <= 1e-9);
  CHECK(r.check("rejects_strong_coupling").passed);
  CHECK(r.table("readout").rows.size() == 1000);
  CHECK(r.counters.at("point_q0_2.r_T") == doctest::Approx(0.02).epsilon(1e-10));
  CHECK_THROWS_AS(run_named("exp_coordinate", {{"T", "3"}, {"lambda", "1"}}),
                  ProjectiveLimitViolation);
  try {
    run_named("exp_coordinate", {{"T", "3"}, {"lambda", "1"}});
  } catch (const ProjectiveLimitViolation& e) {
    CHECK(e.report().ratio == 3.0);
    CHECK_FALSE(e.report().valid);
  }
}

TEST_CASE("decoherence experiment") {
  const auto r = run_named("exp_decoherence", {{"lock_samples", "200"}});
  CHECK(r.acceptance_passed());
  bool found = false;
  for (const auto& row : r.table("grid").rows) {
    if (row[1] == 1.0 && row[2] == 1.0 && row[3] == 2.0) {
      CHECK(row[4] == 3.0);
      found = true;
    }
  }
  CHECK(found);
  CHECK(r.table("grid").rows.size() == 27);
}

TEST_CASE("contextuality experiment") {
  const auto r = run_named("exp_contextuality", {{"samples", "0"}});
  CHECK(r.acceptance_passed());
  CHECK(r.check("contextuality_witness").passed);
  for (const auto& row : r.table("sweep").rows) {
    CHECK(row[4] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(row[0 + 1] == 0.0);
  }
}

TEST_CASE("small ensemble experiments run and are thread-independent") {
  const std::map<std::string, std::string> base{{"samples", "200"}, {"bundle", "3"}};
  auto one = base;
  one["threads"] = "1";
  auto three = base;
  three["threads"] = "3";
  const auto a = run_named("exp_momentum_basic", one);
  const auto b = run_named("exp_momentum_basic", three);
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t t = 0; t < a.tables.size(); ++t) CHECK(a.tables[t].rows == b.tables[t].rows);
  CHECK(a.check("resolved_fraction").passed);

  const auto born = run_named("exp_born", {{"samples", "300"}, {"control_samples", "5"}});
  CHECK(born.check("control_single_outcome").passed);
  CHECK(born.table("histogram").rows.size() == 7);

  const auto seq = run_named("exp_sequential_uncertainty",
                             {{"samples", "300"}, {"bundle", "2"}, {"group_floor", "10"}});
  CHECK(seq.check("eligible_groups").passed);
  CHECK(seq.has_check("reverse_order_violation_demo"));
  CHECK(seq.table("dispersion_all").columns ==
        std::vector<std::string>{"t", "delta_q", "product"});
}
