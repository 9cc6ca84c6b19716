#include "polyred/experiments.hpp"

#include <doctest.h>
#include <json.hpp>

#include <set>
#include <sstream>

using namespace polyred;
using nlohmann::json;

namespace {

RunConfig config(const std::string& command, int samples = 5) {
  RunConfig c;
  c.command = command;
  c.samples = samples;
  return c;
}

const json* find_check(const json& j, const std::string& name) {
  for (const auto& c : j["checks"]) {
    if (c["name"] == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("counterexample report carries the expected outcomes") {
  const Report r = run(config("counterexample", 10));
  CHECK(r.all_met());
  const json j = json::parse(r.to_json());
  const json* g = find_check(j, "diagonal.guenther_claim");
  REQUIRE(g != nullptr);
  CHECK((*g)["status"] == "fail");
  CHECK((*g)["lhs_dim"] == 1);
  CHECK((*g)["rhs_dim"] == 2);
  CHECK((*g)["met"] == true);
  CHECK((*find_check(j, "diagonal.momentum_lemma_item1"))["status"] == "pass");
  CHECK((*find_check(j, "product_group.mw_cond_2"))["status"] == "pass");
  CHECK(j["metrics"]["product_group.quotient_dim"] == 4);
  CHECK(j["all_met"] == true);
}

TEST_CASE("every check name appears once") {
  for (const char* cmd : {"counterexample", "verify", "kks", "integrate", "harmonic"}) {
    RunConfig c = config(cmd, 3);
    c.grid = 4;
    const json j = json::parse(run(c).to_json());
    std::set<std::string> names;
    for (const auto& check : j["checks"]) CHECK(names.insert(check["name"].get<std::string>()).second);
    CHECK_FALSE(names.empty());
  }
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  RunConfig c = config("counterexample", 1);
  c.seed = 7;
  CHECK(run(c).to_json() == run(c).to_json());
  RunConfig v = config("verify", 4);
  v.seed = 99;
  CHECK(run(v).to_json() == run(v).to_json());
}

TEST_CASE("json metadata records seed and tolerances") {
  RunConfig c = config("verify", 2);
  c.seed = 12345;
  c.tol.rank_rel = 1e-8;
  const json j = json::parse(run(c).to_json());
  CHECK(j["seed"] == 12345);
  CHECK(j["samples"] == 2);
  CHECK(j["tolerances"]["rank_rel"] == 1e-8);
  CHECK(j["version"] == kVersion);
  CHECK(j["model"] == "group");
}

TEST_CASE("numbers serialize with 17 significant digits") {
  Report r;
  r.config.command = "verify";
  r.metrics = {{"x", 0.1}, {"nan", std::numeric_limits<double>::quiet_NaN()}};
  const std::string s = r.to_json();
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(json::parse(s)["metrics"]["nan"].is_null());
}

TEST_CASE("fixture verification is reported as a failure") {
  RunConfig c = config("verify", 2);
  c.model = "fixture";
  const Report r = run(c);
  CHECK_FALSE(r.all_met());
  const json j = json::parse(r.to_json());
  CHECK((*find_check(j, "mw_cond_1[1]"))["status"] == "pass");
  CHECK((*find_check(j, "mw_cond_2"))["status"] == "fail");
}

TEST_CASE("all verify models") {
  for (const char* model : {"group", "covelocity", "product_group"}) {
    RunConfig c = config("verify", 5);
    c.model = model;
    CHECK_MESSAGE(run(c).all_met(), model);
  }
  RunConfig d = config("verify", 3);
  d.model = "diagonal";
  CHECK_FALSE(run(d).all_met());
}

TEST_CASE("dependent momenta in the group model") {
  RunConfig c = config("verify", 5);
  c.mu = std::vector<double>{0, 0, 1, 0, 0, -2};
  const Report r = run(c);
  CHECK(r.all_met());
  const json j = json::parse(r.to_json());
  CHECK(j["metrics"]["quotient_dim"] == 2);
}

TEST_CASE("kks cases") {
  RunConfig c = config("kks", 10);
  CHECK(run(c).all_met());
  c.pi1 = std::vector<double>{1, 2, 3};
  c.pi2 = std::vector<double>{0, 1, 0};
  const json j = json::parse(run(c).to_json());
  CHECK(j["all_met"] == true);
  CHECK(j["metrics"]["case"] == 3);
  CHECK(j["metrics"]["omega1_id_12"].get<double>() == doctest::Approx(-3.0));
  c.pi1 = std::vector<double>{0, 0, 0};
  c.pi2 = std::vector<double>{0, 0, 0};
  CHECK(json::parse(run(c).to_json())["metrics"]["case"] == 1);
  c.pi1 = std::vector<double>{0, 0, 3};
  c.pi2.reset();
  c.lambda0 = -0.5;
  CHECK(run(c).all_met());
}

TEST_CASE("integrate and harmonic produce CSV") {
  RunConfig c = config("integrate");
  c.t_end = 0.5;
  const Report r = run(c);
  CHECK(r.all_met());
  CHECK(r.csv.rfind("t,nu1x", 0) == 0);
  RunConfig h = config("harmonic");
  h.grid = 5;
  const Report hr = run(h);
  CHECK(hr.all_met());
  std::istringstream in(hr.csv);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 26);
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(run(config("verify", 0)), InputError);
  RunConfig c = config("verify");
  c.model = "nope";
  CHECK_THROWS_AS(run(c), UnknownModelError);
  CHECK_THROWS_AS(run(config("bogus")), InputError);
  RunConfig d = config("integrate");
  d.dt = 0.0;
  CHECK_THROWS_AS(run(d), InputError);
  RunConfig m = config("integrate");
  m.mu = std::vector<double>{1, 2};
  CHECK_THROWS_AS(run(m), InputError);
  RunConfig comp = config("integrate");
  comp.component = 5;
  CHECK_THROWS_AS(run(comp), InputError);
}
