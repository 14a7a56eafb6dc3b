#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bden/config.hpp"

using namespace bden;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunConfig random_config(Rng& rng) {
  RunConfig c;
  c.lambda = 0.5 + 5 * rng.uniform();
  c.mu = 0.001 + rng.uniform() / 10;
  c.m = 1 + rng.below(10);
  c.mechanism = rng.bernoulli(0.5) ? Mechanism::uniform : Mechanism::preferential;
  c.dynamics = static_cast<DynamicsKind>(rng.below(3));
  c.alpha = rng.uniform();
  if (c.dynamics == DynamicsKind::selection || rng.bernoulli(0.3)) {
    if (rng.bernoulli(0.5))
      c.payoff = PayoffMatrix::prisoners_dilemma(1.5 + 20 * rng.uniform(), 1 + rng.uniform() / 3);
    else
      c.payoff = PayoffMatrix::general(rng.uniform() - 0.5, -rng.uniform(), 3 * rng.uniform(), 0.1);
  }
  c.delta = rng.uniform() / 10;
  if (rng.bernoulli(0.8)) {
    c.initial.n = 1 + rng.below(60);
    c.initial_invaders = rng.below(c.initial.n + 1);
  } else {
    c.initial = {InitialSpec::Type::edge_list, 0, "graphs/some file.txt"};
    c.initial_invaders = rng.below(5);
  }
  c.replicates = 1 + rng.below(5000);
  c.t_max = 1e4 * rng.uniform();
  c.burn_in = 1e3 * rng.uniform();
  c.sample_dt = 0.01 + rng.uniform();
  c.event_limit = 1 + rng.below(1'000'000'000);
  if (rng.bernoulli(0.5)) c.seed = rng.next();
  if (rng.bernoulli(0.5)) c.output_path = "out/run.csv";
  if (rng.bernoulli(0.5)) {
    c.sweep.push_back({SweepParameter::lambda, {2, 3.5, 5}});
    c.sweep.push_back({SweepParameter::mechanism, {1, 0}});
    c.sweep.push_back({SweepParameter::m, {4, 8}});
  }
  return c;
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config(R"({"lambda":3, "mu":0.01, "m":5})");
  CHECK(c.lambda == 3);
  CHECK(c.mu == 0.01);
  CHECK(c.m == 5);
  CHECK(c.delta == 0.01);
  CHECK(c.mechanism == Mechanism::uniform);
  CHECK(c.dynamics == DynamicsKind::none);
  CHECK(c.burn_in == 1e3);
  CHECK(c.t_max == 1e4);
  CHECK(c.replicates == 1500);
  CHECK(c.sample_dt == 1);
  CHECK(c.event_limit == 50'000'000);
  CHECK(c.initial == InitialSpec{});
  CHECK(c.initial_invaders == 1);
  CHECK_FALSE(c.seed);
}

TEST_CASE("range errors name the key") {
  CHECK(key_of(R"({"alpha": 1.5})") == "alpha");
  CHECK(key_of(R"({"lambda": 0, "mu": 1, "m": 1})") == "lambda");
  CHECK(key_of(R"({"lambda": 1, "mu": -2, "m": 1})") == "mu");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 0})") == "m");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2.5})") == "m");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "delta": -0.1})") == "delta");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "replicates": 0})") == "replicates");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "sample_dt": 0})") == "sample_dt");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "mechanism": "random"})") == "mechanism");
  CHECK(key_of(R"({"lambda": "fast", "mu": 1, "m": 2})") == "lambda");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "initial_invaders": 31})") == "initial_invaders");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "payoff": {"b": 1, "c": 1}})") == "payoff.b");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "initial": {"type": "ring"}})") == "initial.type");
}

TEST_CASE("required keys") {
  CHECK(key_of(R"({"mu": 1, "m": 2})") == "lambda");
  CHECK(key_of(R"({"lambda": 1, "m": 2})") == "mu");
  CHECK(key_of(R"({"lambda": 1, "mu": 1})") == "m");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "dynamics": "drift"})") == "alpha");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "dynamics": "selection"})") == "payoff");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "dynamics": "drift", "sweep": {"alpha": [0.1]}})") == "<none>");
}

TEST_CASE("unknown keys are rejected") {
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "gamma": 3})") == "gamma");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "payoff": {"b": 3, "c": 1, "d": 0}})") == "payoff.d");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "initial": {"type": "complete", "size": 3}})") ==
        "initial.size");
  CHECK(key_of(R"({"lambda": 1, "mu": 1, "m": 2, "sweep": {"beta": [1]}})") == "sweep.beta");
}

TEST_CASE("syntax errors report the line") {
  const std::string text = "{\n  \"lambda\": 3,\n  \"mu\": 0.01,\n  \"m\": 4,,\n}\n";
  const auto msg = message_of(text);
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(key_of("[1, 2]") == "");
}

TEST_CASE("payoff forms") {
  const auto pd = parse_config(R"({"lambda":3,"mu":0.01,"m":4,"payoff":{"b":10,"c":1}})");
  REQUIRE(pd.payoff);
  CHECK(pd.payoff->R == 9);
  CHECK(pd.payoff->S == -1);
  CHECK(pd.payoff->T == 10);
  CHECK(pd.payoff->P == 0);
  const auto g = parse_config(R"({"lambda":3,"mu":0.01,"m":4,"payoff":{"R":1,"S":2,"T":3,"P":4}})");
  CHECK(*g.payoff == PayoffMatrix::general(1, 2, 3, 4));
}

TEST_CASE("sweep axes keep their order") {
  const auto c = parse_config(
      R"({"lambda":3,"mu":0.01,"m":4,"sweep":{"m":[4,6],"mechanism":["preferential","uniform"],"lambda":[2,3]}})");
  REQUIRE(c.sweep.size() == 3);
  CHECK(c.sweep[0].parameter == SweepParameter::m);
  CHECK(c.sweep[1].parameter == SweepParameter::mechanism);
  CHECK(c.sweep[1].values == std::vector<double>{1, 0});
  CHECK(c.sweep[2].parameter == SweepParameter::lambda);
  CHECK(key_of(R"({"lambda":3,"mu":0.01,"m":4,"sweep":{"m":[]}})") == "sweep.m");
}

TEST_CASE("integers written as floats") {
  const auto c = parse_config(R"({"lambda":3,"mu":0.01,"m":4.0,"event_limit":5e7,"replicates":1e3})");
  CHECK(c.m == 4);
  CHECK(c.event_limit == 50'000'000);
  CHECK(c.replicates == 1000);
}

TEST_CASE("emit then parse is the identity") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_config(rng);
    const auto text = emit_config(c);
    const auto back = parse_config(text);
    CHECK_MESSAGE(back == c, text);
  }
}

TEST_CASE("to_sim_params") {
  auto c = parse_config(R"({"lambda":3,"mu":0.01,"m":4,"dynamics":"selection","payoff":{"b":6,"c":1},"delta":0.02})");
  auto p = to_sim_params(c);
  const auto& sel = std::get<SelectionDynamics>(p.dynamics);
  CHECK(sel.delta == 0.02);
  CHECK(sel.payoff == PayoffMatrix::prisoners_dilemma(6, 1));

  c = parse_config(std::string(R"({"lambda":3,"mu":0.01,"m":4,"initial":{"type":"edge_list","path":")") +
                   BDEN_TEST_DATA + R"(/herd28.txt"}})");
  p = to_sim_params(c);
  CHECK(p.initial_node_count() == 28);

  c.initial.path = "/nonexistent/graph.txt";
  try {
    to_sim_params(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "initial.path");
  }

  c = parse_config(std::string(R"({"lambda":3,"mu":0.01,"m":4,"initial_invaders":29,"initial":{"type":"edge_list","path":")") +
                   BDEN_TEST_DATA + R"(/herd28.txt"}})");
  CHECK_THROWS_AS(to_sim_params(c), ConfigError);
}

TEST_CASE("load_config") {
  const auto path = std::filesystem::temp_directory_path() / "bden_config_test.json";
  std::ofstream(path) << R"({"lambda":2,"mu":0.01,"m":6})";
  CHECK(load_config(path.string()).m == 6);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path.string()), ConfigError);
}
