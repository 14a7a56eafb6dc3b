#include "bden/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "bden/io.hpp"

namespace bden {

using Json = nlohmann::ordered_json;

namespace {

std::string type_name(const Json& v) { return v.type_name(); }

double number(const std::string& key, const Json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number, got " + type_name(v));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

std::uint64_t count(const std::string& key, const Json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError(key, "must be >= 0");
  // 1e4 style literals are fine as long as they are whole numbers
  const double x = number(key, v);
  if (x < 0) throw ConfigError(key, "must be >= 0");
  if (x != std::floor(x) || x > 1.8e19) throw ConfigError(key, "expected an integer");
  return static_cast<std::uint64_t>(x);
}

std::string text(const std::string& key, const Json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string, got " + type_name(v));
  return v.get<std::string>();
}

Mechanism mechanism_from(const std::string& key, const std::string& s) {
  if (s == "uniform") return Mechanism::uniform;
  if (s == "preferential") return Mechanism::preferential;
  throw ConfigError(key, "expected \"uniform\" or \"preferential\", got \"" + s + "\"");
}

void reject_unknown(const std::string& where, const Json& obj,
                    std::initializer_list<const char*> known) {
  for (const auto& [k, _] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* x) { return k == x; }) ==
        known.end())
      throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

PayoffMatrix parse_payoff(const Json& v) {
  if (!v.is_object()) throw ConfigError("payoff", "expected an object");
  if (v.contains("b") || v.contains("c")) {
    reject_unknown("payoff", v, {"b", "c"});
    if (!v.contains("b") || !v.contains("c")) throw ConfigError("payoff", "needs both b and c");
    const double b = number("payoff.b", v["b"]);
    const double c = number("payoff.c", v["c"]);
    if (!(c > 0)) throw ConfigError("payoff.c", "must be > 0");
    if (!(b > c)) throw ConfigError("payoff.b", "must exceed c");
    return PayoffMatrix::prisoners_dilemma(b, c);
  }
  reject_unknown("payoff", v, {"R", "S", "T", "P"});
  for (const char* k : {"R", "S", "T", "P"})
    if (!v.contains(k)) throw ConfigError("payoff", std::string("missing ") + k);
  return PayoffMatrix::general(number("payoff.R", v["R"]), number("payoff.S", v["S"]),
                               number("payoff.T", v["T"]), number("payoff.P", v["P"]));
}

InitialSpec parse_initial(const Json& v) {
  if (!v.is_object()) throw ConfigError("initial", "expected an object");
  if (!v.contains("type")) throw ConfigError("initial.type", "missing");
  const std::string type = text("initial.type", v["type"]);
  InitialSpec out;
  if (type == "complete") {
    reject_unknown("initial", v, {"type", "n"});
    out.type = InitialSpec::Type::complete;
    if (v.contains("n")) out.n = count("initial.n", v["n"]);
    if (out.n < 1) throw ConfigError("initial.n", "must be >= 1");
  } else if (type == "edge_list") {
    reject_unknown("initial", v, {"type", "path"});
    out.type = InitialSpec::Type::edge_list;
    out.n = 0;
    if (!v.contains("path")) throw ConfigError("initial.path", "missing");
    out.path = text("initial.path", v["path"]);
  } else {
    throw ConfigError("initial.type", "expected \"complete\" or \"edge_list\", got \"" + type + "\"");
  }
  return out;
}

std::vector<SweepAxis> parse_sweep(const Json& v) {
  if (!v.is_object()) throw ConfigError("sweep", "expected an object of value lists");
  std::vector<SweepAxis> axes;
  for (const auto& [name, values] : v.items()) {
    const std::string key = "sweep." + name;
    SweepAxis axis{};
    try {
      axis.parameter = sweep_parameter_from_string(name);
    } catch (const std::invalid_argument&) {
      throw ConfigError(key, "unknown sweep parameter");
    }
    if (!values.is_array() || values.empty()) throw ConfigError(key, "expected a non-empty list");
    for (const auto& x : values) {
      if (axis.parameter == SweepParameter::mechanism) {
        const auto mech = mechanism_from(key, text(key, x));
        axis.values.push_back(mech == Mechanism::uniform ? 0.0 : 1.0);
      } else if (axis.parameter == SweepParameter::m ||
                 axis.parameter == SweepParameter::initial_invaders) {
        axis.values.push_back(static_cast<double>(count(key, x)));
      } else {
        axis.values.push_back(number(key, x));
      }
    }
    if (std::any_of(axes.begin(), axes.end(),
                    [&](const SweepAxis& a) { return a.parameter == axis.parameter; }))
      throw ConfigError(key, "duplicate axis");
    axes.push_back(std::move(axis));
  }
  return axes;
}

bool has_axis(const RunConfig& c, SweepParameter p) {
  return std::any_of(c.sweep.begin(), c.sweep.end(),
                     [&](const SweepAxis& a) { return a.parameter == p; });
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string to_string(Mechanism mechanism) {
  return mechanism == Mechanism::uniform ? "uniform" : "preferential";
}

std::string to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::none: return "none";
    case DynamicsKind::drift: return "drift";
    case DynamicsKind::selection: return "selection";
  }
  return "?";
}

RunConfig parse_config(const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(source);
  } catch (const Json::parse_error& e) {
    // byte is 1-based and points just past the offending character
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError("", "config syntax error at line " +
                              std::to_string(line_of(source, at)) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");

  RunConfig c;
  bool have_lambda = false, have_mu = false, have_m = false, have_alpha = false;
  for (const auto& [key, v] : doc.items()) {
    if (key == "lambda") {
      c.lambda = number(key, v);
      if (!(c.lambda > 0)) throw ConfigError(key, "must be > 0");
      have_lambda = true;
    } else if (key == "mu") {
      c.mu = number(key, v);
      if (!(c.mu > 0)) throw ConfigError(key, "must be > 0");
      have_mu = true;
    } else if (key == "m") {
      c.m = count(key, v);
      if (c.m < 1) throw ConfigError(key, "must be >= 1");
      have_m = true;
    } else if (key == "mechanism") {
      c.mechanism = mechanism_from(key, text(key, v));
    } else if (key == "dynamics") {
      const std::string d = text(key, v);
      if (d == "none") c.dynamics = DynamicsKind::none;
      else if (d == "drift") c.dynamics = DynamicsKind::drift;
      else if (d == "selection") c.dynamics = DynamicsKind::selection;
      else throw ConfigError(key, "expected \"none\", \"drift\" or \"selection\", got \"" + d + "\"");
    } else if (key == "alpha") {
      c.alpha = number(key, v);
      if (!(c.alpha >= 0 && c.alpha <= 1)) throw ConfigError(key, "must be in [0, 1]");
      have_alpha = true;
    } else if (key == "payoff") {
      c.payoff = parse_payoff(v);
    } else if (key == "delta") {
      c.delta = number(key, v);
      if (!(c.delta >= 0)) throw ConfigError(key, "must be >= 0");
    } else if (key == "initial") {
      c.initial = parse_initial(v);
    } else if (key == "initial_invaders") {
      c.initial_invaders = count(key, v);
    } else if (key == "replicates") {
      c.replicates = count(key, v);
      if (c.replicates < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "t_max") {
      c.t_max = number(key, v);
      if (!(c.t_max >= 0)) throw ConfigError(key, "must be >= 0");
    } else if (key == "burn_in") {
      c.burn_in = number(key, v);
      if (!(c.burn_in >= 0)) throw ConfigError(key, "must be >= 0");
    } else if (key == "sample_dt") {
      c.sample_dt = number(key, v);
      if (!(c.sample_dt > 0)) throw ConfigError(key, "must be > 0");
    } else if (key == "event_limit") {
      c.event_limit = count(key, v);
      if (c.event_limit < 1) throw ConfigError(key, "must be >= 1");
    } else if (key == "seed") {
      c.seed = count(key, v);
    } else if (key == "output_path") {
      c.output_path = text(key, v);
    } else if (key == "sweep") {
      c.sweep = parse_sweep(v);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  if (!have_lambda) throw ConfigError("lambda", "required");
  if (!have_mu) throw ConfigError("mu", "required");
  if (!have_m) throw ConfigError("m", "required");
  if (c.dynamics == DynamicsKind::drift && !have_alpha && !has_axis(c, SweepParameter::alpha))
    throw ConfigError("alpha", "required for drift dynamics");
  if (c.dynamics == DynamicsKind::selection && !c.payoff)
    throw ConfigError("payoff", "required for selection dynamics");
  if (c.initial.type == InitialSpec::Type::complete && c.initial_invaders > c.initial.n)
    throw ConfigError("initial_invaders", "exceeds the initial node count " +
                                              std::to_string(c.initial.n));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const RunConfig& c) {
  Json doc;
  doc["lambda"] = c.lambda;
  doc["mu"] = c.mu;
  doc["m"] = c.m;
  doc["mechanism"] = to_string(c.mechanism);
  doc["dynamics"] = to_string(c.dynamics);
  doc["alpha"] = c.alpha;
  if (c.payoff) {
    if (c.payoff->benefit_cost)
      doc["payoff"] = {{"b", c.payoff->benefit_cost->first}, {"c", c.payoff->benefit_cost->second}};
    else
      doc["payoff"] = {{"R", c.payoff->R}, {"S", c.payoff->S}, {"T", c.payoff->T}, {"P", c.payoff->P}};
  }
  doc["delta"] = c.delta;
  if (c.initial.type == InitialSpec::Type::complete)
    doc["initial"] = {{"type", "complete"}, {"n", c.initial.n}};
  else
    doc["initial"] = {{"type", "edge_list"}, {"path", c.initial.path}};
  doc["initial_invaders"] = c.initial_invaders;
  doc["replicates"] = c.replicates;
  doc["t_max"] = c.t_max;
  doc["burn_in"] = c.burn_in;
  doc["sample_dt"] = c.sample_dt;
  doc["event_limit"] = c.event_limit;
  if (c.seed) doc["seed"] = *c.seed;
  if (c.output_path) doc["output_path"] = *c.output_path;
  if (!c.sweep.empty()) {
    Json axes = Json::object();
    for (const auto& axis : c.sweep) {
      Json values = Json::array();
      for (double x : axis.values) {
        if (axis.parameter == SweepParameter::mechanism)
          values.push_back(x == 0.0 ? "uniform" : "preferential");
        else if (axis.parameter == SweepParameter::m ||
                 axis.parameter == SweepParameter::initial_invaders)
          values.push_back(static_cast<std::uint64_t>(x));
        else
          values.push_back(x);
      }
      axes[to_string(axis.parameter)] = std::move(values);
    }
    doc["sweep"] = std::move(axes);
  }
  return doc.dump(2) + "\n";
}

SimParams to_sim_params(const RunConfig& c) {
  SimParams p;
  p.lambda = c.lambda;
  p.mu = c.mu;
  p.m = c.m;
  p.mechanism = c.mechanism;
  switch (c.dynamics) {
    case DynamicsKind::none: p.dynamics = NoDynamics{}; break;
    case DynamicsKind::drift: p.dynamics = DriftDynamics{c.alpha}; break;
    case DynamicsKind::selection: p.dynamics = SelectionDynamics{*c.payoff, c.delta}; break;
  }
  if (c.initial.type == InitialSpec::Type::complete) {
    p.initial = CompleteInitial{c.initial.n};
  } else {
    try {
      auto loaded = load_edge_list(c.initial.path);
      p.initial = EdgeListInitial{
          c.initial.path, std::make_shared<const DynamicGraph>(std::move(loaded.graph))};
    } catch (const IoError& e) {
      throw ConfigError("initial.path", e.what());
    }
  }
  p.initial_invaders = c.initial_invaders;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return p;
}

}  // namespace bden
