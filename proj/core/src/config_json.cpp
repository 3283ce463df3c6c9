#include "banditvn/config_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "banditvn/error.hpp"

namespace banditvn::config {

namespace {

using nlohmann::json;

std::size_t get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ConfigError(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_real(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::optional<double> get_auto_real(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return std::nullopt;
    throw ConfigError(std::string(key) + " must be \"auto\" or a number");
  }
  return get_real(j, key);
}

void parse_maximizer(const json& m, policies::MaximizerSettings& out) {
  if (!m.is_object()) throw ConfigError("maximizer must be an object");
  for (const auto& [key, _] : m.items()) {
    if (key != "grid_size" && key != "restarts" && key != "iterations") {
      throw ConfigError("unknown maximizer field '" + key + "'");
    }
  }
  if (m.contains("grid_size")) out.grid_size = get_count(m, "grid_size");
  if (m.contains("restarts")) out.restarts = get_count(m, "restarts");
  if (m.contains("iterations")) out.iterations = get_count(m, "iterations");
}

}  // namespace

harness::ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::set<std::string> known = {
      "dim",         "horizon_batches", "runs",        "base_seed",          "record_every",
      "delta",       "lambda0",         "policy",      "omega_mode",         "first_batch_weight",
      "noise",       "floor_mu",        "floor_sigma2", "theta",             "parallelism",
      "maximizer"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  for (const char* key : {"dim", "horizon_batches", "runs"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required field '") + key + "'");
  }

  harness::ExperimentConfig c;
  try {
    c.dim = get_count(j, "dim");
    c.horizon_batches = get_count(j, "horizon_batches");
    c.runs = get_count(j, "runs");
    if (j.contains("base_seed")) {
      const json& s = j.at("base_seed");
      if (!s.is_number_unsigned()) throw ConfigError("base_seed must be an unsigned integer");
      c.base_seed = s.get<std::uint64_t>();
    }
    if (j.contains("record_every")) {
      const json& v = j.at("record_every");
      if (v.is_string() && v.get<std::string>() == "auto") {
        c.record_every = std::nullopt;
      } else {
        c.record_every = get_count(j, "record_every");
      }
    }
    c.delta = get_auto_real(j, "delta");
    c.lambda0 = get_auto_real(j, "lambda0");
    if (j.contains("policy")) c.policy = policies::parse_policy_kind(get_string(j, "policy"));
    if (j.contains("omega_mode")) {
      c.omega_mode = policies::parse_omega_mode(get_string(j, "omega_mode"));
    }
    if (j.contains("first_batch_weight")) {
      c.first_batch = policies::parse_first_batch_weight(get_string(j, "first_batch_weight"));
    }
    if (j.contains("noise")) c.noise = env::parse_noise_mode(get_string(j, "noise"));
    if (j.contains("floor_mu")) c.floor_mu = get_real(j, "floor_mu");
    if (j.contains("floor_sigma2")) c.floor_sigma2 = get_real(j, "floor_sigma2");
    if (j.contains("theta")) {
      const json& t = j.at("theta");
      if (t.is_string()) {
        if (t.get<std::string>() != "random") {
          throw ConfigError("theta must be \"random\" or an array of numbers");
        }
      } else if (t.is_array()) {
        linalg::Vec theta;
        for (const auto& x : t) {
          if (!x.is_number()) throw ConfigError("theta entries must be numbers");
          theta.push_back(x.get<double>());
        }
        c.theta = std::move(theta);
      } else {
        throw ConfigError("theta must be \"random\" or an array of numbers");
      }
    }
    if (j.contains("parallelism")) c.parallelism = get_count(j, "parallelism");
    if (j.contains("maximizer")) parse_maximizer(j.at("maximizer"), c.maximizer);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

harness::ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_config(const harness::ExperimentConfig& c) {
  json j;
  j["dim"] = c.dim;
  j["horizon_batches"] = c.horizon_batches;
  j["runs"] = c.runs;
  j["base_seed"] = c.base_seed;
  j["record_every"] = c.record_every ? json(*c.record_every) : json("auto");
  j["delta"] = c.delta ? json(*c.delta) : json("auto");
  j["lambda0"] = c.lambda0 ? json(*c.lambda0) : json("auto");
  j["policy"] = std::string(policies::to_string(c.policy));
  j["omega_mode"] = std::string(policies::to_string(c.omega_mode));
  j["first_batch_weight"] = std::string(policies::to_string(c.first_batch));
  j["noise"] = std::string(env::to_string(c.noise));
  j["floor_mu"] = c.floor_mu;
  j["floor_sigma2"] = c.floor_sigma2;
  j["theta"] = c.theta ? json(*c.theta) : json("random");
  j["parallelism"] = c.parallelism;
  j["maximizer"] = {{"grid_size", c.maximizer.grid_size},
                    {"restarts", c.maximizer.restarts},
                    {"iterations", c.maximizer.iterations}};
  return j.dump(2) + "\n";
}

}  // namespace banditvn::config
