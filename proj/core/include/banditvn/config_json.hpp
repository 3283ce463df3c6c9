#pragma once

// JSON experiment configuration.
//
// Recognised fields: dim, horizon_batches, runs (required); base_seed,
// record_every, delta, lambda0, policy, omega_mode, first_batch_weight, noise,
// floor_mu, floor_sigma2, theta, parallelism, maximizer {grid_size, restarts,
// iterations}. delta, lambda0 and record_every accept "auto"; theta accepts
// "random" or an array of numbers. Unknown fields are rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "banditvn/harness.hpp"

namespace banditvn::config {

// Throws ConfigError on malformed JSON, unknown fields, wrong types, or a
// config that fails ExperimentConfig::validate().
harness::ExperimentConfig parse_config(std::string_view json_text);
harness::ExperimentConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config (auto fields written as "auto").
std::string dump_config(const harness::ExperimentConfig& config);

}  // namespace banditvn::config
