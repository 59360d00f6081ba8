// src/runconfig.cc

// Copyright 2026  ernn-se authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ernn/runconfig.h"

#include <fstream>
#include <stdexcept>

namespace ernn {

void RunConfig::validate() const {
  if (arch != "ernn" && arch != "lstm2")
    throw std::invalid_argument("config: arch must be ernn or lstm2, got " + arch);
  if (precision != "float32" && precision != "float64")
    throw std::invalid_argument("config: precision must be float32 or float64, got " + precision);
  if (ns == 0 || (arch == "ernn" && (nh == 0 || k == 0)))
    throw std::invalid_argument("config: model extents must be positive");
  if (batch == 0 || epochs == 0 || lr <= 0 || segment == 0)
    throw std::invalid_argument("config: training settings must be positive");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
}

namespace {

void apply(RunConfig& cfg, const nlohmann::json& j) {
  if (j.contains("arch")) cfg.arch = j.at("arch").get<std::string>();
  if (j.contains("ns")) cfg.ns = j.at("ns").get<std::size_t>();
  if (j.contains("nh")) cfg.nh = j.at("nh").get<std::size_t>();
  if (j.contains("k")) cfg.k = j.at("k").get<std::size_t>();
  if (j.contains("batch")) cfg.batch = j.at("batch").get<std::size_t>();
  if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<std::size_t>();
  if (j.contains("lr")) cfg.lr = j.at("lr").get<double>();
  if (j.contains("checkpoint_every"))
    cfg.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
  if (j.contains("segment")) cfg.segment = j.at("segment").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("precision")) cfg.precision = j.at("precision").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("data")) cfg.data = j.at("data").get<std::string>();
  if (j.contains("manifest")) cfg.manifest = j.at("manifest").get<std::string>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
}

}  // namespace

RunConfig resolve_run_config(const nlohmann::json& file_config, const nlohmann::json& overrides,
                             const char* env_seed) {
  RunConfig cfg;
  if (env_seed != nullptr && *env_seed != '\0') {
    try {
      cfg.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("ERNN_SEED is not an integer: ") + env_seed);
    }
  }
  if (!file_config.is_null()) apply(cfg, file_config);
  if (!overrides.is_null()) apply(cfg, overrides);
  return cfg;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON config: " + e.what());
  }
}

}  // namespace ernn
