// ernn/runconfig.h

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

#ifndef ERNN_RUNCONFIG_H_
#define ERNN_RUNCONFIG_H_

#include <cstdint>
#include <string>

#include <json.hpp>

namespace ernn {

// Settings shared by the CLI subcommands. Precedence, lowest to highest:
// built-in default, ERNN_SEED (seed only), config file, command-line flag.
struct RunConfig {
  std::string arch = "ernn";
  std::size_t ns = 256;   // state width
  std::size_t nh = 128;   // ernn inner width
  std::size_t k = 1;      // ernn iterations
  std::size_t batch = 16;
  std::size_t epochs = 200;
  double lr = 0.0001;
  std::size_t checkpoint_every = 25;
  std::size_t segment = 16000;
  std::uint64_t seed = 1234;
  std::string precision = "float32";
  int threads = 1;
  std::string data;      // pair directory
  std::string manifest;  // alternative: tab-separated manifest
  std::string out_dir = ".";

  void validate() const;
};

// Pure merge so precedence is testable field by field. `env_seed` is the
// raw ERNN_SEED value or null.
RunConfig resolve_run_config(const nlohmann::json& file_config, const nlohmann::json& overrides,
                             const char* env_seed);

nlohmann::json load_config_file(const std::string& path);

}  // namespace ernn

#endif  // ERNN_RUNCONFIG_H_
