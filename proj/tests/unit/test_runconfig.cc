// tests/unit/test_runconfig.cc

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

#include <doctest.h>

#include "ernn/runconfig.h"

using namespace ernn;
using nlohmann::json;

TEST_CASE("defaults are sane") {
  const auto cfg = resolve_run_config(json(), json(), nullptr);
  CHECK(cfg.arch == "ernn");
  CHECK(cfg.ns == 256);
  CHECK(cfg.batch == 16);
  CHECK(cfg.lr == 0.0001);
  CHECK(cfg.seed == 1234);
  CHECK(cfg.precision == "float32");
  CHECK(cfg.threads == 1);
  cfg.validate();
}

TEST_CASE("flag beats file beats env beats default, per field") {
  const json file = {{"ns", 64}, {"epochs", 10}, {"seed", 777}, {"lr", 0.01}};
  const json flags = {{"ns", 32}, {"precision", "float64"}};

  const auto cfg = resolve_run_config(file, flags, "555");
  CHECK(cfg.ns == 32);              // flag over file
  CHECK(cfg.epochs == 10);          // file over default
  CHECK(cfg.seed == 777);           // file over env
  CHECK(cfg.lr == 0.01);            // file over default
  CHECK(cfg.precision == "float64");  // flag over default
  CHECK(cfg.batch == 16);           // untouched default

  const auto env_only = resolve_run_config(json(), json(), "555");
  CHECK(env_only.seed == 555);      // env over default

  const json seed_flag = {{"seed", 9}};
  CHECK(resolve_run_config(file, seed_flag, "555").seed == 9);  // flag over file and env
}

TEST_CASE("bad env seed is rejected") {
  CHECK_THROWS_AS(resolve_run_config(json(), json(), "not-a-number"), std::invalid_argument);
}

TEST_CASE("validation catches bad values") {
  RunConfig cfg;
  cfg.arch = "gru";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.precision = "fp8";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.threads = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RunConfig{};
  cfg.lr = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("missing config file raises") {
  CHECK_THROWS(load_config_file("/nonexistent/config.json"));
}
