// tests/unit/test_model.cc

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

#include "ernn/model.h"
#include "ernn/rng.h"

using namespace ernn;

namespace {

ModelConfig tiny_ernn() {
  ModelConfig cfg;
  cfg.arch = Arch::ernn;
  cfg.state_dim = 8;
  cfg.hidden_dim = 4;
  cfg.iters = 2;
  cfg.feature_dim = 17;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("exact parameter counts for the published configurations") {
  ModelConfig cfg;

  cfg.arch = Arch::ernn;
  cfg.state_dim = 256;
  cfg.hidden_dim = 256;
  cfg.iters = 3;
  CHECK(MaskModel<float>::count_parameters(cfg) == 329476);

  cfg.state_dim = 512;
  cfg.hidden_dim = 64;
  for (std::size_t k : {1u, 3u, 5u}) {
    cfg.iters = k;
    CHECK(MaskModel<float>::count_parameters(cfg) == 592705 + k);
  }

  cfg.state_dim = 256;
  cfg.hidden_dim = 32;
  cfg.iters = 1;
  CHECK(MaskModel<float>::count_parameters(cfg) == 214562);

  cfg.arch = Arch::lstm2;
  cfg.state_dim = 256;
  CHECK(MaskModel<float>::count_parameters(cfg) == 1117697);
  cfg.state_dim = 512;
  CHECK(MaskModel<float>::count_parameters(cfg) == 3808001);
}

TEST_CASE("count agrees with the scalars actually registered") {
  for (const Arch arch : {Arch::ernn, Arch::lstm2}) {
    ModelConfig cfg;
    cfg.arch = arch;
    cfg.state_dim = 24;
    cfg.hidden_dim = 10;
    cfg.iters = 3;
    cfg.feature_dim = 33;
    auto m = MaskModel<float>::create(cfg);
    CHECK(m->parameter_count() == MaskModel<float>::count_parameters(cfg));
  }
}

TEST_CASE("masks are in the open unit interval and have the right shape") {
  auto m = MaskModel<double>::create(tiny_ernn());
  Rng rng(71);
  Tensor<double> feats({6, 17});
  for (auto& v : feats.data) v = rng.gaussian();
  const auto masks = m->forward_masks(feats);
  CHECK(masks.rows() == 6);
  CHECK(masks.cols() == 17);
  for (double v : masks.data) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("zero-parameter model emits one half everywhere") {
  auto m = MaskModel<double>::create_uninitialized(tiny_ernn());
  Tensor<double> feats({3, 17});
  feats.fill(0.25);
  const auto masks = m->forward_masks(feats);
  for (double v : masks.data) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("future frames cannot influence past masks") {
  for (const Arch arch : {Arch::ernn, Arch::lstm2}) {
    ModelConfig cfg = tiny_ernn();
    cfg.arch = arch;
    auto m = MaskModel<double>::create(cfg);
    Rng rng(72);
    Tensor<double> feats({8, 17});
    for (auto& v : feats.data) v = rng.gaussian();
    const auto base = m->forward_masks(feats);

    Tensor<double> perturbed = feats;
    for (std::size_t tau = 5; tau < 8; ++tau)
      for (std::size_t i = 0; i < 17; ++i) perturbed.at2(tau, i) += rng.gaussian();
    const auto changed = m->forward_masks(perturbed);

    for (std::size_t tau = 0; tau < 5; ++tau)
      for (std::size_t i = 0; i < 17; ++i)
        CHECK(base.at2(tau, i) == changed.at2(tau, i));  // bit-exact
  }
}

TEST_CASE("feature width is validated") {
  auto m = MaskModel<double>::create(tiny_ernn());
  Tensor<double> feats({4, 16});
  CHECK_THROWS_AS(m->forward_masks(feats), std::invalid_argument);
}

TEST_CASE("same seed gives identical models") {
  auto a = MaskModel<float>::create(tiny_ernn());
  auto b = MaskModel<float>::create(tiny_ernn());
  for (std::size_t i = 0; i < a->params().count(); ++i) {
    const auto& pa = a->params().item(i);
    const auto& pb = b->params().item(i);
    REQUIRE(pa.name == pb.name);
    for (std::size_t j = 0; j < pa.value.size(); ++j) CHECK(pa.value[j] == pb.value[j]);
  }
}

TEST_CASE("tape forward equals plain forward on whole sequences") {
  for (const Arch arch : {Arch::ernn, Arch::lstm2}) {
    ModelConfig cfg = tiny_ernn();
    cfg.arch = arch;
    auto m = MaskModel<double>::create(cfg);
    Rng rng(73);
    Tensor<double> feats({5, 17});
    for (auto& v : feats.data) v = rng.gaussian();
    const auto plain = m->forward_masks(feats);

    ad::Tape<double> tape;
    auto ctx = m->bind(tape);
    for (std::size_t tau = 0; tau < 5; ++tau) {
      Tensor<double> f({17});
      for (std::size_t i = 0; i < 17; ++i) f[i] = feats.at2(tau, i);
      const auto mask = m->step_node(tape, ctx, tape.constant(std::move(f)));
      for (std::size_t i = 0; i < 17; ++i) CHECK(tape.value(mask)[i] == plain.at2(tau, i));
    }
  }
}
