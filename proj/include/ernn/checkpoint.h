// ernn/checkpoint.h

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

#ifndef ERNN_CHECKPOINT_H_
#define ERNN_CHECKPOINT_H_

#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ernn/model.h"
#include "ernn/optimizer.h"

namespace ernn {

// Wire format, little-endian throughout:
//   bytes 0..7   magic "ERNNCKPT"
//   bytes 8..11  version (u32), currently 1
//   bytes 12..19 header length (u64)
//   UTF-8 JSON header: config + ordered parameter manifest (name, shape,
//   byte offset into the blob) + optional optimizer section
//   raw parameter data, IEEE-754 binary32
// Parameters are stored as binary32 regardless of the run precision, so a
// float64 model round-trips through float32.

enum class CheckpointErrorKind { bad_magic, unsupported_version, truncated, mismatch };

class CheckpointError : public std::runtime_error {
 public:
  CheckpointError(CheckpointErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  CheckpointErrorKind kind() const { return kind_; }

 private:
  CheckpointErrorKind kind_;
};

namespace ckpt_detail {

inline constexpr char kMagic[8] = {'E', 'R', 'N', 'N', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kVersion = 1;

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
  return {{"arch", arch_name(cfg.arch)},   {"state_dim", cfg.state_dim},
          {"hidden_dim", cfg.hidden_dim},  {"iters", cfg.iters},
          {"feature_dim", cfg.feature_dim}, {"seed", cfg.seed}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig cfg;
  cfg.arch = arch_from_name(j.at("arch").get<std::string>());
  cfg.state_dim = j.at("state_dim").get<std::size_t>();
  cfg.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  cfg.iters = j.at("iters").get<std::size_t>();
  cfg.feature_dim = j.at("feature_dim").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

template <Scalar T>
void append_f32(std::vector<char>& blob, const Tensor<T>& t) {
  for (T v : t.data) {
    const float f = static_cast<float>(v);
    char raw[4];
    std::memcpy(raw, &f, 4);
    blob.insert(blob.end(), raw, raw + 4);
  }
}

template <Scalar T>
void read_f32(const std::vector<char>& blob, std::size_t offset, Tensor<T>& out,
              const std::string& name) {
  const std::size_t need = offset + 4 * out.size();
  if (need > blob.size())
    throw CheckpointError(CheckpointErrorKind::truncated,
                          "checkpoint blob truncated while reading " + name);
  for (std::size_t i = 0; i < out.size(); ++i) {
    float f;
    std::memcpy(&f, blob.data() + offset + 4 * i, 4);
    out[i] = static_cast<T>(f);
  }
}

}  // namespace ckpt_detail

template <Scalar T>
void save_checkpoint(const MaskModel<T>& model, const std::string& path,
                     const AdamState<T>* adam = nullptr) {
  using nlohmann::json;
  const ParameterStore<T>& store = model.params();

  std::vector<char> blob;
  json manifest = json::array();
  for (std::size_t i = 0; i < store.count(); ++i) {
    const Parameter<T>& p = store.item(i);
    manifest.push_back(
        {{"name", p.name}, {"shape", p.value.shape}, {"offset", blob.size()}});
    ckpt_detail::append_f32(blob, p.value);
  }

  json header = {{"format_version", ckpt_detail::kVersion},
                 {"config", ckpt_detail::config_to_json(model.config())},
                 {"params", manifest}};
  if (adam) {
    json moments = json::array();
    for (std::size_t i = 0; i < store.count(); ++i) {
      const std::size_t m_off = blob.size();
      ckpt_detail::append_f32(blob, adam->m[i]);
      const std::size_t v_off = blob.size();
      ckpt_detail::append_f32(blob, adam->v[i]);
      moments.push_back({{"m_offset", m_off}, {"v_offset", v_off}});
    }
    header["adam"] = {{"lr", adam->lr},
                      {"beta1", adam->beta1},
                      {"beta2", adam->beta2},
                      {"eps", adam->eps},
                      {"step", adam->step_count},
                      {"moments", moments}};
  }

  const std::string header_text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(ckpt_detail::kMagic, 8);
  const std::uint32_t version = ckpt_detail::kVersion;
  out.write(reinterpret_cast<const char*>(&version), 4);
  const std::uint64_t header_len = header_text.size();
  out.write(reinterpret_cast<const char*>(&header_len), 8);
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

template <Scalar T>
struct LoadedCheckpoint {
  std::unique_ptr<MaskModel<T>> model;
  std::optional<AdamState<T>> adam;
};

template <Scalar T>
LoadedCheckpoint<T> load_checkpoint(const std::string& path) {
  using nlohmann::json;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  if (bytes.size() < 20)
    throw CheckpointError(CheckpointErrorKind::truncated, "checkpoint shorter than header");
  if (std::memcmp(bytes.data(), ckpt_detail::kMagic, 8) != 0)
    throw CheckpointError(CheckpointErrorKind::bad_magic, "bad checkpoint magic in " + path);
  std::uint32_t version;
  std::memcpy(&version, bytes.data() + 8, 4);
  if (version != ckpt_detail::kVersion)
    throw CheckpointError(CheckpointErrorKind::unsupported_version,
                          "unsupported checkpoint version " + std::to_string(version));
  std::uint64_t header_len;
  std::memcpy(&header_len, bytes.data() + 12, 8);
  if (20 + header_len > bytes.size())
    throw CheckpointError(CheckpointErrorKind::truncated, "checkpoint header truncated");

  json header;
  try {
    header = json::parse(bytes.begin() + 20, bytes.begin() + 20 + header_len);
  } catch (const json::exception& e) {
    throw CheckpointError(CheckpointErrorKind::mismatch,
                          std::string("unreadable checkpoint header: ") + e.what());
  }

  LoadedCheckpoint<T> result;
  try {
    const ModelConfig cfg = ckpt_detail::config_from_json(header.at("config"));
    result.model = MaskModel<T>::create_uninitialized(cfg);
    ParameterStore<T>& store = result.model->params();

    const std::vector<char> blob(bytes.begin() + 20 + header_len, bytes.end());
    const json& manifest = header.at("params");
    if (manifest.size() != store.count())
      throw CheckpointError(CheckpointErrorKind::mismatch,
                            "manifest lists " + std::to_string(manifest.size()) +
                                " parameters, model has " + std::to_string(store.count()));
    for (std::size_t i = 0; i < store.count(); ++i) {
      Parameter<T>& p = store.item(i);
      const json& entry = manifest[i];
      if (entry.at("name").get<std::string>() != p.name)
        throw CheckpointError(CheckpointErrorKind::mismatch,
                              "manifest name " + entry.at("name").get<std::string>() +
                                  " does not match " + p.name);
      const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      if (shape != p.value.shape)
        throw CheckpointError(CheckpointErrorKind::mismatch,
                              "shape mismatch for " + p.name + ": manifest " +
                                  shape_string(shape) + " vs model " +
                                  shape_string(p.value.shape));
      ckpt_detail::read_f32(blob, entry.at("offset").get<std::size_t>(), p.value, p.name);
    }

    if (header.contains("adam")) {
      const json& ja = header.at("adam");
      AdamState<T> adam = AdamState<T>::init(store, static_cast<T>(ja.at("lr").get<double>()));
      adam.beta1 = static_cast<T>(ja.at("beta1").get<double>());
      adam.beta2 = static_cast<T>(ja.at("beta2").get<double>());
      adam.eps = static_cast<T>(ja.at("eps").get<double>());
      adam.step_count = ja.at("step").get<long>();
      const json& moments = ja.at("moments");
      if (moments.size() != store.count())
        throw CheckpointError(CheckpointErrorKind::mismatch, "optimizer moment count mismatch");
      for (std::size_t i = 0; i < store.count(); ++i) {
        ckpt_detail::read_f32(blob, moments[i].at("m_offset").get<std::size_t>(), adam.m[i],
                              store.item(i).name + ".m");
        ckpt_detail::read_f32(blob, moments[i].at("v_offset").get<std::size_t>(), adam.v[i],
                              store.item(i).name + ".v");
      }
      result.adam = std::move(adam);
    }
  } catch (const json::exception& e) {
    throw CheckpointError(CheckpointErrorKind::mismatch,
                          std::string("malformed checkpoint header: ") + e.what());
  }
  return result;
}

}  // namespace ernn

#endif  // ERNN_CHECKPOINT_H_
