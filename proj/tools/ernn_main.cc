// tools/ernn_main.cc

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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ernn/checkpoint.h"
#include "ernn/dataset.h"
#include "ernn/diagnostics.h"
#include "ernn/gradcheck.h"
#include "ernn/metrics.h"
#include "ernn/runconfig.h"
#include "ernn/streaming.h"
#include "ernn/training.h"
#include "ernn/wav.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;

ernn::ModelConfig model_config_from(const ernn::RunConfig& cfg) {
  ernn::ModelConfig mc;
  mc.arch = ernn::arch_from_name(cfg.arch);
  mc.state_dim = cfg.ns;
  mc.hidden_dim = cfg.nh;
  mc.iters = cfg.k;
  mc.seed = cfg.seed;
  return mc;
}

// CLI11 options only override the config file when actually given.
struct FlagCollector {
  json values;
  std::vector<std::function<void()>> commits;

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *holder, help);
    commits.push_back([this, key, holder, opt] {
      if (opt->count() > 0) values[key] = *holder;
    });
  }

  void commit() {
    for (const auto& fn : commits) fn();
  }
};

template <ernn::Scalar T>
int run_train(const ernn::RunConfig& cfg) {
  std::vector<ernn::UtterancePair> dataset;
  if (!cfg.manifest.empty()) {
    dataset = ernn::load_pair_manifest(cfg.manifest);
  } else {
    if (cfg.data.empty() || !fs::is_directory(cfg.data)) {
      std::cerr << "error: dataset directory not found: "
                << (cfg.data.empty() ? "(unset)" : cfg.data) << "\n";
      return kExitUsage;
    }
    dataset = ernn::load_pair_directory(cfg.data);
  }

  auto model = ernn::MaskModel<T>::create(model_config_from(cfg));
  auto adam = ernn::AdamState<T>::init(model->params(), static_cast<T>(cfg.lr));

  ernn::TrainConfig tc;
  tc.batch_size = cfg.batch;
  tc.segment_len = cfg.segment;
  tc.epochs = cfg.epochs;
  tc.lr = cfg.lr;
  tc.seed = cfg.seed;
  tc.checkpoint_every = cfg.checkpoint_every;
  tc.threads = cfg.threads;

  fs::create_directories(cfg.out_dir);
  std::ofstream report(fs::path(cfg.out_dir) / "train-report.jsonl");
  const auto on_epoch = [&](const ernn::EpochStats& es) {
    json line = {{"epoch", es.epoch}, {"mean_loss", es.mean_loss}, {"wall_s", es.wall_seconds}};
    std::cout << line.dump() << "\n" << std::flush;
    report << line.dump() << "\n" << std::flush;
  };
  const auto on_checkpoint = [&](std::size_t epoch) {
    const bool final = epoch == tc.epochs;
    const fs::path path =
        fs::path(cfg.out_dir) /
        (final ? std::string("model-final.ckpt") : "model-epoch-" + std::to_string(epoch) + ".ckpt");
    ernn::save_checkpoint(*model, path.string(), &adam);
  };

  ernn::train(dataset, *model, adam, tc, on_epoch, on_checkpoint);
  json done = {{"done", true},
               {"epochs", tc.epochs},
               {"checkpoint", (fs::path(cfg.out_dir) / "model-final.ckpt").string()}};
  std::cout << done.dump() << "\n";
  return 0;
}

template <ernn::Scalar T>
int run_enhance(const std::string& checkpoint, const std::string& in_path,
                const std::string& out_path, bool stream_mode, int threads,
                const std::string& ref_path) {
  ernn::kernels::set_num_threads(threads);
  auto loaded = ernn::load_checkpoint<T>(checkpoint);
  const auto& model = *loaded.model;

  ernn::StftConfig cfg;
  if (model.config().feature_dim != cfg.bins())
    throw std::runtime_error("checkpoint feature dim " +
                             std::to_string(model.config().feature_dim) +
                             " is incompatible with the " + std::to_string(cfg.bins()) +
                             "-bin analysis");

  const std::vector<double> audio = ernn::load_wav(in_path);
  std::vector<T> x(audio.begin(), audio.end());

  std::vector<T> enhanced;
  const auto t0 = std::chrono::steady_clock::now();
  if (stream_mode) {
    ernn::StreamEnhancer<T> stream(model, cfg);
    enhanced = stream.push(x);
    const auto tail = stream.flush();
    enhanced.insert(enhanced.end(), tail.begin(), tail.end());
  } else {
    const auto wp = ernn::WindowPair<T>::hann(cfg);
    enhanced = ernn::enhance_offline(model, std::span<const T>(x.data(), x.size()), cfg, wp);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<double> out(enhanced.begin(), enhanced.end());
  const auto stats = ernn::write_wav(out_path, out);

  const double duration = static_cast<double>(audio.size()) / 16000.0;
  json rep = {{"input", in_path},
              {"output", out_path},
              {"samples", audio.size()},
              {"mode", stream_mode ? "stream" : "offline"},
              {"rtf", duration > 0 ? wall / duration : 0.0},
              {"clipped", stats.clipped}};
  if (!ref_path.empty()) {
    const std::vector<double> ref = ernn::load_wav(ref_path);
    if (ref.size() != out.size())
      throw std::runtime_error("reference length does not match the input");
    rep["metrics"] = {{"si_sdr_db", ernn::si_sdr(ref, out)},
                      {"si_sdr_noisy_db", ernn::si_sdr(ref, audio)},
                      {"seg_snr_db", ernn::segmental_snr(ref, out)},
                      {"seg_snr_noisy_db", ernn::segmental_snr(ref, audio)}};
  }
  std::cout << rep.dump() << "\n";
  return 0;
}

int run_params(const ernn::RunConfig& cfg) {
  const auto mc = model_config_from(cfg);
  const std::size_t exact = ernn::MaskModel<float>::count_parameters(mc);
  json rep = {{"arch", cfg.arch}, {"ns", cfg.ns},       {"nh", cfg.nh},
              {"k", cfg.k},       {"exact", exact},     {"rounded", ernn::format_param_count(exact)}};
  if (cfg.arch == "lstm2") {
    rep.erase("nh");
    rep.erase("k");
  }
  std::cout << rep.dump() << "\n";
  return 0;
}

int run_gradcheck(std::size_t probes, std::uint64_t seed) {
  // Small enough to finite-difference quickly, big enough to cross every op:
  // full loss path through masking and resynthesis on 0.05 s of audio.
  ernn::ModelConfig mc;
  mc.arch = ernn::Arch::ernn;
  mc.state_dim = 8;
  mc.hidden_dim = 4;
  mc.iters = 2;
  mc.seed = seed;
  auto model = ernn::MaskModel<double>::create(mc);

  ernn::StftConfig cfg;
  const auto wp = ernn::WindowPair<double>::hann(cfg);
  ernn::Rng rng(seed + 1);
  std::vector<double> noisy(800);
  for (auto& v : noisy) v = rng.uniform(-0.5, 0.5);
  std::vector<double> clean(noisy.size());
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i] = noisy[i] + 1.5;

  const auto eval = [&](bool with_grad) {
    ernn::ad::Tape<double> tape;
    const auto g = ernn::mae_time_loss_graph<double>(tape, *model, clean, noisy, cfg, wp);
    if (with_grad) {
      tape.backward(g.loss);
      tape.add_param_grads_to_store();
    }
    return tape.value(g.loss)[0];
  };

  ernn::Rng probe_rng(seed + 2);
  const auto rep = ernn::grad_check(model->params(), eval, probes, probe_rng);
  const bool pass = rep.max_rel_err < 1e-4;
  json out = {{"max_rel_err", rep.max_rel_err},
              {"probed", rep.probed},
              {"loss", rep.loss},
              {"worst", rep.worst_coordinate},
              {"pass", pass}};
  std::cout << out.dump() << "\n";
  return pass ? 0 : 1;
}

int run_bench(double seconds, std::size_t reps, const std::string& out_file,
              const std::string& trace_dir, std::uint64_t seed) {
  ernn::kernels::set_num_threads(1);
  json out;

  // Real-time factor across the iteration-count sweep.
  json rtf = json::array();
  for (const std::size_t k : {1u, 3u, 5u}) {
    ernn::ModelConfig mc;
    mc.arch = ernn::Arch::ernn;
    mc.state_dim = 256;
    mc.hidden_dim = 128;
    mc.iters = k;
    mc.seed = seed;
    auto model = ernn::MaskModel<float>::create(mc);
    const auto rep = ernn::rtf_benchmark(*model, seconds, reps, seed);
    rtf.push_back({{"arch", "ernn"},
                   {"ns", 256},
                   {"nh", 128},
                   {"k", k},
                   {"rtf", rep.rtf},
                   {"audio_seconds", rep.audio_seconds},
                   {"reps", rep.repetitions},
                   {"frame_p50_us", rep.frame_p50_us},
                   {"frame_p90_us", rep.frame_p90_us},
                   {"frame_p99_us", rep.frame_p99_us}});
  }
  out["rtf"] = rtf;

  // State-gradient decay traces per cell type.
  fs::create_directories(trace_dir.empty() ? "." : trace_dir);
  json traces = json::object();
  for (const auto kind : {ernn::CellKind::ernn, ernn::CellKind::lstm, ernn::CellKind::vanilla}) {
    ernn::NormTraceSpec spec;
    spec.kind = kind;
    spec.input_dim = 32;
    spec.state_dim = 32;
    spec.hidden_dim = 16;
    spec.iters = 3;
    spec.seq_len = 100;
    spec.probe_index = 10;
    spec.probes = 8;
    spec.seed = seed;
    if (kind == ernn::CellKind::vanilla) spec.rec_spectral_norm = 0.5;
    const auto trace = ernn::measure_state_gradient_norms(spec);
    traces[ernn::cell_kind_name(kind)] = trace;

    const fs::path csv_path =
        fs::path(trace_dir.empty() ? "." : trace_dir) /
        ("norm_trace_" + ernn::cell_kind_name(kind) + ".csv");
    std::ofstream csv(csv_path);
    csv << "distance,norm\n";
    for (std::size_t d = 0; d < trace.size(); ++d) csv << (d + 1) << "," << trace[d] << "\n";
  }
  out["norm_traces"] = traces;

  const std::string text = out.dump(2);
  if (!out_file.empty()) {
    std::ofstream f(out_file);
    f << text << "\n";
  }
  std::cout << text << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ernn-se: causal speech enhancement with an equilibriated recurrent mask estimator"};
  app.require_subcommand(1);

  std::string config_path;
  FlagCollector flags;

  auto add_model_flags = [&](CLI::App* cmd) {
    flags.add<std::string>(cmd, "--arch", "arch", "architecture: ernn | lstm2");
    flags.add<std::size_t>(cmd, "--ns", "ns", "recurrent state width");
    flags.add<std::size_t>(cmd, "--nh", "nh", "ernn inner width");
    flags.add<std::size_t>(cmd, "--k", "k", "ernn iteration count");
  };
  auto add_run_flags = [&](CLI::App* cmd) {
    flags.add<std::uint64_t>(cmd, "--seed", "seed", "rng seed (default from ERNN_SEED)");
    flags.add<std::string>(cmd, "--precision", "precision", "float32 | float64");
    flags.add<int>(cmd, "--threads", "threads", "worker threads; 1 = bit-reproducible");
  };

  auto* train_cmd = app.add_subcommand("train", "train a mask estimator");
  train_cmd->add_option("--config", config_path, "JSON config file");
  add_model_flags(train_cmd);
  add_run_flags(train_cmd);
  flags.add<std::string>(train_cmd, "--data", "data", "directory of *_noisy.wav/*_clean.wav");
  flags.add<std::string>(train_cmd, "--manifest", "manifest", "noisy<TAB>clean manifest file");
  flags.add<std::string>(train_cmd, "--out-dir", "out_dir", "checkpoint/report directory");
  flags.add<std::size_t>(train_cmd, "--epochs", "epochs", "training epochs");
  flags.add<std::size_t>(train_cmd, "--batch", "batch", "mini-batch size");
  flags.add<double>(train_cmd, "--lr", "lr", "Adam learning rate");
  flags.add<std::size_t>(train_cmd, "--checkpoint-every", "checkpoint_every",
                         "epochs between checkpoints (0 = final only)");
  flags.add<std::size_t>(train_cmd, "--segment", "segment", "training segment length, samples");

  auto* enhance_cmd = app.add_subcommand("enhance", "denoise a wav file");
  std::string ckpt_path, in_wav, out_wav, ref_wav;
  bool stream_mode = false;
  int enhance_threads = 1;
  std::string enhance_precision = "float32";
  enhance_cmd->add_option("--checkpoint", ckpt_path, "model checkpoint")->required();
  enhance_cmd->add_option("--in", in_wav, "input wav (16 kHz mono)")->required();
  enhance_cmd->add_option("--out", out_wav, "output wav")->required();
  enhance_cmd->add_flag("--stream", stream_mode, "use the frame-by-frame engine");
  enhance_cmd->add_option("--ref", ref_wav, "clean reference; adds si-sdr/seg-snr to the report");
  enhance_cmd->add_option("--threads", enhance_threads, "worker threads");
  enhance_cmd->add_option("--precision", enhance_precision, "float32 | float64");

  auto* params_cmd = app.add_subcommand("params", "print exact and rounded parameter counts");
  params_cmd->add_option("--config", config_path, "JSON config file");
  add_model_flags(params_cmd);

  auto* gradcheck_cmd =
      app.add_subcommand("gradcheck", "finite-difference audit of the end-to-end gradients");
  std::size_t probes = 220;
  std::uint64_t gc_seed = 12345;
  gradcheck_cmd->add_option("--probes", probes, "probed coordinates");
  gradcheck_cmd->add_option("--seed", gc_seed, "rng seed");

  auto* bench_cmd = app.add_subcommand("bench", "real-time factor and gradient-decay traces");
  double bench_seconds = 10.0;
  std::size_t bench_reps = 3;
  std::string bench_out, trace_dir = ".";
  std::uint64_t bench_seed = 7;
  bench_cmd->add_option("--seconds", bench_seconds, "audio length per repetition");
  bench_cmd->add_option("--reps", bench_reps, "repetitions (median reported)");
  bench_cmd->add_option("--out", bench_out, "also write the JSON report here");
  bench_cmd->add_option("--trace-dir", trace_dir, "directory for norm-trace CSVs");
  bench_cmd->add_option("--seed", bench_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);
  flags.commit();

  try {
    const json file_cfg =
        config_path.empty() ? json() : ernn::load_config_file(config_path);
    const ernn::RunConfig cfg =
        ernn::resolve_run_config(file_cfg, flags.values, std::getenv("ERNN_SEED"));

    if (app.got_subcommand(train_cmd)) {
      cfg.validate();
      ernn::kernels::set_num_threads(cfg.threads);
      return cfg.precision == "float64" ? run_train<double>(cfg) : run_train<float>(cfg);
    }
    if (app.got_subcommand(enhance_cmd)) {
      return enhance_precision == "float64"
                 ? run_enhance<double>(ckpt_path, in_wav, out_wav, stream_mode, enhance_threads,
                                       ref_wav)
                 : run_enhance<float>(ckpt_path, in_wav, out_wav, stream_mode, enhance_threads,
                                      ref_wav);
    }
    if (app.got_subcommand(params_cmd)) {
      cfg.validate();
      return run_params(cfg);
    }
    if (app.got_subcommand(gradcheck_cmd)) return run_gradcheck(probes, gc_seed);
    if (app.got_subcommand(bench_cmd))
      return run_bench(bench_seconds, bench_reps, bench_out, trace_dir, bench_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
