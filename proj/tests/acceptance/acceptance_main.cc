// tests/acceptance/acceptance_main.cc

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

// End-to-end verification battery. Each criterion prints one PASS/FAIL line
// with its wall time and a short summary; the process exits nonzero if any
// criterion fails. Run through ctest or directly:
//   acceptance [--ernn-bin path/to/ernn]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ernn/checkpoint.h"
#include "ernn/dataset.h"
#include "ernn/diagnostics.h"
#include "ernn/gradcheck.h"
#include "ernn/metrics.h"
#include "ernn/streaming.h"
#include "ernn/training.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ernn;

namespace {

struct Context {
  std::string ernn_bin;  // CLI binary for the params criterion; optional
  fs::path artifacts = "acceptance_artifacts";
};

// --------------------------------------------------------------------------
// Synthetic speech surrogates: harmonic tones with slow amplitude movement
// plus white noise mixed at a chosen SNR. Narrowband target + broadband
// noise is the masking task the estimator is supposed to learn.
// --------------------------------------------------------------------------

std::vector<double> make_voice(Rng& rng, std::size_t samples) {
  const double f0 = rng.uniform(120.0, 340.0);
  const int harmonics = 4 + static_cast<int>(rng.below(3));
  std::vector<double> amp(harmonics), phase(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    amp[h] = 1.0 / (1.0 + h) * rng.uniform(0.6, 1.0);
    phase[h] = rng.uniform(0.0, 2.0 * M_PI);
  }
  const double env_rate = rng.uniform(1.0, 3.0);
  const double env_phase = rng.uniform(0.0, 2.0 * M_PI);
  std::vector<double> x(samples);
  for (std::size_t t = 0; t < samples; ++t) {
    const double tt = static_cast<double>(t) / 16000.0;
    const double env = 0.35 + 0.65 * 0.5 * (1.0 + std::sin(2.0 * M_PI * env_rate * tt + env_phase));
    double v = 0;
    for (int h = 0; h < harmonics; ++h)
      v += amp[h] * std::sin(2.0 * M_PI * f0 * (h + 1) * tt + phase[h]);
    x[t] = env * v;
  }
  double rms = 0;
  for (double v : x) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(samples));
  for (auto& v : x) v *= 0.1 / rms;
  return x;
}

UtterancePair make_pair(Rng& rng, std::size_t samples, double snr_db, const std::string& id) {
  UtterancePair p;
  p.id = id;
  p.clean = make_voice(rng, samples);
  double clean_rms = 0;
  for (double v : p.clean) clean_rms += v * v;
  clean_rms = std::sqrt(clean_rms / static_cast<double>(samples));
  const double noise_rms = clean_rms / std::pow(10.0, snr_db / 20.0);
  p.noisy = p.clean;
  for (auto& v : p.noisy) v += noise_rms * rng.gaussian();
  return p;
}

double improvement_db(const MaskModel<float>& model, const UtterancePair& pair) {
  StftConfig cfg;
  const auto wp = WindowPair<float>::hann(cfg);
  std::vector<float> noisy(pair.noisy.begin(), pair.noisy.end());
  const auto enhanced_f = enhance_offline<float>(model, noisy, cfg, wp);
  std::vector<double> enhanced(enhanced_f.begin(), enhanced_f.end());
  return si_sdr(pair.clean, enhanced) - si_sdr(pair.clean, pair.noisy);
}

std::string run_cli(const std::string& cmd) {
  std::string out;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return out;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
  ::pclose(pipe);
  return out;
}

template <class T>
double rel_error(const std::vector<T>& got, const std::vector<T>& want) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double d = static_cast<double>(got[i]) - static_cast<double>(want[i]);
    num += d * d;
    den += static_cast<double>(want[i]) * static_cast<double>(want[i]);
  }
  return std::sqrt(num / den);
}

// --------------------------------------------------------------------------
// 1. Parameter-count oracle
// --------------------------------------------------------------------------
bool criterion_param_counts(Context& ctx, std::string& detail) {
  struct Row {
    std::string arch;
    std::size_t ns, nh;
    std::string rounded;
  };
  const std::vector<Row> rows = {
      {"ernn", 256, 256, "329k"}, {"ernn", 512, 512, "1.05M"}, {"ernn", 256, 32, "215k"},
      {"ernn", 256, 64, "231k"},  {"ernn", 256, 128, "264k"},  {"ernn", 512, 32, "560k"},
      {"ernn", 512, 64, "593k"},  {"ernn", 512, 128, "658k"},  {"ernn", 512, 256, "790k"},
      {"lstm2", 256, 0, "1.12M"}, {"lstm2", 512, 0, "3.81M"},
  };

  std::size_t checked = 0;
  for (const auto& row : rows) {
    const std::vector<std::size_t> ks =
        row.arch == "ernn" ? std::vector<std::size_t>{1, 3, 5} : std::vector<std::size_t>{1};
    for (const std::size_t k : ks) {
      std::string rounded;
      if (!ctx.ernn_bin.empty()) {
        std::string cmd = ctx.ernn_bin + " params --arch " + row.arch + " --ns " +
                          std::to_string(row.ns);
        if (row.arch == "ernn")
          cmd += " --nh " + std::to_string(row.nh) + " --k " + std::to_string(k);
        const std::string out = run_cli(cmd);
        try {
          rounded = json::parse(out).at("rounded").get<std::string>();
        } catch (const std::exception&) {
          detail = "unparseable params output for " + cmd + ": " + out;
          return false;
        }
      } else {
        ModelConfig mc;
        mc.arch = arch_from_name(row.arch);
        mc.state_dim = row.ns;
        mc.hidden_dim = row.arch == "ernn" ? row.nh : 1;
        mc.iters = row.arch == "ernn" ? k : 1;
        rounded = format_param_count(MaskModel<float>::count_parameters(mc));
      }
      if (rounded != row.rounded) {
        detail = row.arch + " ns=" + std::to_string(row.ns) + " nh=" + std::to_string(row.nh) +
                 " k=" + std::to_string(k) + " rounded to " + rounded + ", published " +
                 row.rounded;
        return false;
      }
      ++checked;
    }
  }
  detail = std::to_string(checked) + " table entries match" +
           (ctx.ernn_bin.empty() ? " (library path; no --ernn-bin)" : " via the params command");
  return true;
}

// --------------------------------------------------------------------------
// 2. STFT perfect reconstruction
// --------------------------------------------------------------------------
bool criterion_reconstruction(Context&, std::string& detail) {
  StftConfig cfg;
  const auto wpd = WindowPair<double>::hann(cfg);
  const auto wpf = WindowPair<float>::hann(cfg);
  Rng rng(2001);
  double worst64 = 0, worst32 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xd(16000);
    for (auto& v : xd) v = rng.uniform(-1.0, 1.0);
    const auto spec = stft<double>(xd, cfg, wpd);
    worst64 = std::max(worst64, rel_error(istft(spec, wpd, xd.size()), xd));

    std::vector<float> xf(xd.begin(), xd.end());
    const auto specf = stft<float>(xf, cfg, wpf);
    worst32 = std::max(worst32, rel_error(istft(specf, wpf, xf.size()), xf));
  }
  std::ostringstream os;
  os << "rel err 64-bit " << worst64 << " (< 1e-10), 32-bit " << worst32 << " (< 1e-5)";
  detail = os.str();
  return worst64 < 1e-10 && worst32 < 1e-5;
}

// --------------------------------------------------------------------------
// 3. End-to-end gradient correctness
// --------------------------------------------------------------------------
bool criterion_gradients(Context&, std::string& detail) {
  ModelConfig mc;
  mc.arch = Arch::ernn;
  mc.state_dim = 8;
  mc.hidden_dim = 4;
  mc.iters = 2;
  mc.seed = 3001;
  auto model = MaskModel<double>::create(mc);

  StftConfig cfg;
  const auto wp = WindowPair<double>::hann(cfg);
  Rng rng(3002);
  std::vector<double> noisy(800);  // 0.05 s
  for (auto& v : noisy) v = rng.uniform(-0.5, 0.5);
  std::vector<double> clean(noisy.size());
  for (std::size_t i = 0; i < clean.size(); ++i) clean[i] = noisy[i] + 1.5;

  const auto eval = [&](bool with_grad) {
    ad::Tape<double> tape;
    const auto g = mae_time_loss_graph<double>(tape, *model, clean, noisy, cfg, wp);
    if (with_grad) {
      tape.backward(g.loss);
      tape.add_param_grads_to_store();
    }
    return tape.value(g.loss)[0];
  };

  Rng probe_rng(3003);
  const auto rep = grad_check(model->params(), eval, 220, probe_rng);
  std::ostringstream os;
  os << rep.probed << " coordinates (all step sizes included), max rel err " << rep.max_rel_err
     << " (< 1e-4), worst " << rep.worst_coordinate;
  detail = os.str();
  return rep.probed >= 200 && rep.max_rel_err < 1e-4;
}

// --------------------------------------------------------------------------
// 4. Overfit smoke test
// --------------------------------------------------------------------------
bool criterion_overfit(Context&, std::string& detail) {
  Rng rng(4001);
  std::vector<UtterancePair> data = {make_pair(rng, 16000, 5.0, "overfit")};

  ModelConfig mc;
  mc.arch = Arch::ernn;
  mc.state_dim = 64;
  mc.hidden_dim = 32;
  mc.iters = 3;
  mc.seed = 4002;
  auto model = MaskModel<float>::create(mc);
  auto adam = AdamState<float>::init(model->params(), 1e-4f);

  TrainConfig tc;
  tc.batch_size = 1;
  tc.epochs = 500;  // one optimizer step per epoch on a single pair
  tc.seed = 4003;
  tc.checkpoint_every = 0;
  tc.threads = 1;
  const auto stats = train(data, *model, adam, tc);

  const double first = stats.front().mean_loss;
  const double last = stats.back().mean_loss;
  const double gain = improvement_db(*model, data[0]);
  std::ostringstream os;
  os << "loss " << first << " -> " << last << " (need <= " << 0.2 * first << "), si-sdr "
     << (gain >= 0 ? "+" : "") << gain << " dB";
  detail = os.str();
  return last <= 0.2 * first && gain > 0.0;
}

// --------------------------------------------------------------------------
// 5. Desk-scale generalization
// --------------------------------------------------------------------------
bool criterion_generalization(Context&, std::string& detail) {
  Rng rng(5001);
  std::vector<UtterancePair> train_set, held_out;
  for (int i = 0; i < 50; ++i)
    train_set.push_back(make_pair(rng, 32000, rng.uniform(0.0, 10.0), "tr" + std::to_string(i)));
  for (int i = 0; i < 10; ++i)
    held_out.push_back(make_pair(rng, 32000, rng.uniform(0.0, 10.0), "ho" + std::to_string(i)));

  ModelConfig mc;
  mc.arch = Arch::ernn;
  mc.state_dim = 256;
  mc.hidden_dim = 128;
  mc.iters = 1;
  mc.seed = 5002;
  auto model = MaskModel<float>::create(mc);
  auto adam = AdamState<float>::init(model->params(), 1e-4f);

  TrainConfig tc;
  tc.batch_size = 16;
  tc.epochs = 30;
  tc.seed = 5003;
  tc.checkpoint_every = 0;
  tc.threads = 1;
  const auto stats = train(train_set, *model, adam, tc);

  double mean_gain = 0;
  for (const auto& pair : held_out) mean_gain += improvement_db(*model, pair);
  mean_gain /= static_cast<double>(held_out.size());

  std::ostringstream os;
  os << "loss " << stats.front().mean_loss << " -> " << stats.back().mean_loss
     << ", held-out mean si-sdr improvement " << mean_gain << " dB (need >= 1)";
  detail = os.str();
  return mean_gain >= 1.0;
}

// --------------------------------------------------------------------------
// 6. Causality
// --------------------------------------------------------------------------
bool criterion_causality(Context&, std::string& detail) {
  ModelConfig mc;
  mc.arch = Arch::ernn;
  mc.state_dim = 32;
  mc.hidden_dim = 16;
  mc.iters = 2;
  mc.seed = 6001;
  auto model = MaskModel<float>::create(mc);
  StftConfig cfg;
  const auto wp = WindowPair<float>::hann(cfg);

  Rng rng(6002);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t len = 4000 + rng.below(8000);
    const std::size_t t = 1024 + rng.below(len - 2048);
    std::vector<float> a(len), b(len);
    for (auto& v : a) v = static_cast<float>(rng.uniform(-0.8, 0.8));
    b = a;
    for (std::size_t i = t + 1; i < len; ++i)
      b[i] = static_cast<float>(rng.uniform(-0.8, 0.8));

    const auto ya = enhance_offline<float>(*model, a, cfg, wp);
    const auto yb = enhance_offline<float>(*model, b, cfg, wp);
    StreamEnhancer<float> sa(*model, cfg), sb(*model, cfg);
    auto za = sa.push(a);
    const auto ta = sa.flush();
    za.insert(za.end(), ta.begin(), ta.end());
    auto zb = sb.push(b);
    const auto tb = sb.flush();
    zb.insert(zb.end(), tb.begin(), tb.end());

    for (std::size_t i = 0; i + 511 <= t; ++i) {
      if (ya[i] != yb[i]) {
        detail = "offline outputs diverge at " + std::to_string(i) + " with inputs equal to " +
                 std::to_string(t);
        return false;
      }
      if (za[i] != zb[i]) {
        detail = "streaming outputs diverge at " + std::to_string(i) + " with inputs equal to " +
                 std::to_string(t);
        return false;
      }
    }
  }
  detail = "20 prefix pairs, offline and streaming outputs bit-exact up to t-511";
  return true;
}

// --------------------------------------------------------------------------
// 7. Streaming parity and chunking invariance
// --------------------------------------------------------------------------
bool criterion_parity(Context&, std::string& detail) {
  ModelConfig mc;
  mc.arch = Arch::ernn;
  mc.state_dim = 48;
  mc.hidden_dim = 24;
  mc.iters = 2;
  mc.seed = 7001;
  auto model = MaskModel<float>::create(mc);
  StftConfig cfg;
  const auto wp = WindowPair<float>::hann(cfg);

  Rng rng(7002);
  std::vector<float> x(32000);
  for (auto& v : x) v = static_cast<float>(rng.uniform(-0.8, 0.8));

  const auto offline = enhance_offline<float>(*model, x, cfg, wp);

  const auto stream_with_chunk = [&](std::size_t chunk) {
    StreamEnhancer<float> s(*model, cfg);
    std::vector<float> out;
    for (std::size_t pos = 0; pos < x.size(); pos += chunk) {
      const std::size_t n = std::min(chunk, x.size() - pos);
      const auto part = s.push(std::span<const float>(x.data() + pos, n));
      out.insert(out.end(), part.begin(), part.end());
    }
    const auto tail = s.flush();
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
  };

  const auto whole = stream_with_chunk(x.size());
  if (whole.size() != x.size()) {
    detail = "length contract violated";
    return false;
  }
  for (const std::size_t chunk : {std::size_t{1}, std::size_t{160}, std::size_t{4096}}) {
    const auto out = stream_with_chunk(chunk);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] != whole[i]) {
        detail = "chunk size " + std::to_string(chunk) + " diverges at sample " +
                 std::to_string(i);
        return false;
      }
  }
  const double err = rel_error(whole, offline);
  std::ostringstream os;
  os << "chunkings {1,160,4096,all} bit-identical; offline parity rel err " << err
     << " (< 1e-5)";
  detail = os.str();
  return err < 1e-5;
}

// --------------------------------------------------------------------------
// 8. Gradient-dynamics contrast
// --------------------------------------------------------------------------
bool criterion_gradient_dynamics(Context& ctx, std::string& detail) {
  NormTraceSpec spec;
  spec.kind = CellKind::vanilla;
  spec.input_dim = 32;
  spec.state_dim = 32;
  spec.seq_len = 40;
  spec.probe_index = 8;
  spec.probes = 8;
  spec.seed = 8001;
  spec.rec_spectral_norm = 0.5;
  const auto vanilla = measure_state_gradient_norms(spec);

  for (std::size_t i = 0; i < vanilla.size(); ++i) {
    const double bound = std::pow(0.5, static_cast<double>(i + 1)) * (1.0 + 1e-6);
    if (vanilla[i] > bound) {
      detail = "vanilla trace exceeds the contraction bound at distance " + std::to_string(i + 1);
      return false;
    }
  }
  if (vanilla[19] >= 1e-6) {
    detail = "vanilla trace still " + std::to_string(vanilla[19]) + " at distance 20";
    return false;
  }

  fs::create_directories(ctx.artifacts);
  for (const auto kind : {CellKind::ernn, CellKind::lstm, CellKind::vanilla}) {
    NormTraceSpec s2 = spec;
    s2.kind = kind;
    s2.hidden_dim = 16;
    s2.iters = 3;
    s2.rec_spectral_norm = kind == CellKind::vanilla ? 0.5 : 0.0;
    const auto trace = measure_state_gradient_norms(s2);
    std::ofstream csv(ctx.artifacts / ("norm_trace_" + cell_kind_name(kind) + ".csv"));
    csv << "distance,norm\n";
    for (std::size_t d = 0; d < trace.size(); ++d) csv << (d + 1) << "," << trace[d] << "\n";
  }

  std::ostringstream os;
  os << "vanilla obeys 0.5^d at all 32 distances, reaches " << vanilla[19]
     << " at d=20; ernn/lstm traces written to " << ctx.artifacts.string();
  detail = os.str();
  return true;
}

// --------------------------------------------------------------------------
// 9. Real-time factor
// --------------------------------------------------------------------------
bool criterion_rtf(Context&, std::string& detail) {
  kernels::set_num_threads(1);
  std::vector<double> rtfs;
  for (const std::size_t k : {1u, 3u, 5u}) {
    ModelConfig mc;
    mc.arch = Arch::ernn;
    mc.state_dim = 256;
    mc.hidden_dim = 128;
    mc.iters = k;
    mc.seed = 9001;
    auto model = MaskModel<float>::create(mc);
    rtfs.push_back(rtf_benchmark(*model, 10.0, 3, 9002).rtf);
  }
  std::ostringstream os;
  os << "rtf K=1: " << rtfs[0] << ", K=3: " << rtfs[1] << ", K=5: " << rtfs[2];
  detail = os.str();
  return rtfs[0] < 1.0 && rtfs[0] <= rtfs[1] && rtfs[1] <= rtfs[2];
}

// --------------------------------------------------------------------------
// 10. Checkpoint round trip
// --------------------------------------------------------------------------
bool criterion_checkpoint(Context& ctx, std::string& detail) {
  fs::create_directories(ctx.artifacts);
  const auto path = (ctx.artifacts / "roundtrip.ckpt").string();

  std::vector<ModelConfig> configs;
  for (const std::size_t ns : {256u, 512u}) {
    ModelConfig mc;
    mc.arch = Arch::ernn;
    mc.state_dim = ns;
    mc.hidden_dim = ns / 4;
    mc.iters = 3;
    mc.seed = 10001;
    configs.push_back(mc);
    mc.arch = Arch::lstm2;
    configs.push_back(mc);
  }
  for (const auto& mc : configs) {
    auto m = MaskModel<float>::create(mc);
    save_checkpoint(*m, path);
    const auto loaded = load_checkpoint<float>(path);
    for (std::size_t i = 0; i < m->params().count(); ++i) {
      const auto& a = m->params().item(i);
      const auto& b = loaded.model->params().item(i);
      for (std::size_t j = 0; j < a.value.size(); ++j)
        if (a.value[j] != b.value[j]) {
          detail = arch_name(mc.arch) + " ns=" + std::to_string(mc.state_dim) +
                   " not bit-exact at " + a.name;
          return false;
        }
    }
  }

  // Corrupt fixtures, one per error class.
  auto m = MaskModel<float>::create(configs[0]);
  save_checkpoint(*m, path);
  std::ifstream in(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  const auto expect = [&](const std::vector<char>& corrupted, CheckpointErrorKind kind,
                          const char* what) {
    const auto cpath = (ctx.artifacts / "corrupt.ckpt").string();
    std::ofstream out(cpath, std::ios::binary);
    out.write(corrupted.data(), static_cast<std::streamsize>(corrupted.size()));
    out.close();
    try {
      load_checkpoint<float>(cpath);
    } catch (const CheckpointError& e) {
      if (e.kind() == kind) return true;
      detail = std::string(what) + ": wrong error class";
      return false;
    } catch (const std::exception& e) {
      detail = std::string(what) + ": wrong exception type: " + e.what();
      return false;
    }
    detail = std::string(what) + ": loaded without error";
    return false;
  };

  auto bad_magic = bytes;
  bad_magic[3] = 'x';
  if (!expect(bad_magic, CheckpointErrorKind::bad_magic, "magic fixture")) return false;

  auto bad_version = bytes;
  bad_version[8] = 99;
  if (!expect(bad_version, CheckpointErrorKind::unsupported_version, "version fixture"))
    return false;

  auto truncated = bytes;
  truncated.resize(truncated.size() / 2);
  if (!expect(truncated, CheckpointErrorKind::truncated, "truncated fixture")) return false;

  // Manifest/shape mismatch: header claims a wider model than the blob holds.
  std::uint64_t header_len;
  std::memcpy(&header_len, bytes.data() + 12, 8);
  auto header = json::parse(std::string(bytes.begin() + 20, bytes.begin() + 20 + header_len));
  header["config"]["state_dim"] = 384;
  const std::string new_header = header.dump();
  std::vector<char> mismatched(bytes.begin(), bytes.begin() + 12);
  const std::uint64_t new_len = new_header.size();
  mismatched.insert(mismatched.end(), reinterpret_cast<const char*>(&new_len),
                    reinterpret_cast<const char*>(&new_len) + 8);
  mismatched.insert(mismatched.end(), new_header.begin(), new_header.end());
  mismatched.insert(mismatched.end(), bytes.begin() + 20 + header_len, bytes.end());
  if (!expect(mismatched, CheckpointErrorKind::mismatch, "mismatch fixture")) return false;

  detail = "4 architectures bit-exact; magic/version/truncated/mismatch fixtures each distinct";
  return true;
}

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;
  std::function<bool(Context&, std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--ernn-bin" && i + 1 < argc) ctx.ernn_bin = argv[i + 1];
  }

  const std::vector<Criterion> criteria = {
      {1, "parameter-count oracle", 1.0, criterion_param_counts},
      {2, "stft perfect reconstruction", 10.0, criterion_reconstruction},
      {3, "end-to-end gradient correctness", 60.0, criterion_gradients},
      {4, "overfit smoke test", 600.0, criterion_overfit},
      {5, "desk-scale generalization", 7200.0, criterion_generalization},
      {6, "causality", 30.0, criterion_causality},
      {7, "streaming parity + chunking invariance", 60.0, criterion_parity},
      {8, "gradient-dynamics contrast", 60.0, criterion_gradient_dynamics},
      {9, "real-time factor", 300.0, criterion_rtf},
      {10, "checkpoint round trip", 10.0, criterion_checkpoint},
  };

  kernels::set_num_threads(1);
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(ctx, detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      ok = false;
      detail += " [over budget " + std::to_string(c.budget_seconds) + " s]";
    }
    std::printf("[%2d] %s  %-40s (%.2f s)  %s\n", c.number, ok ? "PASS" : "FAIL", c.name.c_str(),
                secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
