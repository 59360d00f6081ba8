// src/dataset.cc

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

#include "ernn/dataset.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ernn/wav.h"

namespace ernn {

namespace {

UtterancePair load_pair(const std::string& id, const std::string& noisy_path,
                        const std::string& clean_path) {
  UtterancePair pair;
  pair.id = id;
  pair.noisy = load_wav(noisy_path);
  pair.clean = load_wav(clean_path);
  if (pair.noisy.size() != pair.clean.size())
    throw std::runtime_error("pair " + id + ": noisy/clean lengths differ (" +
                             std::to_string(pair.noisy.size()) + " vs " +
                             std::to_string(pair.clean.size()) + ")");
  if (pair.noisy.empty()) throw std::runtime_error("pair " + id + ": empty audio");
  return pair;
}

}  // namespace

std::vector<UtterancePair> load_pair_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw std::runtime_error("dataset directory not found: " + dir);
  const std::string suffix = "_noisy.wav";
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
      ids.push_back(name.substr(0, name.size() - suffix.size()));
  }
  std::sort(ids.begin(), ids.end());
  std::vector<UtterancePair> pairs;
  pairs.reserve(ids.size());
  for (const auto& id : ids) {
    const std::string noisy = (fs::path(dir) / (id + "_noisy.wav")).string();
    const std::string clean = (fs::path(dir) / (id + "_clean.wav")).string();
    if (!fs::exists(clean))
      throw std::runtime_error("missing clean file for pair " + id + ": " + clean);
    pairs.push_back(load_pair(id, noisy, clean));
  }
  if (pairs.empty()) throw std::runtime_error("no *_noisy.wav/*_clean.wav pairs in " + dir);
  return pairs;
}

std::vector<UtterancePair> load_pair_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::vector<UtterancePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected noisy_path<TAB>clean_path");
    pairs.push_back(load_pair("line" + std::to_string(lineno), line.substr(0, tab),
                              line.substr(tab + 1)));
  }
  if (pairs.empty()) throw std::runtime_error("manifest has no pairs: " + path);
  return pairs;
}

}  // namespace ernn
