// Copyright 2026 The tempspan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic proportional interleaving of example files.

#ifndef TEMPSPAN_MIXTURE_H_
#define TEMPSPAN_MIXTURE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tempspan {

enum class MixMode {
  kExact,    // stop as soon as the scheduled component has no item left
  kExhaust,  // cycle finished components until every one has been used up once
};

std::optional<MixMode> ParseMixMode(std::string_view name);
std::string_view ToString(MixMode mode);

struct MixtureComponent {
  std::string name;
  std::filesystem::path path;
  std::optional<double> weight;  // default: number of examples in the file
};

struct MixtureSpec {
  std::vector<MixtureComponent> components;
  MixMode mode = MixMode::kExact;
  uint64_t seed = 0;
  bool shuffle = false;       // shuffle each component in memory with the seed
  bool dedup_inputs = false;  // drop repeated (inputs, targets); exact mode only
};

// TOML or JSON (by extension) with keys mode, seed, shuffle, dedup_inputs and
// an array of tables `components` {name, path, weight?}. Relative paths are
// resolved against the spec file's directory.
MixtureSpec LoadMixtureSpec(const std::filesystem::path& path);
MixtureSpec ParseMixtureSpecToml(std::string_view text,
                                 const std::filesystem::path& base_dir = {});
MixtureSpec ParseMixtureSpecJson(std::string_view text,
                                 const std::filesystem::path& base_dir = {});

// Throws ValidationError: no components, duplicate or empty names, weights
// that are not positive and finite, dedup in exhaust mode.
void ValidateMixtureSpec(const MixtureSpec& spec);

// Apportionment schedule over fixed positive weights. After n picks every
// component i has been picked c_i times with |c_i - n * w_i / W| < 1.
//
// Earliest-deadline rule over the components that are owed at least
// s = 1 / (2k - 2) of a pick; the deadline of i is (c_i + 1 - s) / w_i. Ties
// go to the lower index. Weights are integers (see ResolveWeights).
class ProportionalScheduler {
 public:
  explicit ProportionalScheduler(std::vector<uint64_t> weights);

  size_t Next();

  const std::vector<uint64_t>& counts() const { return counts_; }
  uint64_t steps() const { return steps_; }

 private:
  std::vector<uint64_t> weights_;
  std::vector<uint64_t> counts_;
  unsigned __int128 total_ = 0;
  uint64_t steps_ = 0;
};

// Integer weights proportional to `weights`, exact for integral inputs and
// rounded to a 1e-6 grid otherwise.
std::vector<uint64_t> ResolveWeights(const std::vector<double>& weights);

struct MixStats {
  uint64_t emitted = 0;
  std::vector<uint64_t> per_component;
  uint64_t duplicates_dropped = 0;
  std::vector<uint64_t> weights;  // resolved integer weights
};

// Streams mixed example lines (jsonl, no newline). Every line is checked to
// be a well-formed example.
class MixtureStream {
 public:
  explicit MixtureStream(const MixtureSpec& spec);
  ~MixtureStream();
  MixtureStream(MixtureStream&&) noexcept;
  MixtureStream& operator=(MixtureStream&&) noexcept;

  std::optional<std::string> Next();
  const MixStats& stats() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// Writes the whole mixture to `out`, one line per example.
MixStats Mix(const MixtureSpec& spec, std::ostream& out);

}  // namespace tempspan

#endif  // TEMPSPAN_MIXTURE_H_
