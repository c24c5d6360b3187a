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

#include "tempspan/mixture.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "tempspan/error.h"
#include "tempspan/masking.h"
#include "tempspan/records.h"
#include "toml.hpp"

namespace tempspan {
namespace {

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

// Uniform in [0, n) by rejection, identical across standard libraries.
size_t BoundedDraw(std::mt19937_64& engine, size_t n) {
  const uint64_t bound = n;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x = engine();
  while (x >= limit) x = engine();
  return static_cast<size_t>(x % bound);
}

// One component file, read as a stream or (shuffled) from memory.
class ComponentSource {
 public:
  ComponentSource(const MixtureComponent& component, bool shuffle, uint64_t seed)
      : component_(component) {
    JsonlReader counter(component.path);
    std::string line;
    while (counter.Next(&line)) {
      ++size_;
      if (shuffle) lines_.push_back(std::move(line));
    }
    if (size_ == 0) {
      throw ValidationError("mixture component '" + component.name +
                            "' has no examples: " + component.path.string());
    }
    if (shuffle) {
      in_memory_ = true;
      std::mt19937_64 engine(SentenceSeed(seed, component.name));
      for (size_t i = lines_.size(); i > 1; --i) {
        std::swap(lines_[i - 1], lines_[BoundedDraw(engine, i)]);
      }
    } else {
      reader_ = std::make_unique<JsonlReader>(component.path);
    }
  }

  uint64_t size() const { return size_; }
  bool AtEnd() const { return position_ == size_; }

  // Next line of the current pass, with its parsed example.
  std::string Take(MaskedExample* example) {
    std::string line;
    std::string where;
    if (in_memory_) {
      line = lines_[position_];
      where = component_.path.string() + ": shuffled item " + std::to_string(position_) + ": ";
    } else {
      if (!reader_->Next(&line)) {
        throw IoError(component_.path.string() + " changed while mixing");
      }
      where = reader_->Where();
    }
    ++position_;
    try {
      *example = MaskedExampleFromJson(line);
    } catch (const std::exception& e) {
      throw FormatError(where + e.what());
    }
    return line;
  }

  void Rewind() {
    position_ = 0;
    if (!in_memory_) reader_ = std::make_unique<JsonlReader>(component_.path);
  }

 private:
  MixtureComponent component_;
  uint64_t size_ = 0;
  uint64_t position_ = 0;
  bool in_memory_ = false;
  std::vector<std::string> lines_;
  std::unique_ptr<JsonlReader> reader_;
};

template <typename Get>
MixtureSpec BuildSpec(Get&& get_components, std::string mode, int64_t seed,
                      bool shuffle, bool dedup) {
  MixtureSpec spec;
  const auto parsed = ParseMixMode(mode);
  if (!parsed) throw FormatError("unknown mixture mode '" + mode + "'");
  spec.mode = *parsed;
  spec.seed = static_cast<uint64_t>(seed);
  spec.shuffle = shuffle;
  spec.dedup_inputs = dedup;
  spec.components = get_components();
  ValidateMixtureSpec(spec);
  return spec;
}

}  // namespace

std::optional<MixMode> ParseMixMode(std::string_view name) {
  if (name == "exact") return MixMode::kExact;
  if (name == "exhaust") return MixMode::kExhaust;
  return std::nullopt;
}

std::string_view ToString(MixMode mode) {
  return mode == MixMode::kExact ? "exact" : "exhaust";
}

MixtureSpec ParseMixtureSpecToml(std::string_view text,
                                 const std::filesystem::path& base_dir) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "mixture spec: " << e.description() << " at line "
        << e.source().begin.line;
    throw FormatError(msg.str());
  }
  auto components = [&] {
    std::vector<MixtureComponent> out;
    const toml::array* array = table["components"].as_array();
    if (array == nullptr) throw FormatError("mixture spec: missing [[components]]");
    for (const toml::node& node : *array) {
      const toml::table* c = node.as_table();
      if (c == nullptr) throw FormatError("mixture spec: component is not a table");
      MixtureComponent component;
      const auto name = (*c)["name"].value<std::string>();
      const auto path = (*c)["path"].value<std::string>();
      if (!name || !path) {
        throw FormatError("mixture spec: component needs string 'name' and 'path'");
      }
      component.name = *name;
      component.path = Resolve(base_dir, *path);
      if (c->contains("weight")) {
        const auto weight = (*c)["weight"].value<double>();
        if (!weight) throw FormatError("mixture spec: weight of '" + *name + "' is not a number");
        component.weight = *weight;
      }
      out.push_back(std::move(component));
    }
    return out;
  };
  return BuildSpec(components, table["mode"].value_or(std::string("exact")),
                   table["seed"].value_or(int64_t{0}),
                   table["shuffle"].value_or(false),
                   table["dedup_inputs"].value_or(false));
}

MixtureSpec ParseMixtureSpecJson(std::string_view text,
                                 const std::filesystem::path& base_dir) {
  const nlohmann::json doc =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FormatError("mixture spec: not a JSON object");
  }
  try {
    auto components = [&] {
      std::vector<MixtureComponent> out;
      for (const auto& c : doc.at("components")) {
        MixtureComponent component;
        component.name = c.at("name").get<std::string>();
        component.path = Resolve(base_dir, c.at("path").get<std::string>());
        if (c.contains("weight")) component.weight = c.at("weight").get<double>();
        out.push_back(std::move(component));
      }
      return out;
    };
    return BuildSpec(components, doc.value("mode", std::string("exact")),
                     doc.value("seed", int64_t{0}), doc.value("shuffle", false),
                     doc.value("dedup_inputs", false));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("mixture spec: ") + e.what());
  }
}

MixtureSpec LoadMixtureSpec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mixture spec " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::filesystem::path base = path.parent_path();
  if (path.extension() == ".json") return ParseMixtureSpecJson(buffer.str(), base);
  return ParseMixtureSpecToml(buffer.str(), base);
}

void ValidateMixtureSpec(const MixtureSpec& spec) {
  if (spec.components.empty()) throw ValidationError("mixture needs at least one component");
  std::set<std::string> names;
  for (const MixtureComponent& c : spec.components) {
    if (c.name.empty()) throw ValidationError("mixture component with empty name");
    if (!names.insert(c.name).second) {
      throw ValidationError("duplicate mixture component name '" + c.name + "'");
    }
    if (c.weight && !(std::isfinite(*c.weight) && *c.weight > 0)) {
      throw ValidationError("weight of component '" + c.name + "' must be positive");
    }
  }
  if (spec.dedup_inputs && spec.mode == MixMode::kExhaust) {
    throw ValidationError("dedup_inputs is only supported in exact mode");
  }
}

std::vector<uint64_t> ResolveWeights(const std::vector<double>& weights) {
  const bool integral = std::all_of(weights.begin(), weights.end(), [](double w) {
    return w == std::floor(w) && w < 9.0e15;
  });
  std::vector<uint64_t> out;
  for (double w : weights) {
    const double scaled = integral ? w : std::round(w * 1e6);
    if (!(scaled >= 1)) throw ValidationError("weight too small to schedule");
    out.push_back(static_cast<uint64_t>(scaled));
  }
  return out;
}

ProportionalScheduler::ProportionalScheduler(std::vector<uint64_t> weights)
    : weights_(std::move(weights)), counts_(weights_.size(), 0) {
  if (weights_.empty()) throw ValidationError("scheduler needs at least one weight");
  for (uint64_t w : weights_) {
    if (w == 0) throw ValidationError("scheduler weights must be positive");
    total_ += w;
  }
}

size_t ProportionalScheduler::Next() {
  using I128 = __int128;
  const size_t k = weights_.size();
  ++steps_;
  if (k == 1) {
    ++counts_[0];
    return 0;
  }
  // s = 1 / m with m = 2k - 2. Component i is owed at least s when
  // (n * w_i - c_i * W) * m >= W; its scaled deadline is
  // ((c_i + 1) * m - 1) / w_i.
  const I128 m = static_cast<I128>(2 * k - 2);
  const I128 n = steps_;
  const I128 total = static_cast<I128>(total_);
  size_t best = k;
  for (size_t i = 0; i < k; ++i) {
    const I128 w = weights_[i];
    const I128 c = counts_[i];
    if ((n * w - c * total) * m < total) continue;
    if (best == k) {
      best = i;
      continue;
    }
    const I128 di = (c + 1) * m - 1;
    const I128 db = static_cast<I128>(counts_[best] + 1) * m - 1;
    if (di * static_cast<I128>(weights_[best]) < db * w) best = i;
  }
  if (best == k) {
    // Unreachable for exact arithmetic; keep the stream going regardless.
    best = 0;
    for (size_t i = 1; i < k; ++i) {
      if (n * weights_[i] - static_cast<I128>(counts_[i]) * total >
          n * weights_[best] - static_cast<I128>(counts_[best]) * total) {
        best = i;
      }
    }
  }
  ++counts_[best];
  return best;
}

struct MixtureStream::State {
  MixtureSpec spec;
  std::vector<std::unique_ptr<ComponentSource>> sources;
  std::unique_ptr<ProportionalScheduler> scheduler;
  std::vector<bool> used_up;
  std::unordered_set<ExampleFingerprint, ExampleFingerprintHash> seen;
  MixStats stats;
  bool done = false;
};

MixtureStream::MixtureStream(const MixtureSpec& spec) : state_(std::make_unique<State>()) {
  ValidateMixtureSpec(spec);
  state_->spec = spec;
  std::vector<double> weights;
  for (const MixtureComponent& c : spec.components) {
    state_->sources.push_back(std::make_unique<ComponentSource>(c, spec.shuffle, spec.seed));
    weights.push_back(c.weight ? *c.weight
                               : static_cast<double>(state_->sources.back()->size()));
  }
  state_->stats.weights = ResolveWeights(weights);
  state_->stats.per_component.assign(spec.components.size(), 0);
  state_->scheduler = std::make_unique<ProportionalScheduler>(state_->stats.weights);
  state_->used_up.assign(spec.components.size(), false);
}

MixtureStream::~MixtureStream() = default;
MixtureStream::MixtureStream(MixtureStream&&) noexcept = default;
MixtureStream& MixtureStream::operator=(MixtureStream&&) noexcept = default;

const MixStats& MixtureStream::stats() const { return state_->stats; }

std::optional<std::string> MixtureStream::Next() {
  State& s = *state_;
  if (s.done) return std::nullopt;
  const size_t i = s.scheduler->Next();
  ComponentSource& source = *s.sources[i];
  MaskedExample example;
  std::string line;
  while (true) {
    if (source.AtEnd()) {
      if (s.spec.mode == MixMode::kExact) {
        s.done = true;
        return std::nullopt;
      }
      source.Rewind();
    }
    line = source.Take(&example);
    if (!s.spec.dedup_inputs || s.seen.insert(Fingerprint(example)).second) break;
    ++s.stats.duplicates_dropped;
  }
  if (source.AtEnd()) s.used_up[i] = true;
  if (s.spec.mode == MixMode::kExhaust &&
      std::all_of(s.used_up.begin(), s.used_up.end(), [](bool b) { return b; })) {
    s.done = true;
  }
  ++s.stats.emitted;
  ++s.stats.per_component[i];
  return line;
}

MixStats Mix(const MixtureSpec& spec, std::ostream& out) {
  MixtureStream stream(spec);
  while (auto line = stream.Next()) out << *line << '\n';
  if (!out) throw IoError("write error while mixing");
  return stream.stats();
}

}  // namespace tempspan
