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


// End-to-end corpus processing: ingest, parse, detect salient spans, mask.

#ifndef TEMPSPAN_PIPELINE_H_
#define TEMPSPAN_PIPELINE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempspan/corpus.h"
#include "tempspan/error.h"
#include "tempspan/masking.h"
#include "tempspan/span_sources.h"
#include "tempspan/temporal.h"

namespace tempspan {

enum class EntitySource { kNone, kFile, kHeuristic };

struct PipelineConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::kJsonl;
  std::optional<std::filesystem::path> rules_path;  // default grammar when unset
  EntitySource entity_source = EntitySource::kNone;
  std::filesystem::path entities_path;  // for EntitySource::kFile
  std::vector<Strategy> strategies;
  std::optional<uint64_t> seed;
  std::filesystem::path out_dir;
  bool strict = false;
  bool dedup = false;  // drop repeated (inputs, targets) within a strategy
  size_t jobs = 1;
};

// Checks the configuration without touching the filesystem. Throws
// ValidationError: no strategies, a strategy listed twice, ssm or entities
// without a seed, entities without an entity source, a file source without a
// path, zero jobs.
void ValidatePipelineConfig(const PipelineConfig& config);

// A failure attributed to one pipeline stage ("ingest", "parse", ...).
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Loaded rules and entity annotations, shared read-only between workers.
struct PipelineResources {
  RuleSet rules = RuleSet::Default();
  std::optional<EntityAnnotations> entities;

  static PipelineResources Load(const PipelineConfig& config);
};

enum class MaskSkip { kNone, kOverLength, kSentinel };

// Everything the pipeline derives from one sentence.
struct SentenceResult {
  std::vector<TemporalSpan> temporal;
  // Entity and regex-date spans before SSM overlap resolution, by start.
  std::vector<SalientSpan> salient;
  // One list per configured strategy, in configuration order.
  std::vector<std::vector<MaskedExample>> examples;
  MaskSkip skip = MaskSkip::kNone;
};

SentenceResult ProcessSentence(const Sentence& sentence,
                               const PipelineConfig& config,
                               const PipelineResources& resources);

struct PipelineCounts {
  uint64_t documents = 0;
  uint64_t skipped_records = 0;
  uint64_t sentences = 0;
  uint64_t over_length = 0;
  uint64_t skipped_sentinel = 0;
  uint64_t temporal_spans = 0;
  uint64_t entity_spans = 0;
  uint64_t regex_date_spans = 0;
  uint64_t entity_errors = 0;
  std::array<uint64_t, 3> examples{};  // by Strategy
  uint64_t duplicates_dropped = 0;
};

struct PipelineResult {
  PipelineCounts counts;
  std::vector<std::filesystem::path> outputs;
  std::filesystem::path manifest;
};

// Writes sentences.jsonl, temporal.jsonl, salient.jsonl,
// examples.<strategy>.jsonl, report.json and manifest.json into out_dir.
// Documents are sharded over `jobs` workers and written in input order, so
// the output bytes do not depend on `jobs`. Errors are StageErrors.
PipelineResult RunPipeline(const PipelineConfig& config);

// Lazily yields the examples RunPipeline would write, document by document;
// within a sentence, strategies come in configuration order. For a single
// strategy the sequence equals examples.<strategy>.jsonl.
class ExampleStream {
 public:
  explicit ExampleStream(PipelineConfig config);
  ~ExampleStream();
  ExampleStream(ExampleStream&&) noexcept;
  ExampleStream& operator=(ExampleStream&&) noexcept;

  std::optional<MaskedExample> Next();
  const PipelineCounts& counts() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace tempspan

#endif  // TEMPSPAN_PIPELINE_H_
