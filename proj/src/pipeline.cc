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


#include "tempspan/pipeline.h"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <deque>
#include <exception>
#include <fstream>
#include <set>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "tempspan/digest.h"
#include "tempspan/records.h"
#include "tempspan/stats.h"

namespace tempspan {
namespace {

using Json = nlohmann::ordered_json;
using SeenSet = std::unordered_set<ExampleFingerprint, ExampleFingerprintHash>;

constexpr size_t kDocumentsPerJob = 32;

bool Wants(const PipelineConfig& config, Strategy s) {
  return std::find(config.strategies.begin(), config.strategies.end(), s) !=
         config.strategies.end();
}

std::string_view ToString(EntitySource source) {
  switch (source) {
    case EntitySource::kNone:
      return "none";
    case EntitySource::kFile:
      return "file";
    case EntitySource::kHeuristic:
      return "heuristic";
  }
  return "none";
}

template <typename F>
auto InStage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

struct ProcessedDocument {
  std::vector<Sentence> sentences;
  std::vector<SentenceResult> results;
};

ProcessedDocument ProcessDocument(const Document& doc, const PipelineConfig& config,
                                  const PipelineResources& resources) {
  ProcessedDocument out;
  out.sentences = InStage("segment", [&] { return SegmentSentences(doc); });
  out.results.reserve(out.sentences.size());
  for (const Sentence& s : out.sentences) {
    out.results.push_back(ProcessSentence(s, config, resources));
  }
  return out;
}

// Processes a batch of documents on up to `jobs` threads; results keep the
// batch order. The first failing document (in batch order) is rethrown.
std::vector<ProcessedDocument> ProcessBatch(const std::vector<Document>& docs,
                                            const PipelineConfig& config,
                                            const PipelineResources& resources) {
  std::vector<ProcessedDocument> out(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
  auto work = [&](std::atomic<size_t>* next) {
    for (size_t i = next->fetch_add(1); i < docs.size(); i = next->fetch_add(1)) {
      try {
        out[i] = ProcessDocument(docs[i], config, resources);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::atomic<size_t> next{0};
  const size_t threads = std::min(config.jobs, docs.size());
  if (threads <= 1) {
    work(&next);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(work, &next);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Counts, dedup and stats shared by RunPipeline and ExampleStream.
class Tally {
 public:
  explicit Tally(const PipelineConfig& config)
      : config_(config), seen_(config.strategies.size()) {}

  // Removes duplicates from `result` when dedup is on and updates counts.
  void Add(const Sentence& sentence, SentenceResult* result) {
    ++counts_.sentences;
    if (sentence.over_length) ++counts_.over_length;
    if (result->skip == MaskSkip::kSentinel) ++counts_.skipped_sentinel;
    counts_.temporal_spans += result->temporal.size();
    for (const SalientSpan& s : result->salient) {
      ++(s.kind == SalientKind::kEntity ? counts_.entity_spans : counts_.regex_date_spans);
    }
    for (size_t k = 0; k < result->examples.size(); ++k) {
      std::vector<MaskedExample>& examples = result->examples[k];
      if (config_.dedup) {
        auto keep = std::remove_if(examples.begin(), examples.end(), [&](const MaskedExample& e) {
          return !seen_[k].insert(Fingerprint(e)).second;
        });
        counts_.duplicates_dropped += static_cast<uint64_t>(examples.end() - keep);
        examples.erase(keep, examples.end());
      }
      counts_.examples[static_cast<size_t>(config_.strategies[k])] += examples.size();
    }
    stats_.AddSentence(result->temporal, result->salient);
  }

  // Folds in annotation problems once all documents are seen.
  void Finish(const PipelineResources& resources, const PipelineConfig& config) {
    if (!resources.entities) return;
    const std::vector<std::string> unresolved = resources.entities->Unresolved();
    if (!unresolved.empty() && config.strict) {
      throw StageError("entities", std::to_string(unresolved.size()) +
                                       " annotation record(s) name unknown sentences, first: " +
                                       unresolved.front());
    }
    counts_.entity_errors = resources.entities->error_count() + unresolved.size();
  }

  PipelineCounts& counts() { return counts_; }
  const CorpusStats& stats() const { return stats_; }

 private:
  const PipelineConfig& config_;
  std::vector<SeenSet> seen_;
  PipelineCounts counts_;
  CorpusStats stats_;
};

// ofstream that hashes what it writes.
class HashedOutput {
 public:
  explicit HashedOutput(const std::filesystem::path& path)
      : path_(path), out_(OpenOutput(path)) {}

  void WriteLine(const std::string& line) {
    out_ << line << '\n';
    hash_.Update(line);
    hash_.Update("\n");
  }

  // Flushes and returns the digest; throws IoError on write failure.
  std::string Close() {
    out_.close();
    if (!out_) throw IoError("write error on " + path_.string());
    return hash_.HexDigest();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  Sha256 hash_;
};

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json FileEntry(const std::filesystem::path& path) {
  Json j;
  j["path"] = path.string();
  j["sha256"] = Sha256File(path);
  j["bytes"] = static_cast<uint64_t>(std::filesystem::file_size(path));
  return j;
}

Json CountsJson(const PipelineCounts& c, const PipelineConfig& config) {
  Json j;
  j["documents"] = c.documents;
  j["skipped_records"] = c.skipped_records;
  j["sentences"] = c.sentences;
  j["skipped_over_length"] = c.over_length;
  j["skipped_sentinel"] = c.skipped_sentinel;
  j["temporal_spans"] = c.temporal_spans;
  j["entity_spans"] = c.entity_spans;
  j["regex_date_spans"] = c.regex_date_spans;
  j["entity_errors"] = c.entity_errors;
  Json examples = Json::object();
  for (Strategy s : config.strategies) {
    examples[std::string(ToString(s))] = c.examples[static_cast<size_t>(s)];
  }
  j["examples"] = examples;
  j["duplicates_dropped"] = c.duplicates_dropped;
  return j;
}

}  // namespace

void ValidatePipelineConfig(const PipelineConfig& config) {
  if (config.strategies.empty()) throw ValidationError("at least one strategy is required");
  std::set<Strategy> unique(config.strategies.begin(), config.strategies.end());
  if (unique.size() != config.strategies.size()) {
    throw ValidationError("a strategy is listed more than once");
  }
  if ((Wants(config, Strategy::kSsm) || Wants(config, Strategy::kEntities)) && !config.seed) {
    throw ValidationError("a seed is required for the ssm and entities strategies");
  }
  if (Wants(config, Strategy::kEntities) && config.entity_source == EntitySource::kNone) {
    throw ValidationError("the entities strategy needs an entity source (file or heuristic)");
  }
  if (config.entity_source == EntitySource::kFile && config.entities_path.empty()) {
    throw ValidationError("entity source 'file' needs an annotation path");
  }
  if (config.jobs == 0) throw ValidationError("jobs must be at least 1");
}

PipelineResources PipelineResources::Load(const PipelineConfig& config) {
  PipelineResources r;
  if (config.rules_path) {
    r.rules = InStage("rules", [&] { return RuleSet::LoadFile(*config.rules_path); });
  }
  if (config.entity_source == EntitySource::kFile) {
    r.entities = InStage("entities", [&] {
      return EntityAnnotations::Load(config.entities_path, config.strict);
    });
  }
  return r;
}

SentenceResult ProcessSentence(const Sentence& sentence, const PipelineConfig& config,
                               const PipelineResources& resources) {
  SentenceResult r;
  r.temporal = InStage("parse", [&] { return ParseTemporal(sentence, resources.rules); });
  const std::vector<SalientSpan> dates = DatesFromTemporal(r.temporal, resources.rules);
  std::vector<SalientSpan> entities;
  switch (config.entity_source) {
    case EntitySource::kNone:
      break;
    case EntitySource::kFile:
      entities = InStage("entities", [&] { return resources.entities->Resolve(sentence); });
      break;
    case EntitySource::kHeuristic:
      entities = HeuristicEntities(sentence.text, r.temporal);
      for (SalientSpan& e : entities) e.sent_id = sentence.sent_id;
      break;
  }
  r.salient = entities;
  r.salient.insert(r.salient.end(), dates.begin(), dates.end());
  std::stable_sort(r.salient.begin(), r.salient.end(),
                   [](const SalientSpan& a, const SalientSpan& b) {
                     return std::tie(a.start, a.end) < std::tie(b.start, b.end);
                   });

  r.examples.resize(config.strategies.size());
  if (sentence.over_length) {
    r.skip = MaskSkip::kOverLength;
    return r;
  }
  if (sentence.text.find(kSentinel) != std::string::npos) {
    r.skip = MaskSkip::kSentinel;
    return r;
  }
  InStage("mask", [&] {
    for (size_t k = 0; k < config.strategies.size(); ++k) {
      std::optional<MaskedExample> one;
      switch (config.strategies[k]) {
        case Strategy::kTsm:
          r.examples[k] = MakeTsmExamples(sentence, r.temporal);
          break;
        case Strategy::kSsm:
          one = MakeSsmExample(sentence, entities, dates, *config.seed);
          break;
        case Strategy::kEntities:
          one = MakeEntitiesExample(sentence, entities, *config.seed, dates);
          break;
      }
      if (one) r.examples[k].push_back(std::move(*one));
    }
    return 0;
  });
  return r;
}

PipelineResult RunPipeline(const PipelineConfig& config) {
  InStage("config", [&] {
    ValidatePipelineConfig(config);
    return 0;
  });
  const PipelineResources resources = PipelineResources::Load(config);
  DocumentReader reader = InStage("ingest", [&] {
    return DocumentReader(config.input, config.format, config.strict);
  });

  InStage("output", [&] {
    std::filesystem::create_directories(config.out_dir);
    return 0;
  });
  const std::filesystem::path dir = config.out_dir;
  auto open = [&](const std::string& name) {
    return InStage("output", [&] { return std::make_unique<HashedOutput>(dir / name); });
  };
  std::unique_ptr<HashedOutput> sentences_out = open("sentences.jsonl");
  std::unique_ptr<HashedOutput> temporal_out = open("temporal.jsonl");
  std::unique_ptr<HashedOutput> salient_out = open("salient.jsonl");
  std::vector<std::unique_ptr<HashedOutput>> example_outs;
  for (Strategy s : config.strategies) {
    example_outs.push_back(open("examples." + std::string(ToString(s)) + ".jsonl"));
  }

  Tally tally(config);
  const size_t batch_size = kDocumentsPerJob * config.jobs;
  std::vector<Document> batch;
  while (true) {
    batch.clear();
    InStage("ingest", [&] {
      while (batch.size() < batch_size) {
        std::optional<Document> doc = reader.Next();
        if (!doc) break;
        batch.push_back(std::move(*doc));
      }
      return 0;
    });
    if (batch.empty()) break;
    std::vector<ProcessedDocument> processed = ProcessBatch(batch, config, resources);
    InStage("output", [&] {
      for (ProcessedDocument& doc : processed) {
        ++tally.counts().documents;
        for (size_t i = 0; i < doc.sentences.size(); ++i) {
          SentenceResult& r = doc.results[i];
          tally.Add(doc.sentences[i], &r);
          sentences_out->WriteLine(ToJsonLine(doc.sentences[i]));
          for (const TemporalSpan& s : r.temporal) temporal_out->WriteLine(ToJsonLine(s));
          for (const SalientSpan& s : r.salient) salient_out->WriteLine(ToJsonLine(s));
          for (size_t k = 0; k < r.examples.size(); ++k) {
            for (const MaskedExample& e : r.examples[k]) example_outs[k]->WriteLine(ToJsonLine(e));
          }
        }
      }
      return 0;
    });
  }
  tally.counts().skipped_records = reader.skipped();
  tally.Finish(resources, config);

  PipelineResult result;
  result.counts = tally.counts();
  Json outputs = Json::object();
  InStage("output", [&] {
    auto close = [&](HashedOutput& out) {
      outputs[out.path().filename().string()] = out.Close();
      result.outputs.push_back(out.path());
    };
    close(*sentences_out);
    close(*temporal_out);
    close(*salient_out);
    for (auto& out : example_outs) close(*out);
    HashedOutput report(dir / "report.json");
    report.WriteLine(RenderJson(tally.stats()));
    close(report);
    return 0;
  });

  Json manifest;
  manifest["tool"] = "tempspan";
  manifest["created_at"] = UtcNow();
  Json cfg;
  cfg["format"] = config.format == InputFormat::kJsonl ? "jsonl" : "plain";
  cfg["strategies"] = Json::array();
  for (Strategy s : config.strategies) cfg["strategies"].push_back(ToString(s));
  cfg["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  cfg["entity_source"] = ToString(config.entity_source);
  cfg["strict"] = config.strict;
  cfg["dedup"] = config.dedup;
  manifest["config"] = cfg;
  InStage("manifest", [&] {
    Json inputs;
    inputs["input"] = FileEntry(config.input);
    if (config.rules_path) {
      inputs["rules"] = FileEntry(*config.rules_path);
    } else {
      Json rules;
      rules["path"] = nullptr;
      rules["sha256"] = Sha256Hex(resources.rules.ToJson());
      inputs["rules"] = rules;
    }
    inputs["entities"] = config.entity_source == EntitySource::kFile
                             ? FileEntry(config.entities_path)
                             : Json(nullptr);
    manifest["inputs"] = inputs;
    return 0;
  });
  manifest["counts"] = CountsJson(result.counts, config);
  manifest["outputs"] = outputs;
  if (reader.diagnostics().size() > 0) manifest["ingest_diagnostics"] = reader.diagnostics();
  if (resources.entities && !resources.entities->diagnostics().empty()) {
    manifest["entity_diagnostics"] = resources.entities->diagnostics();
  }

  result.manifest = dir / "manifest.json";
  InStage("manifest", [&] {
    std::ofstream out = OpenOutput(result.manifest);
    out << manifest.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("write error on " + result.manifest.string());
    return 0;
  });
  return result;
}

struct ExampleStream::State {
  explicit State(PipelineConfig c)
      : config(std::move(c)),
        resources(PipelineResources::Load(config)),
        reader(InStage("ingest", [&] {
          return DocumentReader(config.input, config.format, config.strict);
        })),
        tally(config) {}

  PipelineConfig config;
  PipelineResources resources;
  DocumentReader reader;
  Tally tally;
  std::deque<MaskedExample> pending;
  bool finished = false;
};

ExampleStream::ExampleStream(PipelineConfig config) {
  InStage("config", [&] {
    ValidatePipelineConfig(config);
    return 0;
  });
  state_ = std::make_unique<State>(std::move(config));
}

ExampleStream::~ExampleStream() = default;
ExampleStream::ExampleStream(ExampleStream&&) noexcept = default;
ExampleStream& ExampleStream::operator=(ExampleStream&&) noexcept = default;

const PipelineCounts& ExampleStream::counts() const { return state_->tally.counts(); }

std::optional<MaskedExample> ExampleStream::Next() {
  State& s = *state_;
  while (s.pending.empty()) {
    if (s.finished) return std::nullopt;
    std::optional<Document> doc = InStage("ingest", [&] { return s.reader.Next(); });
    if (!doc) {
      s.finished = true;
      s.tally.counts().skipped_records = s.reader.skipped();
      s.tally.Finish(s.resources, s.config);
      return std::nullopt;
    }
    ProcessedDocument processed = ProcessDocument(*doc, s.config, s.resources);
    ++s.tally.counts().documents;
    for (size_t i = 0; i < processed.sentences.size(); ++i) {
      SentenceResult& r = processed.results[i];
      s.tally.Add(processed.sentences[i], &r);
      for (auto& examples : r.examples) {
        for (MaskedExample& e : examples) s.pending.push_back(std::move(e));
      }
    }
  }
  MaskedExample out = std::move(s.pending.front());
  s.pending.pop_front();
  return out;
}

}  // namespace tempspan
