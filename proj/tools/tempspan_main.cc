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


// tempspan: segment, parse, mask, mix and count temporal spans.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "tempspan/corpus.h"
#include "tempspan/error.h"
#include "tempspan/masking.h"
#include "tempspan/mixture.h"
#include "tempspan/pipeline.h"
#include "tempspan/records.h"
#include "tempspan/stats.h"
#include "tempspan/temporal.h"

namespace tempspan {
namespace {

// Writes to a file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") file_ = OpenOutput(path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void Close(const std::string& path) {
    stream().flush();
    if (!stream()) throw IoError("write error on " + path);
  }

 private:
  std::ofstream file_;
};

std::optional<std::filesystem::path> RulesPath(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TEMPSPAN_RULES"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

void SetEntitySource(const std::string& flag, PipelineConfig* config) {
  if (flag.empty() || flag == "none") {
    config->entity_source = EntitySource::kNone;
  } else if (flag == "heuristic") {
    config->entity_source = EntitySource::kHeuristic;
  } else {
    config->entity_source = EntitySource::kFile;
    config->entities_path = flag;
  }
}

InputFormat FormatFlag(const std::string& flag) {
  const auto format = ParseInputFormat(flag);
  if (!format) throw ValidationError("unknown input format '" + flag + "'");
  return *format;
}

std::vector<Strategy> StrategyFlags(const std::vector<std::string>& flags) {
  std::vector<Strategy> out;
  for (const std::string& flag : flags) {
    const auto s = ParseStrategy(flag);
    if (!s) throw ValidationError("unknown strategy '" + flag + "' (tsm, ssm, entities)");
    out.push_back(*s);
  }
  return out;
}

// Runs the per-sentence stages over a sentence file.
template <typename Emit>
PipelineCounts ForEachSentence(const std::string& in, const PipelineConfig& config,
                               Emit&& emit) {
  const PipelineResources resources = PipelineResources::Load(config);
  PipelineCounts counts;
  SentenceReader reader(in);
  while (std::optional<Sentence> sentence = reader.Next()) {
    SentenceResult r = ProcessSentence(*sentence, config, resources);
    ++counts.sentences;
    if (sentence->over_length) ++counts.over_length;
    if (r.skip == MaskSkip::kSentinel) ++counts.skipped_sentinel;
    counts.temporal_spans += r.temporal.size();
    emit(*sentence, r);
  }
  if (resources.entities) {
    const std::vector<std::string> unresolved = resources.entities->Unresolved();
    if (config.strict && !unresolved.empty()) {
      throw StageError("entities", "annotation record names unknown sentence " + unresolved.front());
    }
    counts.entity_errors = resources.entities->error_count() + unresolved.size();
    for (const std::string& d : resources.entities->diagnostics()) {
      std::cerr << "tempspan: entities: " << d << "\n";
    }
  }
  return counts;
}

int Ingest(const std::string& in, const std::string& format, const std::string& out_path,
           bool strict) {
  DocumentReader reader(in, FormatFlag(format), strict);
  Output out(out_path);
  size_t documents = 0;
  size_t sentences = 0;
  size_t over_length = 0;
  while (std::optional<Document> doc = reader.Next()) {
    ++documents;
    for (const Sentence& s : SegmentSentences(*doc)) {
      ++sentences;
      if (s.over_length) ++over_length;
      out.stream() << ToJsonLine(s) << '\n';
    }
  }
  out.Close(out_path);
  for (const std::string& d : reader.diagnostics()) std::cerr << "tempspan: ingest: " << d << "\n";
  std::cerr << "documents " << documents << ", skipped " << reader.skipped() << ", sentences "
            << sentences << ", over_length " << over_length << "\n";
  return 0;
}

int Parse(const std::string& in, const std::string& out_path, const std::string& rules,
          const std::string& salient_path, const std::string& entities, bool strict) {
  PipelineConfig config;
  config.rules_path = RulesPath(rules);
  config.strict = strict;
  SetEntitySource(entities, &config);
  Output out(out_path);
  std::optional<Output> salient;
  if (!salient_path.empty()) salient.emplace(salient_path);
  const PipelineCounts counts = ForEachSentence(in, config, [&](const Sentence&, const SentenceResult& r) {
    for (const TemporalSpan& s : r.temporal) out.stream() << ToJsonLine(s) << '\n';
    if (salient) {
      for (const SalientSpan& s : r.salient) salient->stream() << ToJsonLine(s) << '\n';
    }
  });
  out.Close(out_path);
  if (salient) salient->Close(salient_path);
  std::cerr << "sentences " << counts.sentences << ", temporal spans " << counts.temporal_spans
            << "\n";
  return 0;
}

int Mask(const std::string& in, const std::string& out_path, const std::string& strategy,
         std::optional<uint64_t> seed, const std::string& entities, const std::string& rules,
         bool strict, bool dedup) {
  PipelineConfig config;
  config.strategies = StrategyFlags({strategy});
  config.seed = seed;
  config.rules_path = RulesPath(rules);
  config.strict = strict;
  config.dedup = dedup;
  SetEntitySource(entities, &config);
  if (config.strategies[0] == Strategy::kSsm && config.entity_source == EntitySource::kNone) {
    std::cerr << "tempspan: mask: no --entities given; ssm masks regex dates only\n";
  }
  ValidatePipelineConfig(config);
  Output out(out_path);
  std::unordered_set<ExampleFingerprint, ExampleFingerprintHash> seen;
  uint64_t examples = 0;
  uint64_t duplicates = 0;
  const PipelineCounts counts = ForEachSentence(in, config, [&](const Sentence&, const SentenceResult& r) {
    for (const MaskedExample& e : r.examples[0]) {
      if (dedup && !seen.insert(Fingerprint(e)).second) {
        ++duplicates;
        continue;
      }
      ++examples;
      out.stream() << ToJsonLine(e) << '\n';
    }
  });
  out.Close(out_path);
  std::cerr << "sentences " << counts.sentences << ", examples " << examples
            << ", skipped over_length " << counts.over_length << ", skipped sentinel "
            << counts.skipped_sentinel << ", entity errors " << counts.entity_errors;
  if (dedup) std::cerr << ", duplicates dropped " << duplicates;
  std::cerr << "\n";
  return 0;
}

int MixCommand(const std::string& spec_path, const std::string& out_path) {
  const MixtureSpec spec = LoadMixtureSpec(spec_path);
  Output out(out_path);
  const MixStats stats = Mix(spec, out.stream());
  out.Close(out_path);
  std::cerr << "emitted " << stats.emitted;
  for (size_t i = 0; i < spec.components.size(); ++i) {
    std::cerr << ", " << spec.components[i].name << " " << stats.per_component[i];
  }
  if (spec.dedup_inputs) std::cerr << ", duplicates dropped " << stats.duplicates_dropped;
  std::cerr << "\n";
  return 0;
}

int Stats(const std::string& sents, const std::string& temporal, const std::string& salient,
          const std::string& out_path, bool table) {
  const CorpusStats stats = ComputeStatsFromFiles(sents, temporal, salient);
  Output out(out_path);
  out.stream() << RenderJson(stats) << '\n';
  out.Close(out_path);
  if (table) {
    std::cout << RenderTable(stats);
  } else if (auto warning = OrderingWarning(stats)) {
    std::cerr << "tempspan: warning: " << *warning << "\n";
  }
  return 0;
}

int Pipeline(PipelineConfig config, const std::vector<std::string>& strategies,
             const std::string& format, const std::string& rules, const std::string& entities) {
  config.strategies = StrategyFlags(strategies);
  config.format = FormatFlag(format);
  config.rules_path = RulesPath(rules);
  SetEntitySource(entities, &config);
  const PipelineResult result = RunPipeline(config);
  const PipelineCounts& c = result.counts;
  std::cerr << "documents " << c.documents << ", sentences " << c.sentences << ", temporal spans "
            << c.temporal_spans;
  for (Strategy s : config.strategies) {
    std::cerr << ", " << ToString(s) << " " << c.examples[static_cast<size_t>(s)];
  }
  std::cerr << "\nmanifest " << result.manifest.string() << "\n";
  return 0;
}

int DumpRules(const std::string& rules) {
  const auto path = RulesPath(rules);
  const RuleSet set = path ? RuleSet::LoadFile(*path) : RuleSet::Default();
  std::cout << set.ToJson() << '\n';
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Temporal and salient span masking corpus toolkit", "tempspan"};
  app.require_subcommand(1);

  std::string in, out, format = "jsonl", rules, entities, salient, strategy, spec;
  std::string sents, temporal;
  std::vector<std::string> strategies;
  std::optional<uint64_t> seed;
  bool strict = false, dedup = false, table = false, dump = false;
  PipelineConfig pipeline;

  CLI::App* ingest = app.add_subcommand("ingest", "Read documents and split them into sentences");
  ingest->add_option("--in", in, "Input documents")->required();
  ingest->add_option("--format", format, "jsonl or plain")->check(CLI::IsMember({"jsonl", "plain"}));
  ingest->add_option("--out", out, "Sentence jsonl (- for stdout)")->required();
  ingest->add_flag("--strict", strict, "Fail on malformed records");

  CLI::App* parse = app.add_subcommand("parse", "Tag temporal spans in a sentence file");
  parse->add_option("--in", in, "Sentence jsonl")->required();
  parse->add_option("--out", out, "Temporal span jsonl (- for stdout)")->required();
  parse->add_option("--rules", rules, "Rule file (default: $TEMPSPAN_RULES or built-in)");
  parse->add_option("--salient", salient, "Also write entity and regex-date spans here");
  parse->add_option("--entities", entities, "Annotation file, 'heuristic' or 'none'");
  parse->add_flag("--strict", strict, "Fail on invalid annotations");

  CLI::App* mask = app.add_subcommand("mask", "Write masked examples for one strategy");
  mask->add_option("--strategy", strategy, "tsm, ssm or entities")->required();
  mask->add_option("--seed", seed, "Seed for span choice (ssm, entities)");
  mask->add_option("--in", in, "Sentence jsonl")->required();
  mask->add_option("--entities", entities, "Annotation file, 'heuristic' or 'none'");
  mask->add_option("--rules", rules, "Rule file (default: $TEMPSPAN_RULES or built-in)");
  mask->add_option("--out", out, "Example jsonl (- for stdout)")->required();
  mask->add_flag("--strict", strict, "Fail on invalid annotations");
  mask->add_flag("--dedup-inputs", dedup, "Drop repeated (inputs, targets) pairs");

  CLI::App* mix = app.add_subcommand("mix", "Interleave example files proportionally");
  mix->add_option("--spec", spec, "Mixture spec (.toml or .json)")->required();
  mix->add_option("--out", out, "Mixed jsonl (- for stdout)")->required();

  CLI::App* stats = app.add_subcommand("stats", "Count sentences by span type");
  stats->add_option("--sents", sents, "Sentence jsonl")->required();
  stats->add_option("--temporal", temporal, "Temporal span jsonl")->required();
  stats->add_option("--salient", salient, "Salient span jsonl")->required();
  stats->add_option("--out", out, "Report JSON (- for stdout)")->required();
  stats->add_flag("--table", table, "Print the tables to stdout");

  CLI::App* run = app.add_subcommand("pipeline", "Ingest, parse, mask and report in one pass");
  run->add_option("--in", pipeline.input, "Input documents")->required();
  run->add_option("--format", format, "jsonl or plain")->check(CLI::IsMember({"jsonl", "plain"}));
  run->add_option("--rules", rules, "Rule file (default: $TEMPSPAN_RULES or built-in)");
  run->add_option("--entities", entities, "Annotation file, 'heuristic' or 'none'");
  run->add_option("--strategy", strategies, "tsm, ssm, entities (repeatable)")
      ->required()
      ->delimiter(',');
  run->add_option("--seed", seed, "Seed for span choice (ssm, entities)");
  run->add_option("--out-dir", pipeline.out_dir, "Output directory")->required();
  run->add_flag("--strict", strict, "Fail on malformed input");
  run->add_flag("--dedup-inputs", dedup, "Drop repeated (inputs, targets) within a strategy");
  run->add_option("--jobs", pipeline.jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* rules_cmd = app.add_subcommand("rules", "Show the temporal grammar");
  rules_cmd->add_flag("--dump", dump, "Print the rule set as JSON")->required();
  rules_cmd->add_option("--rules", rules, "Rule file (default: $TEMPSPAN_RULES or built-in)");

  CLI11_PARSE(app, argc, argv);

  const char* stage = "tempspan";
  try {
    if (*ingest) {
      stage = "ingest";
      return Ingest(in, format, out, strict);
    }
    if (*parse) {
      stage = "parse";
      return Parse(in, out, rules, salient, entities, strict);
    }
    if (*mask) {
      stage = "mask";
      return Mask(in, out, strategy, seed, entities, rules, strict, dedup);
    }
    if (*mix) {
      stage = "mix";
      return MixCommand(spec, out);
    }
    if (*stats) {
      stage = "stats";
      return Stats(sents, temporal, salient, out, table);
    }
    if (*run) {
      stage = "pipeline";
      pipeline.seed = seed;
      pipeline.strict = strict;
      pipeline.dedup = dedup;
      return Pipeline(pipeline, strategies, format, rules, entities);
    }
    stage = "rules";
    return DumpRules(rules);
  } catch (const StageError& e) {
    std::cerr << "tempspan: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "tempspan: " << stage << ": " << e.what() << "\n";
  }
  return 1;
}

}  // namespace
}  // namespace tempspan

int main(int argc, char** argv) { return tempspan::Main(argc, argv); }
