// Copyright 2026 The Quizsmith Authors.
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

#include "quizsmith/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "quizsmith/corpus.h"
#include "quizsmith/curation.h"
#include "quizsmith/decoding.h"
#include "quizsmith/distractors.h"
#include "quizsmith/error.h"
#include "quizsmith/eval_stats.h"
#include "quizsmith/multiref.h"
#include "quizsmith/qag_data.h"
#include "quizsmith/seed.h"
#include "quizsmith/server.h"
#include "quizsmith/text_metrics.h"
#include "quizsmith/toy_model.h"

namespace quizsmith::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kDataDirEnv[] = "QUIZSMITH_DATA_DIR";

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::vector<json> ReadJsonl(const std::string& path) {
  auto in = OpenInput(path);
  std::vector<json> lines;
  std::string line;
  for (size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return lines;
}

json ReadJson(const std::string& path) {
  auto in = OpenInput(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

// Writes to `path`, or to the fallback stream when the path is empty.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*file_) throw DataError("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string LineId(const json& line, size_t index) {
  if (line.is_object() && line.contains("id")) {
    const auto& id = line.at("id");
    return id.is_string() ? id.get<std::string>() : id.dump();
  }
  return std::to_string(index);
}

std::string StringField(const json& line, const char* key) {
  if (!line.is_object() || !line.contains(key) || !line.at(key).is_string()) {
    throw DataError(std::string("expected string field \"") + key + "\"");
  }
  return line.at(key).get<std::string>();
}

// ---------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string predictions;
  std::string references;
  std::string out;
  std::string separator = "<sep>";
};

int Metrics(const MetricsOptions& o, std::ostream& out) {
  const auto predictions = ReadJsonl(o.predictions);
  const auto references = ReadJsonl(o.references);
  if (predictions.size() != references.size()) {
    throw DataError("predictions (" + std::to_string(predictions.size()) +
                    ") and references (" + std::to_string(references.size()) +
                    ") are not line-aligned");
  }
  const QaSplitConfig split{o.separator};
  constexpr RougeVariant kVariants[] = {
      RougeVariant::kRouge1, RougeVariant::kRouge2, RougeVariant::kRougeL};
  double combined[3] = {}, qag[3] = {};
  double chars = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const std::string prediction =
        predictions[i].is_string() ? predictions[i].get<std::string>()
                                   : StringField(predictions[i], "prediction");
    const SummaryRecord record = RecordFromJson(references[i]);
    chars += static_cast<double>(prediction.size());
    for (int v = 0; v < 3; ++v) {
      combined[v] +=
          rouge_combined(prediction, record.references, kVariants[v], split);
      qag[v] += rouge_qag(prediction, record.references, kVariants[v], split);
    }
  }
  const double n = predictions.empty() ? 1.0 : predictions.size();
  json report = {{"count", predictions.size()},
                 {"avg_pred_len_chars", chars / n}};
  for (int v = 0; v < 3; ++v) {
    const std::string name(RougeVariantName(kVariants[v]));
    report[name + "-F"] = combined[v] / n;
    report[name + "-F-QAG"] = qag[v] / n;
  }
  Output sink(o.out, out);
  *sink << report.dump(2) << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- pipeline

struct PipelineOptions {
  std::string input;
  std::string out_dir;
  std::vector<std::string> block_tokens;
  std::vector<std::string> block_phrases;
  CorpusFieldMap fields;
};

int Pipeline(const PipelineOptions& o, uint64_t seed, std::ostream& out) {
  auto in = OpenInput(o.input);
  const Corpus raw = ReadCorpus(in, o.fields);
  Blocklist blocklist;
  blocklist.tokens.insert(blocklist.tokens.end(), o.block_tokens.begin(),
                          o.block_tokens.end());
  blocklist.phrases.insert(blocklist.phrases.end(), o.block_phrases.begin(),
                           o.block_phrases.end());
  const Corpus kept = postprocess_corpus(raw, IdentityGrammarHook(), blocklist);
  if (kept.empty()) throw DataError("no record survives post-processing");
  const SplitAssignment split = split_corpus(kept, seed);

  fs::create_directories(o.out_dir);
  {
    std::ofstream corpus_out(fs::path(o.out_dir) / "corpus.jsonl");
    WriteCorpus(corpus_out, kept);
  }
  {
    std::ofstream split_out(fs::path(o.out_dir) / "split.json");
    json manifest = SplitToJson(split);
    manifest["seed"] = seed;
    split_out << manifest.dump(2) << '\n';
  }
  out << json{{"input_records", raw.size()},
              {"kept_records", kept.size()},
              {"train", split.train.size()},
              {"validation", split.validation.size()},
              {"test", split.test.size()}}
             .dump()
      << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- train-demo

struct TrainOptions {
  std::string corpus;
  std::string split;
  std::string subset = "train";
  std::string task = "qag";
  std::string strategy = "min-ref";
  int steps = 200;
  double learning_rate = 0.5;
  size_t batch_rows = 32;
  std::string params_out;
  std::string trace;
};

int TrainDemo(const TrainOptions& o, uint64_t seed, std::ostream& out) {
  auto in = OpenInput(o.corpus);
  Corpus corpus = ReadCorpus(in);
  if (!o.split.empty()) {
    const json manifest = ReadJson(o.split);
    if (!manifest.contains(o.subset)) {
      throw DataError("split manifest has no \"" + o.subset + "\" subset");
    }
    const auto ids = manifest.at(o.subset).get<std::vector<std::string>>();
    std::erase_if(corpus, [&](const SummaryRecord& r) {
      return std::find(ids.begin(), ids.end(), r.id) == ids.end();
    });
  }
  if (corpus.empty()) throw DataError("no training records");
  const Task task = ParseTask(o.task);
  const Vocab vocab = BuildVocab(corpus, task);
  const auto examples = BuildExamples(corpus, vocab, task);

  TrainConfig config;
  config.strategy = ParseStrategy(o.strategy);
  config.steps = o.steps;
  config.learning_rate = o.learning_rate;
  config.seed = seed;
  config.batch_rows = o.batch_rows;
  const TrainResult result = train(config, ModelParams::Zero(vocab.size()),
                                   examples, vocab.bos(), vocab.eos());

  {
    Output sink(o.trace, out);
    for (const auto& entry : result.trace) {
      *sink << json{{"step", entry.step},
                    {"example_id", entry.example_id},
                    {"selected_ref", entry.selected_ref},
                    {"loss", entry.loss}}
                   .dump()
            << '\n';
    }
  }
  if (!o.params_out.empty()) {
    Output sink(o.params_out, out);
    *sink << CheckpointToJson({vocab, result.params}).dump() << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- decode

struct DecodeOptions {
  std::string params;
  std::string input;
  std::string out;
  std::string mode = "beam";
  int beams = 8;
  double alpha = 0.9;
  int max_len = 0;
  double temperature = 1.0;
  int k = 3;
  std::string separator = "<sep>";
};

std::string InputText(const json& line) {
  if (line.is_string()) return line.get<std::string>();
  if (line.contains("summary")) {
    SummaryRecord record;
    record.summary = StringField(line, "summary");
    if (line.contains("style")) record.style = ParseStyle(StringField(line, "style"));
    return apply_style_prefix(record);
  }
  if (line.contains("input")) return StringField(line, "input");
  if (line.contains("question")) return StringField(line, "question");
  throw DataError("input line has none of summary/input/question");
}

int Decode(const DecodeOptions& o, uint64_t seed, std::ostream& out,
           std::ostream& err) {
  const Checkpoint model = CheckpointFromJson(ReadJson(o.params));
  const ToyModelScorer scorer(model.params, model.vocab);
  DecodeConfig config{o.beams, o.alpha, o.max_len, o.temperature};
  const bool candidates = o.mode == "candidates";
  if (o.mode != "beam" && o.mode != "sample" && !candidates) {
    throw std::invalid_argument("unknown decode mode \"" + o.mode + "\"");
  }
  if (config.max_len == 0) {
    config.max_len = candidates ? kDistractorMaxLen : kQaMaxLen;
  }
  config.Validate();

  const auto lines = ReadJsonl(o.input);
  Output sink(o.out, out);
  size_t skipped = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    const json& line = lines[i];
    const std::string id = LineId(line, i);
    const uint64_t line_seed = DeriveSeed(seed, i);
    if (!candidates) {
      const TokenIds input = EncodeText(model.vocab, InputText(line));
      const TokenIds ids =
          o.mode == "beam" ? beam_search(scorer, input, config).tokens
                           : sample(scorer, input, config, line_seed);
      *sink << json{{"id", id}, {"prediction", model.vocab.decode(ids)}}.dump()
            << '\n';
      continue;
    }
    std::string question, key;
    if (line.contains("question") && line.contains("key")) {
      question = StringField(line, "question");
      key = StringField(line, "key");
    } else {
      const auto parts =
          split_prediction(StringField(line, "prediction"), {o.separator});
      if (!parts || parts->first.empty() || parts->second.empty()) {
        ++skipped;
        continue;
      }
      std::tie(question, key) = *parts;
    }
    json sampled = json::array();
    for (const auto& ids :
         sample_candidates(scorer, EncodeText(model.vocab, question), o.k,
                           config, line_seed)) {
      sampled.push_back(model.vocab.decode(ids));
    }
    *sink << json{{"id", id},
                  {"question", question},
                  {"key", key},
                  {"candidates", std::move(sampled)}}
                 .dump()
          << '\n';
  }
  if (skipped > 0) {
    err << "decode: skipped " << skipped
        << " predictions without a question/answer split\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- distract

struct DistractOptions {
  std::string input;
  std::string out;
  int k = 3;
  std::string embedder = "trigram";
  int dim = 256;
  std::string batch_id;
  std::string data_dir = "data";
  bool skip_insufficient = false;
};

std::unique_ptr<Embedder> MakeEmbedder(const std::string& name, int dim) {
  if (name == "trigram") return std::make_unique<TrigramEmbedder>(dim);
  constexpr std::string_view kCommand = "command:";
  if (name.rfind(kCommand, 0) == 0 && name.size() > kCommand.size()) {
    return std::make_unique<CommandEmbedder>(name.substr(kCommand.size()));
  }
  throw std::invalid_argument("unknown embedder \"" + name +
                              "\" (trigram or command:<path>)");
}

std::string ResolveDataDir(const std::string& flag) {
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return flag;
}

int Distract(const DistractOptions& o, uint64_t seed, std::ostream& out,
             std::ostream& err) {
  if (o.k < 1) throw std::invalid_argument("--k must be >= 1");
  if (!o.batch_id.empty() && static_cast<size_t>(o.k) != kBatchDistractors) {
    throw std::invalid_argument("curation batches need --k 5");
  }
  const auto embedder = MakeEmbedder(o.embedder, o.dim);
  std::vector<McQuestion> questions;
  size_t skipped = 0;
  for (const auto& line : ReadJsonl(o.input)) {
    const std::string question = StringField(line, "question");
    const std::string key = StringField(line, "key");
    if (!line.contains("candidates") || !line.at("candidates").is_array()) {
      throw DataError("expected array field \"candidates\"");
    }
    const auto candidates = line.at("candidates").get<std::vector<std::string>>();
    try {
      questions.push_back(
          {question, key,
           select_distractors(key, candidates, static_cast<size_t>(o.k),
                              *embedder)});
    } catch (const InsufficientCandidatesError&) {
      if (!o.skip_insufficient) throw;
      ++skipped;
    }
  }
  {
    Output sink(o.out, out);
    for (const auto& q : questions) {
      *sink << json{{"question", q.question},
                    {"key", q.key},
                    {"distractors", q.distractors}}
                   .dump()
            << '\n';
    }
  }
  if (skipped > 0) {
    err << "distract: skipped " << skipped
        << " questions with too few distinct candidates\n";
  }
  if (!o.batch_id.empty()) {
    if (questions.size() < kBatchQuestions) {
      throw DataError("a curation batch needs 10 questions, only " +
                      std::to_string(questions.size()) + " available");
    }
    CurationBatch batch;
    batch.batch_id = o.batch_id;
    batch.seed = seed;
    batch.candidates.assign(questions.begin(),
                            questions.begin() + kBatchQuestions);
    BatchStore store(ResolveDataDir(o.data_dir));
    store.save(batch);
  }
  return kExitOk;
}

// ------------------------------------------------------------------ stats

struct StatsOptions {
  std::string ratings;
  std::string questions;
  bool survey = false;
  std::string input;
  std::string out;
};

int Stats(const StatsOptions& o, std::ostream& out) {
  json report;
  if (o.survey) {
    if (o.input.empty()) throw std::invalid_argument("--survey needs --in");
    std::map<std::string, std::vector<int>> items;
    for (const auto& line : ReadJsonl(o.input)) {
      if (line.is_number_integer()) {
        items["all"].push_back(line.get<int>());
      } else if (line.is_object() && line.contains("response") &&
                 line.at("response").is_number_integer()) {
        items[line.value("item", std::string("all"))].push_back(
            line.at("response").get<int>());
      } else {
        throw DataError("survey line needs an integer \"response\"");
      }
    }
    report = json::object();
    for (const auto& [item, responses] : items) {
      const RatingAggregate a = aggregate_ratings(responses);
      report[item] = {{"mean", a.mean}, {"margin", a.margin}, {"n", a.count}};
    }
  } else {
    if (o.ratings.empty() || o.questions.empty()) {
      throw std::invalid_argument("stats needs --ratings and --questions");
    }
    std::vector<RatingRecord> ratings;
    for (const auto& line : ReadJsonl(o.ratings)) {
      ratings.push_back(RatingFromJson(line));
    }
    std::vector<QuestionOptions> questions;
    for (const auto& line : ReadJsonl(o.questions)) {
      questions.push_back(QuestionOptionsFromJson(line));
    }
    report = StatsToJson(compute_stats(ratings, questions));
  }
  Output sink(o.out, out);
  *sink << report.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ serve

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "data";
  std::string ui_dir;
};

int Serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  std::optional<fs::path> ui;
  if (!o.ui_dir.empty()) ui = o.ui_dir;
  const std::string data_dir = ResolveDataDir(o.data_dir);
  CurationServer server(data_dir, ui);
  out << "serving " << data_dir << " on http://" << o.host << ":" << o.port
      << std::endl;
  if (!server.listen(o.host, o.port)) {
    err << "cannot listen on " << o.host << ":" << o.port << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Quiz generation and evaluation toolkit", "quizsmith"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice")
      ->capture_default_str();

  MetricsOptions metrics;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "ROUGE and ROUGE-QAG report for line-aligned JSONL");
  metrics_cmd->add_option("--pred", metrics.predictions, "Predictions JSONL")
      ->required();
  metrics_cmd->add_option("--ref", metrics.references, "Reference corpus JSONL")
      ->required();
  metrics_cmd->add_option("--separator", metrics.separator)->capture_default_str();
  metrics_cmd->add_option("--out", metrics.out, "Report path (default stdout)");

  PipelineOptions pipeline;
  auto* pipeline_cmd = app.add_subcommand(
      "pipeline", "Post-process a corpus and write an 80/10/10 split");
  pipeline_cmd->add_option("--in", pipeline.input, "Corpus JSONL")->required();
  pipeline_cmd->add_option("--out-dir", pipeline.out_dir)->required();
  pipeline_cmd->add_option("--block-token", pipeline.block_tokens);
  pipeline_cmd->add_option("--block-phrase", pipeline.block_phrases);
  pipeline_cmd->add_option("--map-id", pipeline.fields.id)->capture_default_str();
  pipeline_cmd->add_option("--map-summary", pipeline.fields.summary)
      ->capture_default_str();
  pipeline_cmd->add_option("--map-style", pipeline.fields.style)
      ->capture_default_str();
  pipeline_cmd->add_option("--map-references", pipeline.fields.references)
      ->capture_default_str();
  pipeline_cmd->add_option("--map-question", pipeline.fields.question)
      ->capture_default_str();
  pipeline_cmd->add_option("--map-answer", pipeline.fields.answer)
      ->capture_default_str();

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand(
      "train-demo", "Train the toy model with a multi-reference strategy");
  train_cmd->add_option("--corpus", train_opts.corpus)->required();
  train_cmd->add_option("--split", train_opts.split, "Split manifest JSON");
  train_cmd->add_option("--subset", train_opts.subset)->capture_default_str();
  train_cmd->add_option("--task", train_opts.task)
      ->check(CLI::IsMember({"qag", "dg"}))
      ->capture_default_str();
  train_cmd->add_option("--strategy", train_opts.strategy)
      ->check(CLI::IsMember(
          {"disaggregate", "sample-one", "min-ref", "min-ref-unnorm"}))
      ->capture_default_str();
  train_cmd->add_option("--steps", train_opts.steps)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--lr", train_opts.learning_rate)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--batch-rows", train_opts.batch_rows)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--params-out", train_opts.params_out);
  train_cmd->add_option("--trace", train_opts.trace,
                        "Trace JSONL path (default stdout)");

  DecodeOptions decode;
  auto* decode_cmd = app.add_subcommand(
      "decode", "Beam search, sampling or distractor candidates");
  decode_cmd->add_option("--params", decode.params)->required();
  decode_cmd->add_option("--in", decode.input)->required();
  decode_cmd->add_option("--out", decode.out);
  decode_cmd->add_option("--mode", decode.mode)
      ->check(CLI::IsMember({"beam", "sample", "candidates"}))
      ->capture_default_str();
  decode_cmd->add_option("--beams", decode.beams)->capture_default_str();
  decode_cmd->add_option("--alpha", decode.alpha)->capture_default_str();
  decode_cmd->add_option("--max-len", decode.max_len,
                         "Default 128, or 64 in candidates mode");
  decode_cmd->add_option("--temperature", decode.temperature)
      ->capture_default_str();
  decode_cmd->add_option("--k", decode.k, "Distractors wanted (samples 4k)")
      ->capture_default_str();
  decode_cmd->add_option("--separator", decode.separator)->capture_default_str();

  DistractOptions distract;
  auto* distract_cmd = app.add_subcommand(
      "distract", "Select diverse distractors from sampled candidates");
  distract_cmd->add_option("--in", distract.input)->required();
  distract_cmd->add_option("--out", distract.out);
  distract_cmd->add_option("--k", distract.k)->capture_default_str();
  distract_cmd->add_option("--embedder", distract.embedder)
      ->capture_default_str();
  distract_cmd->add_option("--dim", distract.dim)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  distract_cmd->add_option("--batch-id", distract.batch_id,
                           "Also write a 10-question curation batch");
  distract_cmd->add_option("--data-dir", distract.data_dir)
      ->capture_default_str();
  distract_cmd->add_flag("--skip-insufficient", distract.skip_insufficient);

  StatsOptions stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "Distractor rating or survey statistics");
  stats_cmd->add_option("--ratings", stats.ratings);
  stats_cmd->add_option("--questions", stats.questions);
  stats_cmd->add_flag("--survey", stats.survey);
  stats_cmd->add_option("--in", stats.input);
  stats_cmd->add_option("--out", stats.out);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Curation HTTP API");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->capture_default_str();
  serve_cmd->add_option("--data-dir", serve.data_dir)->capture_default_str();
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Static UI bundle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (metrics_cmd->parsed()) return Metrics(metrics, out);
    if (pipeline_cmd->parsed()) return Pipeline(pipeline, seed, out);
    if (train_cmd->parsed()) return TrainDemo(train_opts, seed, out);
    if (decode_cmd->parsed()) return Decode(decode, seed, out, err);
    if (distract_cmd->parsed()) return Distract(distract, seed, out, err);
    if (stats_cmd->parsed()) return Stats(stats, out);
    if (serve_cmd->parsed()) return Serve(serve, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace quizsmith::cli
