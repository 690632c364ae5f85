/* Copyright 2026 The dsae Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dsae/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "dsae/annotation.hpp"
#include "dsae/corpus.hpp"
#include "dsae/embeddings.hpp"
#include "dsae/error.hpp"
#include "dsae/evaluate.hpp"
#include "dsae/gradcheck.hpp"
#include "dsae/io.hpp"
#include "dsae/ner.hpp"
#include "dsae/normalize.hpp"
#include "dsae/pipeline.hpp"
#include "dsae/relation.hpp"
#include "dsae/signals.hpp"
#include "dsae/synthetic.hpp"

namespace dsae::commands {

namespace fs = std::filesystem;
using annotation::AnnotatedDoc;
using evaluate::MetricsRow;

namespace {

// ---------------------------------------------------------------------------
// Configuration schema

enum class Kind { Int, Num, Bool, Choice, Path };

struct Field {
  const char* pointer;
  Kind kind;
  double lo = 0, hi = 0;
  bool lo_open = false, hi_open = false;
  std::vector<std::string> choices = {};
};

constexpr double kBig = 9007199254740992.0;  // 2^53

const std::vector<Field>& schema() {
  static const std::vector<Field> fields = {
      {"/paths/corpus", Kind::Path},
      {"/paths/annotations", Kind::Path},
      {"/paths/ds_lexicon", Kind::Path},
      {"/paths/symptom_lexicon", Kind::Path},
      {"/paths/organ_lexicon", Kind::Path},
      {"/paths/embeddings", Kind::Path},
      {"/paths/contextual", Kind::Path},
      {"/paths/unigrams", Kind::Path},
      {"/paths/contractions", Kind::Path},
      {"/paths/pos_tags", Kind::Path},
      {"/paths/kb", Kind::Path},
      {"/paths/ner_model", Kind::Path},
      {"/paths/re_model", Kind::Path},
      {"/paths/pipeline_output", Kind::Path},
      {"/paths/signals", Kind::Path},
      {"/paths/out", Kind::Path},
      {"/ner/model", Kind::Choice, 0, 0, false, false, {"svm", "crf", "lstm-crf"}},
      {"/ner/lexicon_features", Kind::Bool},
      {"/ner/svm/epochs", Kind::Int, 1, 1e6},
      {"/ner/svm/lr", Kind::Num, 0, 1e3, true},
      {"/ner/svm/l2", Kind::Num, 0, 1e3},
      {"/ner/crf/c1", Kind::Num, 0, 1e6},
      {"/ner/crf/c2", Kind::Num, 0, 1e6},
      {"/ner/crf/max_iterations", Kind::Int, 1, 1e7},
      {"/ner/crf/tolerance", Kind::Num, 0, 1, true, true},
      {"/ner/crf/memory", Kind::Int, 1, 1000},
      {"/ner/lstm_crf/hidden", Kind::Int, 1, 4096},
      {"/ner/lstm_crf/epochs", Kind::Int, 1, 1e6},
      {"/ner/lstm_crf/batch_size", Kind::Int, 1, 1e7},
      {"/ner/lstm_crf/lr", Kind::Num, 0, 1e3, true},
      {"/ner/lstm_crf/weight_decay", Kind::Num, 0, 1},
      {"/ner/lstm_crf/clip_norm", Kind::Num, 0, 1e9, true},
      {"/re/model", Kind::Choice, 0, 0, false, false, {"cnn"}},
      {"/re/cnn/max_len", Kind::Int, 5, 1e5},
      {"/re/cnn/use_markers", Kind::Bool},
      {"/re/cnn/use_positions", Kind::Bool},
      {"/re/cnn/pos_dim", Kind::Int, 1, 1024},
      {"/re/cnn/filters", Kind::Int, 1, 1e5},
      {"/re/cnn/kernel", Kind::Int, 1, 63},
      {"/re/cnn/dropout", Kind::Num, 0, 1, false, true},
      {"/re/cnn/lr", Kind::Num, 0, 1e3, true},
      {"/re/cnn/weight_decay", Kind::Num, 0, 1},
      {"/re/cnn/epochs", Kind::Int, 1, 1e6},
      {"/re/cnn/batch_size", Kind::Int, 1, 1e7},
      {"/re/cnn/class_weights", Kind::Bool},
      {"/seeds/base", Kind::Int, 0, kBig},
      {"/seeds/runs", Kind::Int, 1, 1e5},
      {"/evaluation/split", Kind::Choice, 0, 0, false, false, {"train", "dev", "test", "all"}},
      {"/evaluation/epsilon", Kind::Num, 0, 1},
      {"/evaluation/entity_dropout", Kind::Num, 0, 1},
      {"/evaluation/top_k", Kind::Int, 1, kBig},
      {"/evaluation/examples", Kind::Int, 0, 1e6},
      {"/evaluation/report_format", Kind::Choice, 0, 0, false, false, {"tsv", "markdown"}},
      {"/evaluation/relation", Kind::Choice, 0, 0, false, false,
       {"all", "Indication", "AdverseEvent"}},
      {"/evaluation/replicate_task", Kind::Choice, 0, 0, false, false, {"ner", "re", "pipeline"}},
      {"/evaluation/gradcheck/instances", Kind::Int, 1, 1e5},
      {"/evaluation/gradcheck/lstm_hidden", Kind::Int, 1, 4096},
      {"/evaluation/gradcheck/cnn_filters", Kind::Int, 1, 1e5},
      {"/evaluation/gradcheck/coordinates", Kind::Int, 0, kBig},
      {"/evaluation/gradcheck/tolerance", Kind::Num, 0, 1, true},
      {"/synthetic/n_docs", Kind::Int, 10, 1e7},
      {"/synthetic/seed", Kind::Int, 0, kBig},
      {"/synthetic/embedding_dim", Kind::Int, 1, 4096},
      {"/synthetic/embedding_noise", Kind::Num, 0, 1e3},
      {"/synthetic/lexicon_coverage", Kind::Num, 0, 1},
      {"/synthetic/indication_share", Kind::Num, 0, 1},
      {"/synthetic/second_clause", Kind::Num, 0, 1},
      {"/synthetic/two_relations", Kind::Num, 0, 1},
      {"/synthetic/no_relation_doc", Kind::Num, 0, 1},
      {"/synthetic/deficiency_rate", Kind::Num, 0, 1},
      {"/synthetic/typo_rate", Kind::Num, 0, 1},
      {"/synthetic/ambiguous_clause", Kind::Num, 0, 1},
  };
  return fields;
}

std::string bound_text(const Field& f) {
  std::ostringstream os;
  os << (f.lo_open ? "(" : "[") << f.lo << ", " << f.hi << (f.hi_open ? ")" : "]");
  return os.str();
}

void check_field(const Json& cfg, const Field& f, std::vector<std::string>& errs) {
  const Json::json_pointer ptr(f.pointer);
  if (!cfg.contains(ptr)) {
    errs.push_back(std::string(f.pointer) + ": missing");
    return;
  }
  const Json& v = cfg.at(ptr);
  const std::string name = f.pointer;
  switch (f.kind) {
    case Kind::Path:
      if (!v.is_null() && !(v.is_string() && !v.get<std::string>().empty()))
        errs.push_back(name + ": expected a non-empty path string or null");
      return;
    case Kind::Bool:
      if (!v.is_boolean()) errs.push_back(name + ": expected true or false");
      return;
    case Kind::Choice: {
      if (!v.is_string() || std::find(f.choices.begin(), f.choices.end(),
                                      v.get<std::string>()) == f.choices.end()) {
        std::string opts;
        for (const auto& c : f.choices) opts += (opts.empty() ? "" : "|") + c;
        errs.push_back(name + ": expected one of " + opts);
      }
      return;
    }
    case Kind::Int:
    case Kind::Num: {
      if (!v.is_number() || (f.kind == Kind::Int && !v.is_number_integer())) {
        errs.push_back(name + (f.kind == Kind::Int ? ": expected an integer"
                                                   : ": expected a number"));
        return;
      }
      const double x = v.get<double>();
      const bool ok = std::isfinite(x) && (f.lo_open ? x > f.lo : x >= f.lo) &&
                      (f.hi_open ? x < f.hi : x <= f.hi);
      if (!ok) errs.push_back(name + ": value out of range " + bound_text(f));
      return;
    }
  }
}

// Input paths each command reads. Alternatives separated by '|' mean at
// least one of them is required.
struct Needs {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, Needs, std::less<>>& command_needs() {
  static const std::map<std::string, Needs, std::less<>> needs = {
      {"ingest", {{"corpus", "ds_lexicon", "symptom_lexicon|organ_lexicon"}, {}}},
      {"train-ner",
       {{"corpus", "annotations"},
        {"ds_lexicon", "symptom_lexicon", "organ_lexicon", "embeddings", "contextual",
         "unigrams", "contractions", "pos_tags"}}},
      {"eval-ner",
       {{"ner_model", "corpus", "annotations"},
        {"ds_lexicon", "symptom_lexicon", "organ_lexicon", "embeddings", "contextual",
         "unigrams", "contractions", "pos_tags"}}},
      {"train-re",
       {{"corpus", "annotations", "embeddings|contextual"},
        {"unigrams", "contractions", "pos_tags"}}},
      {"eval-re",
       {{"re_model", "corpus", "annotations", "embeddings|contextual"},
        {"unigrams", "contractions", "pos_tags"}}},
      {"pipeline",
       {{"ner_model", "re_model", "corpus", "embeddings|contextual"},
        {"annotations", "ds_lexicon", "symptom_lexicon", "organ_lexicon", "unigrams",
         "contractions", "pos_tags"}}},
      {"replicate",
       {{"corpus", "annotations"},
        {"ds_lexicon", "symptom_lexicon", "organ_lexicon", "embeddings", "contextual",
         "unigrams", "contractions", "pos_tags"}}},
      {"aggregate", {{"pipeline_output", "ds_lexicon"}, {}}},
      {"compare-kb", {{"signals", "kb"}, {}}},
      {"report", {{"signals"}, {"corpus"}}},
      {"gradcheck", {{}, {}}},
      {"synth", {{}, {}}},
  };
  return needs;
}

bool has_path(const Json& cfg, const std::string& key) {
  const Json::json_pointer ptr("/paths/" + key);
  if (!cfg.contains(ptr)) return false;
  const Json& v = cfg.at(ptr);
  return v.is_string() && !v.get<std::string>().empty();
}

std::string path_of(const Json& cfg, const std::string& key) {
  return cfg["paths"][key].get<std::string>();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "ingest",   "train-ner", "eval-ner",  "train-re",   "eval-re", "pipeline",
      "replicate", "aggregate", "compare-kb", "report", "gradcheck", "synth"};
  return names;
}

Json default_config() {
  const synthetic::SynthConfig synth;
  const ner::SvmConfig svm;
  const ner::CrfConfig crf;
  const ner::LstmCrfConfig lstm;
  const relation::CnnConfig cnn;
  const gradcheck::Options gc;
  Json paths = Json::object();
  for (const char* k : {"corpus", "annotations", "ds_lexicon", "symptom_lexicon",
                        "organ_lexicon", "embeddings", "contextual", "unigrams",
                        "contractions", "pos_tags", "kb", "ner_model", "re_model",
                        "pipeline_output", "signals"})
    paths[k] = nullptr;
  paths["out"] = "dsae-out";
  return Json{
      {"paths", paths},
      {"ner",
       {{"model", "crf"},
        {"lexicon_features", true},
        {"svm", {{"epochs", svm.epochs}, {"lr", svm.lr}, {"l2", svm.l2}}},
        {"crf",
         {{"c1", crf.c1},
          {"c2", crf.c2},
          {"max_iterations", crf.max_iterations},
          {"tolerance", crf.tolerance},
          {"memory", crf.memory}}},
        {"lstm_crf",
         {{"hidden", lstm.hidden},
          {"epochs", lstm.epochs},
          {"batch_size", lstm.batch_size},
          {"lr", lstm.lr},
          {"weight_decay", lstm.weight_decay},
          {"clip_norm", lstm.clip_norm}}}}},
      {"re",
       {{"model", "cnn"},
        {"cnn",
         {{"max_len", cnn.encode.max_len},
          {"use_markers", cnn.encode.use_markers},
          {"use_positions", cnn.encode.use_positions},
          {"pos_dim", cnn.pos_dim},
          {"filters", cnn.filters},
          {"kernel", cnn.kernel},
          {"dropout", cnn.dropout},
          {"lr", cnn.lr},
          {"weight_decay", cnn.weight_decay},
          {"epochs", cnn.epochs},
          {"batch_size", cnn.batch_size},
          {"class_weights", cnn.class_weights}}}}},
      {"seeds", {{"base", 0}, {"runs", 20}}},
      {"evaluation",
       {{"split", "test"},
        {"epsilon", 0.01},
        {"entity_dropout", 0.5},
        {"top_k", 200},
        {"examples", 3},
        {"report_format", "tsv"},
        {"relation", "all"},
        {"replicate_task", "ner"},
        {"gradcheck",
         {{"instances", gc.instances},
          {"lstm_hidden", gc.lstm_hidden},
          {"cnn_filters", gc.cnn_filters},
          {"coordinates", gc.coords_per_instance},
          {"tolerance", 1e-4}}}}},
      {"synthetic",
       {{"n_docs", synth.n_docs},
        {"seed", synth.seed},
        {"embedding_dim", synth.embedding_dim},
        {"embedding_noise", synth.embedding_noise},
        {"lexicon_coverage", synth.lexicon_coverage},
        {"indication_share", synth.indication_share},
        {"second_clause", synth.second_clause},
        {"two_relations", synth.two_relations},
        {"no_relation_doc", synth.no_relation_doc},
        {"deficiency_rate", synth.deficiency_rate},
        {"typo_rate", synth.typo_rate},
        {"ambiguous_clause", synth.ambiguous_clause}}},
  };
}

Json merge_config(const Json& base, const Json& patch, std::vector<std::string>* unknown) {
  Json out = base;
  std::function<void(Json&, const Json&, const std::string&)> rec =
      [&](Json& dst, const Json& src, const std::string& prefix) {
        for (auto it = src.begin(); it != src.end(); ++it) {
          const std::string where = prefix + "/" + it.key();
          if (!dst.contains(it.key())) {
            if (unknown) unknown->push_back(where);
            continue;
          }
          Json& d = dst[it.key()];
          if (d.is_object() && it->is_object())
            rec(d, *it, where);
          else
            d = *it;
        }
      };
  if (!patch.is_object()) {
    if (unknown) unknown->push_back("(root): expected a JSON object");
    return out;
  }
  rec(out, patch, "");
  return out;
}

std::vector<std::string> validate(const Json& config, std::string_view command) {
  std::vector<std::string> errs;
  const auto nit = command_needs().find(command);
  if (nit == command_needs().end()) {
    errs.push_back("command: unknown command '" + std::string(command) + "'");
    return errs;
  }
  if (!config.is_object()) {
    errs.push_back("(root): expected a JSON object");
    return errs;
  }
  for (const Field& f : schema()) check_field(config, f, errs);
  auto value = [&](const char* pointer) {
    const Json::json_pointer ptr(pointer);
    return config.contains(ptr) ? config.at(ptr) : Json();
  };
  const Json kernel = value("/re/cnn/kernel");
  if (kernel.is_number_integer() && kernel.get<long>() % 2 == 0)
    errs.push_back("/re/cnn/kernel: must be odd");
  if (!has_path(config, "out")) errs.push_back("/paths/out: required");

  const Needs& needs = nit->second;
  auto check_exists = [&](const std::string& key) {
    const std::string p = path_of(config, key);
    std::error_code ec;
    if (!fs::exists(p, ec))
      errs.push_back("/paths/" + key + ": '" + p + "' does not exist");
  };
  for (const std::string& req : needs.required) {
    std::vector<std::string> alts;
    for (auto a : io::split(req, '|')) alts.emplace_back(a);
    bool any = false;
    for (const auto& a : alts)
      if (has_path(config, a)) {
        any = true;
        check_exists(a);
      }
    if (!any) {
      std::string which;
      for (const auto& a : alts) which += (which.empty() ? "/paths/" : " or /paths/") + a;
      errs.push_back(which + ": required by " + std::string(command));
    }
  }
  for (const std::string& opt : needs.optional)
    if (has_path(config, opt)) check_exists(opt);

  const Json task = value("/evaluation/replicate_task");
  const bool needs_vectors = command == "train-ner" || command == "eval-ner" ||
                             (command == "replicate" && task == "ner");
  if (needs_vectors && value("/ner/model") == "lstm-crf" && !has_path(config, "embeddings") &&
      !has_path(config, "contextual"))
    errs.push_back("/paths/embeddings or /paths/contextual: required by the lstm-crf model");
  if (command == "replicate" && task.is_string() && task != "ner" &&
      !has_path(config, "embeddings") && !has_path(config, "contextual"))
    errs.push_back("/paths/embeddings or /paths/contextual: required by the relation model");
  if (has_path(config, "embeddings") && has_path(config, "contextual"))
    errs.push_back("/paths/contextual: conflicts with /paths/embeddings, set only one");
  return errs;
}

namespace {

// ---------------------------------------------------------------------------
// Run context: input hashing, artifact writing, manifest.

class RunContext {
 public:
  RunContext(std::string command, Json cfg)
      : command_(std::move(command)), cfg_(std::move(cfg)) {
    out_ = fs::path(path_of(cfg_, "out"));
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw IoError("cannot create output directory " + out_.string() + ": " + ec.message());
  }

  const Json& cfg() const { return cfg_; }
  const Json& at(const char* pointer) const { return cfg_.at(Json::json_pointer(pointer)); }
  std::uint64_t seed() const { return cfg_["seeds"]["base"].get<std::uint64_t>(); }
  bool has(const std::string& key) const { return has_path(cfg_, key); }
  std::string path(const std::string& key) const { return path_of(cfg_, key); }

  std::string read(const std::string& key) { return read_file(path(key)); }

  std::string read_file(const std::string& p) {
    std::string content = io::read_file(p);
    inputs_[p] = io::sha256_hex(content);
    return content;
  }

  std::optional<std::string> read_if_exists(const fs::path& p) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return std::nullopt;
    return read_file(p.string());
  }

  std::string write(const std::string& name, std::string_view content) {
    const fs::path p = out_ / name;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    io::write_file_atomic(p.string(), content);
    artifacts_[name] = io::sha256_hex(content);
    written_.push_back(p.string());
    return p.string();
  }

  Result finish(Json summary) {
    Json manifest{{"command", command_},
                  {"version", DSAE_VERSION},
                  {"config", cfg_},
                  {"seeds", cfg_["seeds"]},
                  {"inputs", inputs_},
                  {"artifacts", artifacts_}};
    write(command_ + ".manifest.json", manifest.dump(2) + "\n");
    summary["command"] = command_;
    summary["out"] = out_.string();
    return Result{std::move(summary), written_};
  }

 private:
  std::string command_;
  Json cfg_;
  fs::path out_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> artifacts_;
  std::vector<std::string> written_;
};

// ---------------------------------------------------------------------------
// Loading

struct Normalizer {
  normalize::UnigramTable unigrams = normalize::UnigramTable::builtin();
  normalize::ContractionTable contractions = normalize::ContractionTable::builtin();
  normalize::PosSource pos;

  explicit Normalizer(RunContext& rc) {
    if (rc.has("unigrams")) unigrams = normalize::parse_unigrams(rc.read("unigrams"));
    if (rc.has("contractions"))
      contractions = normalize::parse_contractions(rc.read("contractions"));
    if (rc.has("pos_tags")) pos = normalize::PosSource::from_tsv(rc.read("pos_tags"));
  }

  normalize::NormalizedDoc operator()(const corpus::Tweet& t) const {
    auto doc = normalize::normalize(t.id, t.text, unigrams, contractions);
    normalize::pos_tag(doc, pos);
    return doc;
  }
};

struct Lexicons {
  corpus::Lexicon ds, events, all;
};

Lexicons load_lexicons(RunContext& rc) {
  Lexicons l;
  if (rc.has("ds_lexicon")) l.ds = corpus::parse_lexicon(rc.read("ds_lexicon"), EntityType::Supplement);
  if (rc.has("symptom_lexicon"))
    l.events.merge(corpus::parse_lexicon(rc.read("symptom_lexicon"), EntityType::Symptom));
  if (rc.has("organ_lexicon"))
    l.events.merge(corpus::parse_lexicon(rc.read("organ_lexicon"), EntityType::BodyOrgan));
  l.all = l.ds;
  l.all.merge(l.events);
  return l;
}

// Owns whichever embedding source the config names. Not movable: `view`
// points into the members.
struct Vectors {
  embeddings::EmbeddingTable table;
  embeddings::ContextualProvider contextual;
  std::unique_ptr<embeddings::TokenVectors> view;

  Vectors() = default;
  Vectors(const Vectors&) = delete;
  Vectors& operator=(const Vectors&) = delete;

  void load(RunContext& rc) {
    if (rc.has("embeddings")) {
      table = embeddings::parse_static(rc.read("embeddings")).table;
      view = std::make_unique<embeddings::StaticVectors>(table);
    } else if (rc.has("contextual")) {
      contextual = embeddings::parse_contextual(rc.read("contextual"));
      view = std::make_unique<embeddings::ContextualVectors>(contextual);
    }
  }
  const embeddings::TokenVectors* get() const { return view.get(); }
  const embeddings::TokenVectors& require() const {
    if (!view) throw ConfigError("/paths/embeddings or /paths/contextual: required");
    return *view;
  }
};

struct Dataset {
  std::vector<corpus::Tweet> tweets;
  std::vector<normalize::NormalizedDoc> normalized;  // parallel to tweets
  std::vector<AnnotatedDoc> annotated;               // tweets with a .ann file
  std::size_t skipped = 0;
};

Dataset load_dataset(RunContext& rc, const Normalizer& norm, bool want_annotations) {
  Dataset d;
  auto load = corpus::parse_tweets(rc.read("corpus"));
  d.tweets = std::move(load.tweets);
  d.skipped = load.skipped;
  const bool ann = want_annotations && rc.has("annotations");
  const fs::path dir = ann ? fs::path(rc.path("annotations")) : fs::path();
  for (const auto& t : d.tweets) {
    d.normalized.push_back(norm(t));
    if (!ann) continue;
    if (auto text = rc.read_if_exists(dir / (t.id + ".ann"))) {
      try {
        d.annotated.push_back(annotation::parse_standoff(*text, d.normalized.back()));
      } catch (const ParseError& e) {
        throw ParseError(t.id + ".ann: " + e.what());
      }
    }
  }
  return d;
}

std::vector<AnnotatedDoc> pick(const std::vector<AnnotatedDoc>& docs,
                               const std::vector<std::size_t>& idx) {
  std::vector<AnnotatedDoc> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(docs[i]);
  return out;
}

std::vector<AnnotatedDoc> eval_docs(const std::vector<AnnotatedDoc>& docs,
                                    const annotation::Split& split, const std::string& which) {
  if (which == "all") return docs;
  if (which == "train") return pick(docs, split.train);
  if (which == "dev") return pick(docs, split.dev);
  return pick(docs, split.test);
}

std::vector<std::string> doc_ids(const std::vector<AnnotatedDoc>& docs) {
  std::vector<std::string> ids;
  for (const auto& d : docs) ids.push_back(d.doc.doc_id);
  return ids;
}

void require_docs(const std::vector<AnnotatedDoc>& docs) {
  if (docs.size() < 10)
    throw InvalidArgument("need at least 10 annotated documents, found " +
                          std::to_string(docs.size()));
}

// ---------------------------------------------------------------------------
// Model configuration from JSON

ner::SvmConfig svm_config(const Json& c, std::uint64_t seed) {
  ner::SvmConfig s;
  s.epochs = c["epochs"].get<int>();
  s.lr = c["lr"].get<double>();
  s.l2 = c["l2"].get<double>();
  s.seed = seed;
  return s;
}

ner::CrfConfig crf_config(const Json& c) {
  ner::CrfConfig s;
  s.c1 = c["c1"].get<double>();
  s.c2 = c["c2"].get<double>();
  s.max_iterations = c["max_iterations"].get<int>();
  s.tolerance = c["tolerance"].get<double>();
  s.memory = c["memory"].get<int>();
  return s;
}

ner::LstmCrfConfig lstm_config(const Json& c, std::uint64_t seed) {
  ner::LstmCrfConfig s;
  s.hidden = c["hidden"].get<std::size_t>();
  s.epochs = c["epochs"].get<int>();
  s.batch_size = c["batch_size"].get<std::size_t>();
  s.lr = c["lr"].get<double>();
  s.weight_decay = c["weight_decay"].get<double>();
  s.clip_norm = c["clip_norm"].get<double>();
  s.seed = seed;
  return s;
}

relation::CnnConfig cnn_config(const Json& c, std::uint64_t seed) {
  relation::CnnConfig s;
  s.encode.max_len = c["max_len"].get<std::size_t>();
  s.encode.use_markers = c["use_markers"].get<bool>();
  s.encode.use_positions = c["use_positions"].get<bool>();
  s.pos_dim = c["pos_dim"].get<std::size_t>();
  s.filters = c["filters"].get<std::size_t>();
  s.kernel = c["kernel"].get<std::size_t>();
  s.dropout = c["dropout"].get<double>();
  s.lr = c["lr"].get<double>();
  s.weight_decay = c["weight_decay"].get<double>();
  s.epochs = c["epochs"].get<int>();
  s.batch_size = c["batch_size"].get<std::size_t>();
  s.class_weights = c["class_weights"].get<bool>();
  s.seed = seed;
  return s;
}

synthetic::SynthConfig synth_config(const Json& c) {
  synthetic::SynthConfig s;
  s.n_docs = c["n_docs"].get<std::size_t>();
  s.seed = c["seed"].get<std::uint64_t>();
  s.embedding_dim = c["embedding_dim"].get<std::size_t>();
  s.embedding_noise = c["embedding_noise"].get<double>();
  s.lexicon_coverage = c["lexicon_coverage"].get<double>();
  s.indication_share = c["indication_share"].get<double>();
  s.second_clause = c["second_clause"].get<double>();
  s.two_relations = c["two_relations"].get<double>();
  s.no_relation_doc = c["no_relation_doc"].get<double>();
  s.deficiency_rate = c["deficiency_rate"].get<double>();
  s.typo_rate = c["typo_rate"].get<double>();
  s.ambiguous_clause = c["ambiguous_clause"].get<double>();
  return s;
}

// ---------------------------------------------------------------------------
// Training and evaluation building blocks

std::vector<ner::NerExample> examples(const std::vector<AnnotatedDoc>& docs,
                                      std::vector<std::string>& warnings) {
  std::vector<ner::NerExample> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(ner::make_example(d, &warnings));
  return out;
}

ner::FeatureContext ner_context(const Json& cfg, const Vectors& vec, const Lexicons& lex) {
  ner::FeatureContext ctx;
  ctx.vectors = vec.get();
  if (cfg["ner"]["lexicon_features"].get<bool>() && !lex.all.empty()) ctx.lexicon = &lex.all;
  return ctx;
}

struct NerTraining {
  ner::NerModel model;
  Json log;
};

NerTraining train_ner(const Json& cfg, const std::vector<AnnotatedDoc>& train_docs,
                      const std::vector<AnnotatedDoc>& dev_docs,
                      const ner::FeatureContext& ctx, std::uint64_t seed) {
  std::vector<std::string> warnings;
  const auto train = examples(train_docs, warnings);
  const auto dev = examples(dev_docs, warnings);
  const std::string type = cfg["ner"]["model"].get<std::string>();
  NerTraining out;
  out.log["model_type"] = type;
  if (type == "svm") {
    out.model = ner::svm_train(train, ctx, svm_config(cfg["ner"]["svm"], seed));
  } else if (type == "crf") {
    auto r = ner::crf_train(train, ctx, crf_config(cfg["ner"]["crf"]));
    out.log["converged"] = r.converged;
    out.log["iterations"] = r.iterations;
    out.log["objective"] = r.history;
    out.model = std::move(r.model);
  } else {
    if (!ctx.vectors) throw ConfigError("/paths/embeddings or /paths/contextual: required by lstm-crf");
    auto r = ner::lstm_crf_train(train, dev, *ctx.vectors, lstm_config(cfg["ner"]["lstm_crf"], seed));
    out.log["best_epoch"] = r.best_epoch;
    out.log["best_dev_f1"] = r.best_dev_f1;
    out.log["epoch_loss"] = r.epoch_loss;
    out.model = std::move(r.model);
  }
  out.log["warnings"] = warnings;
  return out;
}

evaluate::EvalCounts eval_ner(const ner::NerModel& model, const ner::FeatureContext& ctx,
                              const std::vector<AnnotatedDoc>& docs) {
  evaluate::EvalCounts c;
  for (const auto& d : docs)
    c += evaluate::align_spans(d.entities, ner::predict_entities(model, d.doc, ctx));
  return c;
}

MetricsRow row(const std::string& scope, const std::string& label, const evaluate::Metrics& m) {
  return MetricsRow{scope, label, m.precision, m.recall, m.f1, m.f1, 0.0, 1};
}

std::vector<MetricsRow> ner_rows(const std::string& scope, const evaluate::EvalCounts& c) {
  std::vector<MetricsRow> rows;
  for (EntityType t : kEntityTypes)
    rows.push_back(row(scope, std::string(to_string(t)), evaluate::metrics(c, t)));
  rows.push_back(row(scope, "micro", evaluate::metrics(c)));
  return rows;
}

std::string counts_tsv(const evaluate::EvalCounts& c) {
  std::ostringstream os;
  os << "label\tcor\tinc_pred\tinc_gold\tpar\tmis\tspu\n";
  for (EntityType t : kEntityTypes) {
    const auto& k = c.of(t);
    os << to_string(t) << '\t' << k.cor << '\t' << k.inc_pred << '\t' << k.inc_gold << '\t'
       << k.par << '\t' << k.mis << '\t' << k.spu << '\n';
  }
  os << "micro\t" << c.cor << '\t' << c.inc << '\t' << c.inc << '\t' << c.par << '\t' << c.mis
     << '\t' << c.spu << '\n';
  return os.str();
}

constexpr RelationLabel kScoredLabels[] = {RelationLabel::Indication,
                                           RelationLabel::AdverseEvent};

std::vector<MetricsRow> relation_rows(const std::string& scope,
                                      const std::map<RelationLabel, evaluate::LabelScore>& s) {
  std::vector<MetricsRow> rows;
  for (RelationLabel l : kScoredLabels)
    rows.push_back(row(scope, std::string(to_string(l)), s.at(l).m));
  return rows;
}

struct CnnTraining {
  relation::CnnModel model;
  Json log;
};

CnnTraining train_cnn(const Json& cfg, const std::vector<AnnotatedDoc>& train_docs,
                      const std::vector<AnnotatedDoc>& dev_docs,
                      const embeddings::TokenVectors& vectors, std::uint64_t seed) {
  const auto c = cnn_config(cfg["re"]["cnn"], seed);
  const auto train = relation::encode_corpus(train_docs, vectors, c.encode);
  const auto dev = relation::encode_corpus(dev_docs, vectors, c.encode);
  auto r = relation::cnn_train(train, dev, vectors.dim(), c);
  CnnTraining out{std::move(r.model), Json::object()};
  out.log["model_type"] = "cnn";
  out.log["train_instances"] = train.size();
  out.log["dev_instances"] = dev.size();
  out.log["best_epoch"] = r.best_epoch;
  out.log["best_dev_macro_f1"] = r.best_dev_macro_f1;
  out.log["epoch_loss"] = r.epoch_loss;
  out.log["warnings"] = r.warnings;
  return out;
}

std::string ner_model_text(const ner::NerModel& m) { return ner::to_json(m) + "\n"; }
std::string cnn_model_text(const relation::CnnModel& m) { return relation::to_json(m) + "\n"; }

Json scores_json(const std::map<RelationLabel, evaluate::LabelScore>& s) {
  Json j = Json::object();
  for (RelationLabel l : kScoredLabels) {
    const auto& v = s.at(l);
    j[std::string(to_string(l))] = {{"tp", v.tp}, {"fp", v.fp}, {"fn", v.fn},
                                    {"precision", v.m.precision}, {"recall", v.m.recall},
                                    {"f1", v.m.f1}};
  }
  return j;
}

void add_run_metrics(evaluate::RunMetrics& rm, const std::string& label, const evaluate::Metrics& m) {
  rm[label + ".precision"] = m.precision;
  rm[label + ".recall"] = m.recall;
  rm[label + ".f1"] = m.f1;
}

std::string lexicon_tsv(const corpus::Lexicon& lex, std::optional<EntityType> only) {
  std::string out;
  for (const auto& [surface, e] : lex.entries()) {
    if (only && e.category != *only) continue;
    out += surface;
    if (e.canonical != surface) out += "\t" + e.canonical;
    out += "\n";
  }
  return out;
}

Json hits_json(const std::vector<corpus::LexiconHit>& hits) {
  Json a = Json::array();
  for (const auto& h : hits)
    a.push_back({{"term", h.term}, {"canonical", h.canonical},
                 {"category", std::string(to_string(h.category))},
                 {"start", h.char_start}, {"end", h.char_end}});
  return a;
}

// ---------------------------------------------------------------------------
// Commands

Result cmd_ingest(RunContext& rc) {
  const Lexicons lex = load_lexicons(rc);
  auto load = corpus::parse_tweets(rc.read("corpus"));
  std::string out;
  std::size_t non_english = 0, selected = 0;
  for (const auto& t : load.tweets) {
    if (t.lang != "en") ++non_english;
    const auto c = corpus::filter_candidate(t, lex.ds, lex.events);
    if (!c.selected) continue;
    ++selected;
    Json j{{"id", t.id}, {"text", t.text}, {"lang", t.lang},
           {"ds_hits", hits_json(c.ds_hits)}, {"event_hits", hits_json(c.event_hits)}};
    if (t.created_at) j["created_at"] = *t.created_at;
    out += j.dump() + "\n";
  }
  rc.write("candidates.jsonl", out);
  Json summary{{"loaded", load.tweets.size()},
               {"skipped_lines", load.skipped},
               {"non_english", non_english},
               {"selected", selected}};
  rc.write("ingest_summary.json", summary.dump(2) + "\n");
  if (!load.diagnostics.empty()) {
    std::string diag;
    for (const auto& d : load.diagnostics) diag += d + "\n";
    rc.write("ingest_skipped.txt", diag);
  }
  return rc.finish(summary);
}

Result cmd_train_ner(RunContext& rc) {
  const Normalizer norm(rc);
  const Lexicons lex = load_lexicons(rc);
  Vectors vec;
  vec.load(rc);
  const Dataset data = load_dataset(rc, norm, true);
  require_docs(data.annotated);
  const auto split = annotation::split_dataset(data.annotated.size(), rc.seed());
  const auto ctx = ner_context(rc.cfg(), vec, lex);
  auto tr = train_ner(rc.cfg(), pick(data.annotated, split.train), pick(data.annotated, split.dev),
                      ctx, rc.seed());
  const std::string which = rc.at("/evaluation/split").get<std::string>();
  const auto counts = eval_ner(tr.model, ctx, eval_docs(data.annotated, split, which));
  const auto rows = ner_rows("ner:" + ner::model_type(tr.model) + ":" + which, counts);
  rc.write("ner_model.json", ner_model_text(tr.model));
  rc.write("split.tsv", annotation::split_manifest(doc_ids(data.annotated), split));
  rc.write("ner_train.json", tr.log.dump(2) + "\n");
  rc.write("ner_metrics.tsv", evaluate::metrics_tsv(rows));
  rc.write("ner_counts.tsv", counts_tsv(counts));
  return rc.finish({{"documents", data.annotated.size()},
                    {"micro_f1", evaluate::metrics(counts).f1}});
}

Result cmd_eval_ner(RunContext& rc) {
  const Normalizer norm(rc);
  const Lexicons lex = load_lexicons(rc);
  Vectors vec;
  vec.load(rc);
  const auto model = ner::ner_model_from_json(rc.read("ner_model"));
  const auto ctx = ner_context(rc.cfg(), vec, lex);
  ner::check_dims(model, ctx);
  const Dataset data = load_dataset(rc, norm, true);
  require_docs(data.annotated);
  const auto split = annotation::split_dataset(data.annotated.size(), rc.seed());
  const std::string which = rc.at("/evaluation/split").get<std::string>();
  const auto counts = eval_ner(model, ctx, eval_docs(data.annotated, split, which));
  rc.write("ner_metrics.tsv",
           evaluate::metrics_tsv(ner_rows("ner:" + ner::model_type(model) + ":" + which, counts)));
  rc.write("ner_counts.tsv", counts_tsv(counts));
  return rc.finish({{"micro_f1", evaluate::metrics(counts).f1}});
}

Result cmd_train_re(RunContext& rc) {
  const Normalizer norm(rc);
  Vectors vec;
  vec.load(rc);
  const Dataset data = load_dataset(rc, norm, true);
  require_docs(data.annotated);
  const auto split = annotation::split_dataset(data.annotated.size(), rc.seed());
  auto tr = train_cnn(rc.cfg(), pick(data.annotated, split.train), pick(data.annotated, split.dev),
                      vec.require(), rc.seed());
  const std::string which = rc.at("/evaluation/split").get<std::string>();
  const auto docs = eval_docs(data.annotated, split, which);
  const pipeline::OracleTagger oracle(docs);
  const pipeline::CnnClassifier clf(tr.model, vec.require());
  const auto ev = pipeline::evaluate_pipeline(docs, oracle, clf);
  rc.write("re_model.json", cnn_model_text(tr.model));
  rc.write("split.tsv", annotation::split_manifest(doc_ids(data.annotated), split));
  rc.write("re_train.json", tr.log.dump(2) + "\n");
  rc.write("re_metrics.tsv", evaluate::metrics_tsv(relation_rows("re:cnn:" + which, ev.scores)));
  return rc.finish({{"documents", data.annotated.size()}, {"scores", scores_json(ev.scores)}});
}

Result cmd_eval_re(RunContext& rc) {
  const Normalizer norm(rc);
  Vectors vec;
  vec.load(rc);
  const auto model = relation::cnn_model_from_json(rc.read("re_model"));
  const pipeline::CnnClassifier clf(model, vec.require());
  const Dataset data = load_dataset(rc, norm, true);
  require_docs(data.annotated);
  const auto split = annotation::split_dataset(data.annotated.size(), rc.seed());
  const std::string which = rc.at("/evaluation/split").get<std::string>();
  const auto docs = eval_docs(data.annotated, split, which);
  const pipeline::OracleTagger oracle(docs);
  const auto ev = pipeline::evaluate_pipeline(docs, oracle, clf);
  std::string preds;
  for (std::size_t i = 0; i < docs.size(); ++i)
    for (const auto& sp : ev.outputs[i].scored)
      preds += relation::scored_pair_json(sp, docs[i].doc) + "\n";
  rc.write("re_metrics.tsv", evaluate::metrics_tsv(relation_rows("re:cnn:" + which, ev.scores)));
  rc.write("re_predictions.jsonl", preds);
  return rc.finish({{"scores", scores_json(ev.scores)}});
}

std::string errors_tsv(const std::map<RelationLabel, pipeline::ErrorBreakdown>& errors) {
  std::ostringstream os;
  os << "label\tfp_spurious_relation\tfp_wrong_entities\tfn_mislabeled\tfn_missed_label"
        "\tfn_missed_entity\n";
  for (RelationLabel l : kScoredLabels) {
    const auto& e = errors.at(l);
    os << to_string(l) << '\t' << e.fp_spurious_relation << '\t' << e.fp_wrong_entities << '\t'
       << e.fn_mislabeled << '\t' << e.fn_missed_label << '\t' << e.fn_missed_entity << '\n';
  }
  return os.str();
}

Result cmd_pipeline(RunContext& rc) {
  const Normalizer norm(rc);
  const Lexicons lex = load_lexicons(rc);
  Vectors vec;
  vec.load(rc);
  const auto ner_model = ner::ner_model_from_json(rc.read("ner_model"));
  const auto re_model = relation::cnn_model_from_json(rc.read("re_model"));
  const auto ctx = ner_context(rc.cfg(), vec, lex);
  const pipeline::ModelTagger tagger(ner_model, ctx);
  const pipeline::CnnClassifier clf(re_model, vec.require());
  const Dataset data = load_dataset(rc, norm, rc.has("annotations"));

  std::string out;
  std::size_t relations = 0;
  for (const auto& doc : data.normalized) {
    const auto po = pipeline::run_pipeline(doc, tagger, clf);
    relations += po.relations.size();
    out += pipeline::output_json(po) + "\n";
  }
  rc.write("pipeline.jsonl", out);
  Json summary{{"documents", data.normalized.size()}, {"relations", relations}};

  if (!data.annotated.empty()) {
    const auto split = annotation::split_dataset(data.annotated.size(), rc.seed());
    const std::string which = rc.at("/evaluation/split").get<std::string>();
    const auto docs = data.annotated.size() >= 10 ? eval_docs(data.annotated, split, which)
                                                   : data.annotated;
    const auto ev = pipeline::evaluate_pipeline(docs, tagger, clf);
    const double eps = rc.at("/evaluation/epsilon").get<double>();
    const auto prop = pipeline::error_propagation_check(docs, tagger, clf, eps);
    std::vector<MetricsRow> rows = relation_rows("pipeline:" + which, ev.scores);
    for (const auto& r : ner_rows("pipeline-entities:" + which, ev.entities)) rows.push_back(r);

    std::ostringstream pt;
    pt << "label\tstandalone_precision\tstandalone_recall\tstandalone_f1\tend_to_end_precision"
          "\tend_to_end_recall\tend_to_end_f1\tholds\n";
    for (const auto& r : prop.rows)
      pt << to_string(r.label) << '\t' << evaluate::format_double(r.standalone.m.precision) << '\t'
         << evaluate::format_double(r.standalone.m.recall) << '\t'
         << evaluate::format_double(r.standalone.m.f1) << '\t'
         << evaluate::format_double(r.end_to_end.m.precision) << '\t'
         << evaluate::format_double(r.end_to_end.m.recall) << '\t'
         << evaluate::format_double(r.end_to_end.m.f1) << '\t' << (r.holds ? "yes" : "no")
         << '\n';

    const double rate = rc.at("/evaluation/entity_dropout").get<double>();
    if (rate > 0) {
      const pipeline::DropoutTagger degraded(tagger, rate, rc.seed());
      const auto dev = pipeline::evaluate_pipeline(docs, degraded, clf);
      for (const auto& r : relation_rows("pipeline-entity-dropout:" + which, dev.scores))
        rows.push_back(r);
    }
    rc.write("pipeline_metrics.tsv", evaluate::metrics_tsv(rows));
    rc.write("pipeline_errors.tsv", errors_tsv(ev.errors));
    rc.write("propagation.tsv", pt.str());
    summary["evaluated_documents"] = docs.size();
    summary["scores"] = scores_json(ev.scores);
    summary["propagation_holds"] = prop.all_hold();
  }
  return rc.finish(summary);
}

Result cmd_replicate(RunContext& rc) {
  const Normalizer norm(rc);
  const Lexicons lex = load_lexicons(rc);
  Vectors vec;
  vec.load(rc);
  const Dataset data = load_dataset(rc, norm, true);
  require_docs(data.annotated);
  const Json& cfg = rc.cfg();
  const std::string task = rc.at("/evaluation/replicate_task").get<std::string>();
  const auto ctx = ner_context(cfg, vec, lex);
  const auto& docs = data.annotated;

  evaluate::Experiment exp = [&](std::uint64_t seed) {
    const auto split = annotation::split_dataset(docs.size(), seed);
    const auto train = pick(docs, split.train);
    const auto dev = pick(docs, split.dev);
    const auto test = pick(docs, split.test);
    evaluate::RunMetrics rm;
    if (task == "ner") {
      const auto tr = train_ner(cfg, train, dev, ctx, seed);
      const auto c = eval_ner(tr.model, ctx, test);
      for (EntityType t : kEntityTypes)
        add_run_metrics(rm, std::string(to_string(t)), evaluate::metrics(c, t));
      add_run_metrics(rm, "micro", evaluate::metrics(c));
      return rm;
    }
    const auto cnn = train_cnn(cfg, train, dev, vec.require(), seed);
    const pipeline::CnnClassifier clf(cnn.model, vec.require());
    std::map<RelationLabel, evaluate::LabelScore> scores;
    if (task == "re") {
      const pipeline::OracleTagger oracle(test);
      scores = pipeline::evaluate_pipeline(test, oracle, clf).scores;
    } else {
      const auto tr = train_ner(cfg, train, dev, ctx, seed);
      const pipeline::ModelTagger tagger(tr.model, ctx);
      scores = pipeline::evaluate_pipeline(test, tagger, clf).scores;
    }
    for (RelationLabel l : kScoredLabels) add_run_metrics(rm, std::string(to_string(l)), scores.at(l).m);
    return rm;
  };

  const std::size_t runs = rc.at("/seeds/runs").get<std::size_t>();
  const auto stats = evaluate::replicate(exp, runs, rc.seed());

  std::ostringstream per_run;
  per_run << "seed\tmetric\tvalue\n";
  for (std::size_t i = 0; i < stats.n(); ++i)
    for (const auto& [k, v] : stats.runs[i])
      per_run << stats.seeds[i] << '\t' << k << '\t' << evaluate::format_double(v) << '\n';

  std::vector<std::string> labels;
  if (task == "ner") {
    for (EntityType t : kEntityTypes) labels.emplace_back(to_string(t));
    labels.emplace_back("micro");
  } else {
    for (RelationLabel l : kScoredLabels) labels.emplace_back(to_string(l));
  }
  const std::string model = task == "re" ? "cnn"
                            : task == "ner" ? cfg["ner"]["model"].get<std::string>()
                                            : cfg["ner"]["model"].get<std::string>() + "+cnn";
  std::vector<MetricsRow> rows;
  for (const auto& label : labels) {
    const auto& s = stats.summary;
    rows.push_back(MetricsRow{task + ":" + model, label, s.at(label + ".precision").mean,
                              s.at(label + ".recall").mean, s.at(label + ".f1").mean,
                              s.at(label + ".f1").mean, s.at(label + ".f1").std, stats.n()});
  }
  rc.write("replicate_runs.tsv", per_run.str());
  rc.write("replicate_metrics.tsv", evaluate::metrics_tsv(rows));
  Json summary{{"task", task}, {"runs", stats.n()}};
  for (const auto& r : rows) summary["f1"][r.label] = {{"mean", r.mean}, {"std", r.std}};
  return rc.finish(summary);
}

std::vector<pipeline::PipelineOutput> read_pipeline_output(const std::string& text) {
  std::vector<pipeline::PipelineOutput> out;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(text)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(pipeline::output_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

Result cmd_aggregate(RunContext& rc) {
  const Lexicons lex = load_lexicons(rc);
  const auto outputs = read_pipeline_output(rc.read("pipeline_output"));
  const std::size_t n_examples = rc.at("/evaluation/examples").get<std::size_t>();
  const auto agg = signals::aggregate(outputs, lex.ds, n_examples);
  const auto ranked = signals::top_k(agg.records, agg.records.size());
  rc.write("signals.tsv", signals::render_report(ranked, signals::ReportFormat::Tsv));
  std::string unmatched;
  for (const auto& s : agg.unmatched_surfaces) unmatched += s + "\n";
  rc.write("unmatched_supplements.txt", unmatched);
  return rc.finish({{"records", ranked.size()}, {"unmatched_surfaces", agg.unmatched_surfaces.size()}});
}

Result cmd_compare_kb(RunContext& rc) {
  const auto records = signals::parse_report_tsv(rc.read("signals"));
  const auto kb = signals::parse_kb(rc.read("kb"));
  const auto compared = signals::compare_kb(records, kb);
  std::size_t known = 0;
  for (const auto& r : compared) known += r.in_kb == signals::KbStatus::Yes;
  rc.write("signals_kb.tsv", signals::render_report(compared, signals::ReportFormat::Tsv));
  return rc.finish({{"records", compared.size()}, {"known", known}, {"novel", compared.size() - known}});
}

Result cmd_report(RunContext& rc) {
  const auto records = signals::parse_report_tsv(rc.read("signals"));
  const std::string rel = rc.at("/evaluation/relation").get<std::string>();
  std::optional<RelationLabel> filter;
  if (rel != "all") filter = parse_relation_label(rel);
  const auto ranked =
      signals::top_k(records, rc.at("/evaluation/top_k").get<std::size_t>(), filter);
  const bool md = rc.at("/evaluation/report_format").get<std::string>() == "markdown";
  rc.write(md ? "report.md" : "report.tsv",
           signals::render_report(ranked, md ? signals::ReportFormat::Markdown
                                             : signals::ReportFormat::Tsv));
  if (rc.has("corpus")) {
    std::map<std::string, std::string> index;
    for (auto& t : corpus::parse_tweets(rc.read("corpus")).tweets) index[t.id] = t.text;
    const std::size_t n = rc.at("/evaluation/examples").get<std::size_t>();
    std::ostringstream os;
    os << "supplement\tdeficiency\tevent\trelation\tdoc_id\ttext\n";
    for (const auto& r : ranked) {
      const auto texts = signals::sample_examples(r.example_doc_ids, index, n);
      std::vector<std::string> ids = r.example_doc_ids;
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < texts.size(); ++i) {
        std::string text = texts[i];
        std::replace(text.begin(), text.end(), '\t', ' ');
        std::replace(text.begin(), text.end(), '\n', ' ');
        os << r.supplement << '\t' << (r.deficiency ? "yes" : "no") << '\t' << r.event << '\t'
           << to_string(r.relation) << '\t' << ids[i] << '\t' << text << '\n';
      }
    }
    rc.write("report_examples.tsv", os.str());
  }
  return rc.finish({{"rows", ranked.size()}});
}

Result cmd_gradcheck(RunContext& rc) {
  gradcheck::Options o;
  const Json& g = rc.at("/evaluation/gradcheck");
  o.instances = g["instances"].get<std::size_t>();
  o.lstm_hidden = g["lstm_hidden"].get<std::size_t>();
  o.cnn_filters = g["cnn_filters"].get<std::size_t>();
  o.coords_per_instance = g["coordinates"].get<std::size_t>();
  o.seed = rc.seed();
  const double tol = g["tolerance"].get<double>();
  const auto rows = gradcheck::run(o);
  rc.write("gradcheck.tsv", gradcheck::to_tsv(rows));
  Json summary = Json::object();
  bool ok = true;
  for (const auto& r : rows) {
    summary["max_rel_error"][r.family] = r.max_rel_error;
    summary["skipped"][r.family] = r.skipped;
    ok = ok && r.max_rel_error < tol;
  }
  summary["passed"] = ok;
  Result res = rc.finish(summary);
  if (!ok) {
    std::string worst;
    for (const auto& r : rows)
      if (!(r.max_rel_error < tol))
        worst += " " + r.family + "=" + evaluate::format_double(r.max_rel_error);
    throw NumericError("gradient check above tolerance " + evaluate::format_double(tol) + ":" + worst);
  }
  return res;
}

Result cmd_synth(RunContext& rc) {
  const auto corpus = synthetic::generate(synth_config(rc.at("/synthetic")));
  std::string tweets;
  for (const auto& t : corpus.tweets) {
    Json j{{"id", t.id}, {"text", t.text}, {"lang", t.lang}};
    if (t.created_at) j["created_at"] = *t.created_at;
    tweets += j.dump() + "\n";
  }
  rc.write("tweets.jsonl", tweets);
  for (const auto& d : corpus.docs)
    rc.write("annotations/" + d.doc.doc_id + ".ann", annotation::write_standoff(d));
  rc.write("embeddings.txt", corpus.embeddings.to_text());
  rc.write("ds_lexicon.tsv", lexicon_tsv(corpus.ds_lexicon, std::nullopt));
  rc.write("symptom_lexicon.tsv", lexicon_tsv(corpus.event_lexicon, EntityType::Symptom));
  rc.write("organ_lexicon.tsv", lexicon_tsv(corpus.event_lexicon, EntityType::BodyOrgan));
  const fs::path out = fs::absolute(rc.path("out"));
  Json paths{{"corpus", (out / "tweets.jsonl").string()},
             {"annotations", (out / "annotations").string()},
             {"embeddings", (out / "embeddings.txt").string()},
             {"ds_lexicon", (out / "ds_lexicon.tsv").string()},
             {"symptom_lexicon", (out / "symptom_lexicon.tsv").string()},
             {"organ_lexicon", (out / "organ_lexicon.tsv").string()}};
  rc.write("synth_paths.json", Json{{"paths", paths}}.dump(2) + "\n");
  std::size_t rels = 0;
  for (const auto& d : corpus.docs) rels += d.relations.size();
  return rc.finish({{"documents", corpus.docs.size()}, {"relations", rels}});
}

}  // namespace

Result run(std::string_view command, const Json& config) {
  const auto errs = validate(config, command);
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  RunContext rc{std::string(command), config};
  if (command == "ingest") return cmd_ingest(rc);
  if (command == "train-ner") return cmd_train_ner(rc);
  if (command == "eval-ner") return cmd_eval_ner(rc);
  if (command == "train-re") return cmd_train_re(rc);
  if (command == "eval-re") return cmd_eval_re(rc);
  if (command == "pipeline") return cmd_pipeline(rc);
  if (command == "replicate") return cmd_replicate(rc);
  if (command == "aggregate") return cmd_aggregate(rc);
  if (command == "compare-kb") return cmd_compare_kb(rc);
  if (command == "report") return cmd_report(rc);
  if (command == "gradcheck") return cmd_gradcheck(rc);
  return cmd_synth(rc);
}

}  // namespace dsae::commands
