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

// dsae command-line driver. Builds a configuration from --config plus flag
// overrides and hands it to the library through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsae/dsae.h"
#include "json.hpp"

namespace {

using nlohmann::json;

enum class Kind { Int, Num, Str, Bool };

struct Override {
  const char* flag;
  const char* pointer;
  Kind kind;
  const char* help;
  std::string value;
};

std::vector<Override> overrides() {
  return {
      {"--seed", "/seeds/base", Kind::Int, "Base seed for splits and model initialisation", {}},
      {"--runs", "/seeds/runs", Kind::Int, "Number of runs for replicate", {}},
      {"--out", "/paths/out", Kind::Str, "Output directory", {}},
      {"--embeddings", "/paths/embeddings", Kind::Str, "Static word vectors (text format)", {}},
      {"--contextual", "/paths/contextual", Kind::Str, "Precomputed contextual vectors (JSONL)", {}},
      {"--corpus", "/paths/corpus", Kind::Str, "Tweets, JSON Lines", {}},
      {"--annotations", "/paths/annotations", Kind::Str, "Directory of <doc_id>.ann standoff files", {}},
      {"--ds-lexicon", "/paths/ds_lexicon", Kind::Str, "Supplement lexicon TSV", {}},
      {"--symptom-lexicon", "/paths/symptom_lexicon", Kind::Str, "Symptom lexicon TSV", {}},
      {"--organ-lexicon", "/paths/organ_lexicon", Kind::Str, "Body organ lexicon TSV", {}},
      {"--unigrams", "/paths/unigrams", Kind::Str, "Unigram counts TSV for hashtag segmentation", {}},
      {"--contractions", "/paths/contractions", Kind::Str, "Contraction expansions TSV", {}},
      {"--pos-tags", "/paths/pos_tags", Kind::Str, "External POS tags TSV", {}},
      {"--kb", "/paths/kb", Kind::Str, "Knowledge base CSV (supplement,event,relation)", {}},
      {"--ner-model", "/paths/ner_model", Kind::Str, "Trained NER bundle", {}},
      {"--re-model", "/paths/re_model", Kind::Str, "Trained relation bundle", {}},
      {"--pipeline-output", "/paths/pipeline_output", Kind::Str, "Pipeline JSONL to aggregate", {}},
      {"--signals", "/paths/signals", Kind::Str, "Signal table TSV", {}},
      {"--lexicon-features", "/ner/lexicon_features", Kind::Bool, "Use lexicon indicator features", {}},
      {"--svm-epochs", "/ner/svm/epochs", Kind::Int, "SVM passes over the data", {}},
      {"--svm-lr", "/ner/svm/lr", Kind::Num, "SVM initial step size", {}},
      {"--svm-l2", "/ner/svm/l2", Kind::Num, "SVM L2 penalty", {}},
      {"--crf-c1", "/ner/crf/c1", Kind::Num, "CRF L1 penalty", {}},
      {"--crf-c2", "/ner/crf/c2", Kind::Num, "CRF L2 penalty", {}},
      {"--crf-max-iterations", "/ner/crf/max_iterations", Kind::Int, "CRF L-BFGS iteration cap", {}},
      {"--crf-tolerance", "/ner/crf/tolerance", Kind::Num, "CRF relative objective tolerance", {}},
      {"--crf-memory", "/ner/crf/memory", Kind::Int, "CRF L-BFGS history size", {}},
      {"--lstm-hidden", "/ner/lstm_crf/hidden", Kind::Int, "LSTM units per direction", {}},
      {"--lstm-epochs", "/ner/lstm_crf/epochs", Kind::Int, "LSTM-CRF epochs", {}},
      {"--lstm-batch-size", "/ner/lstm_crf/batch_size", Kind::Int, "LSTM-CRF minibatch size", {}},
      {"--lstm-lr", "/ner/lstm_crf/lr", Kind::Num, "LSTM-CRF Adam learning rate", {}},
      {"--lstm-weight-decay", "/ner/lstm_crf/weight_decay", Kind::Num, "LSTM-CRF weight decay", {}},
      {"--lstm-clip-norm", "/ner/lstm_crf/clip_norm", Kind::Num, "LSTM-CRF gradient norm clip", {}},
      {"--cnn-max-len", "/re/cnn/max_len", Kind::Int, "CNN input length cap, markers included", {}},
      {"--cnn-markers", "/re/cnn/use_markers", Kind::Bool, "CNN entity marker rows", {}},
      {"--cnn-positions", "/re/cnn/use_positions", Kind::Bool, "CNN relative position embeddings", {}},
      {"--cnn-pos-dim", "/re/cnn/pos_dim", Kind::Int, "CNN position embedding size", {}},
      {"--cnn-filters", "/re/cnn/filters", Kind::Int, "CNN convolution filters", {}},
      {"--cnn-kernel", "/re/cnn/kernel", Kind::Int, "CNN kernel width (odd)", {}},
      {"--cnn-dropout", "/re/cnn/dropout", Kind::Num, "CNN dropout on the pooled vector", {}},
      {"--cnn-lr", "/re/cnn/lr", Kind::Num, "CNN Adam learning rate", {}},
      {"--cnn-weight-decay", "/re/cnn/weight_decay", Kind::Num, "CNN weight decay", {}},
      {"--cnn-epochs", "/re/cnn/epochs", Kind::Int, "CNN epochs", {}},
      {"--cnn-batch-size", "/re/cnn/batch_size", Kind::Int, "CNN minibatch size", {}},
      {"--cnn-class-weights", "/re/cnn/class_weights", Kind::Bool, "CNN inverse-frequency class weights", {}},
      {"--split", "/evaluation/split", Kind::Str, "Evaluated split: train, dev, test or all", {}},
      {"--epsilon", "/evaluation/epsilon", Kind::Num, "Slack for the error propagation check", {}},
      {"--entity-dropout", "/evaluation/entity_dropout", Kind::Num, "Entity drop rate for the degraded pipeline run, 0 disables", {}},
      {"--top-k", "/evaluation/top_k", Kind::Int, "Rows kept by report", {}},
      {"--examples", "/evaluation/examples", Kind::Int, "Example documents per signal", {}},
      {"--format", "/evaluation/report_format", Kind::Str, "Report format: tsv or markdown", {}},
      {"--relation", "/evaluation/relation", Kind::Str, "Report filter: all, Indication or AdverseEvent", {}},
      {"--task", "/evaluation/replicate_task", Kind::Str, "Replicated experiment: ner, re or pipeline", {}},
      {"--gradcheck-instances", "/evaluation/gradcheck/instances", Kind::Int, "Random instances per model family", {}},
      {"--gradcheck-lstm-hidden", "/evaluation/gradcheck/lstm_hidden", Kind::Int, "LSTM units in gradient checks", {}},
      {"--gradcheck-cnn-filters", "/evaluation/gradcheck/cnn_filters", Kind::Int, "CNN filters in gradient checks", {}},
      {"--gradcheck-coordinates", "/evaluation/gradcheck/coordinates", Kind::Int, "Coordinates checked per neural instance, 0 for all", {}},
      {"--gradcheck-tolerance", "/evaluation/gradcheck/tolerance", Kind::Num, "Maximum accepted relative error", {}},
      {"--synth-docs", "/synthetic/n_docs", Kind::Int, "Synthetic corpus size", {}},
      {"--synth-seed", "/synthetic/seed", Kind::Int, "Synthetic generator seed", {}},
      {"--synth-dim", "/synthetic/embedding_dim", Kind::Int, "Synthetic embedding size", {}},
  };
}

int print_error(dsae_status s) {
  std::cerr << "dsae: " << dsae_status_string(s) << ": " << dsae_last_error() << "\n";
  return s == DSAE_ERR_CONFIG ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dietary supplement adverse event and indication signal detection"};
  app.set_version_flag("--version", dsae_version());

  std::string command;
  app.add_option("command", command,
                 "ingest | train-ner | eval-ner | train-re | eval-re | pipeline | replicate | "
                 "aggregate | compare-kb | report | gradcheck | synth");
  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file; flags override its keys");
  std::string model;
  app.add_option("--model", model,
                 "svm, crf or lstm-crf selects the NER model; cnn selects the relation model")
      ->check(CLI::IsMember({"svm", "crf", "lstm-crf", "cnn"}));
  std::vector<std::string> sets;
  app.add_option("--set", sets, "Override any key: /json/pointer=<JSON value>");
  bool print_defaults = false;
  app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

  auto table = overrides();
  for (auto& o : table) {
    auto* opt = app.add_option(o.flag, o.value, o.help)->group("Overrides");
    if (o.kind == Kind::Int) opt->check(CLI::NonNegativeNumber)->type_name("INT");
    if (o.kind == Kind::Num) opt->check(CLI::Number)->type_name("FLOAT");
    if (o.kind == Kind::Bool) opt->check(CLI::IsMember({"true", "false"}))->type_name("BOOL");
    if (o.kind == Kind::Str) opt->type_name("TEXT");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (print_defaults) {
    char* out = nullptr;
    if (dsae_status s = dsae_default_config(&out); s != DSAE_OK) return print_error(s);
    std::cout << out << "\n";
    dsae_string_free(out);
    return 0;
  }
  if (command.empty()) {
    std::cerr << "dsae: a command is required\n" << app.help();
    return 2;
  }

  std::string config_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "dsae: configuration error: --config: cannot read " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    config_text = ss.str();
  }

  json patch = json::object();
  auto put = [&](const std::string& pointer, json value) {
    patch[json::json_pointer(pointer)] = std::move(value);
  };
  try {
    for (const auto& o : table) {
      if (o.value.empty()) continue;
      switch (o.kind) {
        case Kind::Int: put(o.pointer, std::stoll(o.value)); break;
        case Kind::Num: put(o.pointer, std::stod(o.value)); break;
        case Kind::Bool: put(o.pointer, o.value == "true"); break;
        case Kind::Str: put(o.pointer, o.value); break;
      }
    }
    if (!model.empty()) put(model == "cnn" ? "/re/model" : "/ner/model", model);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || s.empty() || s[0] != '/')
        throw std::invalid_argument("--set expects /json/pointer=value, got " + s);
      const std::string value = s.substr(eq + 1);
      json v = json::parse(value, nullptr, false);
      put(s.substr(0, eq), v.is_discarded() ? json(value) : v);
    }
  } catch (const std::exception& e) {
    std::cerr << "dsae: configuration error: " << e.what() << "\n";
    return 2;
  }

  char* summary = nullptr;
  const std::string overrides_text = patch.dump();
  const dsae_status s = dsae_run(command.c_str(), config_text.empty() ? nullptr : config_text.c_str(),
                                 overrides_text.c_str(), &summary);
  if (s != DSAE_OK) return print_error(s);
  std::cout << summary << "\n";
  dsae_string_free(summary);
  return 0;
}
