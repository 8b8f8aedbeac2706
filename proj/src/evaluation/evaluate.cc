// src/evaluation/evaluate.cc

// Copyright 2026  sigvc authors

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


#include "sigvc/evaluation/evaluate.h"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <yaml-cpp/yaml.h>

#include "sigvc/corpus/dataset.h"
#include "sigvc/inference/convert.h"
#include "sigvc/util/error.h"

namespace sigvc {

namespace fs = std::filesystem;

EncoderSpec ReadEncoderSpec(const fs::path &path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile &) {
    Fail(ErrorKind::kIo, "cannot read encoder description " + path.string());
  } catch (const YAML::Exception &e) {
    Fail(ErrorKind::kValidation, path.string() + ": " + e.what());
  }
  if (!root.IsMap()) Fail(ErrorKind::kValidation, path.string() + ": expected a mapping");
  EncoderSpec spec;
  for (const auto &kv : root) {
    const std::string key = kv.first.as<std::string>();
    try {
      if (key == "type") spec.type = kv.second.as<std::string>();
      else if (key == "checkpoint_path") spec.checkpoint_path = kv.second.as<std::string>();
      else if (key == "command") spec.command = kv.second.as<std::string>();
      else if (key == "dim") spec.dim = kv.second.as<int64_t>();
      else Fail(ErrorKind::kValidation, "unknown encoder key '" + key + "'");
    } catch (const YAML::Exception &) {
      Fail(ErrorKind::kValidation, "bad value for encoder key '" + key + "'");
    }
  }
  if (!spec.checkpoint_path.empty() && fs::path(spec.checkpoint_path).is_relative())
    spec.checkpoint_path = (path.parent_path() / spec.checkpoint_path).string();
  return spec;
}

EvaluationResult Evaluate(const EvaluationOptions &opts, const RunConfig *runtime) {
  Converter conv = Converter::FromCheckpoint(opts.checkpoint, runtime);
  const RunConfig &cfg = runtime ? *runtime : conv.config();
  std::vector<Utterance> data = LoadDataset(opts.corpus, cfg.dsp());

  std::shared_ptr<SpeakerEncoder> scorer =
      opts.encoder ? LoadSpeakerEncoder(*opts.encoder) : nullptr;
  auto score_embed = [&](const MelSpectrogram &mel) {
    return scorer ? ExtractSpeakerEmbedding(*scorer, mel) : conv.Embed(mel);
  };

  Enrollment enrollment;
  std::map<std::string, std::vector<SpeakerEmbedding>> model_embs;
  for (const auto &u : data) {
    enrollment[u.speaker_id].push_back({u.utterance_id, score_embed(u.mel)});
    model_embs[u.speaker_id].push_back(conv.Embed(u.mel));
  }
  std::vector<std::string> speakers;
  std::map<std::string, SpeakerEmbedding> targets;
  for (const auto &[spk, embs] : model_embs) {
    speakers.push_back(spk);
    targets[spk] = AverageSpeakerEmbedding(embs);
  }

  std::vector<ConvertedItem> converted;
  if (speakers.size() >= 2) {
    for (size_t i = 0; i < data.size(); ++i) {
      const auto &u = data[i];
      auto self = std::find(speakers.begin(), speakers.end(), u.speaker_id) - speakers.begin();
      for (int k = 0; k < opts.targets_per_utterance &&
                      k < static_cast<int>(speakers.size()) - 1; ++k) {
        size_t offset = 1 + (i + k) % (speakers.size() - 1);
        const std::string &tgt = speakers[(self + offset) % speakers.size()];
        ConversionResult r = conv.ConvertMel(u.mel, targets[tgt]);
        converted.push_back({u.utterance_id + "->" + tgt, tgt, score_embed(r.mel)});
      }
    }
  }

  EvaluationResult result;
  result.report = BuildThreeConditionReport(converted, enrollment, cfg.evaluation());
  for (const auto &w : result.report.warnings) std::cerr << "warning: " << w << "\n";
  std::vector<double> same = result.report.Scores(Condition::kSameSpeakerVsOwnAvg);
  std::vector<double> diff = result.report.Scores(Condition::kDiffSpeakerVsOtherAvg);
  if (!same.empty() && !diff.empty()) result.threshold = ThresholdAnalysis(same, diff);

  fs::create_directories(opts.out_dir);
  PlotGroup three{"three_conditions", "Speaker similarity by condition",
                  result.report.summaries};
  result.files = EmitPlots({three}, opts.out_dir / "plots");

  nlohmann::json j = result.report.ToJson();
  j["config_hash"] = cfg.config_hash();
  j["checkpoint"] = opts.checkpoint.string();
  j["corpus"] = opts.corpus.string();
  j["scoring_encoder"] = opts.encoder ? opts.encoder->type + ":" + opts.encoder->checkpoint_path
                                      : std::string("checkpoint");
  j["threshold_analysis"] = result.threshold ? result.threshold->ToJson() : nlohmann::json();
  fs::path report = opts.out_dir / "report.json";
  std::ofstream os(report);
  os << j.dump(2) << "\n";
  if (!os) Fail(ErrorKind::kIo, "cannot write " + report.string());
  result.files.insert(result.files.begin(), report);
  return result;
}

}  // namespace sigvc
