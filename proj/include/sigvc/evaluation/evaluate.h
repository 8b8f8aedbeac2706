// include/sigvc/evaluation/evaluate.h

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


#ifndef SIGVC_EVALUATION_EVALUATE_H_
#define SIGVC_EVALUATION_EVALUATE_H_

#include <filesystem>
#include <memory>
#include <optional>

#include "sigvc/config/run-config.h"
#include "sigvc/evaluation/plots.h"
#include "sigvc/evaluation/similarity.h"

namespace sigvc {

struct EvaluationOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path corpus;  // dataset manifest
  // Scoring encoder; the checkpoint's own speaker encoder when unset.
  std::optional<EncoderSpec> encoder;
  std::filesystem::path out_dir;
  // Converted utterances per source utterance, targets taken round-robin
  // from the other speakers.
  int targets_per_utterance = 1;
};

struct EvaluationResult {
  ThreeConditionReport report;
  std::optional<ThresholdResult> threshold;
  std::vector<std::filesystem::path> files;  // report.json and plots
};

/// Reads an adapter description ({type, checkpoint_path, command, dim}) from
/// a YAML or JSON file.
EncoderSpec ReadEncoderSpec(const std::filesystem::path &path);

/// Converts every corpus utterance to other speakers, scores the three
/// conditions, runs the threshold analysis and writes report.json plus
/// plots into out_dir.
EvaluationResult Evaluate(const EvaluationOptions &opts, const RunConfig *runtime = nullptr);

}  // namespace sigvc

#endif  // SIGVC_EVALUATION_EVALUATE_H_
