// include/sigvc/evaluation/similarity.h

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


#ifndef SIGVC_EVALUATION_SIMILARITY_H_
#define SIGVC_EVALUATION_SIMILARITY_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigvc/config/run-config.h"
#include "sigvc/encoders/encoders.h"

namespace sigvc {

enum class Condition { kConvertedVsTargetAvg, kSameSpeakerVsOwnAvg, kDiffSpeakerVsOtherAvg };

std::string ConditionName(Condition c);

/// dot(a, b) / (|a| |b|); kDegenerateInput on a zero vector, kDimensionMismatch
/// on unequal sizes.
double CosineSimilarity(const SpeakerEmbedding &a, const SpeakerEmbedding &b);
double CosineSimilarity(const torch::Tensor &a, const torch::Tensor &b);

struct SimilarityRecord {
  std::string utterance_id;
  Condition condition = Condition::kConvertedVsTargetAvg;
  std::string reference_speaker;  // whose average it was scored against
  double cosine = 0.0;

  nlohmann::json ToJson() const;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<int64_t> counts;

  nlohmann::json ToJson() const;
};

/// Uniform bins over [lo, hi]; values outside are clamped into the end bins
/// so the counts always sum to the number of values.
Histogram MakeHistogram(const std::vector<double> &values, int bins, double lo, double hi);

/// Linear interpolation between order statistics (numpy's default).
double Quantile(std::vector<double> values, double q);

struct DistributionSummary {
  std::string label;  // condition name, or "system:condition" in comparisons
  int64_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  Histogram histogram;
  std::map<std::string, double> quantiles;  // "q05", "q25", "q50", "q75", "q95"
  std::vector<double> values;

  nlohmann::json ToJson() const;
};

DistributionSummary Summarize(const std::string &label, const std::vector<double> &values,
                              const EvaluationConfig &cfg = {});

/// One scored utterance after conversion: its embedding and its target.
struct ConvertedItem {
  std::string utterance_id;
  std::string target_speaker;
  SpeakerEmbedding embedding;
};

/// Enrollment embeddings of one speaker.
struct EnrolledUtterance {
  std::string utterance_id;
  SpeakerEmbedding embedding;
};
using Enrollment = std::map<std::string, std::vector<EnrolledUtterance>>;

struct ThreeConditionReport {
  std::vector<SimilarityRecord> records;
  std::vector<DistributionSummary> summaries;  // converted (if any), same, diff
  std::vector<std::string> warnings;

  std::vector<double> Scores(Condition c) const;
  nlohmann::json ToJson() const;
};

/// Same-speaker scores are leave-one-out: an utterance is scored against the
/// average of its speaker's other utterances.  Speakers with fewer than two
/// utterances get no same-speaker scores and a warning.  Different-speaker
/// scores pair every utterance with every other speaker's full average.
/// Converted items are scored against their target's full average.
ThreeConditionReport BuildThreeConditionReport(const std::vector<ConvertedItem> &converted,
                                               const Enrollment &enrollment,
                                               const EvaluationConfig &cfg = {});

struct ThresholdResult {
  double eer_threshold = 0.0;
  double eer = 0.0;
  double separation = 0.0;  // mean(same) - mean(diff)

  nlohmann::json ToJson() const;
};

/// Equal error rate from the convex hull of the ROC over all observed
/// score thresholds (a score >= threshold is accepted as "same").  The
/// threshold interpolates the two hull vertices whose segment crosses
/// miss rate = false-alarm rate.
ThresholdResult ThresholdAnalysis(const std::vector<double> &same, const std::vector<double> &diff);

}  // namespace sigvc

#endif  // SIGVC_EVALUATION_SIMILARITY_H_
