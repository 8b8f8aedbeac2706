// src/evaluation/similarity.cc

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


#include "sigvc/evaluation/similarity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sigvc/util/error.h"

namespace sigvc {

std::string ConditionName(Condition c) {
  switch (c) {
    case Condition::kConvertedVsTargetAvg: return "converted_vs_target_avg";
    case Condition::kSameSpeakerVsOwnAvg: return "same_speaker_vs_own_avg";
    case Condition::kDiffSpeakerVsOtherAvg: return "diff_speaker_vs_other_avg";
  }
  return "";
}

double CosineSimilarity(const torch::Tensor &a, const torch::Tensor &b) {
  torch::Tensor x = a.reshape({-1}).to(torch::kFloat64);
  torch::Tensor y = b.reshape({-1}).to(torch::kFloat64);
  if (x.numel() != y.numel())
    Fail(ErrorKind::kDimensionMismatch, "cosine similarity of vectors of size " +
                                            std::to_string(x.numel()) + " and " +
                                            std::to_string(y.numel()));
  const double na = x.norm().item<double>(), nb = y.norm().item<double>();
  if (na == 0.0 || nb == 0.0) Fail(ErrorKind::kDegenerateInput, "cosine similarity of a zero vector");
  const double c = x.dot(y).item<double>() / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

double CosineSimilarity(const SpeakerEmbedding &a, const SpeakerEmbedding &b) {
  return CosineSimilarity(a.values, b.values);
}

nlohmann::json SimilarityRecord::ToJson() const {
  return {{"utterance_id", utterance_id},
          {"condition", ConditionName(condition)},
          {"reference_speaker", reference_speaker},
          {"cosine", cosine}};
}

nlohmann::json Histogram::ToJson() const { return {{"edges", edges}, {"counts", counts}}; }

Histogram MakeHistogram(const std::vector<double> &values, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) Fail(ErrorKind::kValidation, "histogram needs bins >= 1 and hi > lo");
  Histogram h;
  for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + (hi - lo) * i / bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    int64_t k = static_cast<int64_t>(std::floor((v - lo) / (hi - lo) * bins));
    h.counts[std::clamp<int64_t>(k, 0, bins - 1)]++;
  }
  return h;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const size_t i = static_cast<size_t>(std::floor(pos));
  if (i + 1 >= values.size()) return values.back();
  return values[i] + (pos - i) * (values[i + 1] - values[i]);
}

nlohmann::json DistributionSummary::ToJson() const {
  nlohmann::json j = {{"label", label},   {"count", count},
                      {"histogram", histogram.ToJson()}, {"values", values}};
  // NaN is not valid JSON; an empty condition reports null statistics.
  if (count > 0) {
    j["mean"] = mean;
    j["std"] = std;
    j["quantiles"] = quantiles;
  } else {
    j["mean"] = nullptr;
    j["std"] = nullptr;
    j["quantiles"] = nullptr;
  }
  return j;
}

DistributionSummary Summarize(const std::string &label, const std::vector<double> &values,
                              const EvaluationConfig &cfg) {
  DistributionSummary s;
  s.label = label;
  s.values = values;
  s.count = static_cast<int64_t>(values.size());
  s.histogram = MakeHistogram(values, cfg.hist_bins, cfg.hist_min, cfg.hist_max);
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / values.size());
  const std::pair<const char *, double> qs[] = {
      {"q05", 0.05}, {"q25", 0.25}, {"q50", 0.5}, {"q75", 0.75}, {"q95", 0.95}};
  for (const auto &[name, q] : qs) s.quantiles[name] = Quantile(values, q);
  return s;
}

std::vector<double> ThreeConditionReport::Scores(Condition c) const {
  std::vector<double> out;
  for (const auto &r : records)
    if (r.condition == c) out.push_back(r.cosine);
  return out;
}

nlohmann::json ThreeConditionReport::ToJson() const {
  nlohmann::json j;
  j["records"] = nlohmann::json::array();
  for (const auto &r : records) j["records"].push_back(r.ToJson());
  j["summaries"] = nlohmann::json::array();
  for (const auto &s : summaries) j["summaries"].push_back(s.ToJson());
  j["warnings"] = warnings;
  return j;
}

namespace {

torch::Tensor MeanOf(const std::vector<const SpeakerEmbedding *> &embs) {
  torch::Tensor acc = torch::zeros_like(embs.front()->values, torch::kFloat64);
  for (const auto *e : embs) acc += e->values.to(torch::kFloat64);
  return acc / static_cast<double>(embs.size());
}

}  // namespace

ThreeConditionReport BuildThreeConditionReport(const std::vector<ConvertedItem> &converted,
                                               const Enrollment &enrollment,
                                               const EvaluationConfig &cfg) {
  ThreeConditionReport report;
  std::map<std::string, torch::Tensor> averages;
  for (const auto &[spk, utts] : enrollment) {
    if (utts.empty()) continue;
    std::vector<const SpeakerEmbedding *> all;
    for (const auto &u : utts) all.push_back(&u.embedding);
    averages[spk] = MeanOf(all);
  }

  for (const auto &item : converted) {
    auto it = averages.find(item.target_speaker);
    if (it == averages.end())
      Fail(ErrorKind::kValidation, "no enrollment for target speaker " + item.target_speaker);
    report.records.push_back({item.utterance_id, Condition::kConvertedVsTargetAvg,
                              item.target_speaker,
                              CosineSimilarity(item.embedding.values, it->second)});
  }

  for (const auto &[spk, utts] : enrollment) {
    if (utts.size() < 2) {
      report.warnings.push_back("speaker " + spk + " has " + std::to_string(utts.size()) +
                                " utterance(s); skipped for the same-speaker condition");
    } else {
      for (size_t i = 0; i < utts.size(); ++i) {
        std::vector<const SpeakerEmbedding *> others;
        for (size_t k = 0; k < utts.size(); ++k)
          if (k != i) others.push_back(&utts[k].embedding);
        report.records.push_back({utts[i].utterance_id, Condition::kSameSpeakerVsOwnAvg, spk,
                                  CosineSimilarity(utts[i].embedding.values, MeanOf(others))});
      }
    }
    for (const auto &u : utts)
      for (const auto &[other, avg] : averages)
        if (other != spk)
          report.records.push_back({u.utterance_id, Condition::kDiffSpeakerVsOtherAvg, other,
                                    CosineSimilarity(u.embedding.values, avg)});
  }

  if (!converted.empty())
    report.summaries.push_back(Summarize(ConditionName(Condition::kConvertedVsTargetAvg),
                                         report.Scores(Condition::kConvertedVsTargetAvg), cfg));
  for (Condition c : {Condition::kSameSpeakerVsOwnAvg, Condition::kDiffSpeakerVsOtherAvg})
    report.summaries.push_back(Summarize(ConditionName(c), report.Scores(c), cfg));
  return report;
}

nlohmann::json ThresholdResult::ToJson() const {
  return {{"eer_threshold", eer_threshold}, {"eer", eer}, {"separation", separation}};
}

namespace {

struct RocPoint {
  double pfa, pmiss, threshold;
};

double Cross(const RocPoint &o, const RocPoint &a, const RocPoint &b) {
  return (a.pfa - o.pfa) * (b.pmiss - o.pmiss) - (a.pmiss - o.pmiss) * (b.pfa - o.pfa);
}

}  // namespace

ThresholdResult ThresholdAnalysis(const std::vector<double> &same, const std::vector<double> &diff) {
  if (same.empty() || diff.empty())
    Fail(ErrorKind::kEmptyInput, "threshold analysis needs same- and different-speaker scores");
  std::vector<double> scores(same);
  scores.insert(scores.end(), diff.begin(), diff.end());
  std::sort(scores.begin(), scores.end());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());

  // Operating point k accepts scores > scores[k-1], i.e. every threshold in
  // (scores[k-1], scores[k]]; its representative is the interval midpoint.
  std::vector<RocPoint> points;
  for (size_t k = 0; k <= scores.size(); ++k) {
    const bool has_lo = k > 0, has_hi = k < scores.size();
    double t = has_lo && has_hi ? 0.5 * (scores[k - 1] + scores[k])
                                : (has_hi ? scores[k] : scores[k - 1]);
    double cut = has_hi ? scores[k] : std::numeric_limits<double>::infinity();
    double miss = std::count_if(same.begin(), same.end(), [&](double s) { return s < cut; });
    double fa = std::count_if(diff.begin(), diff.end(), [&](double s) { return s >= cut; });
    points.push_back({fa / diff.size(), miss / same.size(), t});
  }
  std::sort(points.begin(), points.end(), [](const RocPoint &a, const RocPoint &b) {
    return a.pfa != b.pfa ? a.pfa < b.pfa : a.pmiss < b.pmiss;
  });
  std::vector<RocPoint> hull;
  for (const auto &p : points) {
    while (hull.size() >= 2 && Cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }

  ThresholdResult r;
  r.eer = 0.5;
  r.eer_threshold = hull.front().threshold;
  for (size_t i = 0; i < hull.size(); ++i) {
    const RocPoint &a = hull[i];
    const double da = a.pmiss - a.pfa;
    if (da == 0.0) {
      r.eer = a.pfa;
      r.eer_threshold = a.threshold;
      break;
    }
    if (i + 1 == hull.size()) break;
    const RocPoint &b = hull[i + 1];
    const double db = b.pmiss - b.pfa;
    if (da > 0 && db < 0) {
      const double alpha = da / (da - db);
      r.eer = a.pfa + alpha * (b.pfa - a.pfa);
      r.eer_threshold = a.threshold + alpha * (b.threshold - a.threshold);
      break;
    }
  }
  auto mean = [](const std::vector<double> &v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  r.separation = mean(same) - mean(diff);
  return r;
}

}  // namespace sigvc
