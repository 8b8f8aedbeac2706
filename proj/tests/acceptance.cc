// tests/acceptance.cc

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


// End-to-end acceptance checks.  Prints one PASS/FAIL line per criterion
// and exits nonzero if any criterion fails.  Artifacts are kept under the
// work directory given as the first argument.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "loss-oracles.h"
#include "sigvc/corpus/dataset.h"
#include "sigvc/dsp/feature-io.h"
#include "sigvc/dsp/toy-corpus.h"
#include "sigvc/evaluation/evaluate.h"
#include "sigvc/inference/convert.h"
#include "sigvc/inference/griffin-lim.h"
#include "sigvc/losses/losses.h"
#include "sigvc/training/checkpoint.h"
#include "sigvc/training/trainer.h"
#include "sigvc/util/hash.h"
#include "test-util.h"

namespace fs = std::filesystem;
using namespace sigvc;
using namespace sigvc::testing;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string &name, const std::function<Outcome()> &check) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = check();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  char time[32];
  std::snprintf(time, sizeof(time), "%.1f s", Seconds(t0));
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name << " ("
            << o.detail << "; " << time << ")" << std::endl;
}

std::string Fmt(const char *fmt, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

std::vector<std::string> Lines(const fs::path &p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

// 1. Every loss against loop implementations on random inputs.
Outcome LossOracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int64_t> dim(1, 12);
  std::uniform_real_distribution<double> lam(0.0, 5.0);
  double worst = 0;
  auto track = [&](const torch::Tensor &got, double want) {
    worst = std::max(worst, RelErr(got.item<double>(), want));
  };
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t rows = dim(rng), cols = dim(rng), d = dim(rng) + 1;
    torch::manual_seed(trial);
    torch::Tensor x = torch::randn({rows, cols}, torch::kFloat64);
    torch::Tensor y = torch::randn({rows, cols}, torch::kFloat64) * 1.5 + 0.3;
    torch::Tensor e = torch::randn({d}, torch::kFloat64);
    torch::Tensor s = torch::randn({d}, torch::kFloat64), t = torch::randn({d}, torch::kFloat64);
    Matrix mx = ToMatrix(x), my = ToMatrix(y);
    const double mid = OracleIntermediate(ToVector(e));
    const double rec = OracleRecon(mx, my);
    const double sl = OracleStdLoss(mx, my);
    const double spk = OracleSpeaker(ToVector(s), ToVector(t));
    const double l = lam(rng);
    track(IntermediateSpeakerLoss(e), mid);
    track(ReconstructionLoss(x, y), rec);
    std::vector<double> sv = OracleStd(mx), got = ToVector(StdVector(x));
    for (size_t j = 0; j < sv.size(); ++j) worst = std::max(worst, sv[j] == 0 && got[j] == 0 ? 0.0 : RelErr(got[j], sv[j]));
    track(StdLoss(x, y), sl);
    track(SpeakerReconstructionLoss(s, t), spk);
    track(TotalLoss(IntermediateSpeakerLoss(e), ReconstructionLoss(x, y), ReconstructionLoss(x, y),
                    StdLoss(x, y), SpeakerReconstructionLoss(s, t), l),
          OracleTotal(mid, rec, rec, sl, spk, l));
  }
  const double secs = Seconds(t0);
  return {worst < 1e-9 && secs < 10, Fmt("max rel err %.2e over 100 inputs, %.2f s", worst, secs)};
}

// 2. Autograd against central differences on 5x8 inputs.
Outcome Gradients() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    auto [x, y] = SeparatedPair(rng, 5, 8, 1e-2);
    torch::Tensor e = x.clone();
    e = torch::where(e.abs() < 1e-2, e + 0.1, e);
    // Std differences away from zero.
    torch::Tensor ys = y * (1.5 + 0.1 * trial);
    if ((StdVector(x) - StdVector(ys)).abs().min().item<double>() < 1e-3) ys = ys * 2;
    torch::Tensor s = y.reshape({-1}).slice(0, 0, 8).clone();
    worst = std::max(worst, GradientError([](const torch::Tensor &v) { return IntermediateSpeakerLoss(v); }, e));
    worst = std::max(worst, GradientError([&](const torch::Tensor &v) { return ReconstructionLoss(x, v); }, y));
    worst = std::max(worst, GradientError([&](const torch::Tensor &v) { return ReconstructionLoss(v, y); }, x));
    worst = std::max(worst, GradientError([&](const torch::Tensor &v) { return StdLoss(x, v); }, ys));
    worst = std::max(worst, GradientError(
        [&](const torch::Tensor &v) { return SpeakerReconstructionLoss(s, v.reshape({-1}).slice(0, 0, 8)); }, x));
  }
  const double secs = Seconds(t0);
  return {worst < 1e-4 && secs < 60, Fmt("max rel err %.2e, %.2f s", worst, secs)};
}

struct Setup {
  fs::path work;
  fs::path manifest;
  RunConfig config;
};

Setup PrepareCorpus(const fs::path &work, const std::vector<ConfigOverride> &overrides) {
  Setup s;
  s.work = work;
  ToyCorpusOptions opts;  // 4 speakers x 5 utterances, 1.8 s of speech plus pads
  s.manifest = MakeToyCorpus(work / "corpus", opts);
  RunConfig cfg;
  cfg.Set("training.dataset_manifest", s.manifest.string());
  PretrainEncoders(cfg, work / "encoders");
  cfg.Set("encoders.content.checkpoint_path", (work / "encoders/content_encoder.pt").string());
  cfg.Set("encoders.speaker.checkpoint_path", (work / "encoders/speaker_encoder.pt").string());
  cfg.Set("training.batch_size", "4");
  cfg.Set("training.max_steps", "500");
  cfg.Set("training.checkpoint_interval", "250");
  for (const auto &[key, value] : overrides) cfg.Set(key, value);
  s.config = cfg;
  return s;
}

// 3. Structural invariants.
Outcome Structure(const Setup &s) {
  RunConfig cfg = s.config;
  auto ce = LoadConfiguredContentEncoder(cfg);
  auto se = LoadConfiguredSpeakerEncoder(cfg);
  const std::string c0 = ce->Checksum(), s0 = se->Checksum();
  std::vector<Utterance> data = LoadDataset(s.manifest, cfg.dsp());
  Trainer trainer(cfg, data, ce, se);

  // PostNet identity at initialisation on the real forward path.
  SigVcModel &model = trainer.model();
  model->eval();
  MelSpectrogram src = data[0].mel;
  ContentFeature content = ExtractContent(*ce, src);
  SpeakerEmbedding spk = ExtractSpeakerEmbedding(*se, src);
  bool identity, shapes = true;
  {
    torch::NoGradGuard ng;
    IntermediateRepresentation mid = RemoveSpeakerInfo(model, content, spk);
    MelSpectrogram pred = AddSpeakerInfo(model, mid, spk);
    MelSpectrogram post = PostnetRefine(model, pred);
    identity = torch::equal(pred.values, post.values);
    const int64_t t = src.num_frames();
    for (const auto &m : {mid.values, pred.values, post.values})
      shapes = shapes && m.size(0) == t && m.size(1) == 80;
  }
  for (int i = 0; i < 50; ++i) trainer.Step();
  const bool shared = model->remover_manipulator().get() == model->adder_manipulator().get();
  bool same_storage = true;
  auto a = model->remover_manipulator()->parameters(), b = model->adder_manipulator()->parameters();
  for (size_t i = 0; i < a.size(); ++i) same_storage = same_storage && a[i].data_ptr() == b[i].data_ptr();
  const bool frozen = ce->Checksum() == c0 && se->Checksum() == s0;

  // Shapes again after training, across several lengths.
  model->eval();
  for (const auto &u : data) {
    torch::NoGradGuard ng;
    MelSpectrogram out = PostnetRefine(model, AddSpeakerInfo(model,
        RemoveSpeakerInfo(model, ExtractContent(*ce, u.mel), ExtractSpeakerEmbedding(*se, u.mel)),
        ExtractSpeakerEmbedding(*se, u.mel)));
    shapes = shapes && out.num_frames() == u.mel.num_frames() && out.num_bins() == 80;
  }
  std::ostringstream d;
  d << "shared manipulator after 50 steps=" << (shared && same_storage)
    << ", encoder checksums unchanged=" << frozen << ", PostNet identity at init=" << identity
    << ", Tx80 shapes=" << shapes;
  return {shared && same_storage && frozen && identity && shapes, d.str()};
}

struct OverfitRun {
  fs::path dir;
  std::vector<StepMetrics> metrics;
  fs::path final_checkpoint;
};

// 4. Overfit run: 500 steps at batch 4.
Outcome Overfit(const Setup &s, OverfitRun *run) {
  run->dir = s.work / "overfit";
  TrainResult r = Train(s.config, run->dir);
  run->metrics = r.metrics;
  run->final_checkpoint = r.final_checkpoint;
  if (r.metrics.size() != 500) return {false, "expected 500 steps"};
  const double post1 = r.metrics.front().losses["l_recon_postnet"].get<double>();
  const double post500 = r.metrics.back().losses["l_recon_postnet"].get<double>();
  const double e1 = r.metrics.front().e_mid_l1, e500 = r.metrics.back().e_mid_l1;
  return {post500 < 0.5 * post1 && e500 < e1,
          Fmt("l_recon_postnet %.4f -> %.4f", post1, post500) +
              Fmt(", e_mid_l1 %.4f -> %.4f", e1, e500)};
}

// 5. Converting toward the own speaker keeps more of its identity.
Outcome Direction(const Setup &s, const OverfitRun &run) {
  Converter conv = Converter::FromCheckpoint(run.final_checkpoint);
  std::vector<Utterance> data = LoadDataset(s.manifest, conv.config().dsp());
  std::map<std::string, std::vector<size_t>> by_spk;
  for (size_t i = 0; i < data.size(); ++i) by_spk[data[i].speaker_id].push_back(i);
  std::vector<std::string> speakers;
  std::map<std::string, SpeakerEmbedding> avg;
  for (const auto &[spk, idx] : by_spk) {
    speakers.push_back(spk);
    std::vector<SpeakerEmbedding> e;
    for (size_t i : idx) e.push_back(conv.Embed(data[i].mel));
    avg[spk] = AverageSpeakerEmbedding(e);
  }
  int wins = 0, trials = 0;
  for (size_t i = 0; i < data.size() && trials < 20; ++i, ++trials) {
    const std::string &own = data[i].speaker_id;
    size_t k = std::find(speakers.begin(), speakers.end(), own) - speakers.begin();
    const std::string &other = speakers[(k + 1 + i % (speakers.size() - 1)) % speakers.size()];
    // Own-speaker target excludes the source utterance itself.
    std::vector<SpeakerEmbedding> rest;
    for (size_t j : by_spk[own])
      if (j != i) rest.push_back(conv.Embed(data[j].mel));
    SpeakerEmbedding own_target = AverageSpeakerEmbedding(rest);
    double c_own = CosineSimilarity(conv.Embed(conv.ConvertMel(data[i].mel, own_target).mel).values,
                                    avg[own].values);
    double c_other = CosineSimilarity(conv.Embed(conv.ConvertMel(data[i].mel, avg[other]).mel).values,
                                      avg[own].values);
    wins += c_own > c_other;
  }
  return {wins >= 14, Fmt("own-speaker conversion closer in %.0f of %.0f trials", wins, trials)};
}

// 6. Evaluation harness on the toy corpus.
Outcome Harness(const Setup &s, const OverfitRun &run) {
  EvaluationOptions opts;
  opts.checkpoint = run.final_checkpoint;
  opts.corpus = s.manifest;
  opts.out_dir = s.work / "evaluation";
  EvaluationResult r = Evaluate(opts);
  auto mean = [](const std::vector<double> &v) {
    double m = 0;
    for (double x : v) m += x;
    return v.empty() ? 0.0 : m / v.size();
  };
  const double same = mean(r.report.Scores(Condition::kSameSpeakerVsOwnAvg));
  const double diff = mean(r.report.Scores(Condition::kDiffSpeakerVsOtherAvg));
  const bool files = fs::exists(opts.out_dir / "report.json") &&
                     fs::exists(opts.out_dir / "plots/three_conditions.svg") &&
                     fs::exists(opts.out_dir / "plots/three_conditions.json");
  const bool three = r.report.summaries.size() == 3;
  const double eer = r.threshold ? r.threshold->eer : 1.0;
  std::string d = Fmt("same %.3f - cross %.3f = %.3f", same, diff, same - diff) +
                  Fmt(", eer %.3f at threshold %.3f", eer, r.threshold ? r.threshold->eer_threshold : 0.0) +
                  ", report and plots " + (files && three ? "written" : "missing");
  return {same - diff > 0.1 && eer < 0.3 && files && three, d};
}

// 7. Bit-identical short runs; resume at 250 equals the straight run at 500.
Outcome Reproducibility(const Setup &s, const OverfitRun &run) {
  RunConfig short_cfg = s.config;
  short_cfg.Set("training.max_steps", "10");
  short_cfg.Set("training.checkpoint_interval", "10");
  Train(short_cfg, s.work / "repro_a");
  Train(short_cfg, s.work / "repro_b");
  auto la = Lines(s.work / "repro_a/metrics.jsonl"), lb = Lines(s.work / "repro_b/metrics.jsonl");
  const bool logs = la.size() == 10 && la == lb;

  const fs::path resumed = s.work / "resumed";
  TrainResult r = Train(s.config, resumed, run.dir / "checkpoints/step_000250");
  auto straight_lines = Lines(run.dir / "metrics.jsonl");
  auto resumed_lines = Lines(r.metrics_path);
  bool tail = resumed_lines.size() == 250 && straight_lines.size() == 500 &&
              std::equal(resumed_lines.begin(), resumed_lines.end(), straight_lines.begin() + 250);
  LoadedModel a = LoadModelCheckpoint(run.final_checkpoint);
  LoadedModel b = LoadModelCheckpoint(r.final_checkpoint);
  const bool params = ModuleChecksum(*a.model) == ModuleChecksum(*b.model);
  std::ostringstream d;
  d << "10-step logs identical=" << logs << ", resumed steps 251-500 identical=" << tail
    << ", step-500 parameters identical=" << params;
  return {logs && tail && params, d.str()};
}

// 8. DSP exactness.
Outcome Dsp(const fs::path &work) {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int64_t> len(1, 48000);
  int counted = 0;
  for (int i = 0; i < 50; ++i) {
    int64_t n = len(rng);
    MelSpectrogram m = ComputeMelSpectrogram(Tone(500, n));
    counted += m.num_frames() == n / 256 + 1 && m.num_bins() == 80;
  }
  MelSpectrogram mel = ComputeMelSpectrogram(Tone(440, 16000));
  WriteMel(work / "tone.mel", mel);
  MelSpectrogram back = ReadMel(work / "tone.mel");
  const bool round_trip = back.values.sizes() == mel.values.sizes() &&
      std::memcmp(back.values.data_ptr<float>(), mel.values.data_ptr<float>(), mel.values.numel() * 4) == 0;
  GriffinLimOptions opts;  // 60 iterations
  GriffinLimResult gl = GriffinLim(mel, opts);
  torch::Tensor mag = StftMagnitude(torch::tensor(gl.waveform.samples), DspConfig{});
  const int64_t t = mag.size(0);
  const int64_t peak = mag.slice(0, t / 4, 3 * t / 4).mean(0).argmax().item<int64_t>();
  const double bin_hz = 16000.0 / 1024, peak_hz = peak * bin_hz;
  const bool tone = std::abs(peak_hz - 440.0) <= bin_hz;
  std::ostringstream d;
  d << "frame count " << counted << "/50, feature round trip bit-exact=" << round_trip
    << ", Griffin-Lim peak " << peak_hz << " Hz (bin " << peak << ")";
  return {counted == 50 && round_trip && tone, d.str()};
}

}  // namespace

int main(int argc, char **argv) {
  torch::set_num_threads(1);
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "sigvc-acceptance";
  // Further "key value" pairs override the training configuration.
  std::vector<ConfigOverride> overrides;
  for (int i = 2; i + 1 < argc; i += 2) overrides.emplace_back(argv[i], argv[i + 1]);
  fs::remove_all(work);
  fs::create_directories(work);

  Report(1, "loss oracles", LossOracles);
  Report(2, "gradient check", Gradients);

  Setup setup;
  bool ready = true;
  try {
    setup = PrepareCorpus(work, overrides);
  } catch (const std::exception &e) {
    std::cout << "setup failed: " << e.what() << std::endl;
    ready = false;
  }
  OverfitRun run;
  auto needs = [&](const std::function<Outcome()> &f) {
    return [&, f]() -> Outcome {
      if (!ready) return {false, "toy corpus setup failed"};
      return f();
    };
  };
  Report(3, "structural invariants", needs([&] { return Structure(setup); }));
  Report(4, "overfit sanity run", needs([&] { return Overfit(setup, &run); }));
  auto needs_run = [&](const std::function<Outcome()> &f) {
    return [&, f]() -> Outcome {
      if (run.final_checkpoint.empty()) return {false, "overfit run unavailable"};
      return f();
    };
  };
  Report(5, "disentanglement direction", needs_run([&] { return Direction(setup, run); }));
  Report(6, "evaluation harness", needs_run([&] { return Harness(setup, run); }));
  Report(7, "reproducibility", needs_run([&] { return Reproducibility(setup, run); }));
  Report(8, "DSP exactness", [&] { return Dsp(work); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
