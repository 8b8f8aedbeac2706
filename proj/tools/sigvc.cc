// tools/sigvc.cc

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


// Command-line front end.  Every subcommand reads one run configuration:
//   sigvc [--config run.yaml] [--seed N] [--out DIR] <subcommand> [options]
//         [--section.key value ...]
// Exit status: 0 success, 2 validation, 3 runtime, 4 I/O.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigvc/config/run-config.h"
#include "sigvc/corpus/manifest.h"
#include "sigvc/dsp/audio.h"
#include "sigvc/dsp/feature-io.h"
#include "sigvc/dsp/toy-corpus.h"
#include "sigvc/evaluation/evaluate.h"
#include "sigvc/inference/convert.h"
#include "sigvc/training/trainer.h"
#include "sigvc/util/error.h"

namespace fs = std::filesystem;
using namespace sigvc;

namespace {

// "--a.b value" and "--a.b=value" pairs left over by the parser.
std::vector<ConfigOverride> ParseOverrides(const std::vector<std::string> &extras) {
  std::vector<ConfigOverride> out;
  for (size_t i = 0; i < extras.size(); ++i) {
    const std::string &arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.find('.') == std::string::npos)
      Fail(ErrorKind::kValidation, "unexpected argument '" + arg + "'");
    std::string key = arg.substr(2);
    size_t eq = key.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(key.substr(0, eq), key.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) Fail(ErrorKind::kValidation, "missing value for " + arg);
      out.emplace_back(key, extras[++i]);
    }
  }
  return out;
}

fs::path RequireOut(const std::string &out, const std::string &cmd) {
  if (out.empty()) Fail(ErrorKind::kValidation, cmd + " needs --out");
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Speaker information removal and re-injection for voice conversion"};
  app.require_subcommand(1);
  app.allow_extras();

  std::string config_path, out;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "training seed (corpus seed for make-toy-corpus)");
  app.add_option("--out", out, "output path");

  auto *show = app.add_subcommand("show-config", "print the materialised configuration");

  auto *extract = app.add_subcommand("extract-features", "WAV or manifest -> Mel feature files");
  std::string extract_input;
  extract->add_option("--input", extract_input, "WAV file or dataset manifest")->required();

  auto *pretrain = app.add_subcommand("pretrain-encoders", "train the toy encoders");
  std::string which = "both", pretrain_corpus;
  pretrain->add_option("--which", which, "both, content or speaker");
  pretrain->add_option("--corpus", pretrain_corpus, "dataset manifest");

  auto *train = app.add_subcommand("train", "train the conversion model");
  std::string resume, train_corpus;
  train->add_option("--resume", resume, "checkpoint directory to continue from");
  train->add_option("--corpus", train_corpus, "dataset manifest");

  auto *convert = app.add_subcommand("convert", "zero-shot conversion");
  std::string ckpt, source, vocoder;
  std::vector<std::string> targets;
  convert->add_option("--checkpoint", ckpt)->required();
  convert->add_option("--source", source)->required();
  convert->add_option("--target", targets, "one or more reference WAVs")->required();
  convert->add_option("--vocoder", vocoder, "griffin_lim, external or none");

  auto *evaluate = app.add_subcommand("evaluate", "speaker-similarity evaluation");
  std::string eval_ckpt, eval_corpus, eval_encoder;
  evaluate->add_option("--checkpoint", eval_ckpt)->required();
  evaluate->add_option("--corpus", eval_corpus, "dataset manifest")->required();
  evaluate->add_option("--encoder", eval_encoder, "scoring encoder description (YAML)");

  auto *toy = app.add_subcommand("make-toy-corpus", "write the synthetic multi-speaker corpus");
  ToyCorpusOptions toy_opts;
  toy->add_option("--speakers", toy_opts.num_speakers);
  toy->add_option("--utts", toy_opts.utts_per_speaker);

  for (auto *sub : app.get_subcommands({})) {
    sub->fallthrough();
    sub->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ExitCodeFor(ErrorKind::kValidation);
  }

  try {
    std::vector<std::string> extras = app.remaining();
    for (auto *sub : app.get_subcommands())
      for (const auto &x : sub->remaining()) extras.push_back(x);
    std::vector<ConfigOverride> overrides = ParseOverrides(extras);
    if (seed) overrides.emplace_back("training.seed", std::to_string(*seed));
    if (!train_corpus.empty()) overrides.emplace_back("training.dataset_manifest", train_corpus);
    if (!pretrain_corpus.empty())
      overrides.emplace_back("training.dataset_manifest", pretrain_corpus);
    RunConfig config = ParseAndValidate(config_path, overrides);

    if (show->parsed()) {
      std::cout << config.tree().dump(2) << "\nconfig_hash: " << config.config_hash() << "\n";
    } else if (extract->parsed()) {
      fs::path dir = RequireOut(out, "extract-features");
      fs::create_directories(dir);
      std::vector<std::pair<std::string, fs::path>> inputs;
      if (fs::path(extract_input).extension() == ".json") {
        for (const auto &e : ReadManifest(extract_input)) inputs.emplace_back(e.utterance_id, e.wav_path);
      } else {
        inputs.emplace_back(fs::path(extract_input).stem().string(), extract_input);
      }
      for (const auto &[id, wav] : inputs) {
        fs::path dst = dir / (id + ".mel");
        WriteMel(dst, MelFromFile(wav, config.dsp()));
        std::cout << dst.string() << "\n";
      }
    } else if (pretrain->parsed()) {
      fs::path dir = RequireOut(out, "pretrain-encoders");
      PretrainEncoders(config, dir, which);
      std::cout << "encoders written to " << dir.string() << "\n";
    } else if (train->parsed()) {
      fs::path dir = RequireOut(out, "train");
      std::optional<fs::path> from;
      if (!resume.empty()) from = fs::path(resume);
      TrainResult r = Train(config, dir, from, [](const StepMetrics &m) {
        std::cerr << m.ToJson().dump() << "\n";
      });
      std::cout << "checkpoint " << r.final_checkpoint.string() << "\n";
    } else if (convert->parsed()) {
      ConversionRequest req;
      req.checkpoint = ckpt;
      req.source_wav = source;
      for (const auto &t : targets) req.target_reference_wavs.emplace_back(t);
      req.output = RequireOut(out, "convert");
      req.vocoder = ParseVocoderMode(vocoder.empty() ? config.inference().vocoder : vocoder);
      const bool explicit_config = !config_path.empty() || !overrides.empty();
      ConversionResult r = Convert(req, explicit_config ? &config : nullptr);
      std::cout << r.mel_path.string() << "\n";
      if (r.wav_path) std::cout << r.wav_path->string() << "\n";
    } else if (evaluate->parsed()) {
      EvaluationOptions opts;
      opts.checkpoint = eval_ckpt;
      opts.corpus = eval_corpus;
      if (!eval_encoder.empty()) opts.encoder = ReadEncoderSpec(eval_encoder);
      opts.out_dir = RequireOut(out, "evaluate");
      const bool explicit_config = !config_path.empty() || !overrides.empty();
      EvaluationResult r = Evaluate(opts, explicit_config ? &config : nullptr);
      for (const auto &s : r.report.summaries)
        std::cout << s.label << ": n=" << s.count << " mean=" << s.mean << "\n";
      if (r.threshold) std::cout << "threshold: " << r.threshold->ToJson().dump() << "\n";
    } else if (toy->parsed()) {
      if (seed) toy_opts.seed = *seed;
      toy_opts.sample_rate = config.dsp().sample_rate;
      std::cout << MakeToyCorpus(RequireOut(out, "make-toy-corpus"), toy_opts).string() << "\n";
    }
  } catch (const SigvcError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(ErrorKind::kIo);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(ErrorKind::kRuntime);
  }
  return 0;
}
