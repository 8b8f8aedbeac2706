// tests/training-test.cc

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


#include <fstream>

#include "test-doctest.h"
#include "fixtures.h"
#include "sigvc/corpus/dataset.h"
#include "sigvc/training/checkpoint.h"
#include "sigvc/training/trainer.h"
#include "sigvc/util/error.h"
#include "sigvc/util/hash.h"

using namespace sigvc;
using namespace sigvc::testing;

namespace {

std::vector<std::string> Lines(const std::filesystem::path &p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("training writes one metrics record per step and checkpoints") {
  TempDir dir("train");
  TrainResult r = Train(Tiny().Config(4), dir.path());
  auto lines = Lines(r.metrics_path);
  REQUIRE(lines.size() == 4);
  for (size_t i = 0; i < lines.size(); ++i) {
    auto j = nlohmann::json::parse(lines[i]);
    CHECK(j["step"] == static_cast<int64_t>(i + 1));
    for (const char *k : {"l_mid_spk", "l_recon", "l_recon_postnet", "l_std", "l_spk", "total",
                          "e_mid_l1"})
      CHECK(j.contains(k));
    double total = j["l_mid_spk"].get<double>() + j["l_recon"].get<double>() +
                   j["l_recon_postnet"].get<double>() + j["l_std"].get<double>() +
                   3.0 * j["l_spk"].get<double>();
    CHECK(j["total"].get<double>() == doctest::Approx(total).epsilon(1e-6));
  }
  CHECK(std::filesystem::exists(dir / "checkpoints/step_000002/manifest.json"));
  CHECK(std::filesystem::exists(dir / "checkpoints/step_000004/params.pt"));
  CHECK(r.final_checkpoint == dir / "checkpoints/step_000004");
  nlohmann::json m = ReadCheckpointManifest(r.final_checkpoint);
  CHECK(m["step"] == 4);
  CHECK(m["config_hash"] == Tiny().Config(4).config_hash());
}

TEST_CASE("identical runs give identical logs; resume matches a straight run") {
  TempDir a("train"), b("train"), c("train");
  Train(Tiny().Config(4), a.path());
  Train(Tiny().Config(4), b.path());
  CHECK(Lines(a / "metrics.jsonl") == Lines(b / "metrics.jsonl"));

  Train(Tiny().Config(2), c.path());
  Train(Tiny().Config(4), c.path(), c / "checkpoints/step_000002");
  CHECK(Lines(a / "metrics.jsonl") == Lines(c / "metrics.jsonl"));
  LoadedModel straight = LoadModelCheckpoint(a / "checkpoints/step_000004");
  LoadedModel resumed = LoadModelCheckpoint(c / "checkpoints/step_000004");
  CHECK(ModuleChecksum(*straight.model) == ModuleChecksum(*resumed.model));
}

TEST_CASE("resume refuses a different configuration") {
  TempDir a("train");
  Train(Tiny().Config(2), a.path());
  RunConfig other = Tiny().Config(4);
  other.Set("training.learning_rate", "0.01");
  try {
    Train(other, a.path(), a / "checkpoints/step_000002");
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kResume);
  }
}

TEST_CASE("encoders stay frozen and the manipulator stays shared through training") {
  const TinySetup &t = Tiny();
  RunConfig cfg = t.Config(3);
  auto ce = LoadConfiguredContentEncoder(cfg);
  auto se = LoadConfiguredSpeakerEncoder(cfg);
  const std::string c0 = ce->Checksum(), s0 = se->Checksum();
  Trainer trainer(cfg, LoadDataset(t.manifest, cfg.dsp()), ce, se);
  for (int i = 0; i < 3; ++i) trainer.Step();
  CHECK(ce->Checksum() == c0);
  CHECK(se->Checksum() == s0);
  CHECK(trainer.model()->remover_manipulator().get() ==
        trainer.model()->adder_manipulator().get());
  CHECK(trainer.step() == 3);
}

TEST_CASE("zero-step training writes the initial model") {
  TempDir a("train");
  TrainResult r = Train(Tiny().Config(0), a.path());
  CHECK(r.metrics.empty());
  CHECK(std::filesystem::exists(r.final_checkpoint / "params.pt"));
  CHECK(Lines(r.metrics_path).empty());
}

TEST_CASE("training without a dataset manifest is a validation error") {
  RunConfig cfg;
  try {
    TempDir a("train");
    Train(cfg, a.path());
    FAIL("no error");
  } catch (const SigvcError &e) {
    CHECK(e.kind() == ErrorKind::kValidation);
  }
}
