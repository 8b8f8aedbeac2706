// src/config/run-config.cc

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


#include "sigvc/config/run-config.h"

#include <yaml-cpp/yaml.h>

#include "sigvc/util/error.h"
#include "sigvc/util/hash.h"

namespace sigvc {

namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string &what) { Fail(ErrorKind::kValidation, what); }

json ConvertScalar(const YAML::Node &node, const json &like, const std::string &key) {
  if (!node.IsScalar())
    Invalid("key '" + key + "' expects a scalar value");
  try {
    if (like.is_boolean()) return node.as<bool>();
    if (like.is_number_integer()) return node.as<int64_t>();
    if (like.is_number_float()) return node.as<double>();
    if (like.is_string()) return node.as<std::string>();
  } catch (const YAML::Exception &) {
  }
  Invalid("key '" + key + "' has the wrong type (expected " + std::string(like.type_name()) +
          ", got '" + node.Scalar() + "')");
}

void MergeYaml(json &target, const YAML::Node &node, const std::string &prefix) {
  if (!node.IsMap())
    Invalid(prefix.empty() ? "config root must be a mapping"
                           : "section '" + prefix + "' must be a mapping");
  for (const auto &kv : node) {
    const std::string name = kv.first.as<std::string>();
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (!target.contains(name)) Invalid("unknown config key '" + key + "'");
    json &slot = target[name];
    if (slot.is_object())
      MergeYaml(slot, kv.second, key);
    else
      slot = ConvertScalar(kv.second, slot, key);
  }
}

void MergeJson(json &target, const json &src, const std::string &prefix) {
  if (!src.is_object()) Invalid("section '" + prefix + "' must be an object");
  for (const auto &[name, value] : src.items()) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (!target.contains(name)) Invalid("unknown config key '" + key + "'");
    json &slot = target[name];
    if (slot.is_object()) {
      MergeJson(slot, value, key);
      continue;
    }
    bool ok = (slot.is_boolean() && value.is_boolean()) ||
              (slot.is_number_integer() && value.is_number_integer()) ||
              (slot.is_number_float() && value.is_number()) ||
              (slot.is_string() && value.is_string());
    if (!ok) Invalid("key '" + key + "' has the wrong type");
    slot = slot.is_number_float() ? json(value.get<double>()) : value;
  }
}

EncoderSpec SpecFrom(const json &j) {
  EncoderSpec s;
  s.type = j.at("type");
  s.checkpoint_path = j.at("checkpoint_path");
  s.command = j.at("command");
  s.dim = j.at("dim");
  return s;
}

}  // namespace

json DefaultConfigTree() {
  return {
      {"dsp",
       {{"sample_rate", 16000},
        {"n_mels", 80},
        {"hop_length", 256},
        {"win_length", 1024},
        {"n_fft", 1024},
        {"fmin", 0.0},
        {"fmax", 8000.0},
        {"log_floor", 1e-5},
        {"trim", true},
        {"trim_threshold_db", -40.0},
        {"trim_frame_length", 1024},
        {"trim_hop_length", 256}}},
      {"encoders",
       {{"content",
         {{"type", "toy"}, {"checkpoint_path", ""}, {"command", ""}, {"dim", 64},
          {"channels", 128}}},
        {"speaker",
         {{"type", "toy"}, {"checkpoint_path", ""}, {"command", ""}, {"dim", 192},
          {"channels", 128}}},
        {"pretrain",
         {{"steps", 300},
          {"batch_size", 8},
          {"learning_rate", 0.002},
          {"seed", 1},
          {"min_crop", 40},
          {"max_crop", 120},
          {"margin", 0.2},
          {"scale", 15.0}}}}},
      {"model",
       {{"width", 256},
        {"prenet_width", 256},
        {"prenet_dropout", 0.2},
        {"encoder_layers", 2},
        {"decoder_layers", 2},
        {"heads", 2},
        {"ffn_width", 1024},
        {"ffn_kernel", 3},
        {"dropout", 0.1},
        {"postnet_layers", 5},
        {"postnet_kernel", 5},
        {"postnet_width", 256}}},
      {"training",
       {{"learning_rate", 0.001},
        {"beta1", 0.9},
        {"beta2", 0.98},
        {"adam_eps", 1e-9},
        {"batch_size", 16},
        {"lambda_spk", 3.0},
        {"max_steps", 1000},
        {"seed", 1234},
        {"checkpoint_interval", 250},
        {"dataset_manifest", ""},
        {"grad_clip_norm", 1.0},
        {"l1_reduction", "mean"},
        {"deterministic", true}}},
      {"inference",
       {{"vocoder", "griffin_lim"},
        {"griffin_lim_iterations", 60},
        {"nnls_iterations", 200},
        {"external_vocoder_command", ""}}},
      {"evaluation", {{"hist_bins", 50}, {"hist_min", -0.2}, {"hist_max", 1.0}}},
  };
}

RunConfig::RunConfig() : tree_(DefaultConfigTree()) {}

void RunConfig::Set(const std::string &dotted_key, const std::string &value) {
  json *slot = &tree_;
  size_t start = 0;
  while (true) {
    size_t dot = dotted_key.find('.', start);
    std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos
                                                                         : dot - start);
    if (!slot->is_object() || !slot->contains(part))
      Invalid("unknown config key '" + dotted_key + "'");
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (slot->is_object()) Invalid("'" + dotted_key + "' is a section, not a key");
  YAML::Node node;
  try {
    node = YAML::Load(value);
  } catch (const YAML::Exception &e) {
    Invalid("cannot parse override '" + dotted_key + "': " + e.what());
  }
  if (slot->is_string() && (node.IsNull() || value.empty()))
    *slot = value;
  else
    *slot = ConvertScalar(node, *slot, dotted_key);
  CheckValues();
}

RunConfig RunConfig::FromTree(const json &tree) {
  RunConfig cfg;
  MergeJson(cfg.tree_, tree, "");
  cfg.CheckValues();
  return cfg;
}

void RunConfig::CheckValues() const {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) Invalid(what);
  };
  const DspConfig d = dsp();
  require(d.sample_rate > 0 && d.n_mels > 0 && d.hop_length > 0 && d.win_length > 0,
          "dsp sizes must be positive");
  require(d.n_fft >= d.win_length, "dsp.n_fft must be >= dsp.win_length");
  require(d.fmax > d.fmin && d.fmax <= d.sample_rate / 2.0, "dsp.fmax must lie in (fmin, sr/2]");
  require(d.log_floor > 0, "dsp.log_floor must be positive");
  for (const char *which : {"content", "speaker"}) {
    const json &e = tree_["encoders"][which];
    std::string type = e["type"];
    require(type == "toy" || type == "external",
            std::string("encoders.") + which + ".type must be toy or external");
    require(e["dim"].get<int64_t>() > 0, std::string("encoders.") + which + ".dim must be positive");
  }
  const ModelConfig m = model();
  require(m.width > 0 && m.heads > 0 && m.width % m.heads == 0,
          "model.width must be a positive multiple of model.heads");
  require(m.prenet_dropout >= 0 && m.prenet_dropout < 1 && m.dropout >= 0 && m.dropout < 1,
          "dropout rates must be in [0, 1)");
  require(m.postnet_layers >= 1 && m.encoder_layers >= 0 && m.decoder_layers >= 0,
          "layer counts out of range");
  const TrainingConfig t = training();
  require(t.learning_rate > 0, "training.learning_rate must be positive");
  require(t.beta1 > 0 && t.beta1 < 1 && t.beta2 > 0 && t.beta2 < 1,
          "training betas must be in (0, 1)");
  require(t.batch_size >= 1, "training.batch_size must be >= 1");
  require(t.max_steps >= 0, "training.max_steps must be >= 0");
  require(t.checkpoint_interval >= 1, "training.checkpoint_interval must be >= 1");
  require(t.grad_clip_norm >= 0, "training.grad_clip_norm must be >= 0");
  std::string red = tree_["training"]["l1_reduction"];
  require(red == "mean" || red == "sum", "training.l1_reduction must be mean or sum");
  const InferenceConfig inf = inference();
  require(inf.vocoder == "griffin_lim" || inf.vocoder == "external" || inf.vocoder == "none",
          "inference.vocoder must be griffin_lim, external or none");
  require(inf.griffin_lim_iterations >= 1, "inference.griffin_lim_iterations must be >= 1");
  const EvaluationConfig ev = evaluation();
  require(ev.hist_bins >= 1 && ev.hist_max > ev.hist_min, "evaluation histogram range invalid");
}

DspConfig RunConfig::dsp() const {
  const json &j = tree_["dsp"];
  DspConfig d;
  d.sample_rate = j["sample_rate"];
  d.n_mels = j["n_mels"];
  d.hop_length = j["hop_length"];
  d.win_length = j["win_length"];
  d.n_fft = j["n_fft"];
  d.fmin = j["fmin"];
  d.fmax = j["fmax"];
  d.log_floor = j["log_floor"];
  d.trim = j["trim"];
  d.trim_threshold_db = j["trim_threshold_db"];
  d.trim_frame_length = j["trim_frame_length"];
  d.trim_hop_length = j["trim_hop_length"];
  return d;
}

EncoderSpec RunConfig::content_encoder() const { return SpecFrom(tree_["encoders"]["content"]); }
EncoderSpec RunConfig::speaker_encoder() const { return SpecFrom(tree_["encoders"]["speaker"]); }

ToyContentOptions RunConfig::toy_content() const {
  ToyContentOptions o;
  o.n_mels = tree_["dsp"]["n_mels"];
  o.channels = tree_["encoders"]["content"]["channels"];
  o.dim = tree_["encoders"]["content"]["dim"];
  return o;
}

ToySpeakerOptions RunConfig::toy_speaker() const {
  ToySpeakerOptions o;
  o.n_mels = tree_["dsp"]["n_mels"];
  o.channels = tree_["encoders"]["speaker"]["channels"];
  o.dim = tree_["encoders"]["speaker"]["dim"];
  return o;
}

PretrainOptions RunConfig::pretrain() const {
  const json &j = tree_["encoders"]["pretrain"];
  PretrainOptions p;
  p.steps = j["steps"];
  p.batch_size = j["batch_size"];
  p.learning_rate = j["learning_rate"];
  p.seed = j["seed"].get<uint64_t>();
  p.min_crop = j["min_crop"];
  p.max_crop = j["max_crop"];
  p.margin = j["margin"];
  p.scale = j["scale"];
  return p;
}

ModelConfig RunConfig::model() const {
  json j = tree_["model"];
  j["n_mels"] = tree_["dsp"]["n_mels"];
  j["content_dim"] = tree_["encoders"]["content"]["dim"];
  j["speaker_dim"] = tree_["encoders"]["speaker"]["dim"];
  return ModelConfig::FromJson(j);
}

TrainingConfig RunConfig::training() const {
  const json &j = tree_["training"];
  TrainingConfig t;
  t.learning_rate = j["learning_rate"];
  t.beta1 = j["beta1"];
  t.beta2 = j["beta2"];
  t.adam_eps = j["adam_eps"];
  t.batch_size = j["batch_size"];
  t.lambda_spk = j["lambda_spk"];
  t.max_steps = j["max_steps"];
  t.seed = j["seed"].get<uint64_t>();
  t.checkpoint_interval = j["checkpoint_interval"];
  t.dataset_manifest = j["dataset_manifest"];
  t.grad_clip_norm = j["grad_clip_norm"];
  t.reduction = j["l1_reduction"] == "sum" ? L1Reduction::kSum : L1Reduction::kMean;
  t.deterministic = j["deterministic"];
  return t;
}

InferenceConfig RunConfig::inference() const {
  const json &j = tree_["inference"];
  InferenceConfig i;
  i.vocoder = j["vocoder"];
  i.griffin_lim_iterations = j["griffin_lim_iterations"];
  i.nnls_iterations = j["nnls_iterations"];
  i.external_vocoder_command = j["external_vocoder_command"];
  return i;
}

EvaluationConfig RunConfig::evaluation() const {
  const json &j = tree_["evaluation"];
  EvaluationConfig e;
  e.hist_bins = j["hist_bins"];
  e.hist_min = j["hist_min"];
  e.hist_max = j["hist_max"];
  return e;
}

std::string RunConfig::config_hash() const { return Sha256Hex(tree_.dump()); }

std::string RunConfig::resume_hash() const {
  json j = {{"dsp", tree_["dsp"]},
            {"encoders", tree_["encoders"]},
            {"model", tree_["model"]},
            {"training", tree_["training"]}};
  j["encoders"].erase("pretrain");
  j["training"].erase("max_steps");
  j["training"].erase("checkpoint_interval");
  return Sha256Hex(j.dump());
}

RunConfig ParseAndValidate(const std::filesystem::path &path,
                           const std::vector<ConfigOverride> &overrides) {
  RunConfig cfg;
  if (!path.empty()) {
    if (!std::filesystem::exists(path)) Fail(ErrorKind::kIo, "config not found: " + path.string());
    YAML::Node root;
    try {
      root = YAML::LoadFile(path.string());
    } catch (const YAML::Exception &e) {
      Invalid("cannot parse " + path.string() + ": " + e.what());
    }
    if (!root.IsNull()) {
      json tree = cfg.tree();
      MergeYaml(tree, root, "");
      cfg = RunConfig::FromTree(tree);
    }
  }
  for (const auto &[key, value] : overrides) cfg.Set(key, value);
  return cfg;
}

}  // namespace sigvc
