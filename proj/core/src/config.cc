// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fsca {
namespace {

using nlohmann::json;

// Reads the keys of one JSON object, rejecting any key that was not asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be a JSON object");
  }

  template <typename T>
  void Get(const std::string& key, T* out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      *out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  // Nested object, or nullptr when absent.
  const json* Child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string Path(const std::string& key) const { return path_ + "." + key; }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key " + path_ + "." + it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void Check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

const char* MaskName(ops::AttentionMask m) {
  return m == ops::AttentionMask::kCausal ? "causal" : "full";
}

ops::AttentionMask ParseMask(const std::string& s) {
  if (s == "full") return ops::AttentionMask::kFull;
  if (s == "causal") return ops::AttentionMask::kCausal;
  throw ConfigError("attention.mask must be \"full\" or \"causal\", got \"" + s + "\"");
}

ModelConfig ModelFromJson(const json& j, const std::string& path) {
  ModelConfig cfg;
  Section s(j, path);
  s.Get("sample_rate", &cfg.sample_rate);
  s.Get("n_fft", &cfg.n_fft);
  s.Get("hop", &cfg.hop);
  s.Get("n", &cfg.n);
  int bins = -1;
  s.Get("F", &bins);
  if (const json* t = s.Child("tcn")) {
    Section ts(*t, s.Path("tcn"));
    ts.Get("groups", &cfg.tcn.groups);
    ts.Get("blocks_per_group", &cfg.tcn.blocks_per_group);
    ts.Get("kernel", &cfg.tcn.kernel);
    ts.Get("dilations", &cfg.tcn.dilations);
    ts.Get("hidden", &cfg.tcn.hidden);
    ts.Finish();
  }
  if (const json* a = s.Child("attention")) {
    Section as(*a, s.Path("attention"));
    as.Get("heads", &cfg.attention.heads);
    as.Get("d_model", &cfg.attention.d_model);
    std::string mask = MaskName(cfg.attention.mask);
    as.Get("mask", &mask);
    cfg.attention.mask = ParseMask(mask);
    as.Get("ffn_ratio", &cfg.attention.ffn_ratio);
    as.Finish();
  }
  if (const json* l = s.Child("lstm")) {
    Section ls(*l, s.Path("lstm"));
    ls.Get("hidden", &cfg.lstm.hidden);
    ls.Get("layers", &cfg.lstm.layers);
    ls.Finish();
  }
  if (const json* c = s.Child("cirm")) {
    Section cs(*c, s.Path("cirm"));
    cs.Get("K", &cfg.cirm.K);
    cs.Get("C", &cfg.cirm.C);
    cs.Finish();
  }
  std::string mode = ToString(cfg.fusion_mode);
  s.Get("fusion_mode", &mode);
  cfg.fusion_mode = ParseFusionMode(mode);
  s.Finish();
  if (bins != -1)
    Check(bins == cfg.bins(), path + ".F = " + std::to_string(bins) +
                                  " disagrees with n_fft/2+1 = " +
                                  std::to_string(cfg.bins()));
  cfg.Validate();
  return cfg;
}

json ModelToJson(const ModelConfig& cfg) {
  return json{
      {"sample_rate", cfg.sample_rate},
      {"n_fft", cfg.n_fft},
      {"hop", cfg.hop},
      {"n", cfg.n},
      {"F", cfg.bins()},
      {"tcn",
       {{"groups", cfg.tcn.groups},
        {"blocks_per_group", cfg.tcn.blocks_per_group},
        {"kernel", cfg.tcn.kernel},
        {"dilations", cfg.tcn.dilations},
        {"hidden", cfg.tcn.hidden}}},
      {"attention",
       {{"heads", cfg.attention.heads},
        {"d_model", cfg.attention.d_model},
        {"mask", MaskName(cfg.attention.mask)},
        {"ffn_ratio", cfg.attention.ffn_ratio}}},
      {"lstm", {{"hidden", cfg.lstm.hidden}, {"layers", cfg.lstm.layers}}},
      {"cirm", {{"K", cfg.cirm.K}, {"C", cfg.cirm.C}}},
      {"fusion_mode", ToString(cfg.fusion_mode)},
  };
}

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

const char* ToString(FusionMode mode) {
  switch (mode) {
    case FusionMode::kAttention:
      return "attention";
    case FusionMode::kConcat:
      return "concat";
    case FusionMode::kAttentionConcat:
      return "attention_concat";
  }
  return "attention";
}

FusionMode ParseFusionMode(const std::string& s) {
  if (s == "attention") return FusionMode::kAttention;
  if (s == "concat") return FusionMode::kConcat;
  if (s == "attention_concat") return FusionMode::kAttentionConcat;
  throw ConfigError("fusion_mode must be attention, concat or attention_concat; got \"" +
                    s + "\"");
}

void ModelConfig::Validate() const {
  Check(sample_rate > 0, "sample_rate must be positive");
  stft().Validate();
  Check(n >= 0, "n must be non-negative");
  Check(2 * n + 1 <= bins(), "2n+1 = " + std::to_string(2 * n + 1) +
                                 " exceeds F = " + std::to_string(bins()));
  Check(tcn.groups >= 1, "tcn.groups must be >= 1");
  Check(tcn.blocks_per_group >= 1, "tcn.blocks_per_group must be >= 1");
  Check(tcn.kernel >= 1, "tcn.kernel must be >= 1");
  Check(tcn.hidden >= 1, "tcn.hidden must be >= 1");
  Check(static_cast<int>(tcn.dilations.size()) == tcn.blocks_per_group,
        "tcn.dilations must list one dilation per block (" +
            std::to_string(tcn.blocks_per_group) + ")");
  for (int d : tcn.dilations) Check(d >= 1, "tcn.dilations entries must be >= 1");
  if (uses_attention()) {
    Check(attention.heads >= 1, "attention.heads must be >= 1");
    Check(attention.d_model >= 1, "attention.d_model must be >= 1");
    Check(attention.d_model % attention.heads == 0,
          "attention.d_model (" + std::to_string(attention.d_model) +
              ") must be divisible by attention.heads (" +
              std::to_string(attention.heads) + ")");
    Check(attention.ffn_ratio >= 1, "attention.ffn_ratio must be >= 1");
  }
  Check(lstm.hidden >= 1, "lstm.hidden must be >= 1");
  Check(lstm.layers >= 1, "lstm.layers must be >= 1");
  Check(cirm.K > 0.0 && cirm.C > 0.0, "cirm.K and cirm.C must be positive");
}

void TrainConfig::Validate() const {
  Check(learning_rate > 0.0, "train.learning_rate must be positive");
  Check(beta1 >= 0.0 && beta1 < 1.0, "train.beta1 must lie in [0, 1)");
  Check(beta2 >= 0.0 && beta2 < 1.0, "train.beta2 must lie in [0, 1)");
  Check(epsilon > 0.0, "train.epsilon must be positive");
  Check(steps >= 0, "train.steps must be non-negative");
  Check(chunk_frames >= 1, "train.chunk_frames must be >= 1");
}

void MixSpec::Validate() const {
  Check(snr_lo <= snr_hi, "mix.snr_db must be [lo, hi] with lo <= hi");
  Check(rir_probability >= 0.0 && rir_probability <= 1.0,
        "mix.rir_probability must lie in [0, 1]");
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json root = Parse(json_text);
  ExperimentConfig cfg;
  Section s(root, "config");
  if (const json* m = s.Child("model")) cfg.model = ModelFromJson(*m, "model");
  if (const json* t = s.Child("train")) {
    Section ts(*t, "train");
    ts.Get("learning_rate", &cfg.train.learning_rate);
    ts.Get("beta1", &cfg.train.beta1);
    ts.Get("beta2", &cfg.train.beta2);
    ts.Get("epsilon", &cfg.train.epsilon);
    ts.Get("steps", &cfg.train.steps);
    ts.Get("chunk_frames", &cfg.train.chunk_frames);
    ts.Get("seed", &cfg.train.seed);
    ts.Finish();
  }
  if (const json* m = s.Child("mix")) {
    Section ms(*m, "mix");
    std::vector<double> range = {cfg.mix.snr_lo, cfg.mix.snr_hi};
    ms.Get("snr_db", &range);
    Check(range.size() == 2, "mix.snr_db must be a [lo, hi] pair");
    cfg.mix.snr_lo = range[0];
    cfg.mix.snr_hi = range[1];
    ms.Get("rir_probability", &cfg.mix.rir_probability);
    ms.Get("seed", &cfg.mix.seed);
    ms.Finish();
  }
  s.Finish();
  cfg.model.Validate();
  cfg.train.Validate();
  cfg.mix.Validate();
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseExperimentConfig(ss.str());
}

ModelConfig ParseModelConfig(const std::string& json_text) {
  return ModelFromJson(Parse(json_text), "model");
}

std::string ToJson(const ModelConfig& cfg) { return ModelToJson(cfg).dump(); }

std::string ToJson(const ExperimentConfig& cfg) {
  json j{
      {"model", ModelToJson(cfg.model)},
      {"train",
       {{"learning_rate", cfg.train.learning_rate},
        {"beta1", cfg.train.beta1},
        {"beta2", cfg.train.beta2},
        {"epsilon", cfg.train.epsilon},
        {"steps", cfg.train.steps},
        {"chunk_frames", cfg.train.chunk_frames},
        {"seed", cfg.train.seed}}},
      {"mix",
       {{"snr_db", {cfg.mix.snr_lo, cfg.mix.snr_hi}},
        {"rir_probability", cfg.mix.rir_probability},
        {"seed", cfg.mix.seed}}},
  };
  return j.dump(2);
}

}  // namespace fsca
