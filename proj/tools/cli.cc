// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsca/checkpoint.h"
#include "fsca/grad_suite.h"
#include "fsca/metrics.h"
#include "fsca/model.h"
#include "fsca/training.h"

namespace fsca::cli {
namespace {

namespace fs = std::filesystem;

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

// 4133838 -> "4,133,838"
std::string Grouped(int64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::vector<Waveform> LoadDirectory(const std::string& dir, int sample_rate) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      paths.push_back(entry.path());
  }
  if (paths.empty()) throw IoError("no .wav files in " + dir);
  std::sort(paths.begin(), paths.end());
  std::vector<Waveform> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(ReadWav(p.string(), sample_rate));
  return out;
}

struct EnhanceArgs {
  std::string config, checkpoint, input, output;
  int threads = 1;
};

int Enhance(const EnhanceArgs& a, std::ostream& out) {
  const ModelParams p = a.config.empty()
                            ? LoadCheckpoint(a.checkpoint)
                            : LoadCheckpoint(a.checkpoint, LoadExperimentConfig(a.config).model);
  const Waveform noisy = ReadWav(a.input, p.config.sample_rate);
  if (noisy.size() < p.config.n_fft) {
    throw FormatError(a.input + ": " + std::to_string(noisy.size()) +
                      " samples is shorter than n_fft = " + std::to_string(p.config.n_fft));
  }
  const auto start = std::chrono::steady_clock::now();
  const Waveform enhanced = fsca::Enhance(noisy, p, a.threads);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteWav(enhanced, a.output);
  out << "F=" << p.config.bins() << " T=" << p.config.stft().FrameCount(noisy.size())
      << " runtime=" << Format("%.3f", seconds) << " s\n";
  return kExitOk;
}

struct TrainArgs {
  std::string config, clean_dir, noise_dir, rir_dir, out;
  std::optional<int> steps;
  std::optional<uint64_t> seed;
  int threads = 1;
};

int Train(const TrainArgs& a, std::ostream& out) {
  ExperimentConfig cfg = LoadExperimentConfig(a.config);
  if (a.steps) cfg.train.steps = *a.steps;
  if (a.seed) cfg.train.seed = cfg.mix.seed = *a.seed;
  cfg.train.Validate();

  TrainingData data;
  data.clean = LoadDirectory(a.clean_dir, cfg.model.sample_rate);
  data.noise = LoadDirectory(a.noise_dir, cfg.model.sample_rate);
  if (!a.rir_dir.empty()) data.rirs = LoadDirectory(a.rir_dir, cfg.model.sample_rate);

  const std::string log_path = a.out + ".loss.txt";
  std::ofstream log(log_path);
  if (!log) throw IoError("cannot write loss log " + log_path);
  const int report_every = std::max(1, cfg.train.steps / 10);
  TrainResult r = TrainLoop(cfg.train, data, cfg.mix, cfg.model, a.threads,
                            [&](int step, double loss) {
                              log << step << ',' << Format("%.9g", loss) << '\n';
                              if ((step + 1) % report_every == 0 || step == 0)
                                out << "step " << step + 1 << "/" << cfg.train.steps
                                    << " loss " << Format("%.6f", loss) << '\n';
                            });
  log.close();
  if (!log) throw IoError("write failed for " + log_path);
  SaveCheckpoint(r.params, a.out);
  out << "wrote " << a.out << " and " << log_path << '\n';
  return kExitOk;
}

struct MixArgs {
  std::string clean, noise, rir, out_noisy, out_target;
  double snr_db = 0.0;
};

int MixCommand(const MixArgs& a, std::ostream& out) {
  const Waveform clean = ReadWav(a.clean, 0);
  const Waveform noise = ReadWav(a.noise, clean.sample_rate);
  std::optional<Waveform> rir;
  if (!a.rir.empty()) rir = ReadWav(a.rir, clean.sample_rate);
  const MixResult m = Mix(clean, noise, a.snr_db, rir ? &*rir : nullptr);
  WriteWav(m.noisy, a.out_noisy);
  WriteWav(m.target, a.out_target);
  out << "SNR " << Format("%.2f", a.snr_db) << " dB, peak scale "
      << Format("%.4f", m.peak_scale) << '\n';
  return kExitOk;
}

int Eval(const std::string& ref, const std::string& est, std::ostream& out) {
  const Waveform r = ReadWav(ref, 0);
  const Waveform e = ReadWav(est, 0);
  const EvalReport report = Evaluate(r, e);
  out << "SI-SDR: " << Format("%.2f", report.si_sdr_db) << " dB\n";
  return kExitOk;
}

int GradCheckCommand(uint64_t seed, int seeds, std::ostream& out) {
  const GradSuiteResult r = RunGradientSuite(seed, seeds);
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %12s %10s %8s %8s  %s\n", "op", "worst_rel",
                "tolerance", "checked", "skipped", "status");
  out << line;
  for (const GradSuiteEntry& e : r.entries) {
    std::snprintf(line, sizeof(line), "%-28s %12.3e %10.0e %8d %8d  %s\n", e.op.c_str(),
                  e.worst, e.tolerance, e.checked, e.skipped, e.passed() ? "ok" : "FAIL");
    out << line;
  }
  out << (r.passed() ? "all ops within tolerance\n" : "gradient check FAILED\n");
  return r.passed() ? kExitOk : kExitFailed;
}

int Params(const std::string& config, std::ostream& out) {
  const ModelParams p = ZeroParams(LoadExperimentConfig(config).model);
  const ParamBreakdown b = ParamCount(p);
  out << "fullband: " << Grouped(b.fullband) << '\n'
      << "fsca: " << Grouped(b.fsca) << '\n'
      << "subband: " << Grouped(b.subband) << '\n'
      << "total: " << Grouped(b.total()) << " ("
      << Format("%.2f", static_cast<double>(b.total()) / 1e6) << " M)\n";
  return kExitOk;
}

int ExitCode(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const ShapeError*>(&e))
    return kExitFormat;
  return kExitFailed;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fullband-subband cross-attention speech enhancement"};
  app.name("fsca");
  app.require_subcommand(1);

  EnhanceArgs enhance;
  auto* enh = app.add_subcommand("enhance", "Denoise a WAV file with a trained checkpoint");
  enh->add_option("--config", enhance.config, "Experiment config; verified against the checkpoint");
  enh->add_option("--checkpoint", enhance.checkpoint)->required();
  enh->add_option("--input", enhance.input, "Noisy 16-bit mono WAV")->required();
  enh->add_option("--output", enhance.output)->required();
  enh->add_option("--threads", enhance.threads)->check(CLI::PositiveNumber);

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train with dynamic mixing");
  tr->add_option("--config", train.config)->required();
  tr->add_option("--clean-dir", train.clean_dir)->required();
  tr->add_option("--noise-dir", train.noise_dir)->required();
  tr->add_option("--rir-dir", train.rir_dir);
  tr->add_option("--steps", train.steps, "Overrides train.steps")->check(CLI::NonNegativeNumber);
  tr->add_option("--out", train.out, "Checkpoint path; the loss log goes to <out>.loss.txt")
      ->required();
  tr->add_option("--seed", train.seed, "Overrides train.seed and mix.seed");
  tr->add_option("--threads", train.threads)->check(CLI::PositiveNumber);

  MixArgs mix;
  auto* mx = app.add_subcommand("mix", "Mix clean speech and noise at a given SNR");
  mx->add_option("--clean", mix.clean)->required();
  mx->add_option("--noise", mix.noise)->required();
  mx->add_option("--snr-db", mix.snr_db)->required();
  mx->add_option("--rir", mix.rir);
  mx->add_option("--out-noisy", mix.out_noisy)->required();
  mx->add_option("--out-target", mix.out_target)->required();

  std::string ref, est;
  auto* ev = app.add_subcommand("eval", "SI-SDR of an estimate against a reference");
  ev->add_option("--ref", ref)->required();
  ev->add_option("--est", est)->required();

  uint64_t grad_seed = 0;
  int grad_seeds = 10;
  auto* gc = app.add_subcommand("grad-check", "Finite-difference check of every op");
  gc->add_option("--seed", grad_seed);
  gc->add_option("--seeds", grad_seeds, "Draws per op")->check(CLI::PositiveNumber);

  std::string params_config;
  auto* pc = app.add_subcommand("params", "Parameter counts per module");
  pc->add_option("--config", params_config)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*enh) return Enhance(enhance, out);
    if (*tr) return Train(train, out);
    if (*mx) return MixCommand(mix, out);
    if (*ev) return Eval(ref, est, out);
    if (*gc) return GradCheckCommand(grad_seed, grad_seeds, out);
    if (*pc) return Params(params_config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode(e);
  }
  return kExitUsage;
}

}  // namespace fsca::cli
