// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/grad_check.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "fsca/ops.h"

namespace fsca {

GradCheckReport GradCheckScalar(
    const std::string& name, const GradTargets& targets,
    const std::function<double()>& loss,
    const std::function<std::vector<Matrix>()>& analytic, uint64_t seed,
    const GradCheckOptions& opts) {
  GradCheckReport report;
  report.name = name;
  std::vector<Matrix> grads = analytic();
  if (grads.size() != targets.size())
    throw ShapeError("GradCheck: analytic gradient count mismatch");
  for (size_t i = 0; i < targets.size(); ++i) {
    if (grads[i].size() == 0) grads[i] = Matrix::Zero(targets[i]->rows(), targets[i]->cols());
    ExpectShape(grads[i], targets[i]->rows(), targets[i]->cols(),
                "GradCheck analytic gradient");
  }

  // (target, flat index) pairs to probe.
  std::vector<std::pair<size_t, Index>> probes;
  for (size_t i = 0; i < targets.size(); ++i)
    for (Index j = 0; j < targets[i]->size(); ++j) probes.emplace_back(i, j);
  if (opts.sample_entries > 0 &&
      static_cast<size_t>(opts.sample_entries) < probes.size()) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(probes.begin(), probes.end(), rng);
    probes.resize(opts.sample_entries);
    std::sort(probes.begin(), probes.end());
  }

  const double h = opts.step;
  const double base = opts.skip_kinks ? loss() : 0.0;
  for (const auto& [i, j] : probes) {
    double* entry = targets[i]->data() + j;
    const double saved = *entry;
    *entry = saved + h;
    const double up = loss();
    *entry = saved - h;
    const double down = loss();
    *entry = saved;
    if (opts.skip_kinks) {
      double right = (up - base) / h, left = (base - down) / h;
      double scale = std::max({std::abs(right), std::abs(left), opts.floor});
      if (std::abs(right - left) > opts.kink_tolerance * scale) {
        ++report.skipped;
        continue;
      }
    }
    const double numeric = (up - down) / (2.0 * h);
    const double a = grads[i].data()[j];
    const double denom = std::max({std::abs(a), std::abs(numeric), opts.floor});
    report.max_rel_error = std::max(report.max_rel_error, std::abs(a - numeric) / denom);
    ++report.checked;
  }
  return report;
}

GradCheckReport GradCheck(const std::string& name, const GradTargets& targets,
                          const GraphBuilder& build, uint64_t seed,
                          const GradCheckOptions& opts) {
  Matrix direction;
  {
    Tape probe(false);
    const Matrix& y = probe.Value(build(probe));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    direction.resize(y.rows(), y.cols());
    for (Index i = 0; i < direction.size(); ++i) direction.data()[i] = dist(rng);
  }
  auto loss = [&]() {
    Tape t(false);
    return t.Value(ops::Dot(t, build(t), direction))(0, 0);
  };
  auto analytic = [&]() {
    Tape t(true);
    Var l = ops::Dot(t, build(t), direction);
    t.Backward(l, Matrix::Ones(1, 1));
    std::vector<Matrix> out;
    out.reserve(targets.size());
    for (Matrix* m : targets) out.push_back(t.GradOf(*m));
    return out;
  };
  return GradCheckScalar(name, targets, loss, analytic, seed, opts);
}

}  // namespace fsca
