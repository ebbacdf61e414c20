//
// Copyright 2026 The cuneilab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <ceres/ceres.h>

#include "crf_lattice.hpp"
#include "cuneilab/crf.hpp"
#include "cuneilab/error.hpp"
#include "cuneilab/random.hpp"

namespace cuneilab {
namespace {

using internal::CompiledPhrase;

// Regularised objective over a compiled batch.
class Objective {
 public:
  Objective(std::size_t num_tags, std::size_t num_features, double sigma2,
            bool use_transitions, std::vector<CompiledPhrase> data,
            int threads)
      : num_tags_(num_tags),
        num_features_(num_features),
        sigma2_(sigma2),
        use_transitions_(use_transitions),
        data_(std::move(data)),
        threads_(std::max(1, threads)) {}

  std::size_t dimension() const {
    return num_features_ * num_tags_ + num_tags_ * num_tags_;
  }

  double Evaluate(const std::vector<double>& w,
                  std::vector<double>* gradient) const {
    const std::size_t dim = dimension();
    const std::size_t chunks =
        std::min<std::size_t>(static_cast<std::size_t>(threads_),
                              std::max<std::size_t>(1, data_.size()));
    std::vector<double> partial_nll(chunks, 0.0);
    std::vector<std::vector<double>> partial_grad(
        gradient ? chunks : 0, std::vector<double>(dim, 0.0));

    auto run_chunk = [&](std::size_t c) {
      const std::size_t begin = data_.size() * c / chunks;
      const std::size_t end = data_.size() * (c + 1) / chunks;
      std::span<double> g;
      if (gradient) g = partial_grad[c];
      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        sum += internal::AccumulatePhrase(w, num_tags_, num_features_,
                                          data_[i], g, use_transitions_);
      }
      partial_nll[c] = sum;
    };
    if (chunks == 1) {
      run_chunk(0);
    } else {
      std::vector<std::thread> workers;
      for (std::size_t c = 0; c < chunks; ++c) workers.emplace_back(run_chunk, c);
      for (auto& t : workers) t.join();
    }

    double nll = 0.0;
    for (double v : partial_nll) nll += v;
    double sq = 0.0;
    for (double v : w) sq += v * v;
    nll += sq / (2.0 * sigma2_);
    if (gradient) {
      gradient->assign(dim, 0.0);
      for (const auto& pg : partial_grad) {
        for (std::size_t j = 0; j < dim; ++j) (*gradient)[j] += pg[j];
      }
      for (std::size_t j = 0; j < dim; ++j) (*gradient)[j] += w[j] / sigma2_;
      if (!use_transitions_) {
        std::fill(gradient->begin() +
                      static_cast<std::ptrdiff_t>(num_features_ * num_tags_),
                  gradient->end(), 0.0);
      }
    }
    return nll;
  }

 private:
  std::size_t num_tags_;
  std::size_t num_features_;
  double sigma2_;
  bool use_transitions_;
  std::vector<CompiledPhrase> data_;
  int threads_;
};

class CeresObjective : public ceres::FirstOrderFunction {
 public:
  explicit CeresObjective(const Objective& objective) : objective_(objective) {}

  bool Evaluate(const double* parameters, double* cost,
                double* gradient) const override {
    const int n = NumParameters();
    std::vector<double> w(parameters, parameters + n);
    std::vector<double> g;
    *cost = objective_.Evaluate(w, gradient ? &g : nullptr);
    if (gradient) std::copy(g.begin(), g.end(), gradient);
    return std::isfinite(*cost);
  }
  int NumParameters() const override {
    return static_cast<int>(objective_.dimension());
  }

 private:
  const Objective& objective_;
};

// Forwards accepted iterates to the progress hook and the objective trace.
class TraceCallback : public ceres::IterationCallback {
 public:
  TraceCallback(const CrfTrainOptions& options, CrfTrainReport& report)
      : options_(options), report_(report) {}

  ceres::CallbackReturnType operator()(
      const ceres::IterationSummary& summary) override {
    if (summary.iteration == 0 || summary.step_is_successful) {
      report_.objective_trace.push_back(summary.cost);
      report_.grad_norm = summary.gradient_max_norm;
      if (options_.progress) {
        options_.progress(summary.iteration, summary.cost, summary.gradient_max_norm);
      }
    }
    return ceres::SOLVER_CONTINUE;
  }

 private:
  const CrfTrainOptions& options_;
  CrfTrainReport& report_;
};

void Minimize(const Objective& objective, std::vector<double>& w,
              const CrfTrainOptions& options, CrfTrainReport& report) {
  ceres::GradientProblem problem(new CeresObjective(objective));
  ceres::GradientProblemSolver::Options solver;
  if (options.optimizer == OptimizerKind::kLbfgs) {
    solver.line_search_direction_type = ceres::LBFGS;
    solver.max_lbfgs_rank = std::max(1, options.lbfgs_memory);
  } else {
    solver.line_search_direction_type = ceres::STEEPEST_DESCENT;
    solver.line_search_type = ceres::ARMIJO;
  }
  solver.max_num_iterations = std::max(0, options.max_iters);
  // Stop on the gradient only; the other criteria would end early on flat
  // stretches of the objective.
  solver.gradient_tolerance = options.grad_tol;
  solver.function_tolerance = 0.0;
  solver.parameter_tolerance = 0.0;
  solver.logging_type = ceres::SILENT;
  TraceCallback trace(options, report);
  solver.callbacks.push_back(&trace);

  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(solver, problem, w.data(), &summary);
  if (summary.termination_type == ceres::FAILURE ||
      !std::isfinite(summary.final_cost)) {
    throw Error(ErrorCode::kDivergenceDetected, summary.message);
  }
  report.iterations = summary.iterations.empty()
                          ? 0
                          : summary.iterations.back().iteration;
  report.objective = summary.final_cost;
  report.converged = summary.termination_type == ceres::CONVERGENCE;
}

CompiledPhrase Compile(const CrfModel& model, const TaggedPhrase& tp) {
  if (tp.tags.size() != tp.phrase.tokens.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch,
                "phrase " + tp.phrase.id + " has " +
                    std::to_string(tp.phrase.tokens.size()) + " tokens and " +
                    std::to_string(tp.tags.size()) + " tags");
  }
  if (tp.tags.empty()) throw Error(ErrorCode::kInvalidArgument, "empty phrase");
  CompiledPhrase out;
  out.gold = tp.tags;
  for (int tag : tp.tags) {
    if (tag < 0 || static_cast<std::size_t>(tag) >= model.num_tags()) {
      throw Error(ErrorCode::kTagOutsideTagset, "tag " + std::to_string(tag));
    }
  }
  for (std::size_t i = 0; i < tp.phrase.tokens.size(); ++i) {
    out.features.push_back(model.Features(tp.phrase, i));
  }
  return out;
}

}  // namespace

NllResult NllAndGradient(const CrfModel& model,
                         const std::vector<TaggedPhrase>& batch) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
  std::vector<CompiledPhrase> data;
  data.reserve(batch.size());
  for (const auto& tp : batch) data.push_back(Compile(model, tp));
  Objective objective(model.num_tags(), model.num_features(),
                      model.l2_sigma2(), model.has_transitions(),
                      std::move(data), 1);
  NllResult result;
  result.nll = objective.Evaluate(model.weights(), &result.gradient);
  return result;
}

CrfModel TrainCrf(const Corpus& corpus, const RuleSet& rules,
                  const std::vector<FeatureTemplate>& templates,
                  const CrfTrainOptions& options, CrfTrainReport* report) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot train on an empty corpus");
  }
  FeatureDictionary dict;
  for (const TaggedPhrase& tp : corpus.tagged()) {
    for (std::size_t i = 0; i < tp.phrase.tokens.size(); ++i) {
      for (const auto& f : ExtractFeatureStrings(templates, rules, tp.phrase, i)) {
        dict.Intern(f);
      }
    }
  }
  CrfModel model(corpus.tagset(), templates, rules, std::move(dict),
                 options.l2_sigma2);

  std::vector<CompiledPhrase> data;
  data.reserve(corpus.size());
  for (const TaggedPhrase& tp : corpus.tagged()) data.push_back(Compile(model, tp));
  Objective objective(model.num_tags(), model.num_features(), model.l2_sigma2(),
                      model.has_transitions(), std::move(data), options.threads);

  std::vector<double>& w = model.mutable_weights();
  if (options.random_init_seed) {
    Rng rng(*options.random_init_seed);
    for (double& v : w) v = 2.0 * rng.Unit() - 1.0;
    if (!model.has_transitions()) {
      std::fill(w.begin() + static_cast<std::ptrdiff_t>(
                                model.num_features() * model.num_tags()),
                w.end(), 0.0);
    }
  }
  CrfTrainReport local;
  Minimize(objective, w, options, report ? *report : local);
  return model;
}

}  // namespace cuneilab
