#ifndef QONN_PROTOCOLS_HPP
#define QONN_PROTOCOLS_HPP

#include "qonn/fock.hpp"
#include "qonn/threading.hpp"
#include "qonn/training.hpp"

namespace qonn {

// Per-row forward pass over a dataset split, batched in parallel. Throws
// nothing per-row: degenerate herald points evaluate to +inf loss so the
// line search backs away from them.
template <class R>
R split_loss(const ExpectationPlan& plan, const Dataset& ds, const std::vector<size_t>& idx,
             const std::vector<R>& params, const EvalOptions& opts = {}) {
    if (idx.empty()) throw InvalidArgument("split_loss: empty split");
    BoundParameters<R> bound = bind_parameters(plan, params);

    std::vector<ForwardResult<R>> rows(idx.size());
    std::vector<char> failed(idx.size(), 0);
    parallel_for(idx.size(), [&](size_t i) {
        std::vector<R> alpha;
        alpha.reserve(ds.inputs[idx[i]].size());
        for (double x : ds.inputs[idx[i]]) alpha.push_back(R(x));
        try {
            rows[i] = forward_bound(plan, bound, alpha, opts);
        } catch (const Error&) {
            failed[i] = 1;
        }
    });
    for (char f : failed)
        if (f) return R(std::numeric_limits<double>::infinity());

    switch (ds.kind) {
        case TaskKind::Regression: {
            std::vector<R> preds, targets;
            preds.reserve(idx.size());
            targets.reserve(idx.size());
            for (size_t i = 0; i < idx.size(); ++i) {
                preds.push_back(rows[i].outputs[0]);
                targets.push_back(R(ds.targets[idx[i]][0]));
            }
            return loss_mse(preds, targets);
        }
        case TaskKind::Classification: {
            std::vector<std::vector<R>> z;
            std::vector<int> labels;
            z.reserve(idx.size());
            for (size_t i = 0; i < idx.size(); ++i) {
                z.push_back(rows[i].outputs);
                labels.push_back(ds.labels[idx[i]]);
            }
            return softmax_crossentropy(z, labels);
        }
        case TaskKind::Moments: {
            std::vector<std::vector<Cx<R>>> preds;
            std::vector<std::vector<cxd>> targets;
            preds.reserve(idx.size());
            for (size_t i = 0; i < idx.size(); ++i) {
                preds.push_back(rows[i].moments);
                targets.push_back(ds.moment_targets[idx[i]]);
            }
            return loss_moment_mse(preds, targets);
        }
    }
    throw InternalError("split_loss: unknown task kind");
}

// Objective over the training split, dual-differentiable.
Objective make_split_objective(const ExpectationPlan& plan, const Dataset& ds,
                               const std::vector<size_t>& idx, const EvalOptions& opts = {});

// Fraction of rows whose argmax readout matches the label.
double classification_accuracy(const ExpectationPlan& plan, const std::vector<double>& params,
                               const Dataset& ds, const std::vector<size_t>& idx,
                               const EvalOptions& opts = {});

struct BenchmarkOutcome {
    FitResult fit;
    double test_loss = 0.0;
    double test_accuracy = -1.0;  // classification only
    double herald_min = 0.0;
    double herald_mean = 0.0;
    // One row per test sample: inputs..., target(s)/label, prediction(s).
    std::vector<std::vector<double>> predictions;
};

// Train on the dataset's train split, select by validation loss, report on
// the test split.
BenchmarkOutcome run_benchmark(const ExpectationPlan& plan, const Dataset& ds,
                               const TrainConfig& cfg);

// Cubic-phase gate-synthesis targets: moments of V(gamma)|alpha> for each
// input amplitude, computed by the truncated Fock oracle.
std::vector<std::vector<cxd>> cubic_phase_targets(double gamma,
                                                  const std::vector<double>& alphas,
                                                  int cutoff = 120);

// Moment-matching dataset for gate synthesis over a linear grid of real
// coherent inputs in (-2, 2).
Dataset make_synthesis_dataset(double gamma, int samples, int cutoff = 120);

// Moment-readout plan (raw complex moment set of the first mode).
ExpectationPlan compile_moment_plan(const QonnArchitecture& arch);

}  // namespace qonn

#endif
