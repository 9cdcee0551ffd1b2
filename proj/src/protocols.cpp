#include "qonn/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace qonn {

Objective make_split_objective(const ExpectationPlan& plan, const Dataset& ds,
                               const std::vector<size_t>& idx, const EvalOptions& opts) {
    return {[&plan, &ds, idx, opts](const std::vector<double>& p) {
                return split_loss(plan, ds, idx, p, opts);
            },
            [&plan, &ds, idx, opts](const std::vector<Dual>& p) {
                return split_loss(plan, ds, idx, p, opts);
            }};
}

double classification_accuracy(const ExpectationPlan& plan, const std::vector<double>& params,
                               const Dataset& ds, const std::vector<size_t>& idx,
                               const EvalOptions& opts) {
    if (ds.kind != TaskKind::Classification)
        throw InvalidArgument("classification_accuracy: dataset is not a classification task");
    BoundParameters<double> bound = bind_parameters(plan, params);
    std::vector<char> hit(idx.size(), 0);
    parallel_for(idx.size(), [&](size_t i) {
        auto res = forward_bound(plan, bound, ds.inputs[idx[i]], opts);
        int best = 0;
        for (size_t j = 1; j < res.outputs.size(); ++j)
            if (res.outputs[j] > res.outputs[best]) best = static_cast<int>(j);
        hit[i] = best == ds.labels[idx[i]] ? 1 : 0;
    });
    double correct = 0.0;
    for (char h : hit) correct += h;
    return correct / static_cast<double>(idx.size());
}

BenchmarkOutcome run_benchmark(const ExpectationPlan& plan, const Dataset& ds,
                               const TrainConfig& cfg) {
    EvalOptions opts;
    opts.deterministic = cfg.deterministic;
    Objective train_obj = make_split_objective(plan, ds, ds.train_idx, opts);
    auto val_fn = [&plan, &ds, opts](const std::vector<double>& p) {
        return split_loss(plan, ds, ds.val_idx, p, opts);
    };

    BenchmarkOutcome out;
    out.fit = fit(plan, train_obj, val_fn, cfg);
    out.test_loss = split_loss(plan, ds, ds.test_idx, out.fit.best_params, opts);
    if (ds.kind == TaskKind::Classification)
        out.test_accuracy =
            classification_accuracy(plan, out.fit.best_params, ds, ds.test_idx, opts);

    BoundParameters<double> bound = bind_parameters(plan, out.fit.best_params);
    double hmin = std::numeric_limits<double>::infinity(), hsum = 0.0;
    for (size_t idx : ds.test_idx) {
        auto res = forward_bound(plan, bound, ds.inputs[idx], opts);
        hmin = std::min(hmin, res.herald_norm);
        hsum += res.herald_norm;
        std::vector<double> row = ds.inputs[idx];
        switch (ds.kind) {
            case TaskKind::Regression:
                row.push_back(ds.targets[idx][0]);
                row.push_back(res.outputs[0]);
                break;
            case TaskKind::Classification: {
                row.push_back(static_cast<double>(ds.labels[idx]));
                int best = 0;
                for (size_t j = 1; j < res.outputs.size(); ++j)
                    if (res.outputs[j] > res.outputs[best]) best = static_cast<int>(j);
                row.push_back(static_cast<double>(best));
                for (double z : res.outputs) row.push_back(z);
                break;
            }
            case TaskKind::Moments:
                for (const auto& t : ds.moment_targets[idx]) {
                    row.push_back(t.re);
                    row.push_back(t.im);
                }
                for (const auto& m : res.moments) {
                    row.push_back(value_of(m.re));
                    row.push_back(value_of(m.im));
                }
                break;
        }
        out.predictions.push_back(std::move(row));
    }
    out.herald_min = hmin;
    out.herald_mean = hsum / static_cast<double>(ds.test_idx.size());
    return out;
}

std::vector<std::vector<cxd>> cubic_phase_targets(double gamma,
                                                  const std::vector<double>& alphas,
                                                  int cutoff) {
    std::vector<std::vector<cxd>> rows(alphas.size());
    parallel_for(alphas.size(), [&](size_t i) {
        fock::FockState st = fock::FockState::make_vacuum(1, cutoff);
        fock::displace(st, 0, alphas[i]);
        fock::cubic_phase(st, 0, gamma);
        std::vector<cxd> mom;
        for (const auto& z : fock::moments_order4(st, 0)) mom.push_back(from_std(z));
        rows[i] = std::move(mom);
    });
    return rows;
}

Dataset make_synthesis_dataset(double gamma, int samples, int cutoff) {
    if (samples < 2) throw InvalidArgument("make_synthesis_dataset: need >= 2 samples");
    Dataset ds;
    ds.kind = TaskKind::Moments;
    std::vector<double> alphas(samples);
    for (int i = 0; i < samples; ++i)
        alphas[i] = -2.0 + 4.0 * static_cast<double>(i) / (samples - 1);
    ds.moment_targets = cubic_phase_targets(gamma, alphas, cutoff);
    for (double a : alphas) ds.inputs.push_back({a});
    // The coherent inputs are physical amplitudes, not rescaled features; the
    // same grid serves train/val/test.
    for (size_t i = 0; i < ds.inputs.size(); ++i) {
        ds.train_idx.push_back(i);
        ds.val_idx.push_back(i);
        ds.test_idx.push_back(i);
    }
    return ds;
}

ExpectationPlan compile_moment_plan(const QonnArchitecture& arch) {
    return compile_observable_plan(arch, fock::moment_set_ops(0), /*x_readout=*/false);
}

}  // namespace qonn
