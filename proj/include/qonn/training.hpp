#ifndef QONN_TRAINING_HPP
#define QONN_TRAINING_HPP

#include <functional>
#include <string>
#include <vector>

#include "qonn/model.hpp"
#include "qonn/rng.hpp"

namespace qonn {

// ---------------------------------------------------------------------------
// Losses (templated so the dual-number gradient path flows through them).

template <class R>
R loss_mse(const std::vector<R>& preds, const std::vector<R>& targets) {
    if (preds.empty() || preds.size() != targets.size())
        throw InvalidArgument("loss_mse: non-empty equal-length vectors required");
    R acc{};
    for (size_t i = 0; i < preds.size(); ++i) {
        R d = preds[i] - targets[i];
        acc += d * d;
    }
    return acc / R(static_cast<double>(preds.size()));
}

// Softmax + cross-entropy over raw readouts, log-sum-exp stabilized.
// rows: one raw output vector per sample; labels: class index per sample.
template <class R>
R softmax_crossentropy(const std::vector<std::vector<R>>& rows, const std::vector<int>& labels) {
    using std::exp;
    using std::log;
    if (rows.empty() || rows.size() != labels.size())
        throw InvalidArgument("softmax_crossentropy: rows/labels mismatch");
    R acc{};
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& z = rows[i];
        if (z.size() < 2) throw InvalidArgument("softmax_crossentropy: need >= 2 classes");
        R zmax = z[0];
        for (const R& v : z)
            if (value_of(v) > value_of(zmax)) zmax = v;
        R lse{};
        for (const R& v : z) lse += exp(v - zmax);
        lse = zmax + log(lse);
        acc += lse - z[labels[i]];
    }
    return acc / R(static_cast<double>(rows.size()));
}

// Moment-set MSE: squared modulus of complex moment differences, summed over
// the set, averaged over samples. Rows must share one moment-set size.
template <class R>
R loss_moment_mse(const std::vector<std::vector<Cx<R>>>& pred_rows,
                  const std::vector<std::vector<Cx<double>>>& target_rows) {
    if (pred_rows.empty() || pred_rows.size() != target_rows.size())
        throw InvalidArgument("loss_moment_mse: row count mismatch");
    R acc{};
    for (size_t i = 0; i < pred_rows.size(); ++i) {
        if (pred_rows[i].size() != target_rows[i].size())
            throw InvalidArgument("loss_moment_mse: moment-set size mismatch at row " +
                                  std::to_string(i));
        for (size_t m = 0; m < pred_rows[i].size(); ++m) {
            Cx<R> d = pred_rows[i][m] - Cx<R>(R(target_rows[i][m].re), R(target_rows[i][m].im));
            acc += norm_sq(d);
        }
    }
    return acc / R(static_cast<double>(pred_rows.size()));
}

// ---------------------------------------------------------------------------
// Objectives and gradients.

// A scalar objective evaluable on plain doubles and (optionally) on dual
// numbers for forward-mode differentiation.
struct Objective {
    std::function<double(const std::vector<double>&)> value;
    std::function<Dual(const std::vector<Dual>&)> value_dual;  // empty: central FD only
};

template <class F>
Objective make_objective(F f) {
    return {[f](const std::vector<double>& p) { return f(p); },
            [f](const std::vector<Dual>& p) { return f(p); }};
}

// Central finite differences with relative step h (per-coordinate step
// h * max(1, |p_i|)). Reports the offending coordinate on non-finite probes.
std::vector<double> grad_central(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& params, double h_rel);

// Forward-mode dual-number gradient: one seeded pass per coordinate, exact to
// machine precision.
std::vector<double> grad_forward(const Objective& obj, const std::vector<double>& params);

enum class GradMode { Forward, Central };

std::vector<double> gradient(const Objective& obj, const std::vector<double>& params,
                             GradMode mode, double h_rel);

// ---------------------------------------------------------------------------
// Datasets.

enum class TaskKind { Regression, Classification, Moments };

struct Dataset {
    TaskKind kind = TaskKind::Regression;
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;          // regression targets (rescaled space)
    std::vector<int> labels;                           // classification
    std::vector<std::vector<cxd>> moment_targets;      // moment matching
    std::vector<size_t> train_idx, val_idx, test_idx;
    Rescaler input_scale;   // applied per input coordinate
    Rescaler target_scale;  // applied to regression targets
    int n_classes = 0;
};

// Noisy samples of a scalar curve: `train_m` uniform noisy training samples,
// 50 noiseless random validation samples, 200 noiseless linearly spaced test
// samples. Inputs rescaled into the displacement window, targets into the
// readout window.
Dataset make_curve_dataset(const std::function<double(double)>& f, double x_lo, double x_hi,
                           int train_m, double noise, uint64_t seed);

// Two interleaved half-circles with Gaussian coordinate noise; balanced
// 100-sample train / 50-sample validation splits, full set as test.
Dataset make_moons_dataset(int total, double noise, uint64_t seed);

// Two concentric circles (inner radius = factor) with Gaussian noise.
Dataset make_circles_dataset(int total, double noise, double factor, uint64_t seed);

// inputs;label CSV (classification) or inputs;target CSV (regression).
Dataset load_csv_dataset(const std::string& path, int n_inputs, bool classification);

// ---------------------------------------------------------------------------
// Fitting.

struct TrainConfig {
    uint64_t seed = 1;
    int restarts = 8;
    int max_iters = 400;
    double fd_step = 1e-5;  // relative finite-difference step, in [1e-8, 1e-4]
    double tolerance = 1e-10;
    GradMode grad_mode = GradMode::Forward;
    bool deterministic = true;
    double r_bound = kSqueezeBound;
    int lbfgs_memory = 10;

    void validate() const {
        if (restarts < 1) throw InvalidArgument("TrainConfig: restarts must be >= 1");
        if (fd_step < 1e-8 || fd_step > 1e-4)
            throw InvalidArgument("TrainConfig: fd_step must lie in [1e-8, 1e-4]");
        if (max_iters < 1) throw InvalidArgument("TrainConfig: max_iters must be >= 1");
    }
};

struct TraceRecord {
    int restart = 0;
    int iter = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double wall_s = 0.0;
};

struct FitResult {
    std::vector<double> best_params;
    double best_val_loss = 0.0;
    double best_train_loss = 0.0;
    int best_restart = -1;
    std::vector<TraceRecord> trace;
};

// Box-constrained L-BFGS with projected backtracking line search.
struct LbfgsOptions {
    int max_iters = 400;
    double tolerance = 1e-10;
    int memory = 10;
    double armijo_c1 = 1e-4;
    int max_line_steps = 40;
};

struct LbfgsReport {
    std::vector<double> x;
    double f = 0.0;
    int iters = 0;
    bool converged = false;
};

LbfgsReport lbfgs_minimize(const Objective& obj, std::vector<double> x0,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           GradMode mode, double fd_step, const LbfgsOptions& opts,
                           const std::function<void(int, double, const std::vector<double>&)>&
                               on_iter = nullptr);

// Multi-restart fit: seeded uniform initialization (squeezings in [-1, 1],
// everything else in [-0.5, 0.5]), best-by-validation selection.
FitResult fit(const ExpectationPlan& plan, const Objective& train_obj,
              const std::function<double(const std::vector<double>&)>& val_loss,
              const TrainConfig& cfg);

}  // namespace qonn

#endif
