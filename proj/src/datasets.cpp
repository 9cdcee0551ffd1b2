#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qonn/training.hpp"

namespace qonn {

namespace {

// Per-coordinate affine maps into the displacement window; targets into the
// readout window. Fitted over the full dataset so all splits share one map.
void rescale_inputs(Dataset& ds) {
    if (ds.inputs.empty()) return;
    size_t dims = ds.inputs[0].size();
    for (size_t d = 0; d < dims; ++d) {
        double lo = ds.inputs[0][d], hi = lo;
        for (const auto& row : ds.inputs) {
            lo = std::min(lo, row[d]);
            hi = std::max(hi, row[d]);
        }
        Rescaler rs = Rescaler::fit(lo, hi, kInputLo, kInputHi);
        for (auto& row : ds.inputs) row[d] = rs.apply(row[d]);
        if (d == 0) ds.input_scale = rs;
    }
}

void rescale_targets(Dataset& ds) {
    double lo = ds.targets[0][0], hi = lo;
    for (const auto& row : ds.targets)
        for (double t : row) {
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    ds.target_scale = Rescaler::fit(lo, hi, kTargetLo, kTargetHi);
    for (auto& row : ds.targets)
        for (double& t : row) t = ds.target_scale.apply(t);
}

// Balanced random train/val pick; the remaining protocol tests on the full set.
void split_classification(Dataset& ds, int train_per_class, int val_per_class, Rng& rng) {
    std::vector<std::vector<size_t>> by_class(ds.n_classes);
    for (size_t i = 0; i < ds.labels.size(); ++i) by_class[ds.labels[i]].push_back(i);
    for (auto& pool : by_class) {
        for (size_t i = pool.size(); i > 1; --i)
            std::swap(pool[i - 1], pool[rng.uniform_int(0, static_cast<int>(i) - 1)]);
        for (int t = 0; t < train_per_class && t < static_cast<int>(pool.size()); ++t)
            ds.train_idx.push_back(pool[t]);
        for (int v = 0; v < val_per_class; ++v) {
            size_t at = train_per_class + v;
            if (at < pool.size()) ds.val_idx.push_back(pool[at]);
        }
    }
    std::sort(ds.train_idx.begin(), ds.train_idx.end());
    std::sort(ds.val_idx.begin(), ds.val_idx.end());
    ds.test_idx.resize(ds.inputs.size());
    std::iota(ds.test_idx.begin(), ds.test_idx.end(), 0);
}

}  // namespace

Dataset make_curve_dataset(const std::function<double(double)>& f, double x_lo, double x_hi,
                           int train_m, double noise, uint64_t seed) {
    if (train_m < 1) throw InvalidArgument("make_curve_dataset: need at least one sample");
    Rng rng(seed);
    Dataset ds;
    ds.kind = TaskKind::Regression;
    for (int i = 0; i < train_m; ++i) {
        double x = rng.uniform(x_lo, x_hi);
        ds.inputs.push_back({x});
        ds.targets.push_back({f(x) + noise * rng.normal()});
        ds.train_idx.push_back(ds.inputs.size() - 1);
    }
    for (int i = 0; i < 50; ++i) {
        double x = rng.uniform(x_lo, x_hi);
        ds.inputs.push_back({x});
        ds.targets.push_back({f(x)});
        ds.val_idx.push_back(ds.inputs.size() - 1);
    }
    for (int i = 0; i < 200; ++i) {
        double x = x_lo + (x_hi - x_lo) * (200 == 1 ? 0.0 : static_cast<double>(i) / 199.0);
        ds.inputs.push_back({x});
        ds.targets.push_back({f(x)});
        ds.test_idx.push_back(ds.inputs.size() - 1);
    }
    rescale_inputs(ds);
    rescale_targets(ds);
    return ds;
}

Dataset make_moons_dataset(int total, double noise, uint64_t seed) {
    if (total < 4) throw InvalidArgument("make_moons_dataset: need at least 4 samples");
    Rng rng(seed);
    Dataset ds;
    ds.kind = TaskKind::Classification;
    ds.n_classes = 2;
    int n_out = total / 2, n_in = total - n_out;
    for (int i = 0; i < n_out; ++i) {
        double t = M_PI * i / std::max(1, n_out - 1);
        ds.inputs.push_back({std::cos(t) + noise * rng.normal(), std::sin(t) + noise * rng.normal()});
        ds.labels.push_back(0);
    }
    for (int i = 0; i < n_in; ++i) {
        double t = M_PI * i / std::max(1, n_in - 1);
        ds.inputs.push_back({1.0 - std::cos(t) + noise * rng.normal(),
                             0.5 - std::sin(t) + noise * rng.normal()});
        ds.labels.push_back(1);
    }
    rescale_inputs(ds);
    split_classification(ds, 50, 25, rng);
    return ds;
}

Dataset make_circles_dataset(int total, double noise, double factor, uint64_t seed) {
    if (total < 4) throw InvalidArgument("make_circles_dataset: need at least 4 samples");
    if (factor <= 0.0 || factor >= 1.0)
        throw InvalidArgument("make_circles_dataset: factor must lie in (0, 1)");
    Rng rng(seed);
    Dataset ds;
    ds.kind = TaskKind::Classification;
    ds.n_classes = 2;
    int n_out = total / 2, n_in = total - n_out;
    for (int i = 0; i < n_out; ++i) {
        double t = 2.0 * M_PI * i / n_out;
        ds.inputs.push_back({std::cos(t) + noise * rng.normal(), std::sin(t) + noise * rng.normal()});
        ds.labels.push_back(0);
    }
    for (int i = 0; i < n_in; ++i) {
        double t = 2.0 * M_PI * i / n_in;
        ds.inputs.push_back({factor * std::cos(t) + noise * rng.normal(),
                             factor * std::sin(t) + noise * rng.normal()});
        ds.labels.push_back(1);
    }
    rescale_inputs(ds);
    split_classification(ds, 50, 25, rng);
    return ds;
}

Dataset load_csv_dataset(const std::string& path, int n_inputs, bool classification) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    Dataset ds;
    ds.kind = classification ? TaskKind::Classification : TaskKind::Regression;
    std::string line;
    size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("bad numeric value in " + path + " at row " + std::to_string(row));
            }
        }
        if (static_cast<int>(vals.size()) != n_inputs + 1)
            throw IoError("expected " + std::to_string(n_inputs + 1) + " columns in " + path +
                          " at row " + std::to_string(row));
        ds.inputs.push_back(std::vector<double>(vals.begin(), vals.begin() + n_inputs));
        if (classification) {
            int label = static_cast<int>(std::lround(vals.back()));
            if (label < 0) throw IoError("negative class label in " + path + " at row " +
                                         std::to_string(row));
            ds.labels.push_back(label);
            ds.n_classes = std::max(ds.n_classes, label + 1);
        } else {
            ds.targets.push_back({vals.back()});
        }
    }
    if (ds.inputs.empty()) throw IoError("dataset file is empty: " + path);
    rescale_inputs(ds);
    if (!classification) rescale_targets(ds);
    // 70/15/15 split in file order; deterministic for a fixed file.
    size_t n = ds.inputs.size();
    for (size_t i = 0; i < n; ++i) {
        if (i < (n * 7) / 10)
            ds.train_idx.push_back(i);
        else if (i < (n * 85) / 100)
            ds.val_idx.push_back(i);
        else
            ds.test_idx.push_back(i);
    }
    if (ds.val_idx.empty()) ds.val_idx = ds.train_idx;
    if (ds.test_idx.empty()) ds.test_idx = ds.val_idx;
    return ds;
}

}  // namespace qonn
