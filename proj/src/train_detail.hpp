// Internal helpers shared by the estimator training loops.
#pragma once

#include <limits>
#include <vector>

#include "nlica/errors.hpp"
#include "nlica/tensor.hpp"

namespace nlica::detail {

inline std::vector<Tensor> copy_params(const std::vector<Tensor*>& params) {
    std::vector<Tensor> out;
    out.reserve(params.size());
    for (const Tensor* p : params) out.push_back(*p);
    return out;
}

inline void restore_params(const std::vector<Tensor*>& params, const std::vector<Tensor>& saved) {
    for (std::size_t i = 0; i < params.size(); ++i) *params[i] = saved[i];
}

// Deterministic 90/10 split: every 10th index is held out.
inline void tail_split(int n, std::vector<int>& train, std::vector<int>& held) {
    train.clear();
    held.clear();
    for (int i = 0; i < n; ++i) {
        (i % 10 == 9 ? held : train).push_back(i);
    }
    if (held.empty()) {  // tiny inputs: hold out the last point
        held.push_back(train.back());
        train.pop_back();
    }
}

// Same split but per segment label, so every class appears in both halves.
inline void stratified_split(const std::vector<int>& segments, std::vector<int>& train,
                             std::vector<int>& held) {
    train.clear();
    held.clear();
    std::vector<int> seen(1, 0);
    for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
        const int seg = segments[i];
        if (seg >= static_cast<int>(seen.size())) seen.resize(seg + 1, 0);
        ((seen[seg]++ % 10 == 9) ? held : train).push_back(i);
    }
    if (held.empty()) {
        held.push_back(train.back());
        train.pop_back();
    }
}

// Tracks the best held-out metric (larger is better) for early stopping.
// With patience = 0 it only records; training always runs to the end and
// keeps the final weights.
struct EarlyStop {
    int patience = 0;
    double best = -std::numeric_limits<double>::infinity();
    int since_best = 0;
    std::vector<Tensor> best_weights;

    // Returns true when training should stop now.
    bool observe(double metric, const std::vector<Tensor*>& params) {
        if (metric > best) {
            best = metric;
            since_best = 0;
            if (patience > 0) best_weights = copy_params(params);
            return false;
        }
        ++since_best;
        return patience > 0 && since_best >= patience;
    }

    void finish(const std::vector<Tensor*>& params) const {
        if (patience > 0 && !best_weights.empty()) restore_params(params, best_weights);
    }
};

}  // namespace nlica::detail
