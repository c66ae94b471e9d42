// Time-indexed dataset: observations, optional ground-truth sources, segment
// labels and auxiliary variables. Rows are time points, columns components.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

struct Dataset {
    Tensor x;                   // T x d_obs observations
    Tensor s_true;              // T x d sources, empty if unknown
    std::vector<int> segments;  // per-row labels in {1..n_segments}, empty if none
    int n_segments = 0;         // 0 when segments is empty
    Tensor aux;                 // T x k auxiliary variables, empty if none
    std::uint64_t seed = 0;

    int T() const { return x.rows(); }
    bool has_sources() const { return s_true.size() > 0; }
    bool has_segments() const { return !segments.empty(); }
    bool has_aux() const { return aux.size() > 0; }

    // Checks the cross-field invariants; throws ContractError listing every
    // violation found.
    void validate() const;
};

enum class AuxMode { segment_label, lagged_observation };

// Returns a copy with aux populated: one-hot segment labels (k = n_segments),
// or x(t-1) with the first row dropped from every field.
Dataset attach_auxiliary(const Dataset& ds, AuxMode mode);

// Writes one row per time point with header s1..sd,x1..xd,segment,u1..uk
// (source/segment/aux columns only when present), plus a JSON sidecar at
// csv_path with its extension swapped for .json holding {spec, seed}.
// Numbers are printed with enough digits to round-trip exactly.
void write_dataset_csv(const Dataset& ds, const std::string& csv_path,
                       const nlohmann::json& spec);

// Deterministic shortest-round-trip formatting used by every CSV writer.
std::string format_double(double v);

}  // namespace nlica
