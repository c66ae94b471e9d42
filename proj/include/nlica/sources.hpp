// Source-signal generators: segment-wise variance modulation, stationary
// autoregression, and autoregression with nonstationary innovation scale.
// All are pure functions of (spec, seed); components use independent
// deterministic substreams so they are independent by construction.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlica/dataset.hpp"
#include "nlica/tensor.hpp"

namespace nlica {

// --- Nonstationary (segment-wise variance) sources -------------------------

struct NonstationarySpec {
    int d = 2;
    int n_segments = 2;
    int points_per_segment = 512;
    // Per-segment modulation lambda_i(tau), drawn log-uniform from this range;
    // within segment tau component i is zero-mean Gaussian with standard
    // deviation lambda_i(tau).
    double lambda_min = 0.2;
    double lambda_max = 2.0;

    void validate() const;
};

// Fills segments with labels 1..n_segments. x starts equal to s_true; mixing
// is applied separately. If lambda_out is given it receives the sampled
// modulation as an n_segments x d tensor.
Dataset generate_nonstationary_sources(const NonstationarySpec& spec, std::uint64_t seed,
                                       Tensor* lambda_out = nullptr);

// --- Autoregressive sources ------------------------------------------------

enum class ArFunction {
    linear,            // r(s) = rho * s, |rho| < 1
    tanh_saturating,   // r(s) = amplitude * tanh(gain * s), bounded
    cubic_contraction  // r(s) = rho * s^3 / (1 + s^2), contraction iff |rho| < 8/9
};

enum class Innovation { gaussian, laplace, uniform };

struct ArComponent {
    ArFunction r = ArFunction::linear;
    double rho = 0.8;        // linear / cubic_contraction coefficient
    double amplitude = 0.8;  // tanh_saturating output scale
    double gain = 1.0;       // tanh_saturating input scale
    Innovation innovation = Innovation::gaussian;
    double scale = 1.0;  // innovation standard deviation (laplace: b = scale/sqrt(2))
};

struct ArSpec {
    int d = 2;
    int T = 1024;
    std::vector<ArComponent> components;  // exactly d entries

    // Convenience: d copies of the same component recursion.
    static ArSpec uniform(int d, int T, const ArComponent& c);
    void validate() const;
};

// Each component follows s_i(t) = r_i(s_i(t-1)) + n_i(t) from initial state 0
// with 100 burn-in steps discarded. Throws NumericError naming the component
// if a trajectory leaves [-1e6, 1e6].
Dataset generate_ar_sources(const ArSpec& spec, std::uint64_t seed);

// --- Autoregression with nonstationary innovation scale ---------------------

struct NonstatArSpec {
    ArSpec ar;
    int sigma_segment_length = 256;
    // If sigma_cycle is nonempty, segment tau of every component uses
    // sigma_cycle[tau mod cycle length] deterministically (no randomness
    // consumed). Otherwise each (component, segment) draws sigma log-uniform
    // from [sigma_min, sigma_max] on a stream separate from the innovations.
    std::vector<double> sigma_cycle;
    double sigma_min = 0.25;
    double sigma_max = 4.0;

    void validate() const;
};

// As generate_ar_sources with innovations scaled by sigma_i(t); segments
// records the sigma segmentation. With sigma identically 1 the output equals
// generate_ar_sources on the same spec and seed bit for bit. If sigma_out is
// given it receives the realized scales as an n_segments x d tensor.
Dataset generate_nonstat_ar_sources(const NonstatArSpec& spec, std::uint64_t seed,
                                    Tensor* sigma_out = nullptr);

}  // namespace nlica
