#include "nlica/sources.hpp"

#include <cmath>

#include "nlica/errors.hpp"
#include "nlica/rng.hpp"

namespace nlica {
namespace {

void fail(const std::vector<std::string>& problems, const char* what) {
    if (problems.empty()) return;
    std::string msg = std::string("invalid ") + what + ":";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
}

double ar_map(const ArComponent& c, double s) {
    switch (c.r) {
        case ArFunction::linear:
            return c.rho * s;
        case ArFunction::tanh_saturating:
            return c.amplitude * std::tanh(c.gain * s);
        case ArFunction::cubic_contraction:
            return c.rho * s * s * s / (1.0 + s * s);
    }
    throw ContractError("ar_map: unknown function");
}

double draw_innovation(const ArComponent& c, Rng& rng) {
    switch (c.innovation) {
        case Innovation::gaussian:
            return c.scale * rng.normal();
        case Innovation::laplace:
            // Laplace(b) has sd b*sqrt(2); keep `scale` meaning the sd.
            return rng.laplace(c.scale / std::sqrt(2.0));
        case Innovation::uniform:
            // Centered uniform with sd `scale`.
            return rng.uniform(-c.scale * std::sqrt(3.0), c.scale * std::sqrt(3.0));
    }
    throw ContractError("draw_innovation: unknown innovation");
}

constexpr int kBurnIn = 100;
constexpr double kDivergence = 1e6;

// Shared AR recursion; sigma_per_t scales the innovation at each retained
// step (empty means 1 throughout), burn-in steps use sigma_burn_in.
void run_ar_component(const ArComponent& c, int component_index, int T, Rng& rng,
                      const std::vector<double>& sigma_per_t, double sigma_burn_in,
                      Tensor& out, int col) {
    double s = 0.0;
    for (int t = 0; t < kBurnIn; ++t) {
        s = ar_map(c, s) + sigma_burn_in * draw_innovation(c, rng);
        if (std::abs(s) > kDivergence)
            throw NumericError("ar component " + std::to_string(component_index + 1) +
                               " diverged during burn-in (|s| > 1e6)");
    }
    for (int t = 0; t < T; ++t) {
        const double sigma = sigma_per_t.empty() ? 1.0 : sigma_per_t[static_cast<std::size_t>(t)];
        s = ar_map(c, s) + sigma * draw_innovation(c, rng);
        if (std::abs(s) > kDivergence)
            throw NumericError("ar component " + std::to_string(component_index + 1) +
                               " diverged at t = " + std::to_string(t) + " (|s| > 1e6)");
        out(t, col) = s;
    }
}

}  // namespace

// --- Nonstationary (segment-wise variance) sources -------------------------

void NonstationarySpec::validate() const {
    std::vector<std::string> problems;
    if (d < 1) problems.push_back("d must be >= 1, got " + std::to_string(d));
    if (n_segments < 2)
        problems.push_back("n_segments must be >= 2, got " + std::to_string(n_segments));
    if (points_per_segment < 1)
        problems.push_back("points_per_segment must be >= 1, got " +
                           std::to_string(points_per_segment));
    if (!(lambda_min > 0.0))
        problems.push_back("lambda_min must be > 0, got " + std::to_string(lambda_min));
    if (!(lambda_max >= lambda_min)) problems.push_back("lambda_max must be >= lambda_min");
    fail(problems, "NonstationarySpec");
}

Dataset generate_nonstationary_sources(const NonstationarySpec& spec, std::uint64_t seed,
                                       Tensor* lambda_out) {
    spec.validate();
    const int T = spec.n_segments * spec.points_per_segment;
    Dataset ds;
    ds.seed = seed;
    ds.s_true = Tensor::zeros(T, spec.d);
    ds.segments.resize(static_cast<std::size_t>(T));
    ds.n_segments = spec.n_segments;
    Tensor lambda = Tensor::zeros(spec.n_segments, spec.d);

    for (int i = 0; i < spec.d; ++i) {
        // Separate substreams per component: one for the modulation sequence,
        // one for the samples, so lambda draws across components stay
        // independent and sample counts cannot leak between streams.
        Rng lam_rng = Rng::stream(seed, 2 * static_cast<std::uint64_t>(i));
        Rng smp_rng = Rng::stream(seed, 2 * static_cast<std::uint64_t>(i) + 1);
        for (int seg = 0; seg < spec.n_segments; ++seg) {
            const double lam = lam_rng.log_uniform(spec.lambda_min, spec.lambda_max);
            lambda(seg, i) = lam;
            for (int t = 0; t < spec.points_per_segment; ++t) {
                const int row = seg * spec.points_per_segment + t;
                ds.s_true(row, i) = lam * smp_rng.normal();
            }
        }
    }
    for (int seg = 0; seg < spec.n_segments; ++seg)
        for (int t = 0; t < spec.points_per_segment; ++t)
            ds.segments[static_cast<std::size_t>(seg * spec.points_per_segment + t)] = seg + 1;

    ds.x = ds.s_true;
    if (lambda_out) *lambda_out = lambda;
    ds.validate();
    return ds;
}

// --- Autoregressive sources ------------------------------------------------

ArSpec ArSpec::uniform(int d, int T, const ArComponent& c) {
    ArSpec spec;
    spec.d = d;
    spec.T = T;
    spec.components.assign(static_cast<std::size_t>(d), c);
    return spec;
}

void ArSpec::validate() const {
    std::vector<std::string> problems;
    if (d < 1) problems.push_back("d must be >= 1, got " + std::to_string(d));
    if (T < 1) problems.push_back("T must be >= 1, got " + std::to_string(T));
    if (static_cast<int>(components.size()) != d)
        problems.push_back("need exactly d = " + std::to_string(d) + " components, got " +
                           std::to_string(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) {
        const ArComponent& c = components[i];
        const std::string who = "component " + std::to_string(i + 1);
        if (c.r == ArFunction::linear && !(std::abs(c.rho) < 1.0))
            problems.push_back(who + ": linear recursion needs |rho| < 1, got " +
                               std::to_string(c.rho));
        // sup |r'| = 1.125 |rho| for s^3/(1+s^2), so |rho| < 8/9 contracts.
        if (c.r == ArFunction::cubic_contraction && !(std::abs(c.rho) < 8.0 / 9.0))
            problems.push_back(who + ": cubic recursion needs |rho| < 8/9, got " +
                               std::to_string(c.rho));
        if (c.r == ArFunction::tanh_saturating && !(c.amplitude > 0.0 && c.gain > 0.0))
            problems.push_back(who + ": tanh recursion needs amplitude > 0 and gain > 0");
        if (!(c.scale > 0.0))
            problems.push_back(who + ": innovation scale must be > 0, got " +
                               std::to_string(c.scale));
    }
    fail(problems, "ArSpec");
}

Dataset generate_ar_sources(const ArSpec& spec, std::uint64_t seed) {
    spec.validate();
    Dataset ds;
    ds.seed = seed;
    ds.s_true = Tensor::zeros(spec.T, spec.d);
    for (int i = 0; i < spec.d; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        run_ar_component(spec.components[static_cast<std::size_t>(i)], i, spec.T, rng, {}, 1.0,
                         ds.s_true, i);
    }
    ds.x = ds.s_true;
    ds.validate();
    return ds;
}

// --- Autoregression with nonstationary innovation scale ---------------------

void NonstatArSpec::validate() const {
    ar.validate();
    std::vector<std::string> problems;
    if (sigma_segment_length < 1)
        problems.push_back("sigma_segment_length must be >= 1, got " +
                           std::to_string(sigma_segment_length));
    if (sigma_segment_length > ar.T)
        problems.push_back("sigma_segment_length exceeds T");
    for (std::size_t k = 0; k < sigma_cycle.size(); ++k)
        if (!(sigma_cycle[k] > 0.0))
            problems.push_back("sigma_cycle[" + std::to_string(k) + "] must be > 0");
    if (sigma_cycle.empty()) {
        if (!(sigma_min > 0.0))
            problems.push_back("sigma_min must be > 0, got " + std::to_string(sigma_min));
        if (!(sigma_max >= sigma_min)) problems.push_back("sigma_max must be >= sigma_min");
    }
    fail(problems, "NonstatArSpec");
}

Dataset generate_nonstat_ar_sources(const NonstatArSpec& spec, std::uint64_t seed,
                                    Tensor* sigma_out) {
    spec.validate();
    const int T = spec.ar.T;
    const int n_segments = (T + spec.sigma_segment_length - 1) / spec.sigma_segment_length;

    // Realize sigma_i(tau) first. The modulation streams are disjoint from
    // the innovation streams (offset by d) so the innovation draws match
    // generate_ar_sources exactly; a deterministic cycle consumes no
    // randomness at all.
    Tensor sigma = Tensor::zeros(n_segments, spec.ar.d);
    for (int i = 0; i < spec.ar.d; ++i) {
        if (spec.sigma_cycle.empty()) {
            Rng sig_rng =
                Rng::stream(seed, static_cast<std::uint64_t>(spec.ar.d + i));
            for (int seg = 0; seg < n_segments; ++seg)
                sigma(seg, i) = sig_rng.log_uniform(spec.sigma_min, spec.sigma_max);
        } else {
            for (int seg = 0; seg < n_segments; ++seg)
                sigma(seg, i) =
                    spec.sigma_cycle[static_cast<std::size_t>(seg) % spec.sigma_cycle.size()];
        }
    }

    Dataset ds;
    ds.seed = seed;
    ds.s_true = Tensor::zeros(T, spec.ar.d);
    ds.segments.resize(static_cast<std::size_t>(T));
    ds.n_segments = n_segments;
    for (int t = 0; t < T; ++t)
        ds.segments[static_cast<std::size_t>(t)] = t / spec.sigma_segment_length + 1;

    std::vector<double> sigma_per_t(static_cast<std::size_t>(T));
    for (int i = 0; i < spec.ar.d; ++i) {
        for (int t = 0; t < T; ++t)
            sigma_per_t[static_cast<std::size_t>(t)] = sigma(t / spec.sigma_segment_length, i);
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        run_ar_component(spec.ar.components[static_cast<std::size_t>(i)], i, T, rng, sigma_per_t,
                         sigma(0, i), ds.s_true, i);
    }
    ds.x = ds.s_true;
    if (sigma_out) *sigma_out = sigma;
    ds.validate();
    return ds;
}

}  // namespace nlica
