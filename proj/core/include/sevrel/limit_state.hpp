#pragma once

// Linear limit states g(X) = sum_i c_i X_i + shift over independent inputs,
// and the chunked Monte Carlo engine that summarizes them.
//
// Determinism contract: chunk k draws from RandomStream(masterSeed, k), chunk
// partials are folded in ascending chunk order, and the robust subsample is a
// bottom-k selection on per-index hash keys. A summary therefore depends only
// on (model, sampleCount, masterSeed, chunkSize, caps), never on thread count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sevrel/distributions.hpp"

namespace sevrel {

struct Term {
    std::string name;
    double coefficient;
    DistributionSpec distribution;

    bool operator==(const Term&) const = default;
};

class LimitStateModel {
public:
    // Throws InvalidArgument on an empty term list, duplicate or empty names,
    // or non-finite coefficients/shift.
    explicit LimitStateModel(std::vector<Term> terms, double shift = 0.0);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    double shift() const noexcept { return shift_; }

    LimitStateModel with_shift(double shift) const;

    // sum coefficient * value + shift. Throws InvalidArgument if a term is missing.
    double evaluate(const std::map<std::string, double, std::less<>>& values) const;

    // Closed-form moments of g under independence. Variance is infinite when
    // any term with a nonzero coefficient has infinite variance.
    MomentReport analytic_moments() const;

    bool operator==(const LimitStateModel&) const = default;

private:
    std::vector<Term> terms_;
    double shift_;
};

struct SimulationConfig {
    std::size_t sampleCount = 1'000'000;
    std::uint64_t masterSeed = 1;
    std::size_t chunkSize = 65'536;
    std::size_t failureReservoirCap = 1'000'000;
    std::size_t robustSubsampleCap = 100'000;

    // Throws InvalidArgument unless sampleCount >= chunkSize >= 1 and caps >= 1.
    void validate() const;

    std::size_t chunk_count() const noexcept { return (sampleCount + chunkSize - 1) / chunkSize; }
};

struct ExecutionOptions {
    // 0 selects SEVREL_THREADS when set, else the hardware concurrency.
    unsigned threads = 0;

    unsigned resolved_threads() const;
};

// Streaming count/mean/sum of squared deviations with the pairwise merge of
// Chan, Golub and LeVeque.
class RunningMoments {
public:
    void add(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningMoments& other) noexcept;

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    // Unbiased (n - 1) estimator; 0 when fewer than two values.
    double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct SimulationSummary {
    std::size_t n = 0;
    double meanG = 0.0;
    double varG = 0.0;
    double minG = 0.0;
    double maxG = 0.0;

    std::size_t failureCount = 0;
    // Compensated sum of -g over all failures; exact bookkeeping independent of the cap.
    double deficitSum = 0.0;
    // -g for the first failures in sample order, up to failureReservoirCap.
    std::vector<double> failureDeficits;

    // Uniform subsample of g, stratified by run half: entries [0, robustSplit)
    // come from sample indices below ceil(n/2), the rest from the second half.
    std::vector<double> robustSubsample;
    std::size_t robustSplit = 0;

    RunningMoments firstHalf;
    RunningMoments secondHalf;

    double stdG() const;
    double failure_fraction() const;
};

// Draws g for chunk `chunkIndex` into `out` (out.size() samples).
void generate_chunk(const LimitStateModel& model, std::uint64_t masterSeed, std::uint64_t chunkIndex,
                    std::span<double> out);

// Visits every chunk of g values in ascending chunk order. Chunks are
// generated in parallel batches; the visitor runs on the calling thread.
void for_each_chunk(const LimitStateModel& model, const SimulationConfig& config,
                    const ExecutionOptions& exec,
                    const std::function<void(std::size_t chunkIndex, std::span<const double> g)>& visit);

SimulationSummary simulate(const LimitStateModel& model, const SimulationConfig& config,
                           const ExecutionOptions& exec = {});

// Shift c such that the shifted model fails with the requested probability on
// a dedicated calibration sample of config.sampleCount draws: c = -g_(k) with
// k = ceil(targetPf * n). Throws DomainError for targetPf outside (0, 1) and
// InvalidArgument when targetPf * n < 10.
double calibrate_shift(const LimitStateModel& model, double targetPf, const SimulationConfig& config,
                       const ExecutionOptions& exec = {});

// Seed of the calibration sample drawn by calibrate_shift for a given master seed.
std::uint64_t calibration_seed(std::uint64_t masterSeed);

struct RobustScales {
    double mad;                            // median |g - median(g)|, unscaled
    double iqr;                            // Q3 - Q1 (linear interpolation)
    std::optional<double> conditionalStd;  // std of stored deficits; needs >= 2
};

// Throws InvalidArgument when n < 2.
RobustScales robust_scales(const SimulationSummary& summary);

// Linear-interpolation (type 7) quantile of an unsorted sample.
double sample_quantile(std::vector<double> values, double p);

// Median absolute deviation (unscaled).
double median_absolute_deviation(std::span<const double> values);

// Secondary heavy-tail heuristic: compares sigma_hat / (MAD / 0.6745) between
// the two run halves. `unstable` when the relative drift exceeds 50%.
struct ScaleStability {
    double firstRatio = 0.0;
    double secondRatio = 0.0;
    double drift = 0.0;
    bool unstable = false;
};

ScaleStability scale_stability(const SimulationSummary& summary);

}  // namespace sevrel
