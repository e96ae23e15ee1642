#include "sevrel/limit_state.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <string_view>
#include <thread>

#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"

namespace sevrel {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void merge(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Keyed {
    std::uint64_t key;
    double value;
};

// Keeps the `cap` entries with the smallest keys seen so far.
class BottomK {
public:
    explicit BottomK(std::size_t cap) : cap_(cap) {}

    void offer(std::uint64_t key, double value) {
        entries_.push_back({key, value});
        if (entries_.size() >= 2 * cap_ + 1024) shrink();
    }

    std::vector<double> finish() {
        shrink();
        std::sort(entries_.begin(), entries_.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
        std::vector<double> out;
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.value);
        return out;
    }

private:
    void shrink() {
        if (entries_.size() <= cap_) return;
        std::nth_element(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(cap_), entries_.end(),
                         [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
        entries_.resize(cap_);
    }

    std::size_t cap_;
    std::vector<Keyed> entries_;
};

unsigned threads_from_env() {
    const char* raw = std::getenv("SEVREL_THREADS");
    if (raw == nullptr) return 0;
    unsigned value = 0;
    const std::string_view text(raw);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return 0;
    return value;
}

}  // namespace

LimitStateModel::LimitStateModel(std::vector<Term> terms, double shift) : terms_(std::move(terms)), shift_(shift) {
    if (terms_.empty()) throw InvalidArgument("limit state needs at least one term");
    if (!std::isfinite(shift_)) throw InvalidArgument("limit state shift must be finite");
    std::set<std::string, std::less<>> names;
    for (const auto& t : terms_) {
        if (t.name.empty()) throw InvalidArgument("limit state term names must be non-empty");
        if (!names.insert(t.name).second) throw InvalidArgument("duplicate limit state term '" + t.name + "'");
        if (!std::isfinite(t.coefficient)) {
            throw InvalidArgument("coefficient of term '" + t.name + "' must be finite");
        }
    }
}

LimitStateModel LimitStateModel::with_shift(double shift) const { return LimitStateModel(terms_, shift); }

double LimitStateModel::evaluate(const std::map<std::string, double, std::less<>>& values) const {
    double g = shift_;
    for (const auto& t : terms_) {
        const auto it = values.find(t.name);
        if (it == values.end()) throw InvalidArgument("missing value for input '" + t.name + "'");
        g += t.coefficient * it->second;
    }
    return g;
}

MomentReport LimitStateModel::analytic_moments() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    double mean = shift_;
    double variance = 0.0;
    bool finite = true;
    bool meanFinite = true;
    for (const auto& t : terms_) {
        if (t.coefficient == 0.0) continue;
        const MomentReport m = moments(t.distribution);
        meanFinite = meanFinite && std::isfinite(m.mean);
        finite = finite && m.varianceFinite;
        mean += t.coefficient * m.mean;
        variance += t.coefficient * t.coefficient * m.variance;
    }
    if (!meanFinite) return {inf, inf, false};
    if (!finite) return {mean, inf, false};
    return {mean, variance, true};
}

void SimulationConfig::validate() const {
    if (chunkSize < 1) throw InvalidArgument("chunkSize must be >= 1");
    if (sampleCount < chunkSize) throw InvalidArgument("sampleCount must be >= chunkSize");
    if (failureReservoirCap < 1) throw InvalidArgument("failureReservoirCap must be >= 1");
    if (robustSubsampleCap < 1) throw InvalidArgument("robustSubsampleCap must be >= 1");
}

unsigned ExecutionOptions::resolved_threads() const {
    unsigned t = threads;
    if (t == 0) t = threads_from_env();
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return t;
}

void RunningMoments::merge(const RunningMoments& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double total = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    n_ += other.n_;
}

double SimulationSummary::stdG() const { return std::sqrt(varG); }

double SimulationSummary::failure_fraction() const {
    return n == 0 ? 0.0 : static_cast<double>(failureCount) / static_cast<double>(n);
}

void generate_chunk(const LimitStateModel& model, std::uint64_t masterSeed, std::uint64_t chunkIndex,
                    std::span<double> out) {
    RandomStream stream(masterSeed, chunkIndex);
    const auto& terms = model.terms();
    const double shift = model.shift();
    for (double& g : out) {
        double value = shift;
        for (const auto& t : terms) value += t.coefficient * draw(t.distribution, stream);
        g = value;
    }
}

void for_each_chunk(const LimitStateModel& model, const SimulationConfig& config, const ExecutionOptions& exec,
                    const std::function<void(std::size_t, std::span<const double>)>& visit) {
    config.validate();
    const std::size_t chunks = config.chunk_count();
    const std::size_t threads = std::min<std::size_t>(exec.resolved_threads(), chunks);
    std::vector<std::vector<double>> buffers(threads, std::vector<double>(config.chunkSize));

    auto chunk_length = [&](std::size_t index) {
        const std::size_t begin = index * config.chunkSize;
        return std::min(config.chunkSize, config.sampleCount - begin);
    };

    for (std::size_t batch = 0; batch < chunks; batch += threads) {
        const std::size_t width = std::min(threads, chunks - batch);
        if (width == 1) {
            std::span<double> out(buffers[0].data(), chunk_length(batch));
            generate_chunk(model, config.masterSeed, batch, out);
        } else {
            std::vector<std::jthread> workers;
            workers.reserve(width);
            for (std::size_t j = 0; j < width; ++j) {
                workers.emplace_back([&, j] {
                    std::span<double> out(buffers[j].data(), chunk_length(batch + j));
                    generate_chunk(model, config.masterSeed, batch + j, out);
                });
            }
        }
        for (std::size_t j = 0; j < width; ++j) {
            visit(batch + j, std::span<const double>(buffers[j].data(), chunk_length(batch + j)));
        }
    }
}

SimulationSummary simulate(const LimitStateModel& model, const SimulationConfig& config,
                           const ExecutionOptions& exec) {
    config.validate();
    SimulationSummary summary;
    summary.n = config.sampleCount;
    summary.minG = std::numeric_limits<double>::infinity();
    summary.maxG = -std::numeric_limits<double>::infinity();

    const std::size_t halfBoundary = (config.sampleCount + 1) / 2;
    const std::size_t firstCap = std::max<std::size_t>(1, config.robustSubsampleCap / 2);
    const std::size_t secondCap = std::max<std::size_t>(1, config.robustSubsampleCap - firstCap);
    BottomK firstSample(firstCap);
    BottomK secondSample(secondCap);
    const std::uint64_t keySalt = splitmix64(config.masterSeed ^ 0x726f627573747375ULL);

    RunningMoments all;
    CompensatedSum deficits;
    summary.failureDeficits.reserve(std::min<std::size_t>(config.failureReservoirCap, 1 << 16));

    for_each_chunk(model, config, exec, [&](std::size_t chunkIndex, std::span<const double> g) {
        const std::size_t base = chunkIndex * config.chunkSize;
        RunningMoments chunkMoments;
        RunningMoments chunkFirst;
        RunningMoments chunkSecond;
        CompensatedSum chunkDeficits;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g[i];
            const std::size_t index = base + i;
            chunkMoments.add(x);
            summary.minG = std::min(summary.minG, x);
            summary.maxG = std::max(summary.maxG, x);
            const std::uint64_t key = splitmix64(keySalt + index);
            if (index < halfBoundary) {
                chunkFirst.add(x);
                firstSample.offer(key, x);
            } else {
                chunkSecond.add(x);
                secondSample.offer(key, x);
            }
            if (x < 0.0) {
                ++summary.failureCount;
                chunkDeficits.add(-x);
                if (summary.failureDeficits.size() < config.failureReservoirCap) {
                    summary.failureDeficits.push_back(-x);
                }
            }
        }
        all.merge(chunkMoments);
        summary.firstHalf.merge(chunkFirst);
        summary.secondHalf.merge(chunkSecond);
        deficits.merge(chunkDeficits);
    });

    summary.meanG = all.mean();
    summary.varG = all.variance();
    summary.deficitSum = deficits.value();
    summary.robustSubsample = firstSample.finish();
    summary.robustSplit = summary.robustSubsample.size();
    const std::vector<double> second = secondSample.finish();
    summary.robustSubsample.insert(summary.robustSubsample.end(), second.begin(), second.end());
    return summary;
}

std::uint64_t calibration_seed(std::uint64_t masterSeed) { return splitmix64(masterSeed ^ 0x63616c6962726174ULL); }

double calibrate_shift(const LimitStateModel& model, double targetPf, const SimulationConfig& config,
                       const ExecutionOptions& exec) {
    if (!(targetPf > 0.0 && targetPf < 1.0)) {
        throw DomainError("target failure probability must lie in (0, 1), got " + format_general(targetPf, 17));
    }
    config.validate();
    const double n = static_cast<double>(config.sampleCount);
    if (targetPf * n < 10.0) {
        throw InvalidArgument("target failure probability " + format_general(targetPf, 6) +
                              " is too far in the tail for " + std::to_string(config.sampleCount) +
                              " calibration samples (need targetPf * n >= 10)");
    }

    SimulationConfig calibration = config;
    calibration.masterSeed = calibration_seed(config.masterSeed);
    std::vector<double> values;
    values.reserve(config.sampleCount);
    for_each_chunk(model.with_shift(0.0), calibration, exec,
                   [&](std::size_t, std::span<const double> g) { values.insert(values.end(), g.begin(), g.end()); });

    // ceil with a guard against products like 0.01 * 1e6 = 10000.000000000002.
    auto k = static_cast<std::size_t>(std::ceil(targetPf * n * (1.0 - 1e-12)));
    k = std::clamp<std::size_t>(k, 1, values.size());
    auto kth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(values.begin(), kth, values.end());
    return -*kth;
}

double sample_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample quantile requires p in [0, 1]");
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    auto loIt = values.begin() + static_cast<std::ptrdiff_t>(lo);
    std::nth_element(values.begin(), loIt, values.end());
    const double a = *loIt;
    if (hi == lo) return a;
    const double b = *std::min_element(loIt + 1, values.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
}

double median_absolute_deviation(std::span<const double> values) {
    std::vector<double> copy(values.begin(), values.end());
    const double median = sample_quantile(copy, 0.5);
    for (double& v : copy) v = std::abs(v - median);
    return sample_quantile(std::move(copy), 0.5);
}

RobustScales robust_scales(const SimulationSummary& summary) {
    if (summary.n < 2 || summary.robustSubsample.size() < 2) {
        throw InvalidArgument("robust scales need at least two samples");
    }
    RobustScales scales{};
    scales.mad = median_absolute_deviation(summary.robustSubsample);
    scales.iqr = sample_quantile(summary.robustSubsample, 0.75) - sample_quantile(summary.robustSubsample, 0.25);
    if (summary.failureDeficits.size() >= 2) {
        RunningMoments m;
        for (double d : summary.failureDeficits) m.add(d);
        scales.conditionalStd = std::sqrt(m.variance());
    }
    return scales;
}

ScaleStability scale_stability(const SimulationSummary& summary) {
    ScaleStability out;
    const std::span<const double> all(summary.robustSubsample);
    const auto first = all.first(summary.robustSplit);
    const auto second = all.subspan(summary.robustSplit);
    if (first.size() < 2 || second.size() < 2) return out;
    constexpr double kMadToSigma = 0.6744897501960817;
    const double madFirst = median_absolute_deviation(first);
    const double madSecond = median_absolute_deviation(second);
    if (!(madFirst > 0.0) || !(madSecond > 0.0)) return out;
    out.firstRatio = std::sqrt(summary.firstHalf.variance()) / (madFirst / kMadToSigma);
    out.secondRatio = std::sqrt(summary.secondHalf.variance()) / (madSecond / kMadToSigma);
    const double lower = std::min(out.firstRatio, out.secondRatio);
    if (lower > 0.0) out.drift = std::abs(out.firstRatio - out.secondRatio) / lower;
    out.unstable = out.drift > 0.5;
    return out;
}

}  // namespace sevrel
