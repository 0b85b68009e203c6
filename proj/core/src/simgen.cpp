#include "ppfdr/simgen.hpp"

#include "ppfdr/error.hpp"
#include "ppfdr/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ppfdr {

double LinearRamp::at(std::size_t t, std::size_t t_len) const {
    if (t_len <= 1) {
        return start;
    }
    double fraction = static_cast<double>(t) / static_cast<double>(t_len - 1);
    return start + (end - start) * fraction;
}

std::string to_string(OutlierMode mode) {
    return mode == OutlierMode::recentered ? "recentered" : "literal";
}

OutlierMode parse_outlier_mode(const std::string& name) {
    if (name == "recentered") {
        return OutlierMode::recentered;
    }
    if (name == "literal") {
        return OutlierMode::literal;
    }
    throw InvalidInput("unknown outlier mode '" + name + "' (expected recentered or literal)");
}

void SimSpec::validate() const {
    detail::require(m >= 1, "SimSpec: m must be at least 1");
    detail::require(t_len >= 2, "SimSpec: t_len must be at least 2");
    detail::require(lag >= 1 && lag < t_len, "SimSpec: lag must satisfy 1 <= lag < t_len");
    detail::require(outlier_rate >= 0.0 && outlier_rate < 1.0, "SimSpec: outlier_rate must lie in [0, 1)");
    detail::require(std::isfinite(mean.base_amplitude) && std::isfinite(mean.amplitude_growth) &&
                        std::isfinite(mean.frequency),
                    "SimSpec: mean signal parameters must be finite");
    detail::require(sd_inlier.start > 0.0 && sd_inlier.end > 0.0, "SimSpec: inlier sd ramp must be positive");
    detail::require(sd_outlier.start >= 0.0 && sd_outlier.end >= 0.0,
                    "SimSpec: outlier sd ramp must be nonnegative");
}

SimSignal gen_signal(const SimSpec& spec) {
    spec.validate();
    SimSignal signal;
    signal.mu.resize(spec.t_len);
    signal.sd_in.resize(spec.t_len);
    signal.sd_out.resize(spec.t_len);
    double horizon = static_cast<double>(spec.t_len);
    for (std::size_t t = 0; t < spec.t_len; ++t) {
        double time = static_cast<double>(t);
        double amplitude = spec.mean.base_amplitude + spec.mean.amplitude_growth * time / horizon;
        signal.mu[t] = amplitude * std::sin(2.0 * std::numbers::pi * spec.mean.frequency * time / horizon);
        signal.sd_in[t] = spec.sd_inlier.at(t, spec.t_len);
        signal.sd_out[t] = spec.sd_outlier.at(t, spec.t_len);
    }
    return signal;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over a mix of both keys
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SimData gen_data(const SimSpec& spec, unsigned threads) {
    SimData data;
    data.signal = gen_signal(spec);
    data.values = Matrix<double>(spec.m, spec.t_len);
    data.truth = Matrix<std::uint8_t>(spec.m, spec.t_len);
    const SimSignal& signal = data.signal;

    parallel_for(spec.m, threads, [&](std::size_t j) {
        std::mt19937_64 rng(substream_seed(spec.seed, j));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> standard(0.0, 1.0);
        for (std::size_t t = 0; t < spec.t_len; ++t) {
            // Three draws per cell regardless of outcome keep the stream aligned.
            bool outlier = unit(rng) < spec.outlier_rate;
            double inlier = signal.mu[t] + signal.sd_in[t] * standard(rng);
            double extra = signal.sd_out[t] * standard(rng);
            double value = inlier;
            if (outlier) {
                value += extra;
                if (spec.outlier_mode == OutlierMode::literal) {
                    value += signal.mu[t];
                }
            }
            data.values(j, t) = value;
            data.truth(j, t) = outlier ? 1 : 0;
        }
    });
    return data;
}

} // namespace ppfdr
