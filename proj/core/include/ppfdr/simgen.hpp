#pragma once

// Nonstationary panel simulation: m series share a sinusoidal mean whose
// amplitude grows linearly in time, inlier and outlier noise levels ramp
// linearly, and a Bernoulli fraction of cells carry an extra outlier draw.

#include "ppfdr/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ppfdr {

//! mu_t = (base_amplitude + amplitude_growth t / T) sin(2 pi frequency t / T)
struct MeanSignalParams {
    double base_amplitude = 1.0;
    double amplitude_growth = 4.0;
    double frequency = 4.0;

    friend bool operator==(const MeanSignalParams&, const MeanSignalParams&) = default;
};

//! Linear ramp from start (t = 0) to end (t = T - 1).
struct LinearRamp {
    double start = 1.0;
    double end = 1.0;

    double at(std::size_t t, std::size_t t_len) const;

    friend bool operator==(const LinearRamp&, const LinearRamp&) = default;
};

enum class OutlierMode {
    //! outlier = N(mu, sd_in) + N(mu, sd_out) - mu, marginal mean mu.
    recentered,
    //! outlier = N(mu, sd_in) + N(mu, sd_out), marginal mean 2 mu.
    literal,
};

std::string to_string(OutlierMode mode);
OutlierMode parse_outlier_mode(const std::string& name);

struct SimSpec {
    std::size_t m = 1000;
    std::size_t t_len = 2000;
    std::size_t lag = 30;
    double outlier_rate = 0.025;
    MeanSignalParams mean;
    LinearRamp sd_inlier{0.5, 2.0};
    LinearRamp sd_outlier{1.0, 5.0};
    std::uint64_t seed = 7;
    OutlierMode outlier_mode = OutlierMode::recentered;

    //! Throws InvalidInput naming the violated constraint.
    void validate() const;

    friend bool operator==(const SimSpec&, const SimSpec&) = default;
};

struct SimSignal {
    std::vector<double> mu;
    std::vector<double> sd_in;
    std::vector<double> sd_out;
};

struct SimData {
    Matrix<double> values;
    Matrix<std::uint8_t> truth;
    SimSignal signal;
};

SimSignal gen_signal(const SimSpec& spec);

//! Deterministic in spec.seed. Series j draws from its own substream, so
//! the output does not depend on threads.
SimData gen_data(const SimSpec& spec, unsigned threads = 1);

//! Seed of the independent substream for (seed, stream).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace ppfdr
