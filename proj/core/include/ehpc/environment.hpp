#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "ehpc/types.hpp"

namespace ehpc {

/// Deterministic seeded stream. Seeds are mixed from (master_seed, run_id,
/// stream_id) so replications and the energy/channel streams are independent
/// of each other and of scheduling order.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t run_id, std::uint64_t stream_id);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

private:
    std::mt19937_64 eng_;
};

class EnergyProcess {
public:
    virtual ~EnergyProcess() = default;
    virtual double sample(Rng& rng) = 0;
    virtual double mean() const = 0;   // analytic mean
    virtual double max() const = 0;    // support upper bound (e_max)
    virtual std::unique_ptr<EnergyProcess> clone() const = 0;
};

class UniformEnergy final : public EnergyProcess {
public:
    UniformEnergy(double lo, double hi);
    double sample(Rng& rng) override;
    double mean() const override { return 0.5 * (lo_ + hi_); }
    double max() const override { return hi_; }
    std::unique_ptr<EnergyProcess> clone() const override;

private:
    double lo_, hi_;
};

class ConstantEnergy final : public EnergyProcess {
public:
    explicit ConstantEnergy(double value);
    double sample(Rng&) override { return value_; }
    double mean() const override { return value_; }
    double max() const override { return value_; }
    std::unique_ptr<EnergyProcess> clone() const override;

private:
    double value_;
};

/// Finite table of (value, probability) pairs.
class TableEnergy final : public EnergyProcess {
public:
    TableEnergy(std::vector<double> values, std::vector<double> probs);
    double sample(Rng& rng) override;
    double mean() const override;
    double max() const override;
    std::unique_ptr<EnergyProcess> clone() const override;

private:
    std::vector<double> values_, cum_;
    double mean_ = 0.0;
};

class ChannelProcess {
public:
    virtual ~ChannelProcess() = default;
    /// Draw the channel vector for the next slot.
    virtual std::vector<double> sample(Rng& rng) = 0;
    /// Per-coordinate support maximum (the tight subgradient bound for log utility).
    virtual std::vector<double> support_max() const = 0;
    virtual std::unique_ptr<ChannelProcess> clone() const = 0;
};

/// Independent truncated Rayleigh fading per subband on [lo, hi].
/// Truncation is by conditioning (inverse CDF of the renormalized
/// distribution); a clip mode is available behind a flag.
class IidTruncatedRayleigh final : public ChannelProcess {
public:
    IidTruncatedRayleigh(std::vector<double> sigmas, double lo, double hi,
                         bool clip = false);
    std::vector<double> sample(Rng& rng) override;
    std::vector<double> support_max() const override;
    std::unique_ptr<ChannelProcess> clone() const override;

    /// CDF of one subband's truncated distribution (conditioning mode).
    static double truncated_cdf(double x, double sigma, double lo, double hi);

private:
    std::vector<double> sigmas_;
    double lo_, hi_;
    bool clip_;
};

/// Markov-modulated channel: finite state list of channel vectors with a
/// row-stochastic transition matrix. Initial state drawn from the stationary
/// distribution unless pinned.
class MarkovChannel final : public ChannelProcess {
public:
    MarkovChannel(std::vector<std::vector<double>> states,
                  std::vector<std::vector<double>> transition,
                  int initial_state = -1);  // -1: stationary draw
    std::vector<double> sample(Rng& rng) override;
    std::vector<double> support_max() const override;
    std::unique_ptr<ChannelProcess> clone() const override;

    const std::vector<double>& stationary() const { return stationary_; }

private:
    std::vector<std::vector<double>> states_, transition_;
    std::vector<double> stationary_;
    int initial_state_;
    int current_ = -1;  // -1 until first sample
};

/// One slot's realization; energy and channel come from separate streams.
SystemState sample_state(EnergyProcess& energy, ChannelProcess& channel,
                         Rng& energy_rng, Rng& channel_rng);

/// Thrown when a power vector would drain more than the stored energy.
struct EnergyAvailabilityFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// E[t] = min(E[t-1] - sum(p) + e, capacity). Requires sum(p) <= level.
BatteryState battery_step(const BatteryState& b, const PowerVector& applied_power,
                          double arrival);

}  // namespace ehpc
