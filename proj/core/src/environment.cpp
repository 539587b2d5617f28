#include "ehpc/environment.hpp"

#include <algorithm>
#include <cmath>

namespace ehpc {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t run_id, std::uint64_t stream_id) {
    std::uint64_t x = master_seed;
    x = splitmix64(x) ^ (run_id + 0xd1b54a32d192ed03ULL);
    x = splitmix64(x) ^ (stream_id + 0x2545f4914f6cdd1dULL);
    eng_.seed(splitmix64(x));
}

double Rng::uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

UniformEnergy::UniformEnergy(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo >= 0.0) || !(hi > lo))
        throw std::invalid_argument("UniformEnergy: need 0 <= lo < hi");
}

double UniformEnergy::sample(Rng& rng) {
    return lo_ + (hi_ - lo_) * rng.uniform01();
}

std::unique_ptr<EnergyProcess> UniformEnergy::clone() const {
    return std::make_unique<UniformEnergy>(*this);
}

ConstantEnergy::ConstantEnergy(double value) : value_(value) {
    if (!(value >= 0.0)) throw std::invalid_argument("ConstantEnergy: value must be >= 0");
}

std::unique_ptr<EnergyProcess> ConstantEnergy::clone() const {
    return std::make_unique<ConstantEnergy>(*this);
}

TableEnergy::TableEnergy(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)) {
    if (values_.empty() || values_.size() != probs.size())
        throw std::invalid_argument("TableEnergy: values/probs size mismatch");
    double c = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) throw std::invalid_argument("TableEnergy: negative probability");
        if (values_[i] < 0.0) throw std::invalid_argument("TableEnergy: negative value");
        c += probs[i];
        cum_.push_back(c);
        mean_ += values_[i] * probs[i];
    }
    if (std::fabs(c - 1.0) > 1e-12)
        throw std::invalid_argument("TableEnergy: probabilities must sum to 1");
    cum_.back() = 1.0;
}

double TableEnergy::sample(Rng& rng) {
    double u = rng.uniform01();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    return values_[std::min<std::size_t>(it - cum_.begin(), values_.size() - 1)];
}

double TableEnergy::mean() const { return mean_; }

double TableEnergy::max() const {
    return *std::max_element(values_.begin(), values_.end());
}

std::unique_ptr<EnergyProcess> TableEnergy::clone() const {
    return std::make_unique<TableEnergy>(*this);
}

IidTruncatedRayleigh::IidTruncatedRayleigh(std::vector<double> sigmas, double lo,
                                           double hi, bool clip)
    : sigmas_(std::move(sigmas)), lo_(lo), hi_(hi), clip_(clip) {
    if (sigmas_.empty()) throw std::invalid_argument("IidTruncatedRayleigh: no subbands");
    if (!(lo >= 0.0) || !(hi > lo))
        throw std::invalid_argument("IidTruncatedRayleigh: need 0 <= lo < hi");
    for (double s : sigmas_)
        if (!(s > 0.0)) throw std::invalid_argument("IidTruncatedRayleigh: sigma must be > 0");
}

double IidTruncatedRayleigh::truncated_cdf(double x, double sigma, double lo, double hi) {
    auto raw = [sigma](double v) { return 1.0 - std::exp(-v * v / (2.0 * sigma * sigma)); };
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return (raw(x) - raw(lo)) / (raw(hi) - raw(lo));
}

std::vector<double> IidTruncatedRayleigh::sample(Rng& rng) {
    std::vector<double> s(sigmas_.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double sigma = sigmas_[i];
        double u = rng.uniform01();
        if (clip_) {
            double x = sigma * std::sqrt(-2.0 * std::log1p(-u));
            s[i] = std::clamp(x, lo_, hi_);
        } else {
            // Inverse CDF of the conditional distribution on [lo, hi].
            auto raw = [sigma](double v) { return 1.0 - std::exp(-v * v / (2.0 * sigma * sigma)); };
            double flo = raw(lo_), fhi = raw(hi_);
            double f = flo + u * (fhi - flo);
            s[i] = sigma * std::sqrt(-2.0 * std::log1p(-f));
        }
    }
    return s;
}

std::vector<double> IidTruncatedRayleigh::support_max() const {
    return std::vector<double>(sigmas_.size(), hi_);
}

std::unique_ptr<ChannelProcess> IidTruncatedRayleigh::clone() const {
    auto c = std::make_unique<IidTruncatedRayleigh>(*this);
    return c;
}

MarkovChannel::MarkovChannel(std::vector<std::vector<double>> states,
                             std::vector<std::vector<double>> transition,
                             int initial_state)
    : states_(std::move(states)), transition_(std::move(transition)),
      initial_state_(initial_state) {
    const std::size_t m = states_.size();
    if (m == 0 || transition_.size() != m)
        throw std::invalid_argument("MarkovChannel: state/transition size mismatch");
    for (const auto& row : transition_) {
        if (row.size() != m) throw std::invalid_argument("MarkovChannel: transition not square");
        double s = 0.0;
        for (double p : row) {
            if (p < 0.0) throw std::invalid_argument("MarkovChannel: negative probability");
            s += p;
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw std::invalid_argument("MarkovChannel: transition row must sum to 1");
    }
    if (initial_state_ >= static_cast<int>(m))
        throw std::invalid_argument("MarkovChannel: initial state out of range");

    // Stationary distribution by power iteration on the row-stochastic matrix.
    stationary_.assign(m, 1.0 / static_cast<double>(m));
    std::vector<double> next(m);
    for (int it = 0; it < 20000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                next[j] += stationary_[i] * transition_[i][j];
        double diff = 0.0;
        for (std::size_t j = 0; j < m; ++j) diff += std::fabs(next[j] - stationary_[j]);
        stationary_.swap(next);
        if (diff < 1e-15) break;
    }
}

std::vector<double> MarkovChannel::sample(Rng& rng) {
    const std::size_t m = states_.size();
    if (current_ < 0) {
        if (initial_state_ >= 0) {
            current_ = initial_state_;
        } else {
            double u = rng.uniform01();
            double c = 0.0;
            current_ = static_cast<int>(m) - 1;
            for (std::size_t j = 0; j < m; ++j) {
                c += stationary_[j];
                if (u < c) { current_ = static_cast<int>(j); break; }
            }
        }
    } else {
        double u = rng.uniform01();
        double c = 0.0;
        int next = static_cast<int>(m) - 1;
        for (std::size_t j = 0; j < m; ++j) {
            c += transition_[current_][j];
            if (u < c) { next = static_cast<int>(j); break; }
        }
        current_ = next;
    }
    return states_[current_];
}

std::vector<double> MarkovChannel::support_max() const {
    std::vector<double> sup(states_[0].size(), 0.0);
    for (const auto& st : states_)
        for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], st[i]);
    return sup;
}

std::unique_ptr<ChannelProcess> MarkovChannel::clone() const {
    auto c = std::make_unique<MarkovChannel>(states_, transition_, initial_state_);
    return c;
}

SystemState sample_state(EnergyProcess& energy, ChannelProcess& channel,
                         Rng& energy_rng, Rng& channel_rng) {
    SystemState st;
    st.energy_arrival = energy.sample(energy_rng);
    st.channel = channel.sample(channel_rng);
    return st;
}

BatteryState battery_step(const BatteryState& b, const PowerVector& applied_power,
                          double arrival) {
    double drain = sum(applied_power);
    if (drain > b.level + 1e-9)
        throw EnergyAvailabilityFault("battery_step: power exceeds stored energy");
    BatteryState nb;
    nb.capacity = b.capacity;
    nb.level = std::min(b.level - drain + arrival, b.capacity);
    nb.level = std::max(nb.level, 0.0);
    return nb;
}

}  // namespace ehpc
