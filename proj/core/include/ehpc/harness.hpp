#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "ehpc/controller.hpp"
#include "ehpc/environment.hpp"
#include "ehpc/types.hpp"

namespace ehpc {

struct EnergySpec {
    enum class Kind { Uniform, Constant, Table } kind = Kind::Uniform;
    double lo = 0.0, hi = 0.0;             // uniform
    double value = 0.0;                    // constant
    std::vector<double> values, probs;     // table
    std::unique_ptr<EnergyProcess> make() const;
};

struct ChannelSpec {
    enum class Kind { IidTruncatedRayleigh, MarkovChain } kind = Kind::IidTruncatedRayleigh;
    std::vector<double> sigmas;            // rayleigh
    double lo = 0.0, hi = 4.0;
    bool clip = false;
    std::vector<std::vector<double>> states, transition;  // markov
    int initial_state = -1;                // -1: stationary
    std::unique_ptr<ChannelProcess> make() const;
};

struct ControllerSpec {
    enum class Kind { Alg1, Baseline1, Baseline2 } kind = Kind::Alg1;
    double v = 40.0;
    std::optional<double> gamma;           // baseline1; defaults to 1/V
    int t0 = 1;                            // alg1 observation delay
    QueueFeed q_feed = QueueFeed::Issued;
};

struct BatterySpec {
    enum class Mode { Theorem3, Fixed } mode = Mode::Theorem3;
    double capacity = 0.0;                 // fixed mode
    double initial = 0.0;                  // fixed mode
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string name;
    std::uint64_t master_seed = 1;
    int replications = 1;
    std::int64_t horizon = 1;
    EnergySpec energy;
    ChannelSpec channel;
    int n = 2;
    double p_max = 5.0;
    std::optional<double> e_max;                   // defaults to energy support max
    std::optional<std::vector<double>> d_per_coord;  // override; defaults to channel support
    ControllerSpec controller;
    BatterySpec battery;
    std::string out_csv, out_svg;
    int stride = 0;                        // 0: auto (1 for T <= 1e4, else 10)
    std::optional<double> u_star;          // enables the performance envelope in the summary

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
    void validate() const;

    ProblemParams problem_params() const;
    AlgorithmParams algorithm_params() const;
    int effective_stride() const;
};

/// Cross-replication aggregate for one recorded slot.
struct AggregateRow {
    std::int64_t slot = 0;
    double mean_avg_utility = 0.0;  // mean over runs of (1/t) sum of utilities
    double stderr_avg_utility = 0.0;
    double mean_q = 0.0;
    double mean_e = 0.0;
    std::int64_t violations = 0;    // invariant violations across runs at this slot
    std::int64_t scaled_count = 0;  // scale-down events across runs at this slot
};

struct ExperimentSummary {
    double final_mean_avg_utility = 0.0;
    double final_stderr = 0.0;
    double min_virtual_queue = 0.0;
    std::int64_t total_scaled = 0;
    std::int64_t total_violations = 0;
    std::optional<double> envelope_at_horizon;  // U* - V p^2/(2T) - B/(2VT) - (D^2+B)/(2V)
};

struct ExperimentResult {
    std::vector<AggregateRow> rows;
    ExperimentSummary summary;
};

/// Runs R seeded replications of (environment x controller) for T slots and
/// aggregates. Deterministic given the config; replications are reduced in
/// run-id order regardless of completion order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Regenerates the state trace of one replication (same draws the controller saw).
std::vector<SystemState> replay_states(const ExperimentConfig& cfg, int run_id);

/// Theoretical performance envelope at slot t:
/// u_star - V p_max^2 / (2t) - B / (2Vt) - (D^2 + B) / (2V).
double performance_envelope(double u_star, double v, const ProblemParams& pp,
                            std::int64_t t);

void write_csv(const std::vector<AggregateRow>& rows, std::ostream& os);
std::string csv_string(const std::vector<AggregateRow>& rows);

struct FigureCurve {
    std::string label;
    std::vector<AggregateRow> rows;
};

struct FigureResult {
    int figure_id = 0;
    std::string title;
    std::vector<FigureCurve> curves;
};

/// Built-in experiment bundles reproducing the reference scenarios:
/// 1: i.i.d., V in {5,10,20,40}, auto-sized battery
/// 2: i.i.d., V=40, small batteries {10,20,50}, initially empty
/// 3: i.i.d., observation delay t0 in {1,5,10}, capacity 20
/// 4: i.i.d., Algorithm-1 vs the two baselines, capacity 10, V=50
/// 5-8: the same four with the Markov-modulated channel.
std::vector<ExperimentConfig> figure_configs(int figure_id);
FigureResult run_figure_suite(int figure_id);

void write_figure_csv(const FigureResult& fig, std::ostream& os);
std::string render_figure_svg(const FigureResult& fig);

}  // namespace ehpc
