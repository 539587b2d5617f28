#include "ehpc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ehpc {

using nlohmann::json;

std::unique_ptr<EnergyProcess> EnergySpec::make() const {
    switch (kind) {
        case Kind::Uniform: return std::make_unique<UniformEnergy>(lo, hi);
        case Kind::Constant: return std::make_unique<ConstantEnergy>(value);
        case Kind::Table: return std::make_unique<TableEnergy>(values, probs);
    }
    throw std::logic_error("EnergySpec: unknown kind");
}

std::unique_ptr<ChannelProcess> ChannelSpec::make() const {
    switch (kind) {
        case Kind::IidTruncatedRayleigh:
            return std::make_unique<IidTruncatedRayleigh>(sigmas, lo, hi, clip);
        case Kind::MarkovChain:
            return std::make_unique<MarkovChannel>(states, transition, initial_state);
    }
    throw std::logic_error("ChannelSpec: unknown kind");
}

namespace {

double energy_mean(const EnergySpec& e) { return e.make()->mean(); }

json energy_to_json(const EnergySpec& e) {
    json j;
    switch (e.kind) {
        case EnergySpec::Kind::Uniform:
            j = {{"kind", "uniform"}, {"lo", e.lo}, {"hi", e.hi}};
            break;
        case EnergySpec::Kind::Constant:
            j = {{"kind", "constant"}, {"value", e.value}};
            break;
        case EnergySpec::Kind::Table:
            j = {{"kind", "table"}, {"values", e.values}, {"probs", e.probs}};
            break;
    }
    return j;
}

EnergySpec energy_from_json(const json& j) {
    EnergySpec e;
    std::string k = j.at("kind");
    if (k == "uniform") {
        e.kind = EnergySpec::Kind::Uniform;
        e.lo = j.at("lo");
        e.hi = j.at("hi");
    } else if (k == "constant") {
        e.kind = EnergySpec::Kind::Constant;
        e.value = j.at("value");
    } else if (k == "table") {
        e.kind = EnergySpec::Kind::Table;
        e.values = j.at("values").get<std::vector<double>>();
        e.probs = j.at("probs").get<std::vector<double>>();
    } else {
        throw std::invalid_argument("config: unknown energy kind '" + k + "'");
    }
    return e;
}

json channel_to_json(const ChannelSpec& c) {
    json j;
    if (c.kind == ChannelSpec::Kind::IidTruncatedRayleigh) {
        j = {{"kind", "iid_truncated_rayleigh"}, {"sigma", c.sigmas},
             {"range", {c.lo, c.hi}}, {"mode", c.clip ? "clip" : "condition"}};
    } else {
        j = {{"kind", "markov_chain"}, {"states", c.states}, {"transition", c.transition}};
        if (c.initial_state >= 0) j["initial_state"] = c.initial_state;
    }
    return j;
}

ChannelSpec channel_from_json(const json& j) {
    ChannelSpec c;
    std::string k = j.at("kind");
    if (k == "iid_truncated_rayleigh") {
        c.kind = ChannelSpec::Kind::IidTruncatedRayleigh;
        c.sigmas = j.at("sigma").get<std::vector<double>>();
        auto r = j.at("range").get<std::vector<double>>();
        if (r.size() != 2) throw std::invalid_argument("config: channel range must be [lo, hi]");
        c.lo = r[0];
        c.hi = r[1];
        c.clip = j.value("mode", "condition") == std::string("clip");
    } else if (k == "markov_chain") {
        c.kind = ChannelSpec::Kind::MarkovChain;
        c.states = j.at("states").get<std::vector<std::vector<double>>>();
        c.transition = j.at("transition").get<std::vector<std::vector<double>>>();
        c.initial_state = j.value("initial_state", -1);
    } else {
        throw std::invalid_argument("config: unknown channel kind '" + k + "'");
    }
    return c;
}

std::string controller_kind_name(ControllerSpec::Kind k) {
    switch (k) {
        case ControllerSpec::Kind::Alg1: return "alg1";
        case ControllerSpec::Kind::Baseline1: return "baseline1";
        case ControllerSpec::Kind::Baseline2: return "baseline2";
    }
    return "?";
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
        throw std::invalid_argument("config: unsupported schema_version");
    cfg.name = j.value("name", "");
    cfg.master_seed = j.value("master_seed", 1ULL);
    cfg.replications = j.value("replications", 1);
    cfg.horizon = j.value("horizon", 1LL);
    cfg.energy = energy_from_json(j.at("environment").at("energy"));
    cfg.channel = channel_from_json(j.at("environment").at("channel"));
    const auto& prob = j.at("problem");
    cfg.n = prob.at("n");
    cfg.p_max = prob.at("p_max");
    if (prob.contains("e_max")) cfg.e_max = prob.at("e_max").get<double>();
    if (prob.contains("d_per_coord"))
        cfg.d_per_coord = prob.at("d_per_coord").get<std::vector<double>>();
    const auto& ctl = j.at("controller");
    std::string kind = ctl.at("kind");
    if (kind == "alg1") cfg.controller.kind = ControllerSpec::Kind::Alg1;
    else if (kind == "baseline1") cfg.controller.kind = ControllerSpec::Kind::Baseline1;
    else if (kind == "baseline2") cfg.controller.kind = ControllerSpec::Kind::Baseline2;
    else throw std::invalid_argument("config: unknown controller kind '" + kind + "'");
    cfg.controller.v = ctl.value("v", 40.0);
    if (ctl.contains("gamma")) cfg.controller.gamma = ctl.at("gamma").get<double>();
    cfg.controller.t0 = ctl.value("t0", 1);
    cfg.controller.q_feed = ctl.value("q_feed", "issued") == std::string("applied")
                                ? QueueFeed::Applied : QueueFeed::Issued;
    const auto& bat = j.at("battery");
    std::string mode = bat.at("mode");
    if (mode == "theorem3") {
        cfg.battery.mode = BatterySpec::Mode::Theorem3;
    } else if (mode == "fixed") {
        cfg.battery.mode = BatterySpec::Mode::Fixed;
        cfg.battery.capacity = bat.at("capacity");
        cfg.battery.initial = bat.value("initial", 0.0);
    } else {
        throw std::invalid_argument("config: unknown battery mode '" + mode + "'");
    }
    if (j.contains("outputs")) {
        cfg.out_csv = j["outputs"].value("csv", "");
        cfg.out_svg = j["outputs"].value("svg", "");
        cfg.stride = j["outputs"].value("stride", 0);
    }
    if (j.contains("u_star")) cfg.u_star = j.at("u_star").get<double>();
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["name"] = name;
    j["master_seed"] = master_seed;
    j["replications"] = replications;
    j["horizon"] = horizon;
    j["environment"] = {{"energy", energy_to_json(energy)},
                        {"channel", channel_to_json(channel)}};
    json prob = {{"n", n}, {"p_max", p_max}};
    if (e_max) prob["e_max"] = *e_max;
    if (d_per_coord) prob["d_per_coord"] = *d_per_coord;
    j["problem"] = prob;
    json ctl = {{"kind", controller_kind_name(controller.kind)}, {"v", controller.v},
                {"t0", controller.t0},
                {"q_feed", controller.q_feed == QueueFeed::Applied ? "applied" : "issued"}};
    if (controller.gamma) ctl["gamma"] = *controller.gamma;
    j["controller"] = ctl;
    if (battery.mode == BatterySpec::Mode::Theorem3) {
        j["battery"] = {{"mode", "theorem3"}};
    } else {
        j["battery"] = {{"mode", "fixed"}, {"capacity", battery.capacity},
                        {"initial", battery.initial}};
    }
    json outs;
    if (!out_csv.empty()) outs["csv"] = out_csv;
    if (!out_svg.empty()) outs["svg"] = out_svg;
    if (stride) outs["stride"] = stride;
    if (!outs.empty()) j["outputs"] = outs;
    if (u_star) j["u_star"] = *u_star;
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (!(p_max > 0.0)) throw std::invalid_argument("config: p_max must be > 0");
    if (battery.mode == BatterySpec::Mode::Theorem3 &&
        controller.kind != ControllerSpec::Kind::Alg1)
        throw std::invalid_argument("config: theorem3 battery mode requires the alg1 controller");
    if (battery.mode == BatterySpec::Mode::Theorem3 && controller.t0 != 1)
        throw std::invalid_argument("config: theorem3 battery mode requires t0 = 1");
    if (controller.t0 < 1) throw std::invalid_argument("config: t0 must be >= 1");
    if (battery.mode == BatterySpec::Mode::Fixed) {
        if (!(battery.capacity > 0.0))
            throw std::invalid_argument("config: battery capacity must be > 0");
        if (battery.initial < 0.0 || battery.initial > battery.capacity)
            throw std::invalid_argument("config: battery initial level out of range");
    }
    // Process construction validates its own parameters.
    (void)energy.make();
    auto ch = channel.make();
    if (static_cast<int>(ch->support_max().size()) != n)
        throw std::invalid_argument("config: channel dimension does not match n");
}

ProblemParams ExperimentConfig::problem_params() const {
    double em = e_max ? *e_max : energy.make()->max();
    std::vector<double> d = d_per_coord ? *d_per_coord : channel.make()->support_max();
    return derive_params(n, p_max, em, d);
}

AlgorithmParams ExperimentConfig::algorithm_params() const {
    return derive_algorithm_params(problem_params(), controller.v, controller.t0);
}

int ExperimentConfig::effective_stride() const {
    if (stride > 0) return stride;
    return horizon <= 10000 ? 1 : 10;
}

double performance_envelope(double u_star, double v, const ProblemParams& pp,
                            std::int64_t t) {
    double td = static_cast<double>(t);
    return u_star - v * pp.p_max * pp.p_max / (2.0 * td) - pp.b_const / (2.0 * v * td) -
           (pp.d_norm * pp.d_norm + pp.b_const) / (2.0 * v);
}

namespace {

struct RunOutput {
    std::vector<double> avg_u, q, e;
    std::vector<std::int64_t> viol, scaled;
    double min_q = 0.0;
};

RunOutput simulate_run(const ExperimentConfig& cfg, int run_id, const ProblemParams& pp,
                       const AlgorithmParams& ap) {
    const int stride = cfg.effective_stride();
    const std::int64_t T = cfg.horizon;
    const bool theorem3 = cfg.battery.mode == BatterySpec::Mode::Theorem3;
    const bool is_alg1 = cfg.controller.kind == ControllerSpec::Kind::Alg1;
    const int t0 = is_alg1 ? cfg.controller.t0 : 1;

    LogUtility util;
    auto energy = cfg.energy.make();
    auto channel = cfg.channel.make();
    Rng energy_rng(cfg.master_seed, static_cast<std::uint64_t>(run_id), 0);
    Rng channel_rng(cfg.master_seed, static_cast<std::uint64_t>(run_id), 1);

    std::unique_ptr<Controller> ctrl;
    switch (cfg.controller.kind) {
        case ControllerSpec::Kind::Alg1:
            ctrl = std::make_unique<DriftPlusLearningController>(pp, cfg.controller.v, util,
                                                                 cfg.controller.q_feed);
            break;
        case ControllerSpec::Kind::Baseline1:
            ctrl = std::make_unique<GradientBaseline>(
                pp, cfg.controller.gamma.value_or(1.0 / cfg.controller.v), util);
            break;
        case ControllerSpec::Kind::Baseline2:
            ctrl = std::make_unique<GreedyBaseline>(pp);
            break;
    }

    BatteryState bat;
    if (theorem3) {
        bat.capacity = ap.recommended_capacity;
        bat.level = bat.capacity;
    } else {
        bat.capacity = cfg.battery.capacity;
        bat.level = cfg.battery.initial;
    }

    RunOutput out;
    out.avg_u.reserve(static_cast<std::size_t>(T / stride) + 1);
    std::deque<Observation> pending;
    PowerVector next_p = ctrl->initial_power();
    double cum_u = 0.0;
    std::int64_t viol_bucket = 0, scaled_bucket = 0;
    const double cor1_threshold = -cfg.controller.v * (pp.d_max + pp.p_max);

    for (std::int64_t t = 1; t <= T; ++t) {
        PowerVector issued = next_p;
        ScaledPower sp = enforce_availability(issued, bat);
        SystemState st = sample_state(*energy, *channel, energy_rng, channel_rng);
        cum_u += util.value(sp.power, st);
        bat = battery_step(bat, sp.power, st.energy_arrival);

        pending.push_back(Observation{st, issued, sp.power});
        if (t >= t0) {
            Observation obs = std::move(pending.front());
            pending.pop_front();
            next_p = ctrl->end_of_slot(obs, bat);
        } else {
            next_p = PowerVector(static_cast<std::size_t>(pp.n), 0.0);
        }

        const double q = ctrl->virtual_queue();
        out.min_q = std::min(out.min_q, q);
        std::int64_t v = 0;
        if (q > 1e-12 || (is_alg1 && q < -ap.q_lower - 1e-9)) ++v;
        if (bat.level < -1e-12 || bat.level > bat.capacity + 1e-12) ++v;
        if (theorem3) {
            if (sp.scaled) ++v;  // the auto-sized battery must never need scale-down
            if (std::fabs(bat.level - (q + bat.capacity)) > 1e-9) ++v;
        }
        if (is_alg1 && t0 == 1 && q <= cor1_threshold) {
            for (std::size_t i = 0; i < next_p.size(); ++i)
                if (next_p[i] >
                    std::max(issued[i] - pp.p_max / cfg.controller.v, 0.0) + 1e-12)
                    ++v;
        }
        viol_bucket += v;
        if (sp.scaled) ++scaled_bucket;

        if (t % stride == 0 || t == T) {
            out.avg_u.push_back(cum_u / static_cast<double>(t));
            out.q.push_back(q);
            out.e.push_back(bat.level);
            out.viol.push_back(viol_bucket);
            out.scaled.push_back(scaled_bucket);
            viol_bucket = scaled_bucket = 0;
        }
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const ProblemParams pp = cfg.problem_params();
    const AlgorithmParams ap = cfg.algorithm_params();
    const int R = cfg.replications;

    std::vector<RunOutput> runs(static_cast<std::size_t>(R));
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(R));
    if (workers <= 1) {
        for (int r = 0; r < R; ++r) runs[r] = simulate_run(cfg, r, pp, ap);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int r = static_cast<int>(w); r < R; r += static_cast<int>(workers))
                    runs[r] = simulate_run(cfg, r, pp, ap);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered reduction keyed by run id.
    const std::size_t nrec = runs[0].avg_u.size();
    const int stride = cfg.effective_stride();
    ExperimentResult res;
    res.rows.resize(nrec);
    for (std::size_t k = 0; k < nrec; ++k) {
        std::int64_t slot = static_cast<std::int64_t>(k + 1) * stride;
        if (slot > cfg.horizon) slot = cfg.horizon;
        AggregateRow& row = res.rows[k];
        row.slot = slot;
        double su = 0.0, sq = 0.0, se = 0.0;
        for (int r = 0; r < R; ++r) {
            su += runs[r].avg_u[k];
            sq += runs[r].q[k];
            se += runs[r].e[k];
            row.violations += runs[r].viol[k];
            row.scaled_count += runs[r].scaled[k];
        }
        row.mean_avg_utility = su / R;
        row.mean_q = sq / R;
        row.mean_e = se / R;
        if (R > 1) {
            double ss = 0.0;
            for (int r = 0; r < R; ++r) {
                double d = runs[r].avg_u[k] - row.mean_avg_utility;
                ss += d * d;
            }
            row.stderr_avg_utility = std::sqrt(ss / (R - 1)) / std::sqrt(static_cast<double>(R));
        }
        res.summary.total_violations += row.violations;
        res.summary.total_scaled += row.scaled_count;
    }
    res.summary.min_virtual_queue = 0.0;
    for (const auto& r : runs)
        res.summary.min_virtual_queue = std::min(res.summary.min_virtual_queue, r.min_q);
    res.summary.final_mean_avg_utility = res.rows.back().mean_avg_utility;
    res.summary.final_stderr = res.rows.back().stderr_avg_utility;
    if (cfg.u_star && cfg.controller.kind == ControllerSpec::Kind::Alg1)
        res.summary.envelope_at_horizon =
            performance_envelope(*cfg.u_star, cfg.controller.v, pp, cfg.horizon);
    return res;
}

std::vector<SystemState> replay_states(const ExperimentConfig& cfg, int run_id) {
    auto energy = cfg.energy.make();
    auto channel = cfg.channel.make();
    Rng energy_rng(cfg.master_seed, static_cast<std::uint64_t>(run_id), 0);
    Rng channel_rng(cfg.master_seed, static_cast<std::uint64_t>(run_id), 1);
    std::vector<SystemState> trace;
    trace.reserve(static_cast<std::size_t>(cfg.horizon));
    for (std::int64_t t = 1; t <= cfg.horizon; ++t)
        trace.push_back(sample_state(*energy, *channel, energy_rng, channel_rng));
    return trace;
}

void write_csv(const std::vector<AggregateRow>& rows, std::ostream& os) {
    os << "slot,mean_avg_utility,stderr,mean_Q,mean_E,violations,scaled_count\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n",
                      static_cast<long long>(r.slot), r.mean_avg_utility,
                      r.stderr_avg_utility, r.mean_q, r.mean_e,
                      static_cast<long long>(r.violations),
                      static_cast<long long>(r.scaled_count));
        os << buf;
    }
}

std::string csv_string(const std::vector<AggregateRow>& rows) {
    std::ostringstream ss;
    write_csv(rows, ss);
    return ss.str();
}

namespace {

EnergySpec default_energy() {
    EnergySpec e;
    e.kind = EnergySpec::Kind::Uniform;
    e.lo = 0.0;
    e.hi = 3.0;
    return e;
}

ChannelSpec iid_channel() {
    ChannelSpec c;
    c.kind = ChannelSpec::Kind::IidTruncatedRayleigh;
    c.sigmas = {0.5, 1.0};
    c.lo = 0.0;
    c.hi = 4.0;
    return c;
}

ChannelSpec markov_channel() {
    ChannelSpec c;
    c.kind = ChannelSpec::Kind::MarkovChain;
    c.states = {{0.45, 1.2}, {1.0, 0.2}};
    c.transition = {{1.0 / 15.0, 14.0 / 15.0}, {2.0 / 3.0, 1.0 / 3.0}};
    return c;
}

ExperimentConfig base_config(bool markov) {
    ExperimentConfig cfg;
    cfg.master_seed = 20240901;
    cfg.replications = 200;
    cfg.horizon = 5000;
    cfg.energy = default_energy();
    cfg.channel = markov ? markov_channel() : iid_channel();
    cfg.n = 2;
    cfg.p_max = 5.0;
    return cfg;
}

}  // namespace

std::vector<ExperimentConfig> figure_configs(int figure_id) {
    if (figure_id < 1 || figure_id > 8)
        throw std::invalid_argument("figure id must be in 1..8");
    const bool markov = figure_id > 4;
    const int variant = (figure_id - 1) % 4 + 1;
    std::vector<ExperimentConfig> cfgs;
    switch (variant) {
        case 1:
            for (double v : {5.0, 10.0, 20.0, 40.0}) {
                auto cfg = base_config(markov);
                cfg.name = "V=" + std::to_string(static_cast<int>(v));
                cfg.controller.kind = ControllerSpec::Kind::Alg1;
                cfg.controller.v = v;
                cfg.battery.mode = BatterySpec::Mode::Theorem3;
                cfgs.push_back(std::move(cfg));
            }
            break;
        case 2:
            for (double cap : {10.0, 20.0, 50.0}) {
                auto cfg = base_config(markov);
                cfg.name = "E^max=" + std::to_string(static_cast<int>(cap));
                cfg.controller.kind = ControllerSpec::Kind::Alg1;
                cfg.controller.v = 40.0;
                cfg.battery.mode = BatterySpec::Mode::Fixed;
                cfg.battery.capacity = cap;
                cfg.battery.initial = 0.0;
                cfgs.push_back(std::move(cfg));
            }
            break;
        case 3:
            for (int t0 : {1, 5, 10}) {
                auto cfg = base_config(markov);
                cfg.name = "t0=" + std::to_string(t0);
                cfg.horizon = 20000;  // delayed variants need a longer transient
                cfg.controller.kind = ControllerSpec::Kind::Alg1;
                cfg.controller.v = 40.0;
                cfg.controller.t0 = t0;
                cfg.battery.mode = BatterySpec::Mode::Fixed;
                cfg.battery.capacity = 20.0;
                cfg.battery.initial = 0.0;
                cfgs.push_back(std::move(cfg));
            }
            break;
        case 4: {
            auto mk = [&](ControllerSpec::Kind k, const std::string& label) {
                auto cfg = base_config(markov);
                cfg.name = label;
                cfg.controller.kind = k;
                cfg.controller.v = 50.0;
                if (k == ControllerSpec::Kind::Baseline1) cfg.controller.gamma = 1.0 / 50.0;
                cfg.battery.mode = BatterySpec::Mode::Fixed;
                cfg.battery.capacity = 10.0;
                cfg.battery.initial = 0.0;
                return cfg;
            };
            cfgs.push_back(mk(ControllerSpec::Kind::Alg1, "Algorithm 1"));
            cfgs.push_back(mk(ControllerSpec::Kind::Baseline1, "Baseline 1"));
            cfgs.push_back(mk(ControllerSpec::Kind::Baseline2, "Baseline 2"));
            break;
        }
    }
    return cfgs;
}

FigureResult run_figure_suite(int figure_id) {
    FigureResult fig;
    fig.figure_id = figure_id;
    const bool markov = figure_id > 4;
    static const char* variant_titles[] = {
        "running-average utility for different V",
        "running-average utility for different battery capacities",
        "running-average utility for different observation delays",
        "running-average utility versus baselines",
    };
    fig.title = std::string(variant_titles[(figure_id - 1) % 4]) +
                (markov ? " (Markov channel)" : " (i.i.d. channel)");
    for (const auto& cfg : figure_configs(figure_id)) {
        auto res = run_experiment(cfg);
        fig.curves.push_back(FigureCurve{cfg.name, std::move(res.rows)});
    }
    return fig;
}

void write_figure_csv(const FigureResult& fig, std::ostream& os) {
    os << "curve,slot,mean_avg_utility,stderr,mean_Q,mean_E,violations,scaled_count\n";
    char buf[320];
    for (const auto& c : fig.curves) {
        for (const auto& r : c.rows) {
            std::snprintf(buf, sizeof(buf), "%s,%lld,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n",
                          c.label.c_str(), static_cast<long long>(r.slot),
                          r.mean_avg_utility, r.stderr_avg_utility, r.mean_q, r.mean_e,
                          static_cast<long long>(r.violations),
                          static_cast<long long>(r.scaled_count));
            os << buf;
        }
    }
}

}  // namespace ehpc
