// Experiment runner: a JSON spec describes one figure-style experiment (a
// sweep over load, service shape, replication degree, or buffer size, crossed
// with a set of policies and metrics), and the runner turns it into one
// deterministic CSV table plus the per-replication samples behind each row.
// Replications use common random numbers: the cell seed depends on the sweep
// value and the replication index but never on the policy, so policy
// comparisons at one grid point pair up.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "aoi/metrics.hpp"
#include "aoi/policies.hpp"
#include "aoi/rng.hpp"
#include "aoi/simulate.hpp"

namespace aoi {

enum class SweepVariable { rho, gamma_k, replication, buffer };

inline std::string sweep_variable_text(SweepVariable v) {
    switch (v) {
        case SweepVariable::rho: return "rho";
        case SweepVariable::gamma_k: return "gamma_k";
        case SweepVariable::replication: return "r";
        case SweepVariable::buffer: return "B";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(const std::string& text) {
    if (text == "rho") return SweepVariable::rho;
    if (text == "gamma_k") return SweepVariable::gamma_k;
    if (text == "r") return SweepVariable::replication;
    if (text == "B") return SweepVariable::buffer;
    throw std::invalid_argument("spec: unknown sweep variable \"" + text +
                                "\" (known: rho, gamma_k, r, B)");
}

struct SweepSpec {
    SweepVariable variable = SweepVariable::rho;
    std::vector<double> values;
};

struct PolicySetting {
    std::string name = "prmp-lgfs-r";
    int r = 1;
    std::int64_t B = kInfiniteBuffer;

    friend bool operator==(const PolicySetting&, const PolicySetting&) = default;
};

enum class MetricKind {
    time_avg,
    avg_peak,
    lb_time_avg,
    throughput,
    avg_delay,
    penalty_identity,
    penalty_floor,
    penalty_exp,
    penalty_indicator,
};

struct MetricSpec {
    MetricKind kind = MetricKind::time_avg;
    double threshold = 0.0;  // only the indicator kind uses it
    std::string name = "time_avg";
};

inline MetricSpec parse_metric(const std::string& text) {
    static const std::pair<const char*, MetricKind> plain[] = {
        {"time_avg", MetricKind::time_avg},
        {"avg_peak", MetricKind::avg_peak},
        {"lb_time_avg", MetricKind::lb_time_avg},
        {"throughput", MetricKind::throughput},
        {"avg_delay", MetricKind::avg_delay},
        {"penalty_identity", MetricKind::penalty_identity},
        {"penalty_floor", MetricKind::penalty_floor},
        {"penalty_exp", MetricKind::penalty_exp},
    };
    for (const auto& [name, kind] : plain)
        if (text == name) return MetricSpec{kind, 0.0, text};
    const std::string prefix = "penalty_indicator(";
    if (text.rfind(prefix, 0) == 0 && text.back() == ')') {
        const std::string inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        char* end = nullptr;
        const double d = std::strtod(inner.c_str(), &end);
        if (end == inner.c_str() + inner.size() && !inner.empty() && d >= 0.0 &&
            std::isfinite(d))
            return MetricSpec{MetricKind::penalty_indicator, d, text};
    }
    throw std::invalid_argument(
        "spec: unknown metric \"" + text +
        "\" (known: time_avg, avg_peak, lb_time_avg, throughput, avg_delay, "
        "penalty_identity, penalty_floor, penalty_exp, penalty_indicator(d))");
}

struct ExperimentSpec {
    std::string name;
    int m = 1;
    DistributionSpec service = DistributionSpec::exponential(1.0);
    DistributionSpec generation = DistributionSpec::exponential(1.0);
    DistributionSpec arrival_delay = DistributionSpec::constant(0.0);
    double horizon = 1000.0;
    int replications = 1;
    std::uint64_t seed = 0;
    SweepSpec sweep;
    std::vector<PolicySetting> policies;
    std::vector<std::string> metrics;
};

namespace experiment_detail {

inline bool is_single_replica_policy(const std::string& name) {
    return name == "fcfs" || name == "lcfs-p" || name == "lcfs-np";
}

inline bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace experiment_detail

inline void validate_spec(const ExperimentSpec& spec) {
    using experiment_detail::is_integral;
    using experiment_detail::is_single_replica_policy;
    if (spec.name.empty()) throw std::invalid_argument("spec: name must not be empty");
    if (spec.m < 1) throw std::invalid_argument("spec: m must be at least 1");
    if (!(spec.horizon > 0.0)) throw std::invalid_argument("spec: horizon must be positive");
    if (spec.replications < 1)
        throw std::invalid_argument("spec: replications must be at least 1");
    if (spec.sweep.values.empty())
        throw std::invalid_argument("spec: sweep needs at least one value");
    if (spec.policies.empty())
        throw std::invalid_argument("spec: at least one policy required");
    if (spec.metrics.empty())
        throw std::invalid_argument("spec: at least one metric required");
    for (const std::string& metric : spec.metrics) parse_metric(metric);

    for (double v : spec.sweep.values) {
        switch (spec.sweep.variable) {
            case SweepVariable::rho:
            case SweepVariable::gamma_k:
                if (!(v > 0.0) || !std::isfinite(v))
                    throw std::invalid_argument("spec: sweep values must be positive");
                break;
            case SweepVariable::replication:
                if (!is_integral(v) || v < 1.0)
                    throw std::invalid_argument(
                        "spec: r sweep values must be positive integers");
                if (v > spec.m)
                    throw std::invalid_argument(
                        "spec: replication degree " + std::to_string(static_cast<int>(v)) +
                        " exceeds the " + std::to_string(spec.m) + " servers");
                break;
            case SweepVariable::buffer:
                if (!is_integral(v) || v < 0.0)
                    throw std::invalid_argument(
                        "spec: B sweep values must be non-negative integers");
                break;
        }
    }

    for (const PolicySetting& p : spec.policies) {
        PolicyDescriptor::parse(p.name);
        if (p.r < 1) throw std::invalid_argument("spec: policy r must be at least 1");
        if (p.B < 0) throw std::invalid_argument("spec: policy B must be non-negative");
        const bool r_swept = spec.sweep.variable == SweepVariable::replication;
        if (!r_swept && p.r > spec.m)
            throw std::invalid_argument("spec: policy \"" + p.name +
                                        "\" replicates onto " + std::to_string(p.r) +
                                        " of " + std::to_string(spec.m) + " servers");
        if (is_single_replica_policy(p.name)) {
            if (!r_swept && p.r != 1)
                throw std::invalid_argument("spec: policy \"" + p.name +
                                            "\" only takes replication degree 1");
            if (r_swept)
                for (double v : spec.sweep.values)
                    if (v != 1.0)
                        throw std::invalid_argument(
                            "spec: policy \"" + p.name +
                            "\" cannot join an r sweep beyond degree 1");
        }
    }
}

// Everything one sweep value pins down: the cell's service and generation
// laws and the per-policy replication degree and buffer.
struct CellPlan {
    DistributionSpec service;
    DistributionSpec generation;
    std::vector<PolicySetting> policies;
};

inline CellPlan plan_cell(const ExperimentSpec& spec, double value) {
    CellPlan plan{spec.service, spec.generation, spec.policies};
    switch (spec.sweep.variable) {
        case SweepVariable::rho:
            plan.generation =
                spec.generation.with_mean(spec.service.mean() / (value * spec.m));
            break;
        case SweepVariable::gamma_k:
            plan.service = DistributionSpec::gamma_mean(value, spec.service.mean());
            break;
        case SweepVariable::replication:
            for (PolicySetting& p : plan.policies) p.r = static_cast<int>(value);
            break;
        case SweepVariable::buffer:
            for (PolicySetting& p : plan.policies) p.B = static_cast<std::int64_t>(value);
            break;
    }
    return plan;
}

inline std::vector<double> evaluate_metrics(const std::vector<MetricSpec>& metrics,
                                            const Trace& trace) {
    std::optional<AgeTrajectory> age;
    std::optional<AgeTrajectory> bound;
    std::optional<ThroughputDelay> counts;
    const auto age_traj = [&]() -> const AgeTrajectory& {
        if (!age) age = age_trajectory(trace);
        return *age;
    };
    const auto bound_traj = [&]() -> const AgeTrajectory& {
        if (!bound) bound = lower_bound_trajectory(trace);
        return *bound;
    };
    const auto delivery_stats = [&]() -> const ThroughputDelay& {
        if (!counts) counts = throughput_delay(trace);
        return *counts;
    };

    std::vector<double> values;
    values.reserve(metrics.size());
    for (const MetricSpec& metric : metrics) {
        switch (metric.kind) {
            case MetricKind::time_avg:
                values.push_back(time_average_age(age_traj()));
                break;
            case MetricKind::avg_peak:
                values.push_back(average_peak_age(age_traj()).value_or(NAN));
                break;
            case MetricKind::lb_time_avg:
                values.push_back(time_average_age(bound_traj()));
                break;
            case MetricKind::throughput:
                values.push_back(static_cast<double>(delivery_stats().delivered_count) /
                                 trace.config.horizon);
                break;
            case MetricKind::avg_delay:
                values.push_back(delivery_stats().avg_delay.value_or(NAN));
                break;
            case MetricKind::penalty_identity:
                values.push_back(
                    penalty_average(age_traj(), {PenaltyKind::identity, 0.0}).value);
                break;
            case MetricKind::penalty_floor:
                values.push_back(
                    penalty_average(age_traj(), {PenaltyKind::floor_fn, 0.0}).value);
                break;
            case MetricKind::penalty_exp:
                values.push_back(
                    penalty_average(age_traj(), {PenaltyKind::exp_fn, 0.0}).value);
                break;
            case MetricKind::penalty_indicator:
                values.push_back(
                    penalty_average(age_traj(), {PenaltyKind::indicator, metric.threshold})
                        .value);
                break;
        }
    }
    return values;
}

struct ResultRow {
    double sweep_value = 0.0;
    std::string policy;
    int r = 1;
    std::int64_t B = kInfiniteBuffer;
    std::string metric;
    double mean = 0.0;
    double se = 0.0;
    int replications = 0;
    std::uint64_t seed_base = 0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ResultRow> rows;  // sweep-major, then policy, then metric
    // samples[sweep][policy][metric][replication]
    std::vector<std::vector<std::vector<std::vector<double>>>> samples;

    const std::vector<double>& cell_samples(std::size_t sweep_index,
                                            std::size_t policy_index,
                                            std::size_t metric_index) const {
        return samples.at(sweep_index).at(policy_index).at(metric_index);
    }
};

// Full simulator configuration for one (sweep point, policy, replication)
// cell. The seed is shared across policies at a fixed (sweep point,
// replication) so paired comparisons see common random numbers.
inline SystemConfig cell_config(const ExperimentSpec& spec, std::size_t sweep_index,
                                std::size_t policy_index, std::size_t rep) {
    const CellPlan plan = plan_cell(spec, spec.sweep.values[sweep_index]);
    const PolicySetting& setting = plan.policies[policy_index];
    SystemConfig cfg;
    cfg.m = spec.m;
    cfg.r = setting.r;
    cfg.B = setting.B;
    cfg.service = plan.service;
    cfg.generation = plan.generation;
    cfg.arrival_delay = spec.arrival_delay;
    cfg.horizon = spec.horizon;
    cfg.seed = derive_seed(spec.seed, double_bits(spec.sweep.values[sweep_index]),
                           static_cast<std::uint64_t>(rep));
    cfg.record_events = false;
    return cfg;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec, int threads = 1) {
    validate_spec(spec);

    std::vector<MetricSpec> metrics;
    metrics.reserve(spec.metrics.size());
    for (const std::string& metric : spec.metrics) metrics.push_back(parse_metric(metric));

    std::vector<CellPlan> plans;
    plans.reserve(spec.sweep.values.size());
    for (double value : spec.sweep.values) plans.push_back(plan_cell(spec, value));

    const std::size_t n_sweep = spec.sweep.values.size();
    const std::size_t n_policy = spec.policies.size();
    const std::size_t n_metric = metrics.size();
    const std::size_t n_rep = static_cast<std::size_t>(spec.replications);

    ExperimentResult result;
    result.spec = spec;
    result.samples.assign(
        n_sweep, std::vector<std::vector<std::vector<double>>>(
                     n_policy, std::vector<std::vector<double>>(
                                   n_metric, std::vector<double>(n_rep, NAN))));

    const auto run_task = [&](std::size_t flat) {
        const std::size_t si = flat / (n_policy * n_rep);
        const std::size_t pi = (flat / n_rep) % n_policy;
        const std::size_t rep = flat % n_rep;
        const PolicySetting& setting = plans[si].policies[pi];
        const SystemConfig cfg = cell_config(spec, si, pi, rep);

        try {
            const Trace trace = run_simulation(cfg, PolicyDescriptor{setting.name});
            const std::vector<double> values = evaluate_metrics(metrics, trace);
            for (std::size_t mi = 0; mi < n_metric; ++mi)
                result.samples[si][pi][mi][rep] = values[mi];
        } catch (const std::exception& e) {
            throw std::runtime_error(
                "cell failed: sweep_value=" + format_double(spec.sweep.values[si]) +
                " policy=" + setting.name + " r=" + std::to_string(setting.r) +
                " B=" + buffer_text(setting.B) + " rep=" + std::to_string(rep) +
                " seed=" + std::to_string(cfg.seed) + ": " + e.what());
        }
    };

    const std::size_t total = n_sweep * n_policy * n_rep;
    if (threads <= 1) {
        for (std::size_t flat = 0; flat < total; ++flat) run_task(flat);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(threads), total);
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t flat = next.fetch_add(1); flat < total;
                     flat = next.fetch_add(1)) {
                    if (failed.load()) return;
                    try {
                        run_task(flat);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        failed.store(true);
                        return;
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (std::size_t si = 0; si < n_sweep; ++si) {
        for (std::size_t pi = 0; pi < n_policy; ++pi) {
            const PolicySetting& setting = plans[si].policies[pi];
            for (std::size_t mi = 0; mi < n_metric; ++mi) {
                const std::vector<double>& cell = result.samples[si][pi][mi];
                double sum = 0.0;
                for (double v : cell) sum += v;
                const double mean = sum / static_cast<double>(cell.size());
                double se = 0.0;
                if (cell.size() > 1) {
                    double ss = 0.0;
                    for (double v : cell) ss += (v - mean) * (v - mean);
                    se = std::sqrt(ss / static_cast<double>(cell.size() - 1) /
                                   static_cast<double>(cell.size()));
                }
                result.rows.push_back({spec.sweep.values[si], setting.name, setting.r,
                                       setting.B, metrics[mi].name, mean, se,
                                       spec.replications, spec.seed});
            }
        }
    }
    return result;
}

namespace experiment_detail {

inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_csv_double(const std::string& field, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw std::invalid_argument("csv: bad " + std::string(what) + " \"" + field + "\"");
    return v;
}

inline std::int64_t parse_csv_int(const std::string& field, const char* what) {
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size())
        throw std::invalid_argument("csv: bad " + std::string(what) + " \"" + field + "\"");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace experiment_detail

inline constexpr const char* kResultCsvHeader =
    "sweep_value,policy,r,B,metric,mean,se,replications,seed_base";

inline std::string result_csv(const ExperimentResult& result) {
    using experiment_detail::csv_double;
    std::string out = kResultCsvHeader;
    out += "\n";
    for (const ResultRow& row : result.rows) {
        out += csv_double(row.sweep_value);
        out += ",";
        out += row.policy;
        out += ",";
        out += std::to_string(row.r);
        out += ",";
        out += buffer_text(row.B);
        out += ",";
        out += row.metric;
        out += ",";
        out += csv_double(row.mean);
        out += ",";
        out += csv_double(row.se);
        out += ",";
        out += std::to_string(row.replications);
        out += ",";
        out += std::to_string(row.seed_base);
        out += "\n";
    }
    return out;
}

inline std::vector<ResultRow> parse_result_csv(const std::string& text) {
    using namespace experiment_detail;
    std::vector<ResultRow> rows;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kResultCsvHeader)
        throw std::invalid_argument("csv: missing or mismatched header line");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 9)
            throw std::invalid_argument("csv: line " + std::to_string(lineno) + " has " +
                                        std::to_string(fields.size()) +
                                        " fields, expected 9");
        ResultRow row;
        row.sweep_value = parse_csv_double(fields[0], "sweep_value");
        row.policy = fields[1];
        row.r = static_cast<int>(parse_csv_int(fields[2], "r"));
        row.B = fields[3] == "inf" ? kInfiniteBuffer : parse_csv_int(fields[3], "B");
        row.metric = fields[4];
        row.mean = parse_csv_double(fields[5], "mean");
        row.se = parse_csv_double(fields[6], "se");
        row.replications = static_cast<int>(parse_csv_int(fields[7], "replications"));
        row.seed_base = static_cast<std::uint64_t>(parse_csv_int(fields[8], "seed_base"));
        rows.push_back(row);
    }
    return rows;
}

namespace experiment_detail {

inline std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end),
                              '\n'));
}

inline std::size_t line_of_key(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\"";
    const std::size_t pos = text.find(needle);
    if (pos == std::string::npos) return 0;
    return line_of_byte(text, pos);
}

inline std::string at_line(const std::string& raw, const std::string& key) {
    const std::size_t line = line_of_key(raw, key);
    return line == 0 ? "" : " (line " + std::to_string(line) + ")";
}

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> known,
                                const std::string& raw, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) {
                found = true;
                break;
            }
        if (!found)
            throw std::invalid_argument("spec: unknown key \"" + it.key() + "\" in " +
                                        where + at_line(raw, it.key()));
    }
}

inline const nlohmann::json& require_key(const nlohmann::json& obj, const char* key,
                                         const std::string& where) {
    if (!obj.contains(key))
        throw std::invalid_argument("spec: " + where + " is missing required key \"" +
                                    key + "\"");
    return obj.at(key);
}

template <typename T>
T typed(const nlohmann::json& value, const char* key, const std::string& raw) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("spec: key \"" + std::string(key) +
                                    "\" has the wrong type" + at_line(raw, key));
    }
}

inline DistributionSpec distribution_field(const nlohmann::json& value, const char* key,
                                           const std::string& raw) {
    const std::string text = typed<std::string>(value, key, raw);
    try {
        return DistributionSpec::parse(text);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("spec: key \"" + std::string(key) + "\": " + e.what() +
                                    at_line(raw, key));
    }
}

inline std::int64_t buffer_field(const nlohmann::json& value, const std::string& raw) {
    if (value.is_string()) {
        if (value.get<std::string>() == "inf") return kInfiniteBuffer;
        throw std::invalid_argument("spec: key \"B\" must be \"inf\" or an integer" +
                                    at_line(raw, "B"));
    }
    if (!value.is_number_integer() && !value.is_number_unsigned())
        throw std::invalid_argument("spec: key \"B\" must be \"inf\" or an integer" +
                                    at_line(raw, "B"));
    const std::int64_t b = value.get<std::int64_t>();
    if (b < 0)
        throw std::invalid_argument("spec: key \"B\" must be non-negative" +
                                    at_line(raw, "B"));
    return b;
}

}  // namespace experiment_detail

inline ExperimentSpec parse_spec(const std::string& json_text) {
    using namespace experiment_detail;
    using nlohmann::json;

    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("spec: JSON syntax error at line " +
                                    std::to_string(line_of_byte(json_text, e.byte)) + ": " +
                                    e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("spec: top level must be an object");

    reject_unknown_keys(root,
                        {"name", "m", "service", "generation", "arrival_delay", "horizon",
                         "replications", "seed", "sweep", "policies", "metrics"},
                        json_text, "the top-level object");

    ExperimentSpec spec;
    spec.name = typed<std::string>(require_key(root, "name", "the spec"), "name", json_text);
    spec.m = typed<int>(require_key(root, "m", "the spec"), "m", json_text);
    spec.service =
        distribution_field(require_key(root, "service", "the spec"), "service", json_text);
    spec.generation = distribution_field(require_key(root, "generation", "the spec"),
                                         "generation", json_text);
    if (root.contains("arrival_delay"))
        spec.arrival_delay =
            distribution_field(root.at("arrival_delay"), "arrival_delay", json_text);
    spec.horizon =
        typed<double>(require_key(root, "horizon", "the spec"), "horizon", json_text);
    spec.replications = typed<int>(require_key(root, "replications", "the spec"),
                                   "replications", json_text);
    spec.seed =
        typed<std::uint64_t>(require_key(root, "seed", "the spec"), "seed", json_text);

    const json& sweep = require_key(root, "sweep", "the spec");
    if (!sweep.is_object())
        throw std::invalid_argument("spec: key \"sweep\" must be an object" +
                                    at_line(json_text, "sweep"));
    reject_unknown_keys(sweep, {"variable", "values"}, json_text, "the sweep object");
    spec.sweep.variable = parse_sweep_variable(typed<std::string>(
        require_key(sweep, "variable", "the sweep object"), "variable", json_text));
    spec.sweep.values = typed<std::vector<double>>(
        require_key(sweep, "values", "the sweep object"), "values", json_text);

    const json& policies = require_key(root, "policies", "the spec");
    if (!policies.is_array())
        throw std::invalid_argument("spec: key \"policies\" must be an array" +
                                    at_line(json_text, "policies"));
    for (const json& entry : policies) {
        if (!entry.is_object())
            throw std::invalid_argument("spec: each policy must be an object" +
                                        at_line(json_text, "policies"));
        reject_unknown_keys(entry, {"name", "r", "B"}, json_text, "a policy object");
        PolicySetting setting;
        setting.name = typed<std::string>(require_key(entry, "name", "a policy object"),
                                          "name", json_text);
        if (entry.contains("r")) setting.r = typed<int>(entry.at("r"), "r", json_text);
        if (entry.contains("B")) setting.B = buffer_field(entry.at("B"), json_text);
        spec.policies.push_back(setting);
    }

    spec.metrics = typed<std::vector<std::string>>(
        require_key(root, "metrics", "the spec"), "metrics", json_text);

    try {
        validate_spec(spec);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(e.what()) +
                                    " (spec \"" + spec.name + "\")");
    }
    return spec;
}

inline ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("spec: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_spec(buffer.str());
}

}  // namespace aoi
