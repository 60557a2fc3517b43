// Age trajectories and their functionals.
//
// The age process is the sawtooth Δ(t) = t − U(t), where U(t) is the largest
// generation time among packets delivered by t (U(0⁻) = 0). The lower-bound
// process replaces delivery times with earliest service starts. Every
// functional below is evaluated in exact closed form per linear segment; no
// numeric quadrature anywhere.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aoi/packet.hpp"

namespace aoi {

// Piecewise-linear sawtooth: slope exactly 1 between breakpoints; each
// breakpoint (t, value) records the value just after the strict downward
// reset at t. Δ(0) = 0.
struct AgeTrajectory {
    std::vector<std::pair<double, double>> breakpoints;
    double horizon = 0.0;

    // Value just after time t (right-continuous evaluation).
    double value(double t) const {
        auto it = std::upper_bound(
            breakpoints.begin(), breakpoints.end(), t,
            [](double x, const std::pair<double, double>& bp) { return x < bp.first; });
        if (it == breakpoints.begin()) return t;
        --it;
        return it->second + (t - it->first);
    }

    // Value approaching t from below.
    double left_limit(double t) const {
        auto it = std::lower_bound(
            breakpoints.begin(), breakpoints.end(), t,
            [](const std::pair<double, double>& bp, double x) { return bp.first < x; });
        if (it == breakpoints.begin()) return t;
        --it;
        return it->second + (t - it->first);
    }
};

// Builds the sawtooth from reset events (t, s): at time t a packet with
// generation time s takes effect. Only strict increases of the running
// maximum produce breakpoints. Events past the horizon are ignored.
inline AgeTrajectory trajectory_from_resets(
    std::vector<std::pair<double, double>> events, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("trajectory: horizon must be positive");
    std::sort(events.begin(), events.end());
    AgeTrajectory traj;
    traj.horizon = horizon;
    double u = 0.0;
    for (std::size_t i = 0; i < events.size();) {
        const double t = events[i].first;
        double s_max = events[i].second;
        std::size_t j = i + 1;
        while (j < events.size() && events[j].first == t) {
            s_max = std::max(s_max, events[j].second);
            ++j;
        }
        i = j;
        if (t > horizon) break;
        if (s_max > u) {
            u = s_max;
            if (s_max > t) {
                throw std::logic_error("trajectory: reset below zero (s > t)");
            }
            traj.breakpoints.emplace_back(t, t - u);
        }
    }
    return traj;
}

inline AgeTrajectory age_trajectory(const Trace& trace) {
    std::vector<std::pair<double, double>> events;
    events.reserve(trace.packets.size());
    for (const auto& p : trace.packets) {
        if (p.has_c()) events.emplace_back(p.c, p.s);
    }
    return trajectory_from_resets(std::move(events), trace.config.horizon);
}

// Same construction with delivery times replaced by earliest service starts.
inline AgeTrajectory lower_bound_trajectory(const Trace& trace) {
    std::vector<std::pair<double, double>> events;
    events.reserve(trace.packets.size());
    for (const auto& p : trace.packets) {
        if (p.has_v()) events.emplace_back(p.v, p.s);
    }
    return trajectory_from_resets(std::move(events), trace.config.horizon);
}

// Exact trapezoid integral of the sawtooth over [0, horizon], divided by the
// horizon.
inline double time_average_age(const AgeTrajectory& traj) {
    if (!(traj.horizon > 0.0)) throw std::invalid_argument("time_average_age: horizon must be positive");
    double integral = 0.0;
    double prev_t = 0.0;
    double prev_v = 0.0;
    auto segment = [](double v, double len) { return len * (v + 0.5 * len); };
    for (const auto& [t, v] : traj.breakpoints) {
        integral += segment(prev_v, t - prev_t);
        prev_t = t;
        prev_v = v;
    }
    integral += segment(prev_v, traj.horizon - prev_t);
    return integral / traj.horizon;
}

// Left-limits of Δ at each strict reset. Only peaks completed within the
// horizon count; the final unfinished ramp is not a peak.
inline std::vector<double> peak_values(const AgeTrajectory& traj) {
    std::vector<double> peaks;
    peaks.reserve(traj.breakpoints.size());
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (const auto& [t, v] : traj.breakpoints) {
        peaks.push_back(prev_v + (t - prev_t));
        prev_t = t;
        prev_v = v;
    }
    return peaks;
}

// Mean peak value; empty when the trajectory has no completed peak.
inline std::optional<double> average_peak_age(const AgeTrajectory& traj) {
    const auto peaks = peak_values(traj);
    if (peaks.empty()) return std::nullopt;
    double sum = 0.0;
    for (double p : peaks) sum += p;
    return sum / static_cast<double>(peaks.size());
}

struct AgeSummary {
    double time_avg = 0.0;
    std::optional<double> avg_peak;  // empty = "no peaks"
    std::size_t peak_count = 0;
};

inline AgeSummary summarize_age(const AgeTrajectory& traj) {
    AgeSummary s;
    s.time_avg = time_average_age(traj);
    const auto peaks = peak_values(traj);
    s.peak_count = peaks.size();
    if (!peaks.empty()) {
        double sum = 0.0;
        for (double p : peaks) sum += p;
        s.avg_peak = sum / static_cast<double>(peaks.size());
    }
    return s;
}

enum class PenaltyKind {
    identity,   // h(x) = x
    floor_fn,   // h(x) = floor(x)
    exp_fn,     // h(x) = e^x
    indicator,  // h(x) = 1(x > d)
};

struct PenaltyFn {
    PenaltyKind kind = PenaltyKind::identity;
    double threshold = 0.0;  // the d of the indicator kind
};

struct PenaltyResult {
    double value = 0.0;
    bool saturated = false;  // exponential overflow; value is +infinity
};

namespace detail {

// Antiderivative of floor on [0, y]: with n = floor(y),
// integral = 0+1+...+(n-1) + n·(y−n).
inline double floor_antiderivative(double y) {
    const double n = std::floor(y);
    return 0.5 * n * (n - 1.0) + n * (y - n);
}

}  // namespace detail

// (1/T) ∫ h(Δ(t)) dt with exact per-segment closed forms. The exponential
// kind reports saturation instead of returning a rounded infinity silently.
inline PenaltyResult penalty_average(const AgeTrajectory& traj, PenaltyFn h) {
    if (!(traj.horizon > 0.0)) throw std::invalid_argument("penalty_average: horizon must be positive");
    PenaltyResult result;
    double integral = 0.0;
    double prev_t = 0.0;
    double prev_v = 0.0;
    auto segment = [&](double v, double len) -> double {
        if (len <= 0.0) return 0.0;
        switch (h.kind) {
            case PenaltyKind::identity:
                return len * (v + 0.5 * len);
            case PenaltyKind::floor_fn:
                return detail::floor_antiderivative(v + len) -
                       detail::floor_antiderivative(v);
            case PenaltyKind::exp_fn: {
                if (v + len > 709.0) {
                    result.saturated = true;
                    return HUGE_VAL;
                }
                return std::exp(v) * std::expm1(len);
            }
            case PenaltyKind::indicator:
                return len - std::clamp(h.threshold - v, 0.0, len);
        }
        return 0.0;
    };
    for (const auto& [t, v] : traj.breakpoints) {
        integral += segment(prev_v, t - prev_t);
        prev_t = t;
        prev_v = v;
    }
    integral += segment(prev_v, traj.horizon - prev_t);
    if (std::isinf(integral)) result.saturated = true;
    result.value = result.saturated ? HUGE_VAL : integral / traj.horizon;
    return result;
}

struct ThroughputDelay {
    std::int64_t delivered_count = 0;
    std::optional<double> avg_delay;  // empty = "undefined" (no deliveries)
    // Step function of distinct packets in system: (time, count just after).
    std::vector<std::pair<double, int>> n_steps;
};

inline ThroughputDelay throughput_delay(const Trace& trace) {
    ThroughputDelay out;
    double delay_sum = 0.0;
    std::vector<std::pair<double, int>> deltas;
    deltas.reserve(trace.packets.size() * 2);
    for (const auto& p : trace.packets) {
        if (p.a > trace.config.horizon) continue;  // never entered the system
        deltas.emplace_back(p.a, +1);
        if (p.has_c()) {
            ++out.delivered_count;
            delay_sum += p.c - p.a;
            deltas.emplace_back(p.c, -1);
        } else if (p.dropped) {
            deltas.emplace_back(p.drop_time, -1);
        }
    }
    if (out.delivered_count > 0) {
        out.avg_delay = delay_sum / static_cast<double>(out.delivered_count);
    }
    std::sort(deltas.begin(), deltas.end());
    int n = 0;
    for (std::size_t i = 0; i < deltas.size();) {
        const double t = deltas[i].first;
        while (i < deltas.size() && deltas[i].first == t) {
            n += deltas[i].second;
            ++i;
        }
        out.n_steps.emplace_back(t, n);
    }
    return out;
}

// Two-column CSV of the sawtooth: both the left-limit and the post-reset
// value at every breakpoint, plus the endpoints.
inline std::string age_trajectory_csv(const AgeTrajectory& traj) {
    std::string out = "t,age\n";
    out += "0,0\n";
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (const auto& [t, v] : traj.breakpoints) {
        out += format_double(t) + "," + format_double(prev_v + (t - prev_t)) + "\n";
        out += format_double(t) + "," + format_double(v) + "\n";
        prev_t = t;
        prev_v = v;
    }
    out += format_double(traj.horizon) + "," +
           format_double(prev_v + (traj.horizon - prev_t)) + "\n";
    return out;
}

}  // namespace aoi
