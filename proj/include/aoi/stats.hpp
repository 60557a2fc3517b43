// Statistics over traces: the age-to-bound gap decomposition and one-sided
// confidence verdicts for policy comparisons.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi/metrics.hpp"
#include "aoi/packet.hpp"

namespace aoi {

// Inverse standard normal CDF, Acklam's rational approximation refined with
// one Halley step; absolute error is far below any tolerance used here.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double t = q * q;
        x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * q /
            (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    constexpr double sqrt_two_pi = 2.506628274631000502;
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * sqrt_two_pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

// Decomposition of the area between the age process and its information-
// theoretic floor. For packet i (generation times non-decreasing), Gamma_i is
// the earliest service start and D_i the earliest delivery among packets at
// least as fresh; the gap area over [0, T] equals exactly
// sum_i tau_i * (min(D_i, T) - min(Gamma_i, T)) with tau_i the generation gap.
struct GapAudit {
    double area_age = 0.0;        // integral of the age sawtooth
    double area_bound = 0.0;      // integral of the lower-bound sawtooth
    double gap_area = 0.0;        // area_age - area_bound
    double decomposed_area = 0.0;  // the tau-weighted staleness sum, equals gap_area
    std::vector<double> staleness;  // D_i - Gamma_i over packets delivered in-horizon
    double max_staleness = 0.0;
};

inline GapAudit gap_audit(const Trace& trace) {
    const double T = trace.config.horizon;
    const std::size_t n = trace.packets.size();
    constexpr double kNever = std::numeric_limits<double>::infinity();

    std::vector<double> earliest_start(n + 1, kNever);
    std::vector<double> earliest_delivery(n + 1, kNever);
    for (std::size_t i = n; i-- > 0;) {
        const Packet& p = trace.packets[i];
        earliest_start[i] =
            std::min(earliest_start[i + 1], p.has_v() ? p.v : kNever);
        earliest_delivery[i] =
            std::min(earliest_delivery[i + 1], p.has_c() ? p.c : kNever);
    }

    GapAudit audit;
    const AgeTrajectory age = age_trajectory(trace);
    const AgeTrajectory bound = lower_bound_trajectory(trace);
    audit.area_age = time_average_age(age) * T;
    audit.area_bound = time_average_age(bound) * T;
    audit.gap_area = audit.area_age - audit.area_bound;

    double prev_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = trace.packets[i].s - prev_s;
        prev_s = trace.packets[i].s;
        audit.decomposed_area +=
            tau * (std::min(earliest_delivery[i], T) - std::min(earliest_start[i], T));
        if (earliest_delivery[i] < kNever) {
            const double d = earliest_delivery[i] - earliest_start[i];
            audit.staleness.push_back(d);
            audit.max_staleness = std::max(audit.max_staleness, d);
        }
    }
    return audit;
}

enum class CiVerdict { a_le_b, a_gt_b, inconclusive };

inline const char* ci_verdict_name(CiVerdict v) {
    switch (v) {
        case CiVerdict::a_le_b: return "A<=B";
        case CiVerdict::a_gt_b: return "A>B";
        case CiVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct CiReport {
    CiVerdict verdict = CiVerdict::inconclusive;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double diff = 0.0;  // mean_a - mean_b
    double se = 0.0;
    double confidence = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool paired = false;
};

namespace detail {

inline double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace detail

// One-sided comparison of two samples of per-replication values. Paired mode
// uses the per-index differences (common-random-number runs); unpaired uses
// the Welch standard error. Samples smaller than 30 are refused rather than
// silently trusted to be normal enough.
inline CiReport dominance_ci(const std::vector<double>& a, const std::vector<double>& b,
                             double confidence = 0.99, bool paired = false) {
    if (a.size() < 30 || b.size() < 30)
        throw std::invalid_argument("dominance_ci: need at least 30 replications per side");
    if (paired && a.size() != b.size())
        throw std::invalid_argument("dominance_ci: paired samples must have equal size");
    if (!(confidence > 0.5 && confidence < 1.0))
        throw std::invalid_argument("dominance_ci: confidence must lie in (0.5, 1)");

    CiReport report;
    report.confidence = confidence;
    report.paired = paired;
    report.n_a = a.size();
    report.n_b = b.size();
    report.mean_a = detail::mean_of(a);
    report.mean_b = detail::mean_of(b);
    if (paired) {
        std::vector<double> delta(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) delta[i] = a[i] - b[i];
        report.diff = detail::mean_of(delta);
        report.se = std::sqrt(detail::sample_variance(delta, report.diff) /
                              static_cast<double>(delta.size()));
    } else {
        report.diff = report.mean_a - report.mean_b;
        report.se = std::sqrt(
            detail::sample_variance(a, report.mean_a) / static_cast<double>(a.size()) +
            detail::sample_variance(b, report.mean_b) / static_cast<double>(b.size()));
    }
    if (report.se == 0.0) {
        report.verdict = report.diff > 0.0 ? CiVerdict::a_gt_b : CiVerdict::a_le_b;
        return report;
    }
    const double zcrit = normal_quantile(confidence);
    if (report.diff + zcrit * report.se < 0.0)
        report.verdict = CiVerdict::a_le_b;
    else if (report.diff - zcrit * report.se > 0.0)
        report.verdict = CiVerdict::a_gt_b;
    else
        report.verdict = CiVerdict::inconclusive;
    return report;
}

}  // namespace aoi
