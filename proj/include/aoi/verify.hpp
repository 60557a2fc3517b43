// Verification suites. Each suite exercises one structural claim of the
// scheduling theory at a fixed scale and reports one pass/fail line per check:
//
//   thm1              coupled sample-path dominance of the preemptive
//                     freshest-first policy over weaker disciplines
//   thm2a-shifted     age-to-bound gap under shifted-exponential service
//   thm2a-gamma       age-to-bound gap under gamma service
//   thm2b             sharper gap bound when servers split evenly, with a
//                     Monte Carlo oracle for the bound itself
//   thm3              coupled equality of in-system and delivered counts for
//                     work-conserving policies, plus an idling control
//   cor-b-invariance  buffer size cannot change the preemptive age path
//   lcfs-equivalence  freshest-first equals newest-arrival-first when packets
//                     arrive in generation order, and only then
//   nbu-presets       the stock distributions sit on the advertised side of
//                     the new-better-than-used property

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi/coupling.hpp"
#include "aoi/metrics.hpp"
#include "aoi/policies.hpp"
#include "aoi/rng.hpp"
#include "aoi/simulate.hpp"
#include "aoi/stats.hpp"
#include "aoi/workload.hpp"

namespace aoi {

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const {
        if (checks.empty()) return false;
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.pass; });
    }

    std::string text() const {
        std::string out;
        std::size_t passed = 0;
        for (const CheckResult& c : checks) {
            out += c.pass ? "[PASS] " : "[FAIL] ";
            out += suite + "/" + c.id + ": " + c.detail + "\n";
            if (c.pass) ++passed;
        }
        out += "suite " + suite + ": " + (pass() ? "PASS" : "FAIL") + " (" +
               std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks)\n";
        return out;
    }
};

// Deliberately broken control policy: it grabs an idle server on arrival but
// never starts waiting packets on a departure, so it idles while work waits.
class IdlingFcfs final : public Policy {
  public:
    std::string_view name() const override { return "idling-fcfs"; }
    void on_arrival(System& sys, std::int64_t id) override {
        if (sys.idle_count() > 0) sys.assign_replicas(id, 1);
    }
    void on_departure(System&, std::int64_t) override {}
};

namespace verify_detail {

inline std::string fmt(double v, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_compact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct GapCell {
    double mean = 0.0;
    double se = 0.0;
    std::int64_t delivered = 0;
};

// Mean and standard error over replications of: time-average age of the
// non-preemptive freshest-first policy minus the time average of its
// service-start lower bound, on the same trace.
inline GapCell gap_cell(SystemConfig base, int reps, std::uint64_t seed_base,
                        std::uint64_t cell_tag) {
    base.record_events = false;
    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(reps));
    GapCell cell;
    for (int rep = 0; rep < reps; ++rep) {
        base.seed = derive_seed(seed_base, cell_tag, static_cast<std::uint64_t>(rep));
        const Trace trace = run_simulation(base, PolicyDescriptor{"non-prmp-lgfs-r"});
        const double age = time_average_age(age_trajectory(trace));
        const double bound = time_average_age(lower_bound_trajectory(trace));
        gaps.push_back(age - bound);
        cell.delivered += trace.delivered_count();
    }
    double sum = 0.0;
    for (double g : gaps) sum += g;
    cell.mean = sum / static_cast<double>(gaps.size());
    double ss = 0.0;
    for (double g : gaps) ss += (g - cell.mean) * (g - cell.mean);
    cell.se = std::sqrt(ss / static_cast<double>(gaps.size() - 1) /
                        static_cast<double>(gaps.size()));
    return cell;
}

// Shared service law for the shifted-exponential suites: 0.25 seconds of
// deterministic work plus an exponential tail of mean 0.25, so E[X] = 0.5.
inline DistributionSpec shifted_service() {
    return DistributionSpec::shifted_exponential(0.25, 4.0);
}

inline SystemConfig gap_base(int m, int r, double rho, DistributionSpec service,
                             double horizon) {
    SystemConfig cfg;
    cfg.m = m;
    cfg.r = r;
    cfg.B = 1;
    cfg.service = service;
    cfg.generation = DistributionSpec::exponential(rho * m / service.mean());
    cfg.horizon = horizon;
    return cfg;
}

}  // namespace verify_detail

// Fifty coupled runs at load one: the preemptive freshest-first policy with
// unbounded buffer is coupled against first-come-first-served (buffers 10 and
// unbounded), its non-preemptive twin (same replication degree, buffers 10
// and unbounded), the preemptive newest-arrival policy, and the
// non-preemptive newest-arrival policy with buffer 1. After every shared
// event the reference snapshot must dominate each alternative exactly: the
// freshest delivered generation is no older, and the sorted clamped
// generation times in service are componentwise no older.
inline SuiteReport verify_thm1(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"thm1", {}};
    const auto t0 = std::chrono::steady_clock::now();

    struct CaseSpec {
        int m;
        int r;
        bool delayed;
        int runs;
        const char* id;
    };
    const CaseSpec cases[] = {
        {1, 1, false, 13, "m1-r1"},
        {4, 1, false, 13, "m4-r1"},
        {4, 2, true, 12, "m4-r2-delayed"},
        {4, 4, false, 12, "m4-r4"},
    };

    std::uint64_t total_events = 0;
    int total_runs = 0;
    for (std::size_t ci = 0; ci < std::size(cases); ++ci) {
        const CaseSpec& cs = cases[ci];
        bool ok = true;
        std::string note;
        std::uint64_t min_events = std::numeric_limits<std::uint64_t>::max();
        for (int run = 0; run < cs.runs; ++run) {
            SystemConfig head;
            head.m = cs.m;
            head.r = cs.r;
            head.B = kInfiniteBuffer;
            head.service = DistributionSpec::exponential(1.0);
            head.generation = DistributionSpec::erlang_mean(2, 1.0 / cs.m);
            if (cs.delayed) head.arrival_delay = DistributionSpec::two_point(1.0, 100.0, 0.5);
            head.horizon = 7800.0 / cs.m;
            head.seed = derive_seed(seed, ci, static_cast<std::uint64_t>(run));
            head.record_events = false;

            std::vector<SystemConfig> configs(7, head);
            std::vector<PolicyDescriptor> policies(7);
            policies[0] = PolicyDescriptor{"prmp-lgfs-r"};
            configs[1].r = 1;
            configs[1].B = 10;
            policies[1] = PolicyDescriptor{"fcfs"};
            configs[2].r = 1;
            policies[2] = PolicyDescriptor{"fcfs"};
            configs[3].B = 10;
            policies[3] = PolicyDescriptor{"non-prmp-lgfs-r"};
            policies[4] = PolicyDescriptor{"non-prmp-lgfs-r"};
            configs[5].r = 1;
            policies[5] = PolicyDescriptor{"lcfs-p"};
            configs[6].r = 1;
            configs[6].B = 1;
            policies[6] = PolicyDescriptor{"lcfs-np"};

            const auto workload = generate_workload(head);
            const CoupledOutcome out =
                run_coupled_exponential(workload, configs, policies, head.seed);
            min_events = std::min(min_events, out.event_count);
            total_events += out.event_count;
            ++total_runs;
            if (!out.dominance_ok) {
                ok = false;
                note = " violation in system " + std::to_string(out.violation_system) +
                       " at t=" + fmt(out.violation_time, 3) + " (run " +
                       std::to_string(run) + ")";
                break;
            }
        }
        if (min_events < 10000) {
            ok = false;
            note += " only " + std::to_string(min_events) + " events in the shortest run";
        }
        report.checks.push_back(
            {cs.id, ok,
             std::to_string(cs.runs) + " runs vs 6 alternatives, min " +
                 std::to_string(min_events) + " events, dominance exact at every event" +
                 note});
    }

    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    report.checks.push_back({"runtime", elapsed < 300.0,
                             std::to_string(total_runs) + " runs, " +
                                 std::to_string(total_events) + " events in " +
                                 fmt(elapsed, 1) + "s (budget 300s)"});
    return report;
}

// Buffer invariance: the preemptive freshest-first policy never serves a
// packet it would have dropped, so coupled runs with buffers 0, 1, 10, and
// unbounded must produce byte-for-byte identical age trajectories.
inline SuiteReport verify_b_invariance(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"cor-b-invariance", {}};

    struct GroupSpec {
        int m;
        int r;
        const char* id;
    };
    const GroupSpec groups[] = {{1, 1, "m1-r1"}, {4, 2, "m4-r2"}};
    const std::int64_t buffers[] = {kInfiniteBuffer, 10, 1, 0};

    for (std::size_t gi = 0; gi < std::size(groups); ++gi) {
        const GroupSpec& gs = groups[gi];
        bool ok = true;
        std::string note;
        std::size_t min_breaks = std::numeric_limits<std::size_t>::max();
        for (int run = 0; run < 10; ++run) {
            SystemConfig head;
            head.m = gs.m;
            head.r = gs.r;
            head.B = kInfiniteBuffer;
            head.service = DistributionSpec::exponential(1.0);
            head.generation = DistributionSpec::erlang_mean(2, 1.0 / gs.m);
            if (run % 2 == 1) head.arrival_delay = DistributionSpec::two_point(1.0, 100.0, 0.5);
            head.horizon = 600.0 / gs.m;
            head.seed = derive_seed(seed, 100 + gi, static_cast<std::uint64_t>(run));
            head.record_events = false;

            std::vector<SystemConfig> configs;
            std::vector<PolicyDescriptor> policies;
            for (std::int64_t b : buffers) {
                SystemConfig cfg = head;
                cfg.B = b;
                configs.push_back(cfg);
                policies.push_back(PolicyDescriptor{"prmp-lgfs-r"});
            }
            const auto workload = generate_workload(head);
            const CoupledOutcome out =
                run_coupled_exponential(workload, configs, policies, head.seed);
            if (!out.dominance_ok) {
                ok = false;
                note = " dominance broke at t=" + fmt(out.violation_time, 3);
                break;
            }
            const AgeTrajectory reference = age_trajectory(out.traces.front());
            min_breaks = std::min(min_breaks, reference.breakpoints.size());
            for (std::size_t i = 1; i < out.traces.size(); ++i) {
                const AgeTrajectory other = age_trajectory(out.traces[i]);
                if (other.breakpoints != reference.breakpoints ||
                    other.horizon != reference.horizon) {
                    ok = false;
                    note = " buffer " + buffer_text(configs[i].B) + " diverged (run " +
                           std::to_string(run) + ")";
                    break;
                }
            }
            if (!ok) break;
        }
        if (min_breaks < 20) {
            ok = false;
            note += " too few breakpoints (" + std::to_string(min_breaks) + ")";
        }
        report.checks.push_back(
            {gs.id, ok,
             "10 runs, buffers {inf,10,1,0} share one age trajectory, min " +
                 std::to_string(min_breaks) + " breakpoints" + note});
    }
    return report;
}

// Work-conserving count coupling: with exponential service and unbounded
// buffers, the number of packets in system and the number delivered evolve
// identically for the preemptive freshest-first policy,
// first-come-first-served, and the non-preemptive twin, event by event. A
// policy that idles a server while work waits must fail the same check.
inline SuiteReport verify_thm3(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"thm3", {}};

    struct SetSpec {
        int r;
        bool with_fcfs;
        const char* id;
    };
    const SetSpec sets[] = {
        {1, true, "work-conserving-r1"},
        {2, false, "work-conserving-r2"},
        {4, false, "work-conserving-r4"},
    };

    for (std::size_t si = 0; si < std::size(sets); ++si) {
        const SetSpec& set = sets[si];
        bool ok = true;
        std::string note;
        std::int64_t min_delivered = std::numeric_limits<std::int64_t>::max();
        for (int run = 0; run < 5; ++run) {
            SystemConfig head;
            head.m = 4;
            head.r = set.r;
            head.B = kInfiniteBuffer;
            head.service = DistributionSpec::exponential(1.0);
            head.generation = DistributionSpec::erlang_mean(2, 0.25);
            head.horizon = 2000.0;
            head.seed = derive_seed(seed, 200 + si, static_cast<std::uint64_t>(run));
            head.record_events = false;

            std::vector<SystemConfig> configs{head, head};
            std::vector<PolicyDescriptor> policies{PolicyDescriptor{"prmp-lgfs-r"},
                                                   PolicyDescriptor{"non-prmp-lgfs-r"}};
            if (set.with_fcfs) {
                SystemConfig fcfs_cfg = head;
                fcfs_cfg.r = 1;
                configs.push_back(fcfs_cfg);
                policies.push_back(PolicyDescriptor{"fcfs"});
            }
            const auto workload = generate_workload(head);
            const CountsOutcome out =
                run_coupled_counts(workload, configs, policies, head.seed);
            for (std::int64_t d : out.final_delivered)
                min_delivered = std::min(min_delivered, d);
            if (!out.equal) {
                ok = false;
                note = " counts diverged at t=" + fmt(out.first_difference_time, 3) +
                       " (run " + std::to_string(run) + ")";
                break;
            }
        }
        if (min_delivered < 1000) {
            ok = false;
            note += " too few deliveries (" + std::to_string(min_delivered) + ")";
        }
        report.checks.push_back(
            {set.id, ok,
             "5 runs" + std::string(set.with_fcfs ? " vs non-preemptive and fcfs" :
                                                    " vs non-preemptive") +
                 ", counts identical at every event, min " +
                 std::to_string(min_delivered) + " delivered" + note});
    }

    {
        SystemConfig base;
        base.m = 1;
        base.r = 1;
        base.B = kInfiniteBuffer;
        base.service = DistributionSpec::exponential(1.0);
        base.horizon = 50.0;
        base.seed = derive_seed(seed, 299);
        base.record_events = false;
        const auto workload = make_workload({{1.0, 1.0}, {1.0, 1.0}});
        std::vector<std::unique_ptr<Policy>> policies;
        policies.push_back(make_policy(PolicyDescriptor{"fcfs"}, base));
        policies.push_back(std::make_unique<IdlingFcfs>());
        const CountsOutcome out =
            run_coupled_counts(workload, {base, base}, std::move(policies), base.seed);
        const bool caught = !out.equal && out.final_delivered.size() == 2 &&
                            out.final_delivered[0] == 2 && out.final_delivered[1] == 1;
        report.checks.push_back(
            {"idling-negative-control", caught,
             caught ? "idling policy detected: counts diverged at t=" +
                          fmt(out.first_difference_time, 3) + ", delivered 2 vs 1"
                    : "idling policy was not detected"});
    }
    return report;
}

// Gap bound, shifted-exponential service: across a load grid and replication
// degrees 1 and 4, the mean age-to-bound gap of the non-preemptive
// freshest-first policy stays below one mean service time (0.5) plus three
// standard errors.
inline SuiteReport verify_thm2a_shifted(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"thm2a-shifted", {}};
    const double bound = shifted_service().mean();
    for (int r : {1, 4}) {
        for (int gi = 0; gi < 10; ++gi) {
            const double rho = 0.2 * (gi + 1);
            const SystemConfig base = gap_base(4, r, rho, shifted_service(), 1e5);
            const GapCell cell =
                gap_cell(base, 20, seed, static_cast<std::uint64_t>(r) * 1000 +
                                             static_cast<std::uint64_t>(gi));
            const double limit = bound + 3.0 * cell.se;
            report.checks.push_back(
                {"r" + std::to_string(r) + "-rho" + fmt(rho, 1), cell.mean <= limit,
                 "gap " + fmt(cell.mean, 5) + " <= " + fmt(limit, 5) + " (bound " +
                     fmt(bound, 3) + " + 3se, se " + fmt(cell.se, 6) + ", 20 reps)"});
        }
    }
    return report;
}

// Gap bound, gamma service: at load 1.8 the mean gap stays below one mean
// service time (1.0) plus three standard errors for shapes 2, 4, and 8.
inline SuiteReport verify_thm2a_gamma(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"thm2a-gamma", {}};
    for (double shape : {2.0, 4.0, 8.0}) {
        const auto service = DistributionSpec::gamma_mean(shape, 1.0);
        const SystemConfig base = gap_base(4, 1, 1.8, service, 1e5);
        const GapCell cell =
            gap_cell(base, 20, seed, 2000 + static_cast<std::uint64_t>(shape));
        const double limit = 1.0 + 3.0 * cell.se;
        report.checks.push_back(
            {"K" + fmt_compact(shape), cell.mean <= limit,
             "gap " + fmt(cell.mean, 5) + " <= " + fmt(limit, 5) +
                 " (bound 1.0 + 3se, se " + fmt(cell.se, 6) + ", 20 reps)"});
    }
    return report;
}

// Sharper gap bound when the servers split evenly across replicas (m = 2r):
// the gap is bounded by the mean of the minimum of two service draws, which a
// million-pair Monte Carlo oracle estimates before any simulation runs.
inline SuiteReport verify_thm2b(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"thm2b", {}};

    const auto service = shifted_service();
    RngStream oracle_rng(derive_seed(seed, 2222), StreamPurpose::scratch, 0);
    const std::size_t pairs = 1000000;
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double x = std::min(service.sample(oracle_rng), service.sample(oracle_rng));
        sum += x;
        sumsq += x * x;
    }
    const double mc_mean = sum / static_cast<double>(pairs);
    const double mc_var =
        (sumsq - static_cast<double>(pairs) * mc_mean * mc_mean) /
        static_cast<double>(pairs - 1);
    const double mc_se = std::sqrt(mc_var / static_cast<double>(pairs));
    // Closed form for min of two draws: 0.25 + 0.25/2 = 0.375.
    report.checks.push_back({"oracle-min-of-2", std::abs(mc_mean - 0.375) < 0.002,
                             "E[min of 2 draws] = " + fmt(mc_mean, 6) + " (se " +
                                 fmt(mc_se, 7) + ", closed form 0.375, 1e6 pairs)"});

    for (double rho : {0.6, 1.8}) {
        const SystemConfig base = gap_base(4, 2, rho, service, 1e5);
        const GapCell cell = gap_cell(base, 20, seed, 3000 + double_bits(rho) % 997);
        const double limit = mc_mean + 3.0 * cell.se;
        report.checks.push_back(
            {"rho" + fmt(rho, 1), cell.mean <= limit,
             "gap " + fmt(cell.mean, 5) + " <= " + fmt(limit, 5) + " (oracle " +
                 fmt(mc_mean, 5) + " + 3se, se " + fmt(cell.se, 6) + ", 20 reps)"});
    }
    return report;
}

// Freshest-first and newest-arrival-first coincide exactly while packets
// arrive in generation order, for both the preemptive and the non-preemptive
// variants; two fixed out-of-order workloads must drive them apart.
inline SuiteReport verify_lcfs_equivalence(std::uint64_t seed = 1) {
    using namespace verify_detail;
    SuiteReport report{"lcfs-equivalence", {}};

    bool prmp_ok = true;
    bool nonprmp_ok = true;
    std::int64_t preemptions = 0;
    std::int64_t drops = 0;
    std::string prmp_note;
    std::string nonprmp_note;
    for (int run = 0; run < 20; ++run) {
        const int m = run < 10 ? 1 : 2;
        SystemConfig cfg;
        cfg.m = m;
        cfg.r = 1;
        cfg.service = DistributionSpec::gamma_mean(2.0, 0.8);
        cfg.generation = DistributionSpec::exponential(1.4 * m / 0.8);
        cfg.horizon = 300.0;
        cfg.seed = derive_seed(seed, 400, static_cast<std::uint64_t>(run));

        SystemConfig prmp_cfg = cfg;
        prmp_cfg.B = 5;
        const Trace fresh_p = run_simulation(prmp_cfg, PolicyDescriptor{"prmp-lgfs-r"});
        const Trace newest_p = run_simulation(prmp_cfg, PolicyDescriptor{"lcfs-p"});
        preemptions += fresh_p.preemption_count;
        if (trace_text(fresh_p) != trace_text(newest_p)) {
            prmp_ok = false;
            prmp_note = " run " + std::to_string(run) + " differed";
        }

        SystemConfig np_cfg = cfg;
        np_cfg.B = 1;
        const Trace fresh_n = run_simulation(np_cfg, PolicyDescriptor{"non-prmp-lgfs-r"});
        const Trace newest_n = run_simulation(np_cfg, PolicyDescriptor{"lcfs-np"});
        drops += fresh_n.drop_count;
        if (trace_text(fresh_n) != trace_text(newest_n)) {
            nonprmp_ok = false;
            nonprmp_note = " run " + std::to_string(run) + " differed";
        }
    }
    if (preemptions == 0) {
        prmp_ok = false;
        prmp_note += " no preemptions observed";
    }
    if (drops == 0) {
        nonprmp_ok = false;
        nonprmp_note += " no drops observed";
    }
    report.checks.push_back({"preemptive-in-order", prmp_ok,
                             "20 runs byte-identical, " + std::to_string(preemptions) +
                                 " preemptions exercised" + prmp_note});
    report.checks.push_back({"non-preemptive-in-order", nonprmp_ok,
                             "20 runs byte-identical, " + std::to_string(drops) +
                                 " drops exercised" + nonprmp_note});

    {
        // A stale packet arriving after a fresher one: newest-arrival-first
        // preempts for it, freshest-first queues it.
        SystemConfig cfg;
        cfg.m = 1;
        cfg.r = 1;
        cfg.B = kInfiniteBuffer;
        cfg.service = DistributionSpec::constant(50.0);
        cfg.horizon = 60.0;
        cfg.seed = derive_seed(seed, 401);
        const auto witness = make_workload({{1.0, 3.0}, {2.0, 2.5}});
        const Trace fresh = run_simulation(cfg, PolicyDescriptor{"prmp-lgfs-r"}, witness);
        const Trace newest = run_simulation(cfg, PolicyDescriptor{"lcfs-p"}, witness);
        const bool differ = trace_text(fresh) != trace_text(newest) &&
                            fresh.preemption_count == 0 && newest.preemption_count == 1;
        report.checks.push_back({"preemptive-witness", differ,
                                 differ ? "out-of-order workload split the pair "
                                          "(preemptions 0 vs 1)"
                                        : "witness failed to split the pair"});
    }
    {
        // With buffer 1 the two disciplines keep different queue survivors.
        SystemConfig cfg;
        cfg.m = 1;
        cfg.r = 1;
        cfg.B = 1;
        cfg.service = DistributionSpec::constant(50.0);
        cfg.horizon = 60.0;
        cfg.seed = derive_seed(seed, 402);
        const auto witness = make_workload({{1.0, 1.0}, {2.0, 4.0}, {3.0, 3.0}});
        const Trace fresh =
            run_simulation(cfg, PolicyDescriptor{"non-prmp-lgfs-r"}, witness);
        const Trace newest = run_simulation(cfg, PolicyDescriptor{"lcfs-np"}, witness);
        const bool differ = trace_text(fresh) != trace_text(newest) &&
                            fresh.packets[1].dropped && newest.packets[2].dropped;
        report.checks.push_back({"non-preemptive-witness", differ,
                                 differ ? "out-of-order workload split the pair "
                                          "(different packets dropped)"
                                        : "witness failed to split the pair"});
    }
    return report;
}

// Stock distributions against the new-better-than-used check: everything the
// simulator ships as an NBU family member must pass on the default grid, and
// the two advertised counterexamples must fail.
inline SuiteReport verify_nbu_presets() {
    using namespace verify_detail;
    SuiteReport report{"nbu-presets", {}};

    const std::pair<const char*, DistributionSpec> members[] = {
        {"exponential", DistributionSpec::exponential(1.0)},
        {"gamma-K2", DistributionSpec::gamma_mean(2.0, 1.0)},
        {"gamma-K4", DistributionSpec::gamma_mean(4.0, 1.0)},
        {"gamma-K8", DistributionSpec::gamma_mean(8.0, 1.0)},
        {"shifted-exponential", shifted_service()},
        {"erlang-2", DistributionSpec::erlang_mean(2, 0.5)},
        {"constant", DistributionSpec::constant(1.0)},
    };
    for (const auto& [id, spec] : members) {
        const NbuCheckResult res = check_nbu(spec);
        report.checks.push_back({id, res.is_nbu,
                                 spec.text() + (res.is_nbu
                                                    ? " is NBU on the default grid"
                                                    : " violated NBU by " +
                                                          fmt(res.worst_violation, 6) +
                                                          " at tau=" + fmt(res.worst_tau, 3) +
                                                          ", t=" + fmt(res.worst_t, 3))});
    }

    const std::pair<const char*, DistributionSpec> controls[] = {
        {"gamma-K0.5-control", DistributionSpec::gamma_mean(0.5, 1.0)},
        {"two-point-control", DistributionSpec::two_point(1.0, 100.0, 0.5)},
    };
    for (const auto& [id, spec] : controls) {
        const NbuCheckResult res = check_nbu(spec);
        report.checks.push_back(
            {id, !res.is_nbu,
             spec.text() + (res.is_nbu ? " unexpectedly passed the NBU check"
                                       : " fails NBU as expected (violation " +
                                             fmt(res.worst_violation, 6) + " at tau=" +
                                             fmt(res.worst_tau, 3) + ", t=" +
                                             fmt(res.worst_t, 3) + ")")});
    }
    return report;
}

inline const std::vector<std::string>& verification_suites() {
    static const std::vector<std::string> names = {
        "thm1",          "thm2a", "thm2a-shifted",    "thm2a-gamma",      "thm2b",
        "thm3",          "cor-b-invariance", "lcfs-equivalence", "nbu-presets",
    };
    return names;
}

inline SuiteReport run_verification_suite(const std::string& name, std::uint64_t seed = 1) {
    if (name == "thm1") return verify_thm1(seed);
    if (name == "thm2a-shifted") return verify_thm2a_shifted(seed);
    if (name == "thm2a-gamma") return verify_thm2a_gamma(seed);
    if (name == "thm2a") {
        SuiteReport merged{"thm2a", {}};
        for (const SuiteReport& part :
             {verify_thm2a_shifted(seed), verify_thm2a_gamma(seed)}) {
            for (const CheckResult& c : part.checks)
                merged.checks.push_back({part.suite + "/" + c.id, c.pass, c.detail});
        }
        return merged;
    }
    if (name == "thm2b") return verify_thm2b(seed);
    if (name == "thm3") return verify_thm3(seed);
    if (name == "cor-b-invariance") return verify_b_invariance(seed);
    if (name == "lcfs-equivalence") return verify_lcfs_equivalence(seed);
    if (name == "nbu-presets") return verify_nbu_presets();
    std::string known;
    for (const std::string& n : verification_suites()) {
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw std::invalid_argument("unknown verification suite '" + name + "' (known: " +
                                known + ")");
}

}  // namespace aoi
