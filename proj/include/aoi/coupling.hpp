// Coupled execution of several systems on one workload and one service
// schedule. All systems share exponential service with a common rate, so
// completion epochs can be drawn from the busiest view of the reference
// system and replayed into every other system by rank or by server index,
// keeping the comparison exact rather than statistical.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aoi/policies.hpp"
#include "aoi/system.hpp"
#include "aoi/workload.hpp"

namespace aoi {

struct CoupledOutcome {
    std::vector<Trace> traces;
    std::uint64_t event_count = 0;
    bool dominance_ok = true;
    double violation_time = NAN;
    std::size_t violation_system = 0;  // index of the dominated system that failed
};

struct CountsOutcome {
    std::vector<Trace> traces;
    std::uint64_t event_count = 0;
    bool equal = true;
    double first_difference_time = NAN;
    std::vector<std::int64_t> final_in_system;
    std::vector<std::int64_t> final_delivered;
};

namespace detail {

inline void validate_coupled(const std::vector<SystemConfig>& configs,
                             std::size_t policy_count, bool require_infinite_buffer) {
    if (configs.empty()) throw std::invalid_argument("coupled run: no systems");
    if (configs.size() != policy_count)
        throw std::invalid_argument("coupled run: one policy per config required");
    const SystemConfig& head = configs.front();
    if (head.service.kind() != DistKind::exponential)
        throw std::invalid_argument("coupled run: service must be exponential");
    for (const SystemConfig& cfg : configs) {
        cfg.validate();
        if (cfg.service.text() != head.service.text())
            throw std::invalid_argument("coupled run: all systems need the same service law");
        if (cfg.m != head.m)
            throw std::invalid_argument("coupled run: all systems need the same server count");
        if (cfg.horizon != head.horizon)
            throw std::invalid_argument("coupled run: all systems need the same horizon");
        if (require_infinite_buffer && cfg.B != kInfiniteBuffer)
            throw std::invalid_argument("count coupling: every buffer must be unbounded");
    }
}

inline std::vector<std::size_t> arrival_order(const std::vector<Packet>& workload) {
    std::vector<std::size_t> order(workload.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (workload[x].a != workload[y].a) return workload[x].a < workload[y].a;
        return workload[x].id < workload[y].id;
    });
    return order;
}

// Shared event loop. deliver(rank_draw, t) applies one completion epoch to
// every system; inspect(t) runs after every event and returns false to stop.
template <typename Deliver, typename Inspect>
std::uint64_t drive_coupled(std::vector<System>& systems, const std::vector<Packet>& workload,
                            std::uint64_t seed, Deliver&& deliver, Inspect&& inspect) {
    const double horizon = systems.front().config().horizon;
    const double rate = 1.0 / systems.front().config().service.mean();
    RngStream epoch_rng(seed, StreamPurpose::epoch, 0);
    RngStream rank_rng(seed, StreamPurpose::rank, 0);
    const std::vector<std::size_t> order = arrival_order(workload);

    constexpr double kNever = std::numeric_limits<double>::infinity();
    std::uint64_t events = 0;
    double now = 0.0;
    std::size_t next_arrival = 0;
    for (;;) {
        const int busy = systems.front().busy_count();
        double epoch_at = kNever;
        if (busy > 0) {
            const double u = epoch_rng.next_open01();
            epoch_at = now - std::log(u) / (busy * rate);
        }
        const double arrival_at = next_arrival < order.size()
                                      ? workload[order[next_arrival]].a
                                      : kNever;
        if (epoch_at == kNever && arrival_at == kNever) break;
        if (epoch_at <= arrival_at) {
            if (epoch_at > horizon) break;
            const auto pick = rank_rng.next_below(static_cast<std::uint64_t>(busy));
            deliver(static_cast<int>(pick), epoch_at);
            now = epoch_at;
        } else {
            if (arrival_at > horizon) break;
            const std::int64_t id = workload[order[next_arrival]].id;
            ++next_arrival;
            for (System& sys : systems) sys.arrival(id, arrival_at);
            now = arrival_at;
        }
        ++events;
        if (!inspect(now)) break;
    }
    return events;
}

inline std::vector<System> build_systems(const std::vector<SystemConfig>& configs,
                                         std::vector<std::unique_ptr<Policy>> policies,
                                         const std::vector<Packet>& workload) {
    std::vector<System> systems;
    systems.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i)
        systems.emplace_back(configs[i], std::move(policies[i]), workload);
    return systems;
}

}  // namespace detail

// Couples the reference system (index 0) with any number of alternatives:
// completion epochs fire at the reference system's total service rate, a rank
// is drawn uniformly over its busy servers, and every system completes the
// server holding that rank in its own informativeness order. A rank falling on
// an idle server is a no-op for that system. With check_dominance set, the
// reference snapshot must dominate every other system's snapshot after every
// event, compared exactly.
inline CoupledOutcome run_coupled_exponential(const std::vector<Packet>& workload,
                                              const std::vector<SystemConfig>& configs,
                                              std::vector<std::unique_ptr<Policy>> policies,
                                              std::uint64_t seed,
                                              bool check_dominance = true) {
    detail::validate_coupled(configs, policies.size(), false);
    std::vector<System> systems = detail::build_systems(configs, std::move(policies), workload);

    CoupledOutcome out;
    const auto deliver = [&](int pick, double t) {
        const std::vector<int> busy = systems.front().busy_servers();
        const int rank = systems.front().server_rank(busy[static_cast<std::size_t>(pick)]);
        for (System& sys : systems) {
            const int server = sys.rank_server(rank);
            if (sys.occupant(server) != kNoPacket) sys.complete_server(server, t);
        }
    };
    const auto inspect = [&](double t) {
        if (!check_dominance) return true;
        const SystemStateSnapshot head = systems.front().snapshot();
        for (std::size_t i = 1; i < systems.size(); ++i) {
            if (snapshot_dominates(head, systems[i].snapshot())) continue;
            out.dominance_ok = false;
            out.violation_time = t;
            out.violation_system = i;
            return false;
        }
        return true;
    };
    out.event_count = detail::drive_coupled(systems, workload, seed, deliver, inspect);
    out.traces.reserve(systems.size());
    for (System& sys : systems) out.traces.push_back(sys.finish());
    return out;
}

inline CoupledOutcome run_coupled_exponential(const std::vector<Packet>& workload,
                                              const std::vector<SystemConfig>& configs,
                                              const std::vector<PolicyDescriptor>& descriptors,
                                              std::uint64_t seed,
                                              bool check_dominance = true) {
    if (configs.size() != descriptors.size())
        throw std::invalid_argument("coupled run: one policy per config required");
    std::vector<std::unique_ptr<Policy>> policies;
    policies.reserve(descriptors.size());
    for (std::size_t i = 0; i < descriptors.size(); ++i)
        policies.push_back(make_policy(descriptors[i], configs[i]));
    return run_coupled_exponential(workload, configs, std::move(policies), seed,
                                   check_dominance);
}

// Couples systems by busy-server ordinal instead of informativeness rank: the
// drawn pick completes each system's pick-th busy server by ascending index,
// and the number in system and the number delivered must agree with the
// reference system after every event. Requires unbounded buffers so no packet
// leaves by a drop.
inline CountsOutcome run_coupled_counts(const std::vector<Packet>& workload,
                                        const std::vector<SystemConfig>& configs,
                                        std::vector<std::unique_ptr<Policy>> policies,
                                        std::uint64_t seed) {
    detail::validate_coupled(configs, policies.size(), true);
    std::vector<System> systems = detail::build_systems(configs, std::move(policies), workload);

    CountsOutcome out;
    const auto deliver = [&](int pick, double t) {
        for (System& sys : systems) {
            const std::vector<int> busy = sys.busy_servers();
            if (static_cast<std::size_t>(pick) < busy.size())
                sys.complete_server(busy[static_cast<std::size_t>(pick)], t);
        }
    };
    const auto inspect = [&](double t) {
        const System& head = systems.front();
        for (std::size_t i = 1; i < systems.size(); ++i) {
            if (systems[i].in_system_count() == head.in_system_count() &&
                systems[i].delivered_total() == head.delivered_total())
                continue;
            out.equal = false;
            out.first_difference_time = t;
            return false;
        }
        return true;
    };
    out.event_count = detail::drive_coupled(systems, workload, seed, deliver, inspect);
    for (System& sys : systems) {
        out.final_in_system.push_back(sys.in_system_count());
        out.final_delivered.push_back(sys.delivered_total());
        out.traces.push_back(sys.finish());
    }
    return out;
}

inline CountsOutcome run_coupled_counts(const std::vector<Packet>& workload,
                                        const std::vector<SystemConfig>& configs,
                                        const std::vector<PolicyDescriptor>& descriptors,
                                        std::uint64_t seed) {
    if (configs.size() != descriptors.size())
        throw std::invalid_argument("coupled run: one policy per config required");
    std::vector<std::unique_ptr<Policy>> policies;
    policies.reserve(descriptors.size());
    for (std::size_t i = 0; i < descriptors.size(); ++i)
        policies.push_back(make_policy(descriptors[i], configs[i]));
    return run_coupled_counts(workload, configs, std::move(policies), seed);
}

}  // namespace aoi
