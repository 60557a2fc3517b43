// Discrete-event run of one system: merges the arrival stream with scheduled
// service completions and drives a System/Policy pair to the horizon.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "aoi/policies.hpp"
#include "aoi/system.hpp"
#include "aoi/workload.hpp"

namespace aoi {

// Reports every service draw as it is consumed: the server it was drawn for,
// how many starts that server has seen (1-based), and the drawn duration.
// Draws are a per-server function of (seed, start ordinal) alone, so two
// policies given the same config consume identical draw sequences on every
// server they both use.
struct DrawObserver {
    std::function<void(int server, std::uint64_t nth_start, double draw)> on_draw;
};

inline Trace run_simulation(const SystemConfig& config, const PolicyDescriptor& policy,
                            std::vector<Packet> workload,
                            const DrawObserver* observer = nullptr) {
    System sys(config, make_policy(policy, config), std::move(workload));

    std::vector<RngStream> service_streams;
    service_streams.reserve(static_cast<std::size_t>(config.m));
    for (int j = 0; j < config.m; ++j)
        service_streams.emplace_back(config.seed, StreamPurpose::service,
                                     static_cast<std::uint64_t>(j));
    std::vector<std::uint64_t> starts(static_cast<std::size_t>(config.m), 0);

    struct PendingCompletion {
        double time;
        int server;
        std::uint64_t token;
    };
    const auto later = [](const PendingCompletion& x, const PendingCompletion& y) {
        if (x.time != y.time) return x.time > y.time;
        return x.server > y.server;
    };
    std::priority_queue<PendingCompletion, std::vector<PendingCompletion>, decltype(later)>
        completions(later);

    sys.set_assign_hook([&](int server) {
        const auto idx = static_cast<std::size_t>(server);
        const double draw = config.service.sample(service_streams[idx]);
        ++starts[idx];
        if (observer && observer->on_draw) observer->on_draw(server, starts[idx], draw);
        const double done = sys.now() + draw;
        completions.push({done, server, sys.server_token(server)});
        return done;
    });

    const auto& packets = sys.packets();
    std::vector<std::size_t> arrival_order(packets.size());
    std::iota(arrival_order.begin(), arrival_order.end(), std::size_t{0});
    std::stable_sort(arrival_order.begin(), arrival_order.end(),
                     [&](std::size_t x, std::size_t y) {
                         if (packets[x].a != packets[y].a) return packets[x].a < packets[y].a;
                         return packets[x].id < packets[y].id;
                     });

    constexpr double kNever = std::numeric_limits<double>::infinity();
    std::size_t next_arrival = 0;
    for (;;) {
        while (!completions.empty() &&
               completions.top().token != sys.server_token(completions.top().server))
            completions.pop();
        const double completion_at = completions.empty() ? kNever : completions.top().time;
        const double arrival_at = next_arrival < arrival_order.size()
                                      ? packets[arrival_order[next_arrival]].a
                                      : kNever;
        if (completion_at == kNever && arrival_at == kNever) break;
        if (completion_at <= arrival_at) {
            if (completion_at > config.horizon) break;
            const int server = completions.top().server;
            completions.pop();
            sys.complete_server(server, completion_at);
        } else {
            if (arrival_at > config.horizon) break;
            const std::int64_t id = packets[arrival_order[next_arrival]].id;
            ++next_arrival;
            sys.arrival(id, arrival_at);
        }
    }
    return sys.finish();
}

inline Trace run_simulation(const SystemConfig& config, const PolicyDescriptor& policy) {
    return run_simulation(config, policy, generate_workload(config));
}

}  // namespace aoi
