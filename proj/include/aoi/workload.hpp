// Workload generation: the packet stream a simulation run consumes.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/packet.hpp"
#include "aoi/rng.hpp"

namespace aoi {

// Draws the packet stream for a config. Generation times accumulate
// inter-generation draws starting from 0 (the first packet is generated at the
// first draw, not at 0); arrival times add an independent delay draw. The
// stream stops at the first generation time past the horizon; a packet
// generated exactly at the horizon is kept. Delay draws are consumed only for
// kept packets, so the stream is a prefix-stable function of the seed.
inline std::vector<Packet> generate_workload(const SystemConfig& config) {
    config.validate();
    RngStream gen(config.seed, StreamPurpose::generation, 0);
    RngStream delay(config.seed, StreamPurpose::arrival_delay, 0);
    std::vector<Packet> packets;
    double s = 0.0;
    for (std::int64_t id = 1;; ++id) {
        s += config.generation.sample(gen);
        if (s > config.horizon) break;
        Packet p;
        p.id = id;
        p.s = s;
        p.a = s + config.arrival_delay.sample(delay);
        packets.push_back(p);
    }
    return packets;
}

// Hand-built workload from (generation, arrival) pairs; ids run from 1 in the
// given order. Used by tests and witness constructions.
inline std::vector<Packet> make_workload(const std::vector<std::pair<double, double>>& times) {
    std::vector<Packet> packets;
    packets.reserve(times.size());
    double prev = 0.0;
    std::int64_t id = 1;
    for (const auto& [s, a] : times) {
        if (s < prev || a < s)
            throw std::invalid_argument(
                "workload: generation times must be non-decreasing and arrivals not earlier");
        Packet p;
        p.id = id++;
        p.s = s;
        p.a = a;
        packets.push_back(p);
        prev = s;
    }
    return packets;
}

}  // namespace aoi
