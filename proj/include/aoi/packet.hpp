// Packets, events, and the Trace record produced by a simulation run.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/distributions.hpp"

namespace aoi {

struct Packet {
    std::int64_t id = 0;   // 1-based, strictly increasing in generation order
    double s = 0.0;        // generation time
    double a = 0.0;        // arrival time at the queue
    double v = NAN;        // earliest service start over all replicas, NAN until assigned
    double c = NAN;        // delivery time, NAN until delivered
    bool dropped = false;
    double drop_time = NAN;

    bool has_v() const { return !std::isnan(v); }
    bool has_c() const { return !std::isnan(c); }
};

// Equal-time events are ordered Completion < Cancellation < Arrival; the enum
// values encode that rank.
enum class EventKind : int {
    completion = 0,
    cancellation = 1,
    arrival = 2,
};

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::completion: return "completion";
        case EventKind::cancellation: return "cancellation";
        case EventKind::arrival: return "arrival";
    }
    return "?";
}

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::arrival;
    int server = -1;          // -1 for arrival events
    std::int64_t packet = 0;  // packet id involved
    std::uint64_t seq = 0;    // deterministic tiebreak counter

    friend bool operator<(const EventRecord& x, const EventRecord& y) {
        if (x.time != y.time) return x.time < y.time;
        if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
        if (x.server != y.server) return x.server < y.server;
        if (x.packet != y.packet) return x.packet < y.packet;
        return x.seq < y.seq;
    }
    friend bool operator==(const EventRecord& x, const EventRecord& y) {
        return x.time == y.time && x.kind == y.kind && x.server == y.server &&
               x.packet == y.packet && x.seq == y.seq;
    }
};

struct Trace {
    SystemConfig config;
    std::vector<Packet> packets;       // ordered by id; includes dropped and unserved
    std::vector<EventRecord> event_log;  // sorted by the EventRecord ordering
    std::uint64_t preemption_count = 0;  // replica preemptions (server freed before completion)
    std::uint64_t drop_count = 0;

    std::int64_t delivered_count() const {
        std::int64_t n = 0;
        for (const auto& p : packets) n += p.has_c() ? 1 : 0;
        return n;
    }
};

namespace detail {

inline std::string opt_time_text(double x) {
    return std::isnan(x) ? std::string("-") : format_double(x);
}

}  // namespace detail

// Canonical text serialization. Two runs are considered identical exactly when
// these strings match byte for byte.
inline std::string trace_text(const Trace& trace) {
    std::string out;
    out.reserve(trace.packets.size() * 64 + trace.event_log.size() * 48 + 256);
    const auto& cfg = trace.config;
    out += "config m=" + std::to_string(cfg.m) + " r=" + std::to_string(cfg.r) +
           " B=" + buffer_text(cfg.B) + " service=" + cfg.service.text() +
           " generation=" + cfg.generation.text() +
           " delay=" + cfg.arrival_delay.text() +
           " horizon=" + format_double(cfg.horizon) +
           " seed=" + std::to_string(cfg.seed) + "\n";
    for (const auto& p : trace.packets) {
        out += "packet id=" + std::to_string(p.id) + " s=" + format_double(p.s) +
               " a=" + format_double(p.a) + " v=" + detail::opt_time_text(p.v) +
               " c=" + detail::opt_time_text(p.c) +
               " dropped=" + (p.dropped ? "1" : "0");
        if (p.dropped) out += " drop_time=" + detail::opt_time_text(p.drop_time);
        out += "\n";
    }
    for (const auto& e : trace.event_log) {
        out += "event t=" + format_double(e.time) + " kind=" + event_kind_name(e.kind) +
               " server=" + std::to_string(e.server) +
               " packet=" + std::to_string(e.packet) + "\n";
    }
    out += "preemptions=" + std::to_string(trace.preemption_count) +
           " drops=" + std::to_string(trace.drop_count) + "\n";
    return out;
}

}  // namespace aoi
