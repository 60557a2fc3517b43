// Server-farm state machine: tracks replicas, delivers packets, logs events,
// and dispatches scheduling decisions to a Policy.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/packet.hpp"

namespace aoi {

inline constexpr std::int64_t kNoPacket = -1;

class System;

// Scheduling policy. The system owns the mechanics (replica bookkeeping,
// delivery, event log); the policy decides which packets occupy servers. Both
// hooks run after the system has applied the event itself: on_arrival after
// the packet is admitted to the system, on_departure after the delivered
// packet's remaining replicas are cancelled.
class Policy {
  public:
    virtual ~Policy() = default;
    virtual void on_arrival(System& sys, std::int64_t packet_id) = 0;
    virtual void on_departure(System& sys, std::int64_t packet_id) = 0;
    virtual std::string_view name() const = 0;
};

struct ServerState {
    int index = -1;
    std::int64_t occupant = kNoPacket;       // packet id, kNoPacket when idle
    double service_start = NAN;              // start of the current assignment
    double scheduled_completion = NAN;       // NAN when idle or externally driven
};

// One system's scheduling state at an instant: the freshest delivered
// generation time and the per-server informativeness values (each busy
// server's occupant generation clamped below by U, idle servers at U),
// sorted descending.
struct SystemStateSnapshot {
    double U = 0.0;
    std::vector<double> values;
};

inline bool snapshot_dominates(const SystemStateSnapshot& hi, const SystemStateSnapshot& lo) {
    if (!(hi.U >= lo.U) || hi.values.size() != lo.values.size()) return false;
    for (std::size_t i = 0; i < hi.values.size(); ++i)
        if (!(hi.values[i] >= lo.values[i])) return false;
    return true;
}

class System {
  public:
    System(const SystemConfig& config, std::unique_ptr<Policy> policy,
           std::vector<Packet> workload)
        : policy_(std::move(policy)), slots_(checked_server_count(config)) {
        if (!policy_) throw std::invalid_argument("system: policy must not be null");
        for (std::size_t i = 0; i < workload.size(); ++i) {
            const Packet& p = workload[i];
            if (p.id != static_cast<std::int64_t>(i) + 1)
                throw std::invalid_argument("system: workload ids must run 1..n");
            if (p.a < p.s || p.s < 0.0)
                throw std::invalid_argument("system: workload needs 0 <= s <= a");
            if (i > 0 && p.s < workload[i - 1].s)
                throw std::invalid_argument("system: generation times must be non-decreasing");
        }
        for (int j = 0; j < config.m; ++j) slots_[static_cast<std::size_t>(j)].index = j;
        trace_.config = config;
        trace_.packets = std::move(workload);
    }

    double now() const { return now_; }
    const SystemConfig& config() const { return trace_.config; }
    Policy& policy() { return *policy_; }
    const std::vector<Packet>& packets() const { return trace_.packets; }

    const Packet& packet(std::int64_t id) const { return trace_.packets[index_of(id)]; }

    int idle_count() const {
        int n = 0;
        for (const auto& sl : slots_) n += sl.occupant == kNoPacket ? 1 : 0;
        return n;
    }

    int busy_count() const { return config().m - idle_count(); }

    std::vector<int> busy_servers() const {
        std::vector<int> out;
        for (const auto& sl : slots_)
            if (sl.occupant != kNoPacket) out.push_back(sl.index);
        return out;
    }

    std::int64_t occupant(int server) const { return slot(server).occupant; }

    ServerState server_state(int server) const { return slot(server); }

    // Bumped whenever the server's assignment changes; schedulers use it to
    // lazily invalidate queued completion events.
    std::uint64_t server_token(int server) const {
        return tokens_[static_cast<std::size_t>(check_server(server))];
    }

    int replica_count(std::int64_t id) const {
        int n = 0;
        for (const auto& sl : slots_) n += sl.occupant == id ? 1 : 0;
        return n;
    }

    // Distinct packets currently on servers, ascending id.
    std::vector<std::int64_t> in_service() const {
        std::vector<std::int64_t> ids;
        for (const auto& sl : slots_)
            if (sl.occupant != kNoPacket) ids.push_back(sl.occupant);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    double max_delivered_gen() const { return U_; }
    std::int64_t arrived_total() const { return arrived_; }
    std::int64_t delivered_total() const { return delivered_; }
    std::int64_t in_system_count() const { return arrived_ - delivered_ - dropped_; }

    SystemStateSnapshot snapshot() const {
        SystemStateSnapshot snap;
        snap.U = U_;
        snap.values.reserve(slots_.size());
        for (const auto& sl : slots_) snap.values.push_back(clamped_value(sl));
        std::sort(snap.values.begin(), snap.values.end(), std::greater<double>());
        return snap;
    }

    // Server holding the rank-th largest informativeness value (1-based), ties
    // broken by ascending server index.
    int rank_server(int rank) const {
        if (rank < 1 || rank > config().m)
            throw std::invalid_argument("rank_server: rank out of range");
        std::vector<int> order(slots_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [this](int x, int y) {
            const double vx = clamped_value(slots_[static_cast<std::size_t>(x)]);
            const double vy = clamped_value(slots_[static_cast<std::size_t>(y)]);
            if (vx != vy) return vx > vy;
            return x < y;
        });
        return order[static_cast<std::size_t>(rank - 1)];
    }

    int server_rank(int server) const {
        check_server(server);
        for (int rank = 1; rank <= config().m; ++rank)
            if (rank_server(rank) == server) return rank;
        throw std::logic_error("server_rank: server not found");
    }

    // Called by the scheduler when it assigns a replica; returns the
    // completion time to record on the slot (NAN when completions are driven
    // externally, as in coupled runs).
    void set_assign_hook(std::function<double(int)> hook) { assign_hook_ = std::move(hook); }

    // --- event entry points -------------------------------------------------

    void arrival(std::int64_t id, double t) {
        advance(t);
        const Packet& p = packet(id);
        if (p.a != t) throw std::logic_error("arrival dispatched at the wrong time");
        ++arrived_;
        log(EventKind::arrival, -1, id);
        policy_->on_arrival(*this, id);
    }

    void complete_server(int server, double t) {
        advance(t);
        ServerState& sl = slot_mut(server);
        if (sl.occupant == kNoPacket)
            throw std::logic_error("completion on an idle server");
        const std::int64_t id = sl.occupant;
        Packet& p = packet_mut(id);
        if (p.has_c()) throw std::logic_error("packet delivered twice");
        p.c = t;
        ++delivered_;
        U_ = std::max(U_, p.s);
        log(EventKind::completion, server, id);
        release(server);
        for (auto& other : slots_) {
            if (other.occupant != id) continue;
            log(EventKind::cancellation, other.index, id);
            release(other.index);
        }
        policy_->on_departure(*this, id);
    }

    // --- policy actions -----------------------------------------------------

    // Places count replicas on the lowest-index idle servers.
    void assign_replicas(std::int64_t id, int count) {
        if (count <= 0) {
            if (count == 0) return;
            throw std::invalid_argument("assign_replicas: negative count");
        }
        Packet& p = packet_mut(id);
        if (p.dropped || p.has_c())
            throw std::logic_error("assign_replicas: packet already finished");
        if (replica_count(id) + count > config().r)
            throw std::logic_error("assign_replicas: replica cap exceeded");
        int placed = 0;
        for (auto& sl : slots_) {
            if (placed == count) break;
            if (sl.occupant != kNoPacket) continue;
            sl.occupant = id;
            sl.service_start = now_;
            ++tokens_[static_cast<std::size_t>(sl.index)];
            sl.scheduled_completion = assign_hook_ ? assign_hook_(sl.index) : NAN;
            ++placed;
        }
        if (placed != count) throw std::logic_error("assign_replicas: not enough idle servers");
        if (!p.has_v()) p.v = now_;
    }

    // Frees count replicas of id, highest server index first.
    void preempt_replicas(std::int64_t id, int count) {
        if (count <= 0) {
            if (count == 0) return;
            throw std::invalid_argument("preempt_replicas: negative count");
        }
        int freed = 0;
        for (auto it = slots_.rbegin(); it != slots_.rend() && freed < count; ++it) {
            if (it->occupant != id) continue;
            log(EventKind::cancellation, it->index, id);
            ++trace_.preemption_count;
            release(it->index);
            ++freed;
        }
        if (freed != count) throw std::logic_error("preempt_replicas: not enough replicas");
    }

    void mark_dropped(std::int64_t id) {
        Packet& p = packet_mut(id);
        if (p.dropped || p.has_c())
            throw std::logic_error("mark_dropped: packet already finished");
        p.dropped = true;
        p.drop_time = now_;
        ++trace_.drop_count;
        ++dropped_;
    }

    // Sorts the event log into canonical order and releases the trace. The
    // system must not be used afterwards.
    Trace finish() {
        std::sort(trace_.event_log.begin(), trace_.event_log.end());
        return std::move(trace_);
    }

  private:
    static std::size_t checked_server_count(const SystemConfig& config) {
        config.validate();
        return static_cast<std::size_t>(config.m);
    }

    std::size_t index_of(std::int64_t id) const {
        if (id < 1 || id > static_cast<std::int64_t>(trace_.packets.size()))
            throw std::invalid_argument("unknown packet id");
        return static_cast<std::size_t>(id - 1);
    }

    Packet& packet_mut(std::int64_t id) { return trace_.packets[index_of(id)]; }

    int check_server(int server) const {
        if (server < 0 || server >= config().m)
            throw std::invalid_argument("server index out of range");
        return server;
    }

    const ServerState& slot(int server) const {
        return slots_[static_cast<std::size_t>(check_server(server))];
    }

    ServerState& slot_mut(int server) {
        return slots_[static_cast<std::size_t>(check_server(server))];
    }

    double clamped_value(const ServerState& sl) const {
        if (sl.occupant == kNoPacket) return U_;
        return std::max(packet(sl.occupant).s, U_);
    }

    void advance(double t) {
        if (t < now_) throw std::logic_error("events dispatched out of time order");
        now_ = t;
    }

    void release(int server) {
        ServerState& sl = slot_mut(server);
        sl.occupant = kNoPacket;
        sl.service_start = NAN;
        sl.scheduled_completion = NAN;
        ++tokens_[static_cast<std::size_t>(server)];
    }

    void log(EventKind kind, int server, std::int64_t id) {
        if (!config().record_events) return;
        trace_.event_log.push_back({now_, kind, server, id, seq_++});
    }

    Trace trace_;
    std::unique_ptr<Policy> policy_;
    std::vector<ServerState> slots_;
    std::vector<std::uint64_t> tokens_ = std::vector<std::uint64_t>(slots_.size(), 0);
    std::function<double(int)> assign_hook_;
    double now_ = 0.0;
    double U_ = 0.0;
    std::int64_t arrived_ = 0;
    std::int64_t delivered_ = 0;
    std::int64_t dropped_ = 0;
    std::uint64_t seq_ = 0;
};

}  // namespace aoi
