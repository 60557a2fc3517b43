// Scheduling policies: freshest-first families with and without preemption,
// keyed on generation or arrival time, plus FCFS.

#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aoi/system.hpp"

namespace aoi {

// Freshness is compared lexicographically on (key, id): between equal keys the
// later-generated packet wins. Entries sort ascending, so the stalest packet
// is the set minimum.
using FreshEntry = std::pair<double, std::int64_t>;

struct GenerationKey {
    static constexpr std::string_view preemptive_name = "prmp-lgfs-r";
    static constexpr std::string_view non_preemptive_name = "non-prmp-lgfs-r";
    static double key(const Packet& p) { return p.s; }
};

struct ArrivalKey {
    static constexpr std::string_view preemptive_name = "lcfs-p";
    static constexpr std::string_view non_preemptive_name = "lcfs-np";
    static double key(const Packet& p) { return p.a; }
};

// Preemptive freshest-first with replication. A fresh arrival takes exactly r
// servers, displacing replicas of the stalest in-service packet as needed; a
// stale arrival waits. After every membership change the allocation is
// reconciled to the ranking rule: the j-th freshest in-service packet (0-based)
// holds min(r, m - j*r) servers. Reconciliation only moves the difference:
// replicas whose count is unchanged keep running.
template <typename Key>
class PreemptiveFreshest final : public Policy {
  public:
    explicit PreemptiveFreshest(const SystemConfig& config)
        : m_(config.m), r_(config.r), capacity_(config.B) {}

    std::string_view name() const override { return Key::preemptive_name; }

    void on_arrival(System& sys, std::int64_t id) override {
        const FreshEntry me{Key::key(sys.packet(id)), id};
        std::vector<FreshEntry> members = service_entries(sys);
        if (sys.idle_count() == 0) {
            const FreshEntry alpha = members.back();
            if (me < alpha) {
                enqueue(sys, me);
                return;
            }
            members.pop_back();
            enqueue(sys, alpha);
            insert_desc(members, me);
        } else {
            if (!queue_.empty())
                throw std::logic_error("preemptive policy: queued packet while a server idles");
            insert_desc(members, me);
        }
        retarget(sys, members);
    }

    void on_departure(System& sys, std::int64_t) override {
        std::vector<FreshEntry> members = service_entries(sys);
        if (!queue_.empty()) {
            const auto freshest = std::prev(queue_.end());
            insert_desc(members, *freshest);
            queue_.erase(freshest);
        }
        retarget(sys, members);
    }

    const std::set<FreshEntry>& queue() const { return queue_; }

  private:
    std::vector<FreshEntry> service_entries(const System& sys) const {
        std::vector<FreshEntry> entries;
        for (std::int64_t id : sys.in_service())
            entries.emplace_back(Key::key(sys.packet(id)), id);
        std::sort(entries.begin(), entries.end(), std::greater<FreshEntry>());
        return entries;
    }

    static void insert_desc(std::vector<FreshEntry>& entries, const FreshEntry& e) {
        entries.insert(
            std::lower_bound(entries.begin(), entries.end(), e, std::greater<FreshEntry>()), e);
    }

    void enqueue(System& sys, const FreshEntry& e) {
        queue_.insert(e);
        if (capacity_ != kInfiniteBuffer &&
            static_cast<std::int64_t>(queue_.size()) > capacity_) {
            const FreshEntry victim = *queue_.begin();
            queue_.erase(queue_.begin());
            sys.mark_dropped(victim.second);
        }
    }

    void retarget(System& sys, const std::vector<FreshEntry>& members) {
        std::vector<int> targets(members.size());
        for (std::size_t j = 0; j < members.size(); ++j) {
            const std::int64_t budget = static_cast<std::int64_t>(m_) -
                                        static_cast<std::int64_t>(j) * r_;
            targets[j] = static_cast<int>(std::clamp<std::int64_t>(budget, 0, r_));
        }
        for (std::int64_t id : sys.in_service()) {
            int target = 0;
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (members[j].second != id) continue;
                target = targets[j];
                break;
            }
            const int have = sys.replica_count(id);
            if (have > target) sys.preempt_replicas(id, have - target);
        }
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (targets[j] == 0) {
                enqueue(sys, members[j]);
                continue;
            }
            const int have = sys.replica_count(members[j].second);
            if (have < targets[j]) sys.assign_replicas(members[j].second, targets[j] - have);
        }
    }

    int m_;
    int r_;
    std::int64_t capacity_;
    std::set<FreshEntry> queue_;
};

// Non-preemptive freshest-first with replication. Arrivals take min(r, idle)
// servers when any idle; otherwise they queue, and a full buffer keeps the
// fresher of the new packet and the stalest queued one. A departure first tops
// up the remaining under-replicated packet when it outranks the queue head,
// then serves the freshest queued packet on min(r, idle) servers. Running
// replicas are never disturbed.
template <typename Key>
class NonPreemptiveFreshest final : public Policy {
  public:
    explicit NonPreemptiveFreshest(const SystemConfig& config)
        : r_(config.r), capacity_(config.B) {}

    std::string_view name() const override { return Key::non_preemptive_name; }

    void on_arrival(System& sys, std::int64_t id) override {
        const int idle = sys.idle_count();
        if (idle > 0) {
            if (!queue_.empty())
                throw std::logic_error("non-preemptive policy: queued packet while a server idles");
            sys.assign_replicas(id, static_cast<int>(std::min<std::int64_t>(r_, idle)));
            return;
        }
        if (capacity_ == 0) {
            sys.mark_dropped(id);
            return;
        }
        const FreshEntry me{Key::key(sys.packet(id)), id};
        if (capacity_ != kInfiniteBuffer &&
            static_cast<std::int64_t>(queue_.size()) >= capacity_) {
            const FreshEntry stalest = *queue_.begin();
            if (me > stalest) {
                queue_.erase(queue_.begin());
                sys.mark_dropped(stalest.second);
                queue_.insert(me);
            } else {
                sys.mark_dropped(id);
            }
            return;
        }
        queue_.insert(me);
    }

    void on_departure(System& sys, std::int64_t) override {
        std::int64_t short_id = kNoPacket;
        int short_have = 0;
        for (std::int64_t id : sys.in_service()) {
            const int have = sys.replica_count(id);
            if (have >= r_) continue;
            if (short_id != kNoPacket)
                throw std::logic_error("non-preemptive policy: two under-replicated packets");
            short_id = id;
            short_have = have;
        }
        if (queue_.empty()) {
            if (short_id != kNoPacket)
                top_up(sys, short_id, short_have);
            return;
        }
        const auto freshest = std::prev(queue_.end());
        if (short_id != kNoPacket) {
            const FreshEntry held{Key::key(sys.packet(short_id)), short_id};
            if (held > *freshest) top_up(sys, short_id, short_have);
        }
        const int count = static_cast<int>(std::min<std::int64_t>(r_, sys.idle_count()));
        if (count > 0) {
            const std::int64_t id = freshest->second;
            queue_.erase(freshest);
            sys.assign_replicas(id, count);
        }
    }

    const std::set<FreshEntry>& queue() const { return queue_; }

  private:
    void top_up(System& sys, std::int64_t id, int have) {
        const int extra =
            static_cast<int>(std::min<std::int64_t>(r_ - have, sys.idle_count()));
        sys.assign_replicas(id, extra);
    }

    int r_;
    std::int64_t capacity_;
    std::set<FreshEntry> queue_;
};

// First-come first-served in arrival order, one server per packet, drops on a
// full buffer.
class Fcfs final : public Policy {
  public:
    explicit Fcfs(const SystemConfig& config) : capacity_(config.B) {}

    std::string_view name() const override { return "fcfs"; }

    void on_arrival(System& sys, std::int64_t id) override {
        if (sys.idle_count() > 0) {
            if (!fifo_.empty())
                throw std::logic_error("fcfs: queued packet while a server idles");
            sys.assign_replicas(id, 1);
            return;
        }
        if (capacity_ != kInfiniteBuffer &&
            static_cast<std::int64_t>(fifo_.size()) >= capacity_) {
            sys.mark_dropped(id);
            return;
        }
        fifo_.push_back(id);
    }

    void on_departure(System& sys, std::int64_t) override {
        if (fifo_.empty()) return;
        const std::int64_t id = fifo_.front();
        fifo_.pop_front();
        sys.assign_replicas(id, 1);
    }

    const std::deque<std::int64_t>& queue() const { return fifo_; }

  private:
    std::int64_t capacity_;
    std::deque<std::int64_t> fifo_;
};

inline constexpr std::array<std::string_view, 5> kPolicyNames = {
    "prmp-lgfs-r", "non-prmp-lgfs-r", "fcfs", "lcfs-p", "lcfs-np"};

struct PolicyDescriptor {
    std::string name = "prmp-lgfs-r";

    static PolicyDescriptor parse(std::string_view text) {
        for (std::string_view known : kPolicyNames)
            if (text == known) return PolicyDescriptor{std::string(text)};
        throw std::invalid_argument("unknown policy: " + std::string(text));
    }

    std::string text() const { return name; }

    friend bool operator==(const PolicyDescriptor& x, const PolicyDescriptor& y) = default;
};

inline std::unique_ptr<Policy> make_policy(const PolicyDescriptor& descriptor,
                                           const SystemConfig& config) {
    config.validate();
    const std::string& name = descriptor.name;
    if (name == "prmp-lgfs-r")
        return std::make_unique<PreemptiveFreshest<GenerationKey>>(config);
    if (name == "non-prmp-lgfs-r")
        return std::make_unique<NonPreemptiveFreshest<GenerationKey>>(config);
    if (name == "fcfs" || name == "lcfs-p" || name == "lcfs-np") {
        if (config.r != 1)
            throw std::invalid_argument("policy " + name + " requires r = 1");
        if (name == "fcfs") return std::make_unique<Fcfs>(config);
        if (name == "lcfs-p") return std::make_unique<PreemptiveFreshest<ArrivalKey>>(config);
        return std::make_unique<NonPreemptiveFreshest<ArrivalKey>>(config);
    }
    throw std::invalid_argument("unknown policy: " + name);
}

}  // namespace aoi
