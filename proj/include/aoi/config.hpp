// System configuration shared by every simulation mode.

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "aoi/distributions.hpp"

namespace aoi {

// Queue capacity value meaning "unbounded".
inline constexpr std::int64_t kInfiniteBuffer = std::numeric_limits<std::int64_t>::max();

inline std::string buffer_text(std::int64_t b) {
    return b == kInfiniteBuffer ? "inf" : std::to_string(b);
}

struct SystemConfig {
    int m = 1;                    // number of servers
    int r = 1;                    // maximum replication degree, 1 <= r <= m
    std::int64_t B = kInfiniteBuffer;  // queue capacity (packets waiting, excluding in service)
    DistributionSpec service = DistributionSpec::exponential(1.0);
    DistributionSpec generation = DistributionSpec::exponential(1.0);
    DistributionSpec arrival_delay = DistributionSpec::constant(0.0);
    double horizon = 100.0;
    std::uint64_t seed = 0;
    bool record_events = true;    // event_log capture; sweeps turn this off to save memory

    double mu() const { return 1.0 / service.mean(); }
    double lambda() const { return 1.0 / generation.mean(); }

    // Traffic intensity with the r=1 convention: replication does not enter.
    double rho() const { return lambda() / (m * mu()); }

    // k in the replication allocation: how many distinct packets can hold r
    // servers each.
    int k() const { return m / r; }

    void validate() const {
        if (m < 1) throw std::invalid_argument("config: m must be >= 1");
        if (r < 1 || r > m) throw std::invalid_argument("config: r must satisfy 1 <= r <= m");
        if (B < 0) throw std::invalid_argument("config: B must be >= 0");
        if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
        if (!(service.mean() > 0.0)) throw std::invalid_argument("config: service mean must be positive");
        if (!(generation.mean() > 0.0)) throw std::invalid_argument("config: generation mean must be positive");
    }
};

}  // namespace aoi
