// Service and inter-generation time distributions.
//
// Each DistributionSpec is a small value type with a canonical text form
// (used verbatim in config files), an exact mean, a seedable sampler, and a
// complementary CDF. A numerical NBU checker verifies the aging property
// F̄(τ+t) ≤ F̄(τ)·F̄(t) on a grid, which gates the distributions that the
// constant-gap guarantees apply to.
//
// Internally each kind stores exactly the parameters of its canonical text
// form, so parse/text round-trips are bitwise exact.

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aoi/rng.hpp"

namespace aoi {

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

// Regularized lower incomplete gamma P(a, x) by its power series.
// Valid and fast for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz's continued fraction.
// Valid and fast for x >= a + 1.
inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) = P[Gamma(a, 1) > x].
inline double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

// Marsaglia-Tsang squeeze sampler for Gamma(shape, 1), shape >= 1.
inline double gamma_shape_ge1(double shape, RngStream& stream) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double z = stream.next_normal();
        const double t = 1.0 + c * z;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = stream.next_open01();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double gamma_standard(double shape, RngStream& stream) {
    if (shape >= 1.0) return gamma_shape_ge1(shape, stream);
    // Boost the shape by one, then apply the power correction.
    const double g = gamma_shape_ge1(shape + 1.0, stream);
    return g * std::pow(stream.next_open01(), 1.0 / shape);
}

}  // namespace detail

enum class DistKind {
    exponential,          // stored: rate
    gamma,                // stored: shape K, mean
    shifted_exponential,  // stored: shift, mean of the exponential part
    erlang,               // stored: integer k, mean
    constant,             // stored: value
    two_point,            // stored: v1, v2, p1 = P[value = v1]
};

class DistributionSpec {
  public:
    static DistributionSpec exponential(double rate) {
        require(rate > 0.0, "exp: rate must be positive");
        return DistributionSpec(DistKind::exponential, rate, 0, 0);
    }

    // Gamma with target mean: scale = mean / K.
    static DistributionSpec gamma_mean(double shape, double mean) {
        require(shape > 0.0 && mean > 0.0, "gamma: shape and mean must be positive");
        return DistributionSpec(DistKind::gamma, shape, mean, 0);
    }

    static DistributionSpec gamma(double shape, double scale) {
        require(shape > 0.0 && scale > 0.0, "gamma: shape and scale must be positive");
        return gamma_mean(shape, shape * scale);
    }

    static DistributionSpec shifted_exponential(double shift, double rate) {
        require(shift >= 0.0 && rate > 0.0,
                "shifted_exp: shift must be >= 0 and rate positive");
        return DistributionSpec(DistKind::shifted_exponential, shift, 1.0 / rate, 0);
    }

    static DistributionSpec erlang(int k, double rate) {
        require(k >= 1 && rate > 0.0, "erlang: k must be >= 1 and rate positive");
        return DistributionSpec(DistKind::erlang, static_cast<double>(k),
                                static_cast<double>(k) / rate, 0);
    }

    static DistributionSpec erlang_mean(int k, double mean) {
        require(k >= 1 && mean > 0.0, "erlang: k must be >= 1 and mean positive");
        return DistributionSpec(DistKind::erlang, static_cast<double>(k), mean, 0);
    }

    // Zero is allowed: a constant 0 arrival delay means a_i = s_i.
    static DistributionSpec constant(double value) {
        require(value >= 0.0, "const: value must be non-negative");
        return DistributionSpec(DistKind::constant, value, 0, 0);
    }

    static DistributionSpec two_point(double v1, double v2, double p1) {
        require(v1 >= 0.0 && v2 >= 0.0, "two_point: values must be non-negative");
        require(p1 >= 0.0 && p1 <= 1.0, "two_point: p1 must lie in [0,1]");
        return DistributionSpec(DistKind::two_point, v1, v2, p1);
    }

    // Parses the canonical text form, e.g. "exp(rate=1.0)",
    // "gamma(k=4,mean=1.0)", "shifted_exp(shift=0.25,mean=0.25)",
    // "erlang(k=2,mean=0.5)", "const(2.0)", "two_point(1,100,0.5)".
    // For shifted_exp, mean names the mean of the exponential part.
    static DistributionSpec parse(const std::string& text);

    // Canonical text form; parse(text()) reproduces the spec exactly.
    std::string text() const;

    DistKind kind() const { return kind_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    double param3() const { return p3_; }

    double mean() const {
        switch (kind_) {
            case DistKind::exponential: return 1.0 / p1_;
            case DistKind::gamma: return p2_;
            case DistKind::shifted_exponential: return p1_ + p2_;
            case DistKind::erlang: return p2_;
            case DistKind::constant: return p1_;
            case DistKind::two_point: return p3_ * p1_ + (1.0 - p3_) * p2_;
        }
        return 0.0;
    }

    // Same family, rescaled to a new mean. Exponential adjusts its rate,
    // gamma and erlang keep their shape, shifted exponential and two_point
    // scale all time parameters by the mean ratio, so the NBU status of a
    // family never changes under rescaling.
    DistributionSpec with_mean(double new_mean) const {
        require(new_mean > 0.0, "with_mean: mean must be positive");
        const double f = new_mean / mean();
        switch (kind_) {
            case DistKind::exponential: return exponential(1.0 / new_mean);
            case DistKind::gamma: return gamma_mean(p1_, new_mean);
            case DistKind::shifted_exponential:
                return DistributionSpec(kind_, p1_ * f, p2_ * f, 0);
            case DistKind::erlang:
                return DistributionSpec(kind_, p1_, new_mean, 0);
            case DistKind::constant: return constant(new_mean);
            case DistKind::two_point:
                return DistributionSpec(kind_, p1_ * f, p2_ * f, p3_);
        }
        throw std::logic_error("with_mean: unreachable");
    }

    double sample(RngStream& stream) const {
        switch (kind_) {
            case DistKind::exponential:
                return -std::log(stream.next_open01()) / p1_;
            case DistKind::gamma:
                return detail::gamma_standard(p1_, stream) * (p2_ / p1_);
            case DistKind::shifted_exponential:
                return p1_ - std::log(stream.next_open01()) * p2_;
            case DistKind::erlang: {
                double log_prod = 0.0;
                const int k = static_cast<int>(p1_);
                for (int i = 0; i < k; ++i) log_prod += std::log(stream.next_open01());
                return -log_prod * (p2_ / p1_);
            }
            case DistKind::constant:
                return p1_;
            case DistKind::two_point:
                return stream.next_double() < p3_ ? p1_ : p2_;
        }
        return 0.0;
    }

    // Complementary CDF F̄(x) = P[Z > x].
    double ccdf(double x) const {
        if (x < 0.0) return 1.0;
        switch (kind_) {
            case DistKind::exponential:
                return std::exp(-p1_ * x);
            case DistKind::gamma:
                return detail::gamma_q(p1_, x * (p1_ / p2_));
            case DistKind::shifted_exponential:
                return x <= p1_ ? 1.0 : std::exp(-(x - p1_) / p2_);
            case DistKind::erlang: {
                // Poisson tail: P[Z > x] = e^{-rate x} sum_{i<k} (rate x)^i / i!
                const int k = static_cast<int>(p1_);
                const double rx = x * (p1_ / p2_);
                double term = 1.0;
                double sum = 1.0;
                for (int i = 1; i < k; ++i) {
                    term *= rx / i;
                    sum += term;
                }
                return std::exp(-rx) * sum;
            }
            case DistKind::constant:
                return x < p1_ ? 1.0 : 0.0;
            case DistKind::two_point: {
                const double lo = std::min(p1_, p2_);
                const double hi = std::max(p1_, p2_);
                const double p_hi = (p1_ <= p2_) ? 1.0 - p3_ : p3_;
                if (x < lo) return 1.0;
                if (x < hi) return p_hi;
                return 0.0;
            }
        }
        return 0.0;
    }

    bool operator==(const DistributionSpec& other) const {
        return kind_ == other.kind_ && p1_ == other.p1_ && p2_ == other.p2_ &&
               p3_ == other.p3_;
    }

  private:
    DistributionSpec(DistKind kind, double p1, double p2, double p3)
        : kind_(kind), p1_(p1), p2_(p2), p3_(p3) {}

    static void require(bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(msg);
    }

    DistKind kind_;
    double p1_, p2_, p3_;
};

struct NbuCheckResult {
    bool is_nbu = false;
    double worst_violation = 0.0;  // max of F̄(τ+t) − F̄(τ)·F̄(t) over the grid
    double worst_tau = 0.0;
    double worst_t = 0.0;
};

// Default lattice: 51x51 points over [0, 5·mean]^2.
inline std::vector<std::pair<double, double>> default_nbu_grid(
    const DistributionSpec& spec) {
    std::vector<std::pair<double, double>> grid;
    const double hi = 5.0 * spec.mean();
    const int n = 51;
    grid.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            grid.emplace_back(hi * i / (n - 1), hi * j / (n - 1));
        }
    }
    return grid;
}

// Checks F̄(τ+t) ≤ F̄(τ)·F̄(t) + tol at every grid point.
inline NbuCheckResult check_nbu(const DistributionSpec& spec,
                                const std::vector<std::pair<double, double>>& grid,
                                double tol = 1e-9) {
    NbuCheckResult result;
    result.worst_violation = -1e300;
    for (const auto& [tau, t] : grid) {
        if (tau < 0.0 || t < 0.0) {
            throw std::invalid_argument("check_nbu: grid points must be non-negative");
        }
        const double v = spec.ccdf(tau + t) - spec.ccdf(tau) * spec.ccdf(t);
        if (v > result.worst_violation) {
            result.worst_violation = v;
            result.worst_tau = tau;
            result.worst_t = t;
        }
    }
    result.is_nbu = result.worst_violation <= tol;
    return result;
}

inline NbuCheckResult check_nbu(const DistributionSpec& spec, double tol = 1e-9) {
    return check_nbu(spec, default_nbu_grid(spec), tol);
}

namespace detail {

struct TextParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit TextParser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) {
            throw std::invalid_argument("distribution: expected '" + std::string(1, c) +
                                        "' in \"" + s + "\"");
        }
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
        }
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        double value = 0.0;
        auto res = std::from_chars(s.data() + pos, s.data() + s.size(), value);
        if (res.ec != std::errc()) {
            throw std::invalid_argument("distribution: expected a number in \"" + s + "\"");
        }
        pos = static_cast<std::size_t>(res.ptr - s.data());
        return value;
    }

    // Arguments are either "key=value" pairs or positional numbers.
    std::vector<std::pair<std::string, double>> args() {
        std::vector<std::pair<std::string, double>> out;
        expect('(');
        if (consume(')')) return out;
        for (;;) {
            skip_ws();
            std::size_t save = pos;
            std::string key = ident();
            if (!key.empty() && consume('=')) {
                out.emplace_back(key, number());
            } else {
                pos = save;
                out.emplace_back(std::string(), number());
            }
            if (consume(')')) break;
            expect(',');
        }
        skip_ws();
        if (pos != s.size()) {
            throw std::invalid_argument("distribution: trailing text in \"" + s + "\"");
        }
        return out;
    }

    double named(const std::vector<std::pair<std::string, double>>& kv,
                 const std::string& key) {
        for (const auto& [k, v] : kv) {
            if (k == key) return v;
        }
        throw std::invalid_argument("distribution: missing parameter \"" + key +
                                    "\" in \"" + s + "\"");
    }
};

}  // namespace detail

inline DistributionSpec DistributionSpec::parse(const std::string& text) {
    detail::TextParser p(text);
    const std::string name = p.ident();
    const auto kv = p.args();
    if (name == "exp") {
        return exponential(p.named(kv, "rate"));
    }
    if (name == "gamma") {
        return gamma_mean(p.named(kv, "k"), p.named(kv, "mean"));
    }
    if (name == "shifted_exp") {
        const double mean = p.named(kv, "mean");
        require(mean > 0.0, "shifted_exp: mean must be positive");
        return DistributionSpec(DistKind::shifted_exponential,
                                [&] {
                                    const double shift = p.named(kv, "shift");
                                    require(shift >= 0.0, "shifted_exp: shift must be >= 0");
                                    return shift;
                                }(),
                                mean, 0);
    }
    if (name == "erlang") {
        const double k = p.named(kv, "k");
        if (k != std::floor(k) || k < 1.0) {
            throw std::invalid_argument("erlang: k must be a positive integer");
        }
        return erlang_mean(static_cast<int>(k), p.named(kv, "mean"));
    }
    if (name == "const") {
        if (kv.size() != 1 || !kv[0].first.empty()) {
            throw std::invalid_argument("const: expected a single positional value");
        }
        return constant(kv[0].second);
    }
    if (name == "two_point") {
        if (kv.size() != 3 || !kv[0].first.empty() || !kv[1].first.empty() ||
            !kv[2].first.empty()) {
            throw std::invalid_argument("two_point: expected three positional values");
        }
        return two_point(kv[0].second, kv[1].second, kv[2].second);
    }
    throw std::invalid_argument("unknown distribution \"" + name + "\" in \"" + text + "\"");
}

inline std::string DistributionSpec::text() const {
    switch (kind_) {
        case DistKind::exponential:
            return "exp(rate=" + format_double(p1_) + ")";
        case DistKind::gamma:
            return "gamma(k=" + format_double(p1_) + ",mean=" + format_double(p2_) + ")";
        case DistKind::shifted_exponential:
            return "shifted_exp(shift=" + format_double(p1_) + ",mean=" +
                   format_double(p2_) + ")";
        case DistKind::erlang:
            return "erlang(k=" + format_double(p1_) + ",mean=" + format_double(p2_) + ")";
        case DistKind::constant:
            return "const(" + format_double(p1_) + ")";
        case DistKind::two_point:
            return "two_point(" + format_double(p1_) + "," + format_double(p2_) + "," +
                   format_double(p3_) + ")";
    }
    return "";
}

}  // namespace aoi
