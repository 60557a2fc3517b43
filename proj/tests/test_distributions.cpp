#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aoi/distributions.hpp"
#include "aoi/rng.hpp"

using aoi::DistKind;
using aoi::DistributionSpec;
using aoi::RngStream;
using aoi::StreamPurpose;

namespace {

// Independent oracle for the gamma CCDF: Simpson quadrature of the density
// in the substituted variable x = u^2, which removes the integrable
// singularity at 0 for shapes in [0.5, 1). Shares no code with the library's
// series/continued-fraction evaluation.
double gamma_ccdf_quadrature(double shape, double mean, double x) {
    if (x <= 0.0) return 1.0;
    const double scale = mean / shape;
    const double upper = std::sqrt(x / scale);
    const double lgam = std::lgamma(shape);
    auto f = [&](double u) {
        if (u == 0.0) {
            return (2.0 * shape - 1.0 > 0.0) ? 0.0 : 2.0 * std::exp(-lgam);
        }
        return 2.0 * std::exp((2.0 * shape - 1.0) * std::log(u) - u * u - lgam);
    };
    const int n = 200000;  // even number of Simpson intervals
    const double h = upper / n;
    double sum = f(0.0) + f(upper);
    for (int i = 1; i < n; ++i) {
        sum += f(i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    const double p_lower = sum * h / 3.0;
    return 1.0 - p_lower;
}

struct Moments {
    double mean;
    double var;
};

Moments sample_moments(const DistributionSpec& spec, int n, std::uint64_t seed) {
    RngStream s(seed, StreamPurpose::scratch, 0);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = spec.sample(s);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    return {mean, sumsq / n - mean * mean};
}

}  // namespace

TEST_CASE("gamma ccdf matches the quadrature oracle") {
    for (double shape : {0.5, 1.0, 2.0, 4.0, 6.5, 8.0, 16.0}) {
        const auto spec = DistributionSpec::gamma_mean(shape, 1.0);
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double oracle = gamma_ccdf_quadrature(shape, 1.0, x);
            REQUIRE_THAT(spec.ccdf(x),
                         Catch::Matchers::WithinAbs(oracle, 1e-7));
        }
    }
}

TEST_CASE("erlang ccdf agrees with the gamma evaluation at integer shapes") {
    // Poisson-sum formula versus series/continued fraction: independent routes.
    const auto erl = DistributionSpec::erlang_mean(2, 0.5);
    const auto gam = DistributionSpec::gamma_mean(2.0, 0.5);
    for (double x = 0.0; x <= 5.0; x += 0.05) {
        REQUIRE_THAT(erl.ccdf(x), Catch::Matchers::WithinAbs(gam.ccdf(x), 1e-12));
    }
}

TEST_CASE("Monte Carlo moment oracles") {
    const int n = 1'000'000;

    SECTION("constant") {
        RngStream s(1, StreamPurpose::scratch, 0);
        const auto spec = DistributionSpec::constant(2.0);
        for (int i = 0; i < 100; ++i) REQUIRE(spec.sample(s) == 2.0);
    }
    SECTION("exponential rate 1") {
        const auto m = sample_moments(DistributionSpec::exponential(1.0), n, 21);
        REQUIRE(m.mean > 0.99);
        REQUIRE(m.mean < 1.01);
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(1.0, 0.03));
    }
    SECTION("gamma shape 4, mean 1") {
        const auto m = sample_moments(DistributionSpec::gamma_mean(4.0, 1.0), n, 22);
        REQUIRE_THAT(m.mean, Catch::Matchers::WithinAbs(1.0, 0.02));
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(0.25, 0.005));
    }
    SECTION("gamma shape 0.5, mean 1 exercises the boosted sampler") {
        const auto m = sample_moments(DistributionSpec::gamma_mean(0.5, 1.0), n, 23);
        REQUIRE_THAT(m.mean, Catch::Matchers::WithinAbs(1.0, 0.02));
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(2.0, 0.06));
    }
    SECTION("erlang k=2 mean 0.5") {
        const auto m = sample_moments(DistributionSpec::erlang_mean(2, 0.5), n, 24);
        REQUIRE_THAT(m.mean, Catch::Matchers::WithinAbs(0.5, 0.005));
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(0.125, 0.004));
    }
    SECTION("shifted exponential 0.25 + Exp(mean 0.25)") {
        const auto m =
            sample_moments(DistributionSpec::shifted_exponential(0.25, 4.0), n, 25);
        REQUIRE_THAT(m.mean, Catch::Matchers::WithinAbs(0.5, 0.005));
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(0.0625, 0.002));
    }
    SECTION("two point 1 or 100 with equal probability") {
        const auto m = sample_moments(DistributionSpec::two_point(1, 100, 0.5), n, 26);
        REQUIRE_THAT(m.mean, Catch::Matchers::WithinAbs(50.5, 0.3));
        REQUIRE_THAT(m.var, Catch::Matchers::WithinAbs(2450.25, 25.0));
    }
}

TEST_CASE("empirical CCDF stays inside the DKW band at 99% confidence") {
    const int n = 1'000'000;
    // sup-norm band: sqrt(ln(2/0.01) / (2n))
    const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
    const std::vector<DistributionSpec> specs = {
        DistributionSpec::exponential(1.0),
        DistributionSpec::gamma_mean(4.0, 1.0),
        DistributionSpec::gamma_mean(0.5, 1.0),
        DistributionSpec::erlang_mean(2, 0.5),
        DistributionSpec::shifted_exponential(0.25, 4.0),
        DistributionSpec::two_point(1, 100, 0.5),
        DistributionSpec::constant(2.0),
    };
    std::uint64_t seed = 31;
    for (const auto& spec : specs) {
        RngStream s(seed++, StreamPurpose::scratch, 0);
        std::vector<double> draws(n);
        for (auto& d : draws) d = spec.sample(s);
        std::sort(draws.begin(), draws.end());
        // Checking at every 997th order statistic plus both ends bounds the
        // empirical sup deviation to within one grid cell of probability mass.
        for (int i = 0; i < n; i += 997) {
            const double x = draws[i];
            const double emp =
                static_cast<double>(draws.end() -
                                    std::upper_bound(draws.begin(), draws.end(), x)) /
                n;
            REQUIRE_THAT(emp, Catch::Matchers::WithinAbs(spec.ccdf(x), band + 0.001));
        }
    }
}

TEST_CASE("ccdf boundary values and monotonicity") {
    const std::vector<DistributionSpec> specs = {
        DistributionSpec::exponential(1.0),
        DistributionSpec::gamma_mean(4.0, 1.0),
        DistributionSpec::gamma_mean(0.5, 1.0),
        DistributionSpec::erlang_mean(2, 0.5),
        DistributionSpec::shifted_exponential(0.25, 4.0),
        DistributionSpec::two_point(1, 100, 0.5),
        DistributionSpec::constant(2.0),
    };
    for (const auto& spec : specs) {
        REQUIRE(spec.ccdf(0.0) == 1.0);
        double prev = 1.0;
        for (double x = 0.0; x <= 12.0 * spec.mean(); x += spec.mean() / 50.0) {
            const double c = spec.ccdf(x);
            REQUIRE(c >= 0.0);
            REQUIRE(c <= prev + 1e-14);
            prev = c;
        }
    }

    SECTION("step distributions") {
        const auto c2 = DistributionSpec::constant(2.0);
        REQUIRE(c2.ccdf(1.0) == 1.0);
        REQUIRE(c2.ccdf(3.0) == 0.0);
        const auto se = DistributionSpec::shifted_exponential(0.25, 4.0);
        REQUIRE(se.ccdf(0.25) == 1.0);
        REQUIRE_THAT(se.ccdf(0.5), Catch::Matchers::WithinRel(std::exp(-1.0), 1e-12));
        const auto exp1 = DistributionSpec::exponential(1.0);
        REQUIRE(exp1.ccdf(0.0) == 1.0);
    }
}

TEST_CASE("NBU check accepts the aging families and rejects the controls") {
    SECTION("exponential is NBU with equality") {
        const auto r = check_nbu(DistributionSpec::exponential(2.0));
        REQUIRE(r.is_nbu);
        REQUIRE(std::abs(r.worst_violation) < 1e-12);
    }
    SECTION("gamma shape 4 is NBU") {
        REQUIRE(check_nbu(DistributionSpec::gamma_mean(4.0, 1.0)).is_nbu);
    }
    SECTION("gamma shapes 2 and 8 are NBU") {
        REQUIRE(check_nbu(DistributionSpec::gamma_mean(2.0, 1.0)).is_nbu);
        REQUIRE(check_nbu(DistributionSpec::gamma_mean(8.0, 1.0)).is_nbu);
    }
    SECTION("shifted exponential, erlang, and constant are NBU") {
        REQUIRE(check_nbu(DistributionSpec::shifted_exponential(0.25, 4.0)).is_nbu);
        REQUIRE(check_nbu(DistributionSpec::erlang_mean(2, 0.5)).is_nbu);
        REQUIRE(check_nbu(DistributionSpec::constant(2.0)).is_nbu);
    }
    SECTION("gamma shape 0.5 is NWU, not NBU") {
        const auto r = check_nbu(DistributionSpec::gamma_mean(0.5, 1.0));
        REQUIRE_FALSE(r.is_nbu);
        REQUIRE(r.worst_violation > 1e-3);
        // Confirm the violation with the quadrature oracle at (tau, t) = (1, 1).
        const double f2 = gamma_ccdf_quadrature(0.5, 1.0, 2.0);
        const double f1 = gamma_ccdf_quadrature(0.5, 1.0, 1.0);
        REQUIRE(f2 - f1 * f1 > 1e-3);
    }
    SECTION("the heavy-delay two-point mix is not NBU") {
        REQUIRE_FALSE(check_nbu(DistributionSpec::two_point(1, 100, 0.5)).is_nbu);
    }
}

TEST_CASE("canonical text forms parse and round-trip") {
    const std::vector<std::string> canon = {
        "exp(rate=1.0)",
        "gamma(k=4,mean=1.0)",
        "shifted_exp(shift=0.25,mean=0.25)",
        "erlang(k=2,mean=0.5)",
        "const(2.0)",
        "two_point(1,100,0.5)",
    };
    for (const auto& text : canon) {
        const auto spec = DistributionSpec::parse(text);
        REQUIRE(DistributionSpec::parse(spec.text()) == spec);
    }

    const auto g = DistributionSpec::parse("gamma(k=6.5,mean=1)");
    REQUIRE(g.kind() == DistKind::gamma);
    REQUIRE(g.param1() == 6.5);
    REQUIRE(g.mean() == 1.0);

    const auto se = DistributionSpec::parse("shifted_exp(shift=0.25,mean=0.25)");
    REQUIRE(se.mean() == 0.5);

    const auto tp = DistributionSpec::parse("two_point(1,100,0.5)");
    REQUIRE(tp.mean() == 50.5);

    const auto zero = DistributionSpec::parse("const(0)");
    REQUIRE(zero.mean() == 0.0);
    RngStream s(5, StreamPurpose::scratch, 0);
    REQUIRE(zero.sample(s) == 0.0);
}

TEST_CASE("invalid distribution text is rejected") {
    const std::vector<std::string> bad = {
        "weibull(1.0)",
        "exp(rate=0)",
        "exp(rate=-1)",
        "exp()",
        "gamma(k=4)",
        "erlang(k=2.5,mean=1)",
        "two_point(1,100,1.5)",
        "two_point(1,100)",
        "const(-1)",
        "const(1,2)",
        "exp(rate=1)x",
        "exp(rate=zzz)",
        "shifted_exp(shift=-1,mean=0.25)",
    };
    for (const auto& text : bad) {
        CAPTURE(text);
        REQUIRE_THROWS_AS(DistributionSpec::parse(text), std::invalid_argument);
    }
}

TEST_CASE("sampling replays identically from equal stream ids") {
    const auto spec = DistributionSpec::gamma_mean(0.7, 1.3);
    RngStream a(99, StreamPurpose::service, 2);
    RngStream b(99, StreamPurpose::service, 2);
    for (int i = 0; i < 500; ++i) {
        REQUIRE(spec.sample(a) == spec.sample(b));
    }
}

TEST_CASE("samples are non-negative and shifted samples respect the shift") {
    RngStream s(7, StreamPurpose::scratch, 1);
    const auto se = DistributionSpec::shifted_exponential(0.25, 4.0);
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(se.sample(s) > 0.25);
    }
    const auto g = DistributionSpec::gamma_mean(0.5, 1.0);
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(g.sample(s) >= 0.0);
    }
}
