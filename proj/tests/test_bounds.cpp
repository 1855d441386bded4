#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rpmem/bounds.hpp"
#include "rpmem/linalg.hpp"
#include "rpmem/prng.hpp"
#include "support/oracles.hpp"

using namespace rpmem;

TEST_CASE("chi2_cdf_upper evaluates the chernoff form") {
    CHECK(chi2_cdf_upper(4, 2.0) == Catch::Approx(0.6795704571147614).epsilon(1e-14));
    // dominates the exact CDF
    CHECK(chi2_cdf_upper(4, 2.0) >= oracles::chi2_cdf_exact(4, 2.0));
    CHECK(oracles::chi2_cdf_exact(4, 2.0) == Catch::Approx(0.2642411176571153).epsilon(1e-12));

    CHECK(chi2_cdf_upper(5, 0.09) == Catch::Approx(5.06260700632564e-4).epsilon(1e-12));

    // bound vanishes toward x -> 0+
    CHECK(chi2_cdf_upper(3, 1e-12) < 1e-17);

    CHECK_THROWS_AS(chi2_cdf_upper(4, 4.0), OutOfRangeError);
    CHECK_THROWS_AS(chi2_cdf_upper(4, 5.0), OutOfRangeError);
    CHECK_THROWS_AS(chi2_cdf_upper(4, 0.0), OutOfRangeError);
}

TEST_CASE("chi2_cdf_upper dominates the exact cdf at random points") {
    SplitMix64 g(1234);
    for (int rep = 0; rep < 100; ++rep) {
        const int k = 1 + static_cast<int>(g.next() % 40);
        const double x = g.uniform01() * k;
        if (x <= 0.0 || x >= k) continue;
        CHECK(chi2_cdf_upper(k, x) >= oracles::chi2_cdf_exact(k, x));
    }
}

TEST_CASE("chi2_cdf_upper dominates a 1e7-draw monte carlo estimate") {
    const int k = 5;
    const double x = 0.09;
    const double bound = chi2_cdf_upper(k, x);
    SplitMix64 g(555);
    const long n = 10000000;
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        double q = 0.0;
        for (int j = 0; j < k; ++j) {
            const double z = g.normal();
            q += z * z;
        }
        if (q <= x) ++hits;
    }
    CHECK(static_cast<double>(hits) / n <= bound);
}

TEST_CASE("small_norm_prob_bound picks the tightest valid form") {
    // k >= 3: the (e d^2/k)^{k/2} branch is the tighter one
    CHECK(small_norm_prob_bound(3, 0.1) ==
          Catch::Approx(0.000862501463727962).epsilon(1e-12));
    CHECK(small_norm_prob_bound(3, 0.1) <= std::pow(0.1, 3));
    // k < 3: only the exponential branch exists
    CHECK(small_norm_prob_bound(1, 0.5) ==
          Catch::Approx(0.8243606353500641).epsilon(1e-12));
    CHECK_THROWS_AS(small_norm_prob_bound(3, 1.0), OutOfRangeError);
    CHECK_THROWS_AS(small_norm_prob_bound(3, 0.0), OutOfRangeError);
    CHECK_THROWS_AS(small_norm_prob_bound(0, 0.5), OutOfRangeError);
}

TEST_CASE("small_norm_prob_bound dominates a sampled projection norm") {
    const int k = 10;
    const double delta = 0.5;
    const double bound = small_norm_prob_bound(k, delta);
    long hits = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
        const auto t = sample_projection({1, static_cast<std::size_t>(k),
                                          Distribution::Gaussian, Scaling::None,
                                          derive_seed(777, i)});
        const Vector y = project(t, Vector{1.0});
        if (norm(y) <= delta) ++hits;
    }
    CHECK(static_cast<double>(hits) / n <= bound);
}

TEST_CASE("small_norm_prob_bound dominance on randomized (k, delta)") {
    SplitMix64 g(4242);
    for (int rep = 0; rep < 4; ++rep) {
        const int k = 2 + static_cast<int>(g.next() % 8);
        const double delta = 0.3 + 0.5 * g.uniform01();
        const double bound = small_norm_prob_bound(k, delta);
        long hits = 0;
        const long n = 200000;
        SplitMix64 mc(derive_seed(888, rep));
        for (long i = 0; i < n; ++i) {
            double q = 0.0;
            for (int j = 0; j < k; ++j) {
                const double z = mc.normal();
                q += z * z;
            }
            if (std::sqrt(q) <= delta) ++hits;
        }
        CHECK(static_cast<double>(hits) / n <= bound);
    }
}

TEST_CASE("finite-threshold selector") {
    const auto sel = k_for_finite_threshold(1000, 0.01, 0.1, 1.0);
    CHECK(sel.k == 5);
    CHECK(sel.rule == SelectionRule::FiniteThreshold);
    REQUIRE(sel.inputs.set_size.has_value());
    CHECK(*sel.inputs.set_size == 1000);

    // raw value 2 gets floored to k_min
    CHECK(k_for_finite_threshold(10, 0.1, 0.2, 2.0).k == 3);

    CHECK_THROWS_AS(k_for_finite_threshold(10, 0.1, 1.0, 1.0), OutOfRangeError);
    CHECK_THROWS_AS(k_for_finite_threshold(10, 0.1, 2.0, 1.0), OutOfRangeError);
}

TEST_CASE("integer-fiber selector") {
    CHECK(k_for_integer_fiber(3, 2, 0.1).k == 185);

    ConstantConfig unit;
    unit.c_jl = 1.0;
    CHECK(k_for_integer_fiber(1, 1, 0.5, unit).k == 3);  // raw 2, floored
    CHECK(k_for_integer_fiber(1, 1, 0.999, unit).k == 3);  // floor dominates
}

TEST_CASE("doubling selector combines both theorem forms") {
    ConstantConfig cfg;  // C_doubling = 8, kappa = 0.5
    const auto sel = k_for_doubling(4.0, 0.1, 0.01, 1.0, cfg);
    CHECK(sel.k == 16);
    CHECK(sel.rule == SelectionRule::DoublingThreshold);

    // lambda = 1 kills the log2 floor
    const auto sel1 = k_for_doubling(1.0, 0.1, 0.01, 1.0, cfg);
    CHECK(sel1.k ==
          std::max(3, static_cast<int>(std::ceil(
                          8.0 * std::log(1.0 / 0.1) / std::log(1.0 / 0.01)))));

    CHECK_THROWS_AS(k_for_doubling(4.0, 0.1, 0.5, 1.0, cfg), OutOfRangeError);

    CHECK(k_for_doubling_exact(4.0, cfg).k == 16);
    CHECK(k_for_doubling_exact(1.0, cfg).k == 3);
}

TEST_CASE("polytope success bound maximizes over the epsilon grid") {
    // d = D: the ceiling is 1 and the maximizer of eps^2 - eps^3 is 2/3
    const auto sb = polytope_success_bound(1, 2000, 1.0, 1.0);
    CHECK(sb.epsilon == Catch::Approx(2.0 / 3.0).margin(2e-3));
    const double closed = 1.0 - 2.0 * std::exp(-(1.0 / 32.0) * (4.0 / 27.0) * 2000);
    CHECK(sb.bound == Catch::Approx(closed).margin(1e-6));

    // large k drives the bound to 1
    CHECK(polytope_success_bound(1, 2000000, 1.0, 1.0).bound ==
          Catch::Approx(1.0).margin(1e-9));

    CHECK_THROWS_AS(polytope_success_bound(2, 10, 2.0, 1.0), GeometryError);
}

TEST_CASE("polytope bound matches a dense-grid oracle") {
    // ceiling 0.5, n = 4, k = 500: compare the 1e4-point geometric grid with a
    // dense 1e6-point uniform grid
    const std::size_t n = 4;
    const int k = 500;
    const double d = 1.0, big_d = std::sqrt(2.0);
    const auto sb = polytope_success_bound(n, k, d, big_d);
    const double ceiling = (d * d) / (big_d * big_d);
    double best = 0.0;
    const int pts = 1000000;
    for (int i = 1; i < pts; ++i) {
        const double eps = ceiling * i / pts;
        const double g = eps * eps - eps * eps * eps;
        const double raw = 1.0 - 2.0 * n * n * std::exp(-(1.0 / 32.0) * g * k);
        const double clamped = raw < 0.0 ? 0.0 : raw;
        best = std::max(best, clamped);
    }
    CHECK(std::abs(sb.bound - best) <= 1e-9);
}

TEST_CASE("cone success bound pins epsilon by the closed form") {
    const auto half = cone_success_bound(1, 100, 1.0, 1.0);
    CHECK(half.epsilon == Catch::Approx(0.5).epsilon(1e-14));

    // mu = 0, d = 1 degenerates to eps = 1, which is vacuous
    const auto corner = cone_success_bound(1, 100, 1.0, 0.0);
    CHECK(corner.epsilon == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(corner.vacuous);
    CHECK(corner.bound == 0.0);

    // independent evaluation of the same formula
    const std::size_t n = 2;
    const int k = 1000;
    const double d = 0.8, mu = 2.0;
    const auto sb = cone_success_bound(n, k, d, mu);
    const double eps = d * d / (mu * mu + 2.0 * std::sqrt(1.0 - d * d) * mu + 1.0);
    const double raw =
        1.0 - 2.0 * n * (n + 1.0) *
                  std::exp(-(1.0 / 32.0) * (eps * eps - eps * eps * eps) * k);
    CHECK(sb.epsilon == Catch::Approx(eps).epsilon(1e-12));
    CHECK(sb.raw == Catch::Approx(raw).epsilon(1e-12));
    CHECK(sb.bound == (raw < 0.0 ? 0.0 : raw));

    CHECK_THROWS_AS(cone_success_bound(1, 10, 1.5, 1.0), GeometryError);
}

TEST_CASE("target selectors reach the requested bound") {
    const auto ps = k_for_polytope(2, 0.05, std::sqrt(2.0) / 2.0, 1.0);
    CHECK(polytope_success_bound(2, ps.k, std::sqrt(2.0) / 2.0, 1.0).bound >=
          0.95);
    const auto cs = k_for_cone(2, 0.05, 1.0, std::sqrt(2.0));
    CHECK(cone_success_bound(2, cs.k, 1.0, std::sqrt(2.0)).bound >= 0.95);
    CHECK(cs.k == 2368);
    CHECK_THROWS_AS(k_for_cone(1, 0.05, 1.0, 0.0), OutOfRangeError);
}

TEST_CASE("selectors are monotone on randomized grids") {
    SplitMix64 g(31415);
    for (int rep = 0; rep < 200; ++rep) {
        const double d = 0.5 + 2.0 * g.uniform01();
        const double tau = d * (0.05 + 0.6 * g.uniform01());
        const double delta = 0.01 + 0.5 * g.uniform01();
        const std::size_t size = 2 + g.next() % 10000;

        const int base = k_for_finite_threshold(size, delta, tau, d).k;
        CHECK(k_for_finite_threshold(size * 2, delta, tau, d).k >= base);
        CHECK(k_for_finite_threshold(size, delta * 0.5, tau, d).k >= base);
        // larger d/tau ratio can only shrink k
        CHECK(k_for_finite_threshold(size, delta, tau * 0.5, d).k <= base);

        const std::size_t n = 1 + g.next() % 10;
        const std::size_t B = 1 + g.next() % 6;
        const int fb = k_for_integer_fiber(n, B, delta).k;
        CHECK(k_for_integer_fiber(n + 3, B, delta).k >= fb);
        CHECK(k_for_integer_fiber(n, B + 2, delta).k >= fb);
    }
}

TEST_CASE("bound formulas are pure") {
    const double a = small_norm_prob_bound(7, 0.37);
    const double b = small_norm_prob_bound(7, 0.37);
    CHECK(a == b);
    const auto s1 = polytope_success_bound(3, 250, 0.9, 1.7);
    const auto s2 = polytope_success_bound(3, 250, 0.9, 1.7);
    CHECK(s1.bound == s2.bound);
    CHECK(s1.epsilon == s2.epsilon);
}

TEST_CASE("constant config validation") {
    ConstantConfig bad;
    bad.c_jl = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
    bad = ConstantConfig{};
    bad.kappa = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
    bad = ConstantConfig{};
    bad.k_min = 2;
    CHECK_THROWS_AS(bad.validate(), InvalidSpecError);
}
