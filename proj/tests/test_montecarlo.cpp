#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rpmem/montecarlo.hpp"

using namespace rpmem;

TEST_CASE("wilson 99% interval") {
    const auto zero = wilson99(0, 1000);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == Catch::Approx(0.0065911649034068286).epsilon(1e-12));

    const auto mid = wilson99(50, 1000);
    CHECK(mid.half_width == Catch::Approx(0.017940948484000633).epsilon(1e-12));
    CHECK(mid.lower < 0.05);
    CHECK(mid.upper > 0.05);

    for (std::size_t f : {0ul, 1ul, 17ul, 500ul, 1000ul}) {
        const auto w = wilson99(f, 1000);
        const double rate = static_cast<double>(f) / 1000.0;
        CHECK(rate <= w.upper);
        CHECK(w.upper <= 1.0);
        CHECK(w.lower >= 0.0);
    }
    CHECK_THROWS_AS(wilson99(0, 0), OutOfRangeError);
}

TEST_CASE("estimate_failure is a pure function of its config") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::Finite;
    cfg.m = 12;
    cfg.set_size = 60;
    cfg.trials = 400;
    cfg.delta = 0.1;
    cfg.tau_over_d = 0.1;
    cfg.master_seed = 99;
    const auto a = estimate_failure(cfg);
    const auto b = estimate_failure(cfg);
    CHECK(a.failures == b.failures);
    CHECK(a.rate == b.rate);
    CHECK(a.instance_hash == b.instance_hash);

    // thread count cannot change the outcome
    ExperimentConfig par = cfg;
    par.threads = 4;
    ExperimentConfig ser = cfg;
    ser.threads = 1;
    const auto p = estimate_failure(par);
    const auto s = estimate_failure(ser);
    CHECK(p.failures == s.failures);
    CHECK(p.rate == s.rate);
}

TEST_CASE("one trial yields a zero-one rate") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::Finite;
    cfg.m = 8;
    cfg.set_size = 20;
    cfg.trials = 1;
    const auto rep = estimate_failure(cfg);
    CHECK((rep.rate == 0.0 || rep.rate == 1.0));
    CHECK(rep.rate <= rep.wilson_99_upper);
}

TEST_CASE("finite-class failure rate is dominated by delta") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::Finite;
    cfg.m = 20;
    cfg.set_size = 200;
    cfg.trials = 1500;
    cfg.delta = 0.1;
    cfg.tau_over_d = 0.1;
    cfg.instance_seed = 7;
    cfg.master_seed = 11;
    const auto rep = estimate_failure(cfg);
    CHECK(rep.rate <= cfg.delta + rep.wilson_99_half_width);
    CHECK(rep.theoretical_delta <= cfg.delta);
    CHECK(rep.k >= 3);
}

TEST_CASE("integer-class parity instances separate essentially always") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::IntegerFiber;
    cfg.n = 3;
    cfg.b_bound = 2;
    cfg.m = 4;
    cfg.trials = 200;
    cfg.delta = 0.1;
    const auto rep = estimate_failure(cfg);
    CHECK(rep.rate <= cfg.delta + rep.wilson_99_half_width);
    CHECK(rep.k == 185);
}

TEST_CASE("polytope-class failure rate is dominated by delta") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::Polytope;
    cfg.m = 16;
    cfg.n = 4;
    cfg.trials = 300;
    cfg.delta = 0.1;
    cfg.instance_seed = 3;
    const auto rep = estimate_failure(cfg);
    CHECK(rep.rate <= cfg.delta + rep.wilson_99_half_width);
    CHECK(rep.d > 1.0);
}

TEST_CASE("cone-class failure rate is dominated by delta") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::Cone;
    cfg.m = 20;
    cfg.n = 3;
    cfg.trials = 300;
    cfg.delta = 0.1;
    cfg.instance_seed = 5;
    cfg.mu_samples = 256;
    const auto rep = estimate_failure(cfg);
    CHECK(rep.rate <= cfg.delta + rep.wilson_99_half_width);
}

TEST_CASE("doubling-class failure rate is dominated by delta") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::DoublingSample;
    cfg.m = 6;
    cfg.set_size = 16;
    cfg.trials = 500;
    cfg.delta = 0.1;
    cfg.tau_over_d = 0.2;
    const auto rep = estimate_failure(cfg);
    CHECK(rep.rate <= cfg.delta + rep.wilson_99_half_width);
    CHECK(rep.rule == SelectionRule::DoublingThreshold);
}

TEST_CASE("ifp float pathology report") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::IntegerFiber;
    cfg.n = 4;
    cfg.b_bound = 5;
    cfg.m = 4;
    cfg.trials = 50;
    cfg.instance_seed = 17;
    cfg.master_seed = 23;
    const auto rep = reproduce_ifp_float(cfg);
    CHECK(rep.trials == 50);
    CHECK(rep.lattice_points == 1296);  // (B+1)^n
    REQUIRE(rep.min_gaps.size() == 50);
    for (double g : rep.min_gaps) CHECK(g > 0.0);  // instance is infeasible
    CHECK(rep.rel_gap_min <= rep.rel_gap_median);
    CHECK(rep.rel_gap_median <= rep.rel_gap_max);
    CHECK(rep.frac_below_1e12 <= rep.frac_below_1e9);
    CHECK(rep.frac_below_1e9 <= rep.frac_below_1e6);

    // identical config, identical report
    const auto rep2 = reproduce_ifp_float(cfg);
    CHECK(rep2.min_gaps == rep.min_gaps);
}

TEST_CASE("ifp float check misclassifies where the exact path separates") {
    // larger lattice: the projected values crowd together and a tolerance
    // check starts accepting, while the Rademacher path stays exact
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::IntegerFiber;
    cfg.n = 12;
    cfg.b_bound = 2;
    cfg.m = 4;
    cfg.trials = 20;
    cfg.instance_seed = 29;
    cfg.master_seed = 31;
    const auto rep = reproduce_ifp_float(cfg);
    CHECK(rep.lattice_points == 531441);  // 3^12
    // relative gaps shrink toward solver-tolerance territory
    CHECK(rep.rel_gap_min < 1e-4);

    const IntegerFiber F =
        make_parity_infeasible_fiber(cfg.n, cfg.b_bound, cfg.m, cfg.instance_seed);
    const KSelection sel = k_for_integer_fiber(cfg.n, cfg.b_bound, 0.1);
    int separated = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        ProjectionSpec spec{cfg.m - 1, static_cast<std::size_t>(sel.k),
                            Distribution::Rademacher, Scaling::None,
                            derive_seed(cfg.master_seed, t)};
        const Decision dec = decide_integer_exact(F, sample_projection(spec));
        if (dec.outcome == Outcome::Separated) ++separated;
    }
    CHECK(separated == static_cast<int>(cfg.trials));
}

TEST_CASE("ifp gap is exactly scale covariant under doubling") {
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::IntegerFiber;
    cfg.n = 3;
    cfg.b_bound = 3;
    cfg.m = 3;
    cfg.trials = 10;
    cfg.instance_seed = 41;
    const IntegerFiber F =
        make_parity_infeasible_fiber(cfg.n, cfg.b_bound, cfg.m, cfg.instance_seed);
    IntegerFiber F2 = F;
    for (auto& row : F2.A)
        for (auto& v : row) v *= 2;
    F2.b = F.b;
    for (auto& v : F2.b) v *= 2;
    const auto rep1 = reproduce_ifp_float_on(F, cfg);
    const auto rep2 = reproduce_ifp_float_on(F2, cfg);
    for (std::size_t t = 0; t < cfg.trials; ++t)
        CHECK(rep2.min_gaps[t] == 2.0 * rep1.min_gaps[t]);
}

TEST_CASE("feasible instances violate the ifp contract") {
    IntegerFiber F;
    F.A = {{1, 1}, {1, 2}};
    F.b = {2, 3};  // (1,1) solves the system
    F.positive_row = 0;
    F.box_lower = IntVector{0, 0};
    F.box_upper = IntVector{2, 2};
    ExperimentConfig cfg;
    cfg.cls = InstanceClass::IntegerFiber;
    cfg.trials = 5;
    CHECK_THROWS_AS(reproduce_ifp_float_on(F, cfg), ContractError);
}

TEST_CASE("calibration recovers a constructed geometric slope") {
    ExperimentConfig base;
    base.master_seed = 1009;
    const auto cal = calibrate_C(InstanceClass::SyntheticGeometric,
                                 {3, 5, 8, 11}, 100000, base);
    CHECK_FALSE(cal.lower_bound_only);
    CHECK(cal.points_used == 4);
    CHECK(std::abs(cal.c_hat - std::log(2.0)) <= 0.1 * std::log(2.0));
}

TEST_CASE("calibration rejects degenerate grids") {
    ExperimentConfig base;
    CHECK_THROWS_AS(
        calibrate_C(InstanceClass::SyntheticGeometric, {4, 4, 4}, 100, base),
        OutOfRangeError);
    CHECK_THROWS_AS(calibrate_C(InstanceClass::SyntheticGeometric, {4, 6}, 100,
                                base),
                    OutOfRangeError);
}

TEST_CASE("calibration reports a lower bound when nothing fails") {
    ExperimentConfig base;
    base.master_seed = 4;
    const auto cal = calibrate_C(InstanceClass::SyntheticGeometric,
                                 {40, 45, 50}, 2000, base);
    CHECK(cal.lower_bound_only);
    CHECK(cal.c_hat > 0.0);
    CHECK(cal.c_hat <= std::log(2.0));  // the truth dominates the floor
}

TEST_CASE("fitted constant for the finite class dominates the default") {
    ExperimentConfig base;
    base.cls = InstanceClass::Finite;
    base.m = 10;
    base.set_size = 32;
    base.tau_over_d = 0.5;
    base.delta = 0.1;
    base.instance_seed = 2;
    base.master_seed = 3;
    const auto cal =
        calibrate_C(InstanceClass::Finite, {3, 4, 5, 6}, 4000, base);
    if (!cal.lower_bound_only) CHECK(cal.points_used >= 2);
    CHECK(cal.c_hat >= ConstantConfig{}.c_jl);
}
