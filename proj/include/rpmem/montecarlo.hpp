#pragma once

// Experiment harness: empirical failure frequencies against the closed-form
// bounds, the floating-point IFP pathology reproduction, and slope fitting
// for the concentration constant. Every report is a pure function of its
// config; trials run in parallel into preassigned slots so thread count and
// scheduling never change a result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rpmem/bounds.hpp"
#include "rpmem/error.hpp"
#include "rpmem/geometry.hpp"
#include "rpmem/linalg.hpp"
#include "rpmem/membership.hpp"
#include "rpmem/prng.hpp"

namespace rpmem {

// ---------------------------------------------------------------------------
// Wilson score interval (99%, two-sided)
// ---------------------------------------------------------------------------

constexpr double kWilsonZ99 = 2.5758293035489004;  // Phi^{-1}(0.995)

struct WilsonInterval {
    double lower = 0.0;
    double upper = 0.0;
    double half_width = 0.0;
};

inline WilsonInterval wilson99(std::size_t failures, std::size_t trials) {
    if (trials == 0) throw OutOfRangeError("wilson99: trials must be >= 1");
    const double z = kWilsonZ99;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double den = 1.0 + z * z / n;
    const double center = (p + z * z / (2.0 * n)) / den;
    const double hw =
        (z / den) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    WilsonInterval w;
    w.half_width = hw;
    w.lower = std::max(0.0, center - hw);
    // center + hw equals 1 exactly at p = 1 in real arithmetic; keep the
    // computed interval from rounding below the point estimate
    w.upper = std::min(1.0, std::max(center + hw, p));
    return w;
}

// ---------------------------------------------------------------------------
// Deterministic parallel trial runner
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
void run_indexed(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (threads > count) threads = static_cast<unsigned>(count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// FNV-1a over a canonical byte stream; doubles hash by bit pattern.
struct Hasher {
    std::uint64_t h = 1469598103934665603ULL;
    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof v);
        __builtin_memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void vec(const Vector& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
    void big(const BigInt& v) {
        const std::string s = v.str();
        bytes(s.data(), s.size());
        bytes("|", 1);
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Certified instance generators
// ---------------------------------------------------------------------------

struct FiniteInstance {
    PointSet X;
    Vector p;
    double d = 0.0;
};

inline FiniteInstance make_separated_finite(std::size_t m, std::size_t set_size,
                                            std::uint64_t seed) {
    if (m == 0 || set_size == 0)
        throw InvalidSpecError("make_separated_finite: m, set_size >= 1");
    for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
        SplitMix64 gen(derive_seed(seed, attempt));
        std::vector<Vector> pts(set_size, Vector(m));
        for (auto& x : pts)
            for (double& c : x) c = gen.normal();
        Vector p(m);
        for (double& c : p) c = gen.normal();
        FiniteInstance inst{PointSet(std::move(pts)), p, 0.0};
        inst.d = dist_to_finite(inst.p, inst.X).distance;
        if (inst.d > 0.0) return inst;
    }
    throw ContractError("make_separated_finite: could not certify d > 0");
}

struct PolytopeInstance {
    Polytope P;
    Vector b;
    double d = 0.0;
    double big_d = 0.0;
};

// Vertices cluster around a point at distance ~3 from the query, so the
// certified ratio d/D stays healthy and the selector k stays reasonable.
inline PolytopeInstance make_separated_polytope(std::size_t m, std::size_t n,
                                                std::uint64_t seed) {
    if (m < 2 || n == 0)
        throw InvalidSpecError("make_separated_polytope: m >= 2, n >= 1");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        SplitMix64 gen(derive_seed(seed, attempt));
        Vector center(m);
        double nc = 0.0;
        do {
            for (double& c : center) c = gen.normal();
            nc = norm(center);
        } while (nc == 0.0);
        for (double& c : center) c *= 3.0 / nc;
        std::vector<Vector> verts(n, Vector(m));
        for (auto& v : verts)
            for (std::size_t c = 0; c < m; ++c)
                v[c] = center[c] + 0.3 * gen.normal();
        Vector b(m, 0.0);
        PolytopeInstance inst{Polytope{PointSet(std::move(verts))}, b, 0.0, 0.0};
        const PolytopeDistance pd = min_norm_point_polytope(b, inst.P, 1e-10);
        const double big_d = max_vertex_dist(b, inst.P);
        if (pd.distance > 1.0 &&
            pd.distance * pd.distance > 0.2 * big_d * big_d) {
            inst.d = pd.distance;
            inst.big_d = big_d;
            return inst;
        }
    }
    throw ContractError("make_separated_polytope: could not certify d > 0");
}

struct ConeInstance {
    Cone K;
    Vector b;
    double d = 0.0;
};

inline ConeInstance make_separated_cone(std::size_t m, std::size_t n,
                                        std::uint64_t seed) {
    if (m < 2 || n == 0) throw InvalidSpecError("make_separated_cone: m >= 2, n >= 1");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        SplitMix64 gen(derive_seed(seed, attempt));
        std::vector<Vector> gens(n, Vector(m));
        for (auto& g : gens) {
            double nn = 0.0;
            do {
                for (double& c : g) c = gen.normal();
                nn = norm(g);
            } while (nn == 0.0);
            for (double& c : g) c /= nn;
        }
        Vector b(m);
        double nb = 0.0;
        do {
            for (double& c : b) c = gen.normal();
            nb = norm(b);
        } while (nb == 0.0);
        for (double& c : b) c /= nb;
        ConeInstance inst{Cone{PointSet(std::move(gens))}, b, 0.0};
        const ConeDistance cd = dist_to_cone(b, inst.K, 1e-10);
        // d close to 1 keeps the cone epsilon, and with it the selector k,
        // in a practical range
        if (cd.distance > 0.8) {
            inst.d = std::min(cd.distance, 1.0);
            return inst;
        }
    }
    throw ContractError("make_separated_cone: could not certify d > 0");
}

// Parity-infeasible fiber: the designated positive row is all ones with
// b_i = B; every other row of A is even while the matching b entry is odd,
// so Ax = b is provably unsolvable over the whole lattice.
inline IntegerFiber make_parity_infeasible_fiber(std::size_t n, std::size_t B,
                                                 std::size_t m,
                                                 std::uint64_t seed) {
    if (n == 0 || B == 0 || m < 2)
        throw InvalidSpecError("make_parity_infeasible_fiber: n,B >= 1, m >= 2");
    SplitMix64 gen(seed);
    IntegerFiber F;
    F.A.assign(m, IntVector(n));
    F.b.assign(m, BigInt(0));
    F.positive_row = 0;
    for (std::size_t j = 0; j < n; ++j) F.A[0][j] = 1;
    F.b[0] = static_cast<int>(B);
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            F.A[i][j] = 2 * static_cast<int>(1 + gen.next() % 4);
        F.b[i] = 2 * static_cast<int>(gen.next() % 5) + 1;
    }
    F.box_lower = IntVector(n, BigInt(0));
    F.box_upper = IntVector(n, BigInt(static_cast<int>(B)));
    return F;
}

// Sample with low doubling structure: jittered points along a line segment
// embedded in R^m, plus a query point off the line.
struct DoublingInstance {
    DoublingSample sample;
    Vector p;
    double d = 0.0;
};

inline DoublingInstance make_doubling_sample(std::size_t m, std::size_t size,
                                             std::uint64_t seed) {
    if (m < 2 || size == 0)
        throw InvalidSpecError("make_doubling_sample: m >= 2, size >= 1");
    SplitMix64 gen(seed);
    Vector u(m, 0.0);
    double nn = 0.0;
    do {
        for (double& c : u) c = gen.normal();
        nn = norm(u);
    } while (nn == 0.0);
    for (double& c : u) c /= nn;
    std::vector<Vector> pts(size, Vector(m));
    for (std::size_t i = 0; i < size; ++i) {
        const double t = static_cast<double>(i) + 0.2 * gen.uniform01();
        for (std::size_t c = 0; c < m; ++c) pts[i][c] = t * u[c];
    }
    DoublingInstance inst{DoublingSample{PointSet(std::move(pts))}, Vector(m), 0.0};
    // displace the query perpendicular to the line
    Vector v(m);
    for (double& c : v) c = gen.normal();
    const double uv = dot(u, v);
    for (std::size_t c = 0; c < m; ++c) v[c] -= uv * u[c];
    const double nv = norm(v);
    if (nv == 0.0) throw ContractError("make_doubling_sample: degenerate normal");
    for (std::size_t c = 0; c < m; ++c)
        inst.p[c] = 0.5 * static_cast<double>(size) * u[c] + 2.0 * v[c] / nv;
    inst.d = dist_to_finite(inst.p, inst.sample.points).distance;
    if (inst.d <= 0.0)
        throw ContractError("make_doubling_sample: could not certify d > 0");
    return inst;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class InstanceClass {
    Finite,
    Polytope,
    Cone,
    IntegerFiber,
    DoublingSample,
    SyntheticGeometric,  // failure rate forced to exactly 2^-k; calibration aid
};

inline const char* instance_class_name(InstanceClass c) {
    switch (c) {
        case InstanceClass::Finite: return "finite";
        case InstanceClass::Polytope: return "polytope";
        case InstanceClass::Cone: return "cone";
        case InstanceClass::IntegerFiber: return "integer";
        case InstanceClass::DoublingSample: return "doubling";
        case InstanceClass::SyntheticGeometric: return "synthetic_geometric";
    }
    return "unknown";
}

struct ExperimentConfig {
    InstanceClass cls = InstanceClass::Finite;
    std::size_t m = 20;          // ambient dimension (rows for integer class)
    std::size_t set_size = 100;  // finite / doubling set size
    std::size_t n = 4;           // vertices / generators / fiber columns
    std::size_t b_bound = 3;     // B for the integer class
    std::size_t trials = 1000;
    double delta = 0.1;
    double tau_over_d = 0.1;     // threshold as a fraction of the certified d
    std::optional<int> k_override;
    std::uint64_t instance_seed = 1;
    std::uint64_t master_seed = 0;
    ConstantConfig constants{};
    unsigned threads = 0;        // 0 = hardware concurrency
    std::size_t mu_samples = 512;

    void validate() const {
        constants.validate();
        if (trials < 1) throw InvalidSpecError("ExperimentConfig: trials >= 1");
        if (!(delta > 0.0 && delta < 1.0))
            throw InvalidSpecError("ExperimentConfig: delta in (0,1)");
        if (!(tau_over_d > 0.0 && tau_over_d < 1.0))
            throw InvalidSpecError("ExperimentConfig: tau_over_d in (0,1)");
    }
};

struct EmpiricalReport {
    std::size_t failures = 0;
    std::size_t trials = 0;
    double rate = 0.0;
    double wilson_99_upper = 0.0;
    double wilson_99_half_width = 0.0;
    double theoretical_delta = 0.0;
    int k = 0;
    SelectionRule rule = SelectionRule::FiniteThreshold;
    ConstantConfig constants{};
    std::uint64_t instance_hash = 0;
    double d = 0.0;  // certified separation of the generated instance
};

namespace detail {

inline std::uint64_t hash_point_instance(const PointSet& X, const Vector& p) {
    Hasher h;
    h.u64(X.dimension());
    h.u64(X.size());
    for (const auto& x : X.points) h.vec(x);
    h.vec(p);
    return h.h;
}

inline std::uint64_t hash_fiber(const IntegerFiber& F) {
    Hasher h;
    h.u64(F.rows());
    h.u64(F.cols());
    for (const auto& row : F.A)
        for (const auto& v : row) h.big(v);
    for (const auto& v : F.b) h.big(v);
    h.u64(F.positive_row);
    if (F.box_lower) {
        for (const auto& v : *F.box_lower) h.big(v);
        for (const auto& v : *F.box_upper) h.big(v);
    }
    return h.h;
}

inline EmpiricalReport finish_report(EmpiricalReport rep) {
    rep.rate = static_cast<double>(rep.failures) / static_cast<double>(rep.trials);
    const WilsonInterval w = wilson99(rep.failures, rep.trials);
    rep.wilson_99_upper = w.upper;
    rep.wilson_99_half_width = w.half_width;
    return rep;
}

}  // namespace detail

// Runs `trials` independent projections of one certified-separated instance
// and counts NotSeparated outcomes. Pure function of the config.
inline EmpiricalReport estimate_failure(const ExperimentConfig& cfg) {
    cfg.validate();
    EmpiricalReport rep;
    rep.trials = cfg.trials;
    rep.constants = cfg.constants;
    std::vector<unsigned char> failed(cfg.trials, 0);

    switch (cfg.cls) {
        case InstanceClass::Finite: {
            const FiniteInstance inst =
                make_separated_finite(cfg.m, cfg.set_size, cfg.instance_seed);
            if (!(inst.d > 0.0))
                throw ContractError("estimate_failure: generator produced a member");
            const double tau = cfg.tau_over_d * inst.d;
            const KSelection sel = k_for_finite_threshold(
                inst.X.size(), cfg.delta, tau, inst.d, cfg.constants);
            const int k = cfg.k_override.value_or(sel.k);
            rep.k = k;
            rep.rule = sel.rule;
            rep.d = inst.d;
            rep.theoretical_delta = std::min(
                cfg.delta, static_cast<double>(inst.X.size()) *
                               std::pow(tau / inst.d, static_cast<double>(k)));
            rep.instance_hash = detail::hash_point_instance(inst.X, inst.p);
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                ProjectionSpec spec{cfg.m, static_cast<std::size_t>(k),
                                    Distribution::Gaussian, Scaling::None,
                                    derive_seed(cfg.master_seed, t)};
                const Decision dec =
                    decide_finite(inst.p, inst.X, sample_projection(spec), tau);
                failed[t] = dec.outcome == Outcome::NotSeparated ? 1 : 0;
            });
            break;
        }
        case InstanceClass::DoublingSample: {
            const DoublingInstance inst =
                make_doubling_sample(cfg.m, cfg.set_size, cfg.instance_seed);
            const double tau = cfg.tau_over_d * inst.d;
            if (!(tau < cfg.constants.kappa * inst.d))
                throw InvalidSpecError(
                    "estimate_failure: tau_over_d must stay below kappa");
            const DoublingResult lam = doubling_constant(inst.sample.points);
            const KSelection sel = k_for_doubling(lam.lambda, cfg.delta, tau,
                                                  inst.d, cfg.constants);
            const int k = cfg.k_override.value_or(sel.k);
            rep.k = k;
            rep.rule = sel.rule;
            rep.d = inst.d;
            rep.theoretical_delta = cfg.delta;
            rep.instance_hash =
                detail::hash_point_instance(inst.sample.points, inst.p);
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                ProjectionSpec spec{cfg.m, static_cast<std::size_t>(k),
                                    Distribution::Gaussian, Scaling::None,
                                    derive_seed(cfg.master_seed, t)};
                const Decision dec = decide_finite(inst.p, inst.sample.points,
                                                   sample_projection(spec), tau);
                failed[t] = dec.outcome == Outcome::NotSeparated ? 1 : 0;
            });
            break;
        }
        case InstanceClass::Polytope: {
            const PolytopeInstance inst =
                make_separated_polytope(cfg.m, cfg.n, cfg.instance_seed);
            const KSelection sel = k_for_polytope(inst.P.vertices.size(),
                                                  cfg.delta, inst.d, inst.big_d,
                                                  cfg.constants);
            const int k = cfg.k_override.value_or(sel.k);
            rep.k = k;
            rep.rule = sel.rule;
            rep.d = inst.d;
            rep.theoretical_delta =
                1.0 - polytope_success_bound(inst.P.vertices.size(), k, inst.d,
                                             inst.big_d, cfg.constants)
                          .bound;
            rep.instance_hash =
                detail::hash_point_instance(inst.P.vertices, inst.b);
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                ProjectionSpec spec{cfg.m, static_cast<std::size_t>(k),
                                    Distribution::Gaussian, Scaling::None,
                                    derive_seed(cfg.master_seed, t)};
                const Decision dec = decide_polytope(
                    inst.b, inst.P, sample_projection(spec), 1e-7, cfg.constants);
                failed[t] = dec.outcome == Outcome::NotSeparated ? 1 : 0;
            });
            break;
        }
        case InstanceClass::Cone: {
            const ConeInstance inst =
                make_separated_cone(cfg.m, cfg.n, cfg.instance_seed);
            const double mu =
                mu_a_estimate(inst.K.generators, cfg.mu_samples,
                              derive_seed(cfg.instance_seed, 0xC0DE));
            const KSelection sel =
                k_for_cone(inst.K.generators.size(), cfg.delta, inst.d, mu,
                           cfg.constants, true);
            const int k = cfg.k_override.value_or(sel.k);
            rep.k = k;
            rep.rule = sel.rule;
            rep.d = inst.d;
            rep.theoretical_delta =
                1.0 - cone_success_bound(inst.K.generators.size(), k, inst.d, mu,
                                         cfg.constants)
                          .bound;
            rep.instance_hash =
                detail::hash_point_instance(inst.K.generators, inst.b);
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                ProjectionSpec spec{cfg.m, static_cast<std::size_t>(k),
                                    Distribution::Gaussian, Scaling::None,
                                    derive_seed(cfg.master_seed, t)};
                const Decision dec =
                    decide_cone(inst.b, inst.K, sample_projection(spec), 1e-7,
                                cfg.constants, mu);
                failed[t] = dec.outcome == Outcome::NotSeparated ? 1 : 0;
            });
            break;
        }
        case InstanceClass::IntegerFiber: {
            const IntegerFiber F = make_parity_infeasible_fiber(
                cfg.n, cfg.b_bound, cfg.m, cfg.instance_seed);
            const KSelection sel = k_for_integer_fiber(cfg.n, cfg.b_bound,
                                                       cfg.delta, cfg.constants);
            const int k = cfg.k_override.value_or(sel.k);
            rep.k = k;
            rep.rule = sel.rule;
            rep.d = 1.0;  // integer separation: gap >= 1 whenever nonzero
            rep.theoretical_delta = std::min(
                cfg.delta,
                2.0 *
                    std::pow(static_cast<double>(cfg.n + cfg.b_bound - 1),
                             static_cast<double>(cfg.b_bound)) *
                    std::exp(-cfg.constants.c_jl * k));
            rep.instance_hash = detail::hash_fiber(F);
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                ProjectionSpec spec{F.rows() - 1, static_cast<std::size_t>(k),
                                    Distribution::Rademacher, Scaling::None,
                                    derive_seed(cfg.master_seed, t)};
                const Decision dec =
                    decide_integer_exact(F, sample_projection(spec),
                                         cfg.constants);
                failed[t] = dec.outcome == Outcome::NotSeparated ? 1 : 0;
            });
            break;
        }
        case InstanceClass::SyntheticGeometric: {
            if (!cfg.k_override)
                throw InvalidSpecError(
                    "estimate_failure: synthetic class needs k_override");
            const int k = *cfg.k_override;
            rep.k = k;
            rep.rule = SelectionRule::FiniteThreshold;
            rep.d = 1.0;
            rep.theoretical_delta = std::pow(2.0, -static_cast<double>(k));
            rep.instance_hash = 0;
            detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
                SplitMix64 gen(derive_seed(cfg.master_seed, t));
                failed[t] =
                    gen.uniform01() < std::pow(2.0, -static_cast<double>(k)) ? 1
                                                                             : 0;
            });
            break;
        }
    }
    for (unsigned char f : failed) rep.failures += f;
    return detail::finish_report(rep);
}

// ---------------------------------------------------------------------------
// Floating-point IFP pathology
// ---------------------------------------------------------------------------

struct IfpFloatReport {
    std::size_t trials = 0;
    std::size_t lattice_points = 0;
    std::vector<double> min_gaps;  // per trial, absolute
    std::vector<double> scales;    // per trial, max(1, |T(b)|)
    double frac_below_1e6 = 0.0;   // relative to the per-trial scale
    double frac_below_1e9 = 0.0;
    double frac_below_1e12 = 0.0;
    double rel_gap_min = 0.0;
    double rel_gap_median = 0.0;
    double rel_gap_max = 0.0;
    std::uint64_t instance_hash = 0;
};

namespace detail {

// Exhaustive exact check that Ax = b has no solution on the box lattice.
inline bool box_lattice_feasible(const IntegerFiber& F) {
    const std::size_t n = F.cols(), m = F.rows();
    const IntVector& lo = *F.box_lower;
    const IntVector& up = *F.box_upper;
    std::vector<IntVector> partial(n + 1, IntVector(m, BigInt(0)));
    bool found = false;
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (found) return;
        if (j == n) {
            for (std::size_t i = 0; i < m; ++i)
                if (partial[n][i] != F.b[i]) return;
            found = true;
            return;
        }
        for (BigInt v = lo[j]; v <= up[j] && !found; ++v) {
            for (std::size_t i = 0; i < m; ++i)
                partial[j + 1][i] = partial[j][i] + F.A[i][j] * v;
            self(self, j + 1);
        }
    };
    rec(rec, 0);
    return found;
}

}  // namespace detail

// One-row Gaussian projection of an infeasible box-constrained IFP: for each
// trial, the minimum floating-point gap |T(A)x - T(b)| over the whole lattice
// and the fractions falling under the tolerance grid. The instance must be
// provably infeasible; that is checked exactly before any trial runs.
inline IfpFloatReport reproduce_ifp_float_on(const IntegerFiber& F,
                                             const ExperimentConfig& cfg) {
    F.validate();
    if (!F.box_lower)
        throw InvalidSpecError("reproduce_ifp_float: instance needs a box");
    if (detail::box_lattice_feasible(F))
        throw ContractError("reproduce_ifp_float: instance is feasible");

    const std::size_t n = F.cols(), m = F.rows();
    std::size_t lattice = 1;
    for (std::size_t j = 0; j < n; ++j) {
        const BigInt width = (*F.box_upper)[j] - (*F.box_lower)[j] + 1;
        if (width <= 0) throw InvalidSpecError("reproduce_ifp_float: empty box");
        lattice *= static_cast<std::size_t>(width);
    }

    IfpFloatReport rep;
    rep.trials = cfg.trials;
    rep.lattice_points = lattice;
    rep.instance_hash = detail::hash_fiber(F);
    rep.min_gaps.assign(cfg.trials, 0.0);
    rep.scales.assign(cfg.trials, 1.0);

    std::vector<double> lo(n), up(n);
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = static_cast<double>((*F.box_lower)[j]);
        up[j] = static_cast<double>((*F.box_upper)[j]);
    }

    detail::run_indexed(cfg.trials, cfg.threads, [&](std::size_t t) {
        ProjectionSpec spec{m, 1, Distribution::Gaussian, Scaling::None,
                            derive_seed(cfg.master_seed, t)};
        const ProjectionMatrix T = sample_projection(spec);
        std::vector<double> u(n, 0.0);
        double tb = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double ti = T.at(0, i);
            tb += ti * static_cast<double>(F.b[i]);
            for (std::size_t j = 0; j < n; ++j)
                u[j] += ti * static_cast<double>(F.A[i][j]);
        }
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> partial(n + 1, 0.0);
        auto rec = [&](auto&& self, std::size_t j) -> void {
            if (j == n) {
                best = std::min(best, std::abs(partial[n] - tb));
                return;
            }
            for (double v = lo[j]; v <= up[j]; v += 1.0) {
                partial[j + 1] = partial[j] + u[j] * v;
                self(self, j + 1);
            }
        };
        rec(rec, 0);
        rep.min_gaps[t] = best;
        rep.scales[t] = std::max(1.0, std::abs(tb));
    });

    std::size_t c6 = 0, c9 = 0, c12 = 0;
    std::vector<double> rel(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        rel[t] = rep.min_gaps[t] / rep.scales[t];
        if (rep.min_gaps[t] < 1e-6 * rep.scales[t]) ++c6;
        if (rep.min_gaps[t] < 1e-9 * rep.scales[t]) ++c9;
        if (rep.min_gaps[t] < 1e-12 * rep.scales[t]) ++c12;
    }
    const double tt = static_cast<double>(cfg.trials);
    rep.frac_below_1e6 = static_cast<double>(c6) / tt;
    rep.frac_below_1e9 = static_cast<double>(c9) / tt;
    rep.frac_below_1e12 = static_cast<double>(c12) / tt;
    std::sort(rel.begin(), rel.end());
    rep.rel_gap_min = rel.front();
    rep.rel_gap_max = rel.back();
    rep.rel_gap_median = rel[rel.size() / 2];
    return rep;
}

inline IfpFloatReport reproduce_ifp_float(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.cls != InstanceClass::IntegerFiber)
        throw InvalidSpecError("reproduce_ifp_float: integer class required");
    const IntegerFiber F = make_parity_infeasible_fiber(cfg.n, cfg.b_bound,
                                                        cfg.m, cfg.instance_seed);
    return reproduce_ifp_float_on(F, cfg);
}

// ---------------------------------------------------------------------------
// Constant calibration
// ---------------------------------------------------------------------------

struct CalibrationResult {
    double c_hat = 0.0;
    double intercept = 0.0;
    std::vector<int> k_grid;
    std::vector<double> rates;
    std::size_t points_used = 0;
    bool lower_bound_only = false;  // all-zero failure counts; c_hat is a floor
    std::string diagnostic;
};

// Fits log(rate) ~ a - C k over the grid by least squares, skipping zero
// rates. With no failures anywhere, returns the Wilson-based lower bound on C
// (valid whenever the prefactor e^a is at least 1, which holds for every
// class here).
inline CalibrationResult calibrate_C(InstanceClass cls,
                                     const std::vector<int>& k_grid,
                                     std::size_t trials,
                                     const ExperimentConfig& base) {
    {
        std::vector<int> uniq(k_grid);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq.size() < 3)
            throw OutOfRangeError("calibrate_C: need >= 3 distinct k values");
    }
    CalibrationResult out;
    out.k_grid = k_grid;
    for (std::size_t idx = 0; idx < k_grid.size(); ++idx) {
        ExperimentConfig cfg = base;
        cfg.cls = cls;
        cfg.trials = trials;
        cfg.k_override = k_grid[idx];
        cfg.master_seed = derive_seed(base.master_seed, idx);
        out.rates.push_back(estimate_failure(cfg).rate);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (out.rates[i] <= 0.0) continue;
        const double x = static_cast<double>(k_grid[i]);
        const double y = std::log(out.rates[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    out.points_used = used;
    if (used >= 2 && sxx * static_cast<double>(used) - sx * sx > 0.0) {
        const double denom = static_cast<double>(used) * sxx - sx * sx;
        const double slope = (static_cast<double>(used) * sxy - sx * sy) / denom;
        out.c_hat = -slope;
        out.intercept = (sy - slope * sx) / static_cast<double>(used);
        out.diagnostic = "ok";
    } else {
        const int k_max = *std::max_element(k_grid.begin(), k_grid.end());
        out.c_hat = -std::log(wilson99(0, trials).upper) / k_max;
        out.lower_bound_only = true;
        out.diagnostic = "fewer than two nonzero rates; returning a lower bound";
    }
    return out;
}

}  // namespace rpmem
