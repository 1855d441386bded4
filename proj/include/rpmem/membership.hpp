#pragma once

// The projected membership deciders. Each one projects the instance with a
// realized T, measures separation in the low-dimensional space, and attaches
// the matching tail-bound guarantee. Separated is the only outcome backed by
// a probabilistic claim; NotSeparated carries none. The integer-fiber decider
// runs entirely in exact integer arithmetic.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "rpmem/bounds.hpp"
#include "rpmem/error.hpp"
#include "rpmem/geometry.hpp"
#include "rpmem/linalg.hpp"

namespace rpmem {

enum class Outcome { OriginalMember, Separated, NotSeparated };

struct Decision {
    Outcome outcome = Outcome::NotSeparated;
    double margin = 0.0;   // dist(T(p), T(X)), or the exact integer gap
    bool vacuous = false;  // empty fiber: separation holds with no content
    int k_used = 0;
    std::optional<KSelection> selection;
    double guarantee = 0.0;  // lower bound on the success probability
    bool guarantee_optimistic = false;  // cone guarantee built on a mu_A lower bound
    std::optional<BigInt> exact_margin;  // integer path only
};

struct DoublingSample {
    PointSet points;
};

using SetInstance =
    std::variant<PointSet, Polytope, Cone, IntegerFiber, DoublingSample>;

namespace detail {

inline double clamp01d(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Failure bound |X| (tau/d)^k of the finite-threshold estimate; valid for
// tau < d and k >= 3.
inline double finite_guarantee(std::size_t set_size, double tau, double d,
                               int k) {
    if (!(d > 0.0) || tau >= d || k < 3) return 0.0;
    return clamp01d(1.0 - static_cast<double>(set_size) *
                              std::pow(tau / d, static_cast<double>(k)));
}

}  // namespace detail

// Threshold decider for a finite set: Separated iff min_x ||T(p) - T(x)||
// exceeds tau. Membership of p in X short-circuits by linearity.
inline Decision decide_finite(const Vector& p, const PointSet& X,
                              const ProjectionMatrix& T, double tau) {
    if (p.size() != X.dimension() || p.size() != T.cols())
        throw DimensionError("decide_finite: dimension mismatch");
    if (!(tau >= 0.0)) throw OutOfRangeError("decide_finite: tau must be >= 0");

    Decision dec;
    dec.k_used = static_cast<int>(T.rows());

    const NearestResult orig = dist_to_finite(p, X);
    if (orig.distance == 0.0) {
        dec.outcome = Outcome::OriginalMember;
        dec.margin = 0.0;
        dec.guarantee = 1.0;
        return dec;
    }

    const Vector tp = project(T, p);
    double best2 = std::numeric_limits<double>::infinity();
    for (const auto& x : X.points)
        best2 = std::min(best2, squared_distance(tp, project(T, x)));
    dec.margin = std::sqrt(best2);
    dec.outcome = dec.margin > tau ? Outcome::Separated : Outcome::NotSeparated;
    dec.guarantee = detail::finite_guarantee(X.size(), tau, orig.distance,
                                             dec.k_used);
    return dec;
}

// Polytope decider: projects b and every vertex, then tests the projected
// min-norm distance against tol. tol doubles as the separation threshold;
// exact LP feasibility at the boundary is ill-posed in floating point.
inline Decision decide_polytope(const Vector& b, const Polytope& P,
                                const ProjectionMatrix& T, double tol = 1e-7,
                                const ConstantConfig& cfg = {}) {
    if (b.size() != P.vertices.dimension() || b.size() != T.cols())
        throw DimensionError("decide_polytope: dimension mismatch");

    Decision dec;
    dec.k_used = static_cast<int>(T.rows());

    const PolytopeDistance orig = min_norm_point_polytope(b, P, tol * 0.1);
    if (orig.distance <= tol) {
        dec.outcome = Outcome::OriginalMember;
        dec.guarantee = 1.0;
        return dec;
    }

    std::vector<Vector> proj_vertices;
    proj_vertices.reserve(P.vertices.size());
    for (const auto& v : P.vertices.points) proj_vertices.push_back(project(T, v));
    const Polytope projected{PointSet(std::move(proj_vertices))};
    const PolytopeDistance proj =
        min_norm_point_polytope(project(T, b), projected, tol * 0.1);

    dec.margin = proj.distance;
    dec.outcome = proj.distance > tol ? Outcome::Separated : Outcome::NotSeparated;
    const double big_d = max_vertex_dist(b, P);
    dec.guarantee =
        polytope_success_bound(P.vertices.size(), dec.k_used, orig.distance,
                               big_d, cfg)
            .bound;
    return dec;
}

// Cone decider under the unit-norm convention of the cone bound: b and all
// generators must have norm 1 (rejected otherwise, never normalized). The
// guarantee uses a sampled lower bound on mu_A unless the caller supplies a
// value, and is flagged optimistic in the first case.
inline Decision decide_cone(const Vector& b, const Cone& K,
                            const ProjectionMatrix& T, double tol = 1e-7,
                            const ConstantConfig& cfg = {},
                            std::optional<double> mu_a = std::nullopt,
                            std::size_t mu_samples = 128) {
    if (b.size() != K.generators.dimension() || b.size() != T.cols())
        throw DimensionError("decide_cone: dimension mismatch");
    if (std::abs(norm(b) - 1.0) > 1e-9)
        throw GeometryError("decide_cone: b must be unit norm");
    for (const auto& g : K.generators.points)
        if (std::abs(norm(g) - 1.0) > 1e-9)
            throw GeometryError("decide_cone: generators must be unit norm");

    Decision dec;
    dec.k_used = static_cast<int>(T.rows());

    const ConeDistance orig = dist_to_cone(b, K, tol * 0.1);
    if (orig.distance <= tol) {
        dec.outcome = Outcome::OriginalMember;
        dec.guarantee = 1.0;
        return dec;
    }

    std::vector<Vector> proj_gens;
    proj_gens.reserve(K.generators.size());
    for (const auto& g : K.generators.points) proj_gens.push_back(project(T, g));
    const Cone projected{PointSet(std::move(proj_gens))};
    const ConeDistance proj = dist_to_cone(project(T, b), projected, tol * 0.1);

    dec.margin = proj.distance;
    dec.outcome = proj.distance > tol ? Outcome::Separated : Outcome::NotSeparated;

    double mu = 0.0;
    if (mu_a) {
        mu = *mu_a;
    } else {
        mu = mu_a_estimate(K.generators, mu_samples, T.spec().seed ^ 0xA11CE5);
        dec.guarantee_optimistic = true;
    }
    const double d = std::min(orig.distance, 1.0);
    dec.guarantee =
        cone_success_bound(K.generators.size(), dec.k_used, d, mu, cfg).bound;
    return dec;
}

namespace detail {

// The exact integer decision kernel: gap of the fiber point under T, in the
// sup norm. BigInt in, BigInt out; no floating point anywhere.
inline BigInt fiber_point_gap(const IntVector& tb,
                              const std::vector<IntVector>& tcols,
                              const IntVector& x) {
    const std::size_t k = tb.size(), n = tcols.size();
    BigInt gap = 0;
    for (std::size_t i = 0; i < k; ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (x[j] != 0) s += x[j] * tcols[j][i];
        BigInt diff = tb[i] - s;
        if (diff < 0) diff = -diff;
        if (diff > gap) gap = diff;
    }
    return gap;
}

}  // namespace detail

// Exact Rademacher decider for an integer fiber. T acts on the system with
// the positive row removed, so T.spec().m must equal rows(A) - 1. The margin
// is the minimum integer sup-norm gap over the whole fiber; an empty fiber is
// a vacuous separation.
inline Decision decide_integer_exact(const IntegerFiber& F,
                                     const ProjectionMatrix& T,
                                     const ConstantConfig& cfg = {}) {
    F.validate();
    if (T.spec().distribution != Distribution::Rademacher ||
        T.spec().scaling != Scaling::None)
        throw InvalidSpecError(
            "decide_integer_exact: requires an unscaled Rademacher matrix");
    if (F.rows() < 2)
        throw InvalidSpecError("decide_integer_exact: needs at least two rows");
    if (T.cols() != F.rows() - 1)
        throw DimensionError(
            "decide_integer_exact: spec.m must be rows(A) - 1");

    Decision dec;
    dec.k_used = static_cast<int>(T.rows());
    dec.exact_margin = BigInt(0);

    const std::size_t n = F.cols();
    std::size_t b_bound = 1;
    for (const auto& v : F.b) {
        BigInt a = v < 0 ? BigInt(-v) : v;
        if (a > static_cast<int>(b_bound))
            b_bound = static_cast<std::size_t>(a);
    }
    dec.guarantee = detail::clamp01d(
        1.0 - 2.0 *
                  std::pow(static_cast<double>(n + b_bound - 1),
                           static_cast<double>(b_bound)) *
                  std::exp(-cfg.c_jl * dec.k_used));

    const std::vector<IntVector> fiber = enumerate_fiber(F);
    if (fiber.empty()) {
        dec.outcome = Outcome::Separated;
        dec.vacuous = true;
        dec.margin = std::numeric_limits<double>::infinity();
        dec.exact_margin.reset();
        dec.guarantee = 1.0;
        return dec;
    }

    // remove the positive row from A and b
    IntVector b_tilde;
    for (std::size_t i = 0; i < F.rows(); ++i)
        if (i != F.positive_row) b_tilde.push_back(F.b[i]);
    std::vector<IntVector> cols_tilde(n, IntVector(F.rows() - 1));
    {
        std::size_t ii = 0;
        for (std::size_t i = 0; i < F.rows(); ++i) {
            if (i == F.positive_row) continue;
            for (std::size_t j = 0; j < n; ++j) cols_tilde[j][ii] = F.A[i][j];
            ++ii;
        }
    }

    const IntVector tb = project_exact(T, b_tilde);
    std::vector<IntVector> tcols(n);
    for (std::size_t j = 0; j < n; ++j) tcols[j] = project_exact(T, cols_tilde[j]);

    BigInt min_gap(-1);
    bool original_member = false;
    for (const auto& x : fiber) {
        const BigInt gap = detail::fiber_point_gap(tb, tcols, x);
        if (min_gap < 0 || gap < min_gap) min_gap = gap;
        if (gap == 0) {
            // collision: either the original system is feasible at x, or T
            // collapsed a genuinely different point onto b
            BigInt mismatch = 0;
            std::size_t ii = 0;
            for (std::size_t i = 0; i < F.rows() && mismatch == 0; ++i) {
                if (i == F.positive_row) continue;
                BigInt s = 0;
                for (std::size_t j = 0; j < n; ++j) s += F.A[i][j] * x[j];
                if (s != F.b[i]) mismatch = 1;
                ++ii;
            }
            if (mismatch == 0) original_member = true;
        }
    }
    dec.exact_margin = min_gap;
    dec.margin = static_cast<double>(min_gap);
    if (original_member) {
        dec.outcome = Outcome::OriginalMember;
        dec.margin = 0.0;
        dec.guarantee = 1.0;
    } else {
        dec.outcome = min_gap >= 1 ? Outcome::Separated : Outcome::NotSeparated;
    }
    return dec;
}

// End-to-end pipeline: geometry oracle for the instance, the matching
// k-selector, a sampled T, the matching decider, guarantee attached.
inline Decision decide_pipeline(const SetInstance& instance,
                                const Vector& p_or_b, double delta, double tau,
                                const ConstantConfig& cfg, std::uint64_t seed,
                                std::size_t doubling_cap = 24) {
    cfg.validate();

    if (const auto* X = std::get_if<PointSet>(&instance)) {
        const NearestResult d = dist_to_finite(p_or_b, *X);
        if (d.distance == 0.0) {
            ProjectionSpec spec{X->dimension(), static_cast<std::size_t>(cfg.k_min),
                                Distribution::Gaussian, Scaling::None, seed};
            return decide_finite(p_or_b, *X, sample_projection(spec), tau);
        }
        KSelection sel =
            k_for_finite_threshold(X->size(), delta, tau, d.distance, cfg);
        ProjectionSpec spec{X->dimension(), static_cast<std::size_t>(sel.k),
                            Distribution::Gaussian, Scaling::None, seed};
        Decision dec = decide_finite(p_or_b, *X, sample_projection(spec), tau);
        dec.selection = sel;
        return dec;
    }

    if (const auto* D = std::get_if<DoublingSample>(&instance)) {
        const PointSet& X = D->points;
        const NearestResult d = dist_to_finite(p_or_b, X);
        if (d.distance == 0.0) {
            ProjectionSpec spec{X.dimension(), static_cast<std::size_t>(cfg.k_min),
                                Distribution::Gaussian, Scaling::None, seed};
            return decide_finite(p_or_b, X, sample_projection(spec), tau);
        }
        const DoublingResult lam = doubling_constant(X, doubling_cap);
        KSelection sel =
            tau > 0.0
                ? k_for_doubling(lam.lambda, delta, tau, d.distance, cfg)
                : k_for_doubling_exact(lam.lambda, cfg);
        ProjectionSpec spec{X.dimension(), static_cast<std::size_t>(sel.k),
                            Distribution::Gaussian, Scaling::None, seed};
        Decision dec = decide_finite(p_or_b, X, sample_projection(spec), tau);
        dec.selection = sel;
        // the doubling rules certify 1 - delta, not the finite-set formula
        dec.guarantee = sel.rule == SelectionRule::DoublingThreshold
                            ? 1.0 - delta
                            : dec.guarantee;
        return dec;
    }

    if (const auto* P = std::get_if<Polytope>(&instance)) {
        const PolytopeDistance d = min_norm_point_polytope(p_or_b, *P);
        if (d.distance <= 1e-7) {
            ProjectionSpec spec{P->vertices.dimension(),
                                static_cast<std::size_t>(cfg.k_min),
                                Distribution::Gaussian, Scaling::None, seed};
            return decide_polytope(p_or_b, *P, sample_projection(spec), 1e-7, cfg);
        }
        const double big_d = max_vertex_dist(p_or_b, *P);
        KSelection sel =
            k_for_polytope(P->vertices.size(), delta, d.distance, big_d, cfg);
        ProjectionSpec spec{P->vertices.dimension(),
                            static_cast<std::size_t>(sel.k),
                            Distribution::Gaussian, Scaling::None, seed};
        Decision dec =
            decide_polytope(p_or_b, *P, sample_projection(spec), 1e-7, cfg);
        dec.selection = sel;
        return dec;
    }

    if (const auto* K = std::get_if<Cone>(&instance)) {
        const ConeDistance d = dist_to_cone(p_or_b, *K);
        if (d.distance <= 1e-7) {
            ProjectionSpec spec{K->generators.dimension(),
                                static_cast<std::size_t>(cfg.k_min),
                                Distribution::Gaussian, Scaling::None, seed};
            return decide_cone(p_or_b, *K, sample_projection(spec), 1e-7, cfg);
        }
        const double mu =
            mu_a_estimate(K->generators, 256, derive_seed(seed, 0xC0DE));
        KSelection sel = k_for_cone(K->generators.size(), delta,
                                    std::min(d.distance, 1.0), mu, cfg, true);
        ProjectionSpec spec{K->generators.dimension(),
                            static_cast<std::size_t>(sel.k),
                            Distribution::Gaussian, Scaling::None, seed};
        Decision dec =
            decide_cone(p_or_b, *K, sample_projection(spec), 1e-7, cfg, mu);
        dec.selection = sel;
        dec.guarantee_optimistic = true;
        return dec;
    }

    const auto& F = std::get<IntegerFiber>(instance);
    F.validate();
    std::size_t b_bound = 1;
    for (const auto& v : F.b) {
        BigInt a = v < 0 ? BigInt(-v) : v;
        if (a > static_cast<int>(b_bound)) b_bound = static_cast<std::size_t>(a);
    }
    KSelection sel = k_for_integer_fiber(F.cols(), b_bound, delta, cfg);
    ProjectionSpec spec{F.rows() - 1, static_cast<std::size_t>(sel.k),
                        Distribution::Rademacher, Scaling::None, seed};
    Decision dec = decide_integer_exact(F, sample_projection(spec), cfg);
    dec.selection = sel;
    return dec;
}

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::OriginalMember: return "original_member";
        case Outcome::Separated: return "separated";
        case Outcome::NotSeparated: return "not_separated";
    }
    return "unknown";
}

}  // namespace rpmem
