#pragma once

// Geometric oracles consumed by the bound selectors and deciders: exact
// nearest-point scans, iterative convex distance solvers with certificates,
// the induced norm and its mu_A sampler, doubling-constant computation by
// exact set cover, greedy ball covers, and integer fiber enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "rpmem/error.hpp"
#include "rpmem/linalg.hpp"
#include "rpmem/lp.hpp"
#include "rpmem/prng.hpp"

namespace rpmem {

struct PointSet {
    std::vector<Vector> points;

    explicit PointSet(std::vector<Vector> pts) : points(std::move(pts)) {
        if (points.empty()) throw GeometryError("PointSet: empty");
        const std::size_t m = points.front().size();
        for (const auto& p : points) {
            check_finite(p, "PointSet");
            if (p.size() != m) throw DimensionError("PointSet: mixed dimensions");
        }
    }

    std::size_t size() const noexcept { return points.size(); }
    std::size_t dimension() const noexcept { return points.front().size(); }
};

struct Polytope {
    PointSet vertices;
};

struct Cone {
    PointSet generators;
};

// {x in Z^n_+ (within box) | a^i . x = b_i} for the designated all-positive
// row i of A. Arbitrary-precision integers throughout.
struct IntegerFiber {
    std::vector<IntVector> A;  // m rows of length n
    IntVector b;               // length m
    std::size_t positive_row = 0;
    std::optional<IntVector> box_lower;
    std::optional<IntVector> box_upper;

    std::size_t rows() const noexcept { return A.size(); }
    std::size_t cols() const noexcept { return A.empty() ? 0 : A.front().size(); }

    void validate() const {
        if (A.empty() || A.front().empty())
            throw InvalidSpecError("IntegerFiber: empty matrix");
        const std::size_t n = A.front().size();
        for (const auto& row : A)
            if (row.size() != n) throw DimensionError("IntegerFiber: ragged matrix");
        if (b.size() != A.size())
            throw DimensionError("IntegerFiber: b length != row count");
        if (positive_row >= A.size())
            throw InvalidSpecError("IntegerFiber: positive_row out of range");
        for (const auto& a : A[positive_row])
            if (a < 1)
                throw InvalidSpecError(
                    "IntegerFiber: positive_row has an entry < 1");
        if (b[positive_row] < 0)
            throw InvalidSpecError("IntegerFiber: b at positive_row is negative");
        if (box_lower.has_value() != box_upper.has_value())
            throw InvalidSpecError("IntegerFiber: box needs both L and U");
        if (box_lower) {
            if (box_lower->size() != n || box_upper->size() != n)
                throw DimensionError("IntegerFiber: box length != n");
            for (std::size_t j = 0; j < n; ++j)
                if ((*box_lower)[j] > (*box_upper)[j])
                    throw InvalidSpecError("IntegerFiber: box has L > U");
        }
    }
};

struct BallCover {
    std::vector<Vector> centers;  // subset of the covered set
    double radius = 0.0;          // the covering radius eps
    std::size_t covered_set_size = 0;
};

struct NearestResult {
    double distance = 0.0;
    std::size_t index = 0;
};

// Exact minimum distance to a finite set. Ties break to the lowest index.
inline NearestResult dist_to_finite(const Vector& p, const PointSet& X) {
    if (p.size() != X.dimension())
        throw DimensionError("dist_to_finite: dimension mismatch");
    NearestResult best{std::numeric_limits<double>::infinity(), 0};
    double best2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double d2 = squared_distance(p, X.points[i]);
        if (d2 < best2) {
            best2 = d2;
            best.index = i;
        }
    }
    best.distance = std::sqrt(best2);
    return best;
}

inline double max_vertex_dist(const Vector& b, const Polytope& P) {
    if (b.size() != P.vertices.dimension())
        throw DimensionError("max_vertex_dist: dimension mismatch");
    double best2 = 0.0;
    for (const auto& v : P.vertices.points)
        best2 = std::max(best2, squared_distance(b, v));
    return std::sqrt(best2);
}

struct PolytopeDistance {
    double distance = 0.0;
    std::vector<double> weights;  // convex weights over the vertices
    std::size_t iterations = 0;
};

namespace detail {

inline double residual_distance(const Vector& b,
                                const std::vector<Vector>& pts,
                                const std::vector<double>& weights) {
    Vector r = b;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (weights[i] != 0.0)
            for (std::size_t c = 0; c < b.size(); ++c)
                r[c] -= weights[i] * pts[i][c];
    return norm(r);
}

}  // namespace detail

// Distance from b to conv(vertices) by pairwise Frank-Wolfe with an exact
// line step, run on the Gram reformulation so each iteration costs O(n^2)
// regardless of the ambient dimension. Stops once the duality gap certifies
// f(theta) - f* <= max(tol^2, fp floor); the floor accounts for the rounding
// noise in gradients of magnitude ~||b||^2 and is what floating point can
// actually resolve.
inline PolytopeDistance min_norm_point_polytope(const Vector& b,
                                                const Polytope& P,
                                                double tol = 1e-9) {
    const auto& V = P.vertices.points;
    const std::size_t n = V.size(), k = b.size();
    if (k != P.vertices.dimension())
        throw DimensionError("min_norm_point_polytope: dimension mismatch");
    if (!(tol > 0.0)) throw InvalidSpecError("min_norm_point_polytope: tol <= 0");

    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j)
            gram[i][j] = gram[j][i] = dot(V[i], V[j]);
        c[i] = dot(b, V[i]);
    }
    const double bb = dot(b, b);

    std::vector<double> theta(n, 0.0);
    std::size_t start = 0;
    double best0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double f0 = bb - 2.0 * c[i] + gram[i][i];
        if (f0 < best0) {
            best0 = f0;
            start = i;
        }
    }
    theta[start] = 1.0;
    std::vector<double> gtheta = gram[start];

    const double stop = std::max(tol * tol, 1e-13 * (1.0 + std::abs(bb)));
    const std::size_t cap = 100000;
    for (std::size_t it = 0; it < cap; ++it) {
        if (it % 256 == 255) {
            // refresh G theta to cancel incremental drift
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (theta[j] != 0.0) s += gram[i][j] * theta[j];
                gtheta[i] = s;
            }
        }
        std::size_t s = 0, a = n;
        double gs = std::numeric_limits<double>::infinity();
        double ga = -std::numeric_limits<double>::infinity();
        double gdot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double gi = 2.0 * (gtheta[i] - c[i]);
            if (gi < gs) {
                gs = gi;
                s = i;
            }
            if (theta[i] > 0.0) {
                gdot += theta[i] * gi;
                if (gi > ga) {
                    ga = gi;
                    a = i;
                }
            }
        }
        const double gap = gdot - gs;
        if (gap <= stop) {
            PolytopeDistance out;
            out.distance = detail::residual_distance(b, V, theta);
            out.weights = theta;
            out.iterations = it;
            return out;
        }
        // shift weight from the worst support vertex onto the best vertex;
        // gap > 0 guarantees g_a > g_s and with it v_a != v_s
        const double denom =
            2.0 * (gram[s][s] - 2.0 * gram[s][a] + gram[a][a]);
        double step = (ga - gs) / denom;
        if (!(step > 0.0) || step > theta[a]) step = theta[a];
        theta[s] += step;
        theta[a] -= step;
        if (theta[a] <= 0.0) theta[a] = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            gtheta[i] += step * (gram[i][s] - gram[i][a]);
    }
    throw SolverError("min_norm_point_polytope: iteration cap reached",
                      detail::residual_distance(b, V, theta), theta);
}

struct ConeDistance {
    double distance = 0.0;
    std::vector<double> coefficients;  // nonnegative generator weights
    std::size_t iterations = 0;
};

namespace detail {

// Solves G z = h by Cholesky; returns false when G is numerically singular.
inline bool cholesky_solve(std::vector<std::vector<double>> g,
                           std::vector<double> h, std::vector<double>& z) {
    const std::size_t n = g.size();
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += g[i][i];
    const double floor = 1e-13 * (trace + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double s = g[i][j];
            for (std::size_t t = 0; t < j; ++t) s -= g[i][t] * g[j][t];
            g[i][j] = s / g[j][j];
        }
        double s = g[i][i];
        for (std::size_t t = 0; t < i; ++t) s -= g[i][t] * g[i][t];
        if (s <= floor) return false;
        g[i][i] = std::sqrt(s);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = h[i];
        for (std::size_t t = 0; t < i; ++t) s -= g[i][t] * h[t];
        h[i] = s / g[i][i];
    }
    z.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = h[ii];
        for (std::size_t t = ii + 1; t < n; ++t) s -= g[t][ii] * z[t];
        z[ii] = s / g[ii][ii];
    }
    return true;
}

}  // namespace detail

// Nonnegative least squares min_theta ||b - A theta|| by the Lawson-Hanson
// active-set method on the precomputed Gram matrix, so the per-iteration cost
// does not grow with the ambient dimension. The KKT stationarity certificate
// is re-checked against the true residual before returning.
inline ConeDistance dist_to_cone(const Vector& b, const Cone& K,
                                 double tol = 1e-9) {
    const auto& A = K.generators.points;
    const std::size_t n = A.size(), k = b.size();
    if (k != K.generators.dimension())
        throw DimensionError("dist_to_cone: dimension mismatch");
    if (!(tol > 0.0)) throw InvalidSpecError("dist_to_cone: tol <= 0");

    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j)
            gram[i][j] = gram[j][i] = dot(A[i], A[j]);
        h[i] = dot(A[i], b);
    }

    std::vector<double> theta(n, 0.0);
    std::vector<bool> passive(n, false), excluded(n, false);
    std::vector<double> w = h;  // A^T (b - A theta) at theta = 0

    double wscale = 0.0;
    for (std::size_t j = 0; j < n; ++j) wscale = std::max(wscale, std::abs(h[j]));
    const double eps_w = 1e-13 * (wscale + 1.0);

    auto refresh_w = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            double s = h[i];
            for (std::size_t j = 0; j < n; ++j)
                if (theta[j] != 0.0) s -= gram[i][j] * theta[j];
            w[i] = s;
        }
    };

    const std::size_t cap = 30 * n + 100;
    std::size_t it = 0;
    for (; it < cap; ++it) {
        std::size_t enter = n;
        double wbest = eps_w;
        for (std::size_t j = 0; j < n; ++j) {
            if (passive[j] || excluded[j]) continue;
            if (w[j] > wbest) {
                wbest = w[j];
                enter = j;
            }
        }
        if (enter == n) break;
        passive[enter] = true;

        // inner loop: least squares on the passive set, stepping back to the
        // boundary whenever a coefficient would go nonpositive
        for (std::size_t inner = 0; inner < cap; ++inner) {
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < n; ++j)
                if (passive[j]) idx.push_back(j);
            const std::size_t p = idx.size();
            std::vector<std::vector<double>> g(p, std::vector<double>(p));
            std::vector<double> rhs(p);
            for (std::size_t ii = 0; ii < p; ++ii) {
                for (std::size_t jj = 0; jj < p; ++jj)
                    g[ii][jj] = gram[idx[ii]][idx[jj]];
                rhs[ii] = h[idx[ii]];
            }
            std::vector<double> z;
            if (!detail::cholesky_solve(g, rhs, z)) {
                // entering column is linearly dependent on the passive set
                passive[enter] = false;
                excluded[enter] = true;
                break;
            }
            bool all_pos = true;
            for (double v : z)
                if (v <= 0.0) all_pos = false;
            if (all_pos) {
                for (std::size_t ii = 0; ii < p; ++ii) theta[idx[ii]] = z[ii];
                break;
            }
            double alpha = 1.0;
            for (std::size_t ii = 0; ii < p; ++ii) {
                if (z[ii] <= 0.0) {
                    const double t = theta[idx[ii]] / (theta[idx[ii]] - z[ii]);
                    alpha = std::min(alpha, t);
                }
            }
            for (std::size_t ii = 0; ii < p; ++ii) {
                theta[idx[ii]] += alpha * (z[ii] - theta[idx[ii]]);
                if (theta[idx[ii]] <= 1e-15) {
                    theta[idx[ii]] = 0.0;
                    passive[idx[ii]] = false;
                }
            }
        }
        refresh_w();
    }
    const double distance = detail::residual_distance(b, A, theta);
    if (it >= cap)
        throw SolverError("dist_to_cone: iteration cap reached", distance, theta);

    // stationarity certificate against the true residual
    {
        Vector r = b;
        for (std::size_t j = 0; j < n; ++j)
            if (theta[j] != 0.0)
                for (std::size_t c = 0; c < k; ++c) r[c] -= theta[j] * A[j][c];
        for (std::size_t j = 0; j < n; ++j) {
            if (excluded[j]) continue;
            const double wj = dot(A[j], r);
            if (theta[j] > 0.0 ? std::abs(wj) > 64.0 * eps_w : wj > 64.0 * eps_w)
                throw SolverError("dist_to_cone: stationarity certificate failed",
                                  distance, theta);
        }
    }
    ConeDistance out;
    out.distance = distance;
    out.coefficients = theta;
    out.iterations = it;
    return out;
}

namespace detail {

inline lp::Matrix generator_columns(const PointSet& A) {
    const std::size_t m = A.dimension(), n = A.size();
    lp::Matrix cols(m, std::vector<lp::Rational>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            cols[i][j] = lp::Rational(A.points[j][i]);
    return cols;
}

// Exact value of min 1.theta s.t. M theta = x, theta >= 0, or nullopt when x
// is not in the cone (up to the l1 slack).
inline std::optional<lp::Rational> induced_norm_exact(
    const lp::Matrix& m, const std::vector<lp::Rational>& x,
    const lp::Rational& feas_slack) {
    const std::size_t n = m.front().size();
    const std::vector<lp::Rational> ones(n, 1);
    lp::Result res = lp::solve_min(m, x, ones);
    if (res.status == lp::Result::Status::Optimal) return res.value;
    if (res.phase1_residual > feas_slack) return std::nullopt;
    // snap to the attainable point closest in l1 and re-solve
    std::vector<lp::Rational> x2(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) x2[i] += m[i][j] * res.solution[j];
    lp::Result res2 = lp::solve_min(m, x2, ones);
    if (res2.status != lp::Result::Status::Optimal)
        throw Error("induced_norm: snapped system unexpectedly infeasible");
    return res2.value;
}

}  // namespace detail

// ||x||_A: minimum total weight of a nonnegative generator combination
// producing x. Solved by exact rational pivoting; tol only enters as the l1
// slack deciding whether x counts as a member of the cone at all.
inline double induced_norm(const Vector& x, const PointSet& A,
                           double tol = 1e-9) {
    if (x.size() != A.dimension())
        throw DimensionError("induced_norm: dimension mismatch");
    bool all_zero = true;
    for (double v : x)
        if (v != 0.0) all_zero = false;
    if (all_zero) return 0.0;

    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    const lp::Rational slack = lp::Rational(tol) * lp::Rational(1.0 + l1);
    std::vector<lp::Rational> xr(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xr[i] = lp::Rational(x[i]);
    const auto cols = detail::generator_columns(A);
    const auto val = detail::induced_norm_exact(cols, xr, slack);
    if (!val) throw MembershipError("induced_norm: x is not in cone(A)");
    return static_cast<double>(*val);
}

// Sampling lower bound on mu_A = max {||x||_A : x in cone(A), ||x|| <= 1}.
// Draws exponential nonnegative combinations, keeps x = A theta exact in
// rationals so the induced norm is a true value at a true cone point, and
// returns the running maximum of ||x||_A / ||x||. Never exceeds mu_A (up to
// the final double division).
inline double mu_a_estimate(const PointSet& A, std::size_t samples,
                            std::uint64_t seed) {
    for (const auto& g : A.points)
        if (std::abs(norm(g) - 1.0) > 1e-9)
            throw GeometryError("mu_a_estimate: generators must be unit norm");
    const std::size_t m = A.dimension(), n = A.size();
    const auto cols = detail::generator_columns(A);
    double best = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        SplitMix64 gen(derive_seed(seed, s));
        std::vector<lp::Rational> theta(n);
        for (std::size_t j = 0; j < n; ++j)
            theta[j] = lp::Rational(-std::log(gen.uniform01()));
        std::vector<lp::Rational> xr(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) xr[i] += cols[i][j] * theta[j];
        double nx2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double xi = static_cast<double>(xr[i]);
            nx2 += xi * xi;
        }
        if (nx2 == 0.0) continue;
        const auto val = detail::induced_norm_exact(cols, xr, lp::Rational(0));
        if (!val) continue;  // numerically degenerate draw
        const double candidate = static_cast<double>(*val) / std::sqrt(nx2);
        if (candidate > best) best = candidate;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Doubling constant
// ---------------------------------------------------------------------------

namespace detail {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return __builtin_popcount(m); }

// Exact minimum set cover by branch and bound on the element with fewest
// candidate sets.
inline int min_cover_exact(Mask universe, const std::vector<Mask>& sets,
                           int depth, Mask covered, int best) {
    const Mask uncovered = universe & ~covered;
    if (uncovered == 0) return depth;
    if (depth + 1 >= best) return best;
    int maxgain = 0;
    for (Mask s : sets) maxgain = std::max(maxgain, popcount(s & uncovered));
    if (maxgain == 0) return best;  // cannot happen: singletons always exist
    const int lb = depth + (popcount(uncovered) + maxgain - 1) / maxgain;
    if (lb >= best) return best;

    // element covered by the fewest sets
    Mask pick = 0;
    int fewest = std::numeric_limits<int>::max();
    for (Mask e = 1; e != 0; e <<= 1) {
        if (!(uncovered & e)) continue;
        int cnt = 0;
        for (Mask s : sets)
            if (s & e) ++cnt;
        if (cnt < fewest) {
            fewest = cnt;
            pick = e;
        }
        if (uncovered < (e << 1)) break;
    }
    std::vector<Mask> candidates;
    for (Mask s : sets)
        if (s & pick) candidates.push_back(s);
    std::sort(candidates.begin(), candidates.end(), [&](Mask a, Mask b) {
        return popcount(a & uncovered) > popcount(b & uncovered);
    });
    for (Mask s : candidates)
        best = min_cover_exact(universe, sets, depth + 1, covered | s, best);
    return best;
}

inline int greedy_cover(Mask universe, const std::vector<Mask>& sets) {
    Mask covered = 0;
    int count = 0;
    while ((universe & ~covered) != 0) {
        int bestgain = 0;
        std::size_t bestset = sets.size();
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const int gain = popcount(sets[i] & universe & ~covered);
            if (gain > bestgain) {
                bestgain = gain;
                bestset = i;
            }
        }
        if (bestset == sets.size()) break;  // unreachable: singletons exist
        covered |= sets[bestset];
        ++count;
    }
    return count;
}

struct DoublingWork {
    std::vector<std::vector<double>> d2;
    std::size_t n;

    explicit DoublingWork(const PointSet& X) : n(X.size()) {
        d2.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                d2[i][j] = d2[j][i] = squared_distance(X.points[i], X.points[j]);
    }

    // Candidate half-radius sets over the ball around p of squared radius r2.
    // All comparisons stay in squared form: 4 d^2(u,c) <= r2.
    std::pair<Mask, std::vector<Mask>> subproblem(std::size_t p, double r2) const {
        Mask ball = 0;
        std::vector<std::size_t> members;
        for (std::size_t u = 0; u < n; ++u) {
            if (d2[p][u] <= r2) {
                ball |= Mask(1) << members.size();
                members.push_back(u);
            }
        }
        std::vector<Mask> sets;
        for (std::size_t c = 0; c < n; ++c) {
            Mask s = 0;
            for (std::size_t t = 0; t < members.size(); ++t)
                if (4.0 * d2[members[t]][c] <= r2) s |= Mask(1) << t;
            if (s != 0) sets.push_back(s);
        }
        std::sort(sets.begin(), sets.end());
        sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
        // drop sets strictly contained in another
        std::vector<Mask> kept;
        for (Mask s : sets) {
            bool dominated = false;
            for (Mask t : sets)
                if (t != s && (s & ~t) == 0) {
                    dominated = true;
                    break;
                }
            if (!dominated) kept.push_back(s);
        }
        return {ball, kept};
    }
};

}  // namespace detail

// Exact doubling constant of a finite set: the worst-case minimum number of
// half-radius balls (centers in X) covering any ball of X. Radii range over
// the pairwise distances, which is where the per-ball maxima are attained.
inline int doubling_constant_exact(const PointSet& X, std::size_t cap = 24) {
    if (X.size() > cap)
        throw OutOfRangeError("doubling_constant_exact: set exceeds exact-mode cap");
    if (X.size() == 1) return 1;
    detail::DoublingWork work(X);
    std::vector<double> radii2;
    for (std::size_t i = 0; i < work.n; ++i)
        for (std::size_t j = i + 1; j < work.n; ++j)
            if (work.d2[i][j] > 0.0) radii2.push_back(work.d2[i][j]);
    std::sort(radii2.begin(), radii2.end());
    radii2.erase(std::unique(radii2.begin(), radii2.end()), radii2.end());

    int lambda = 1;
    for (std::size_t p = 0; p < work.n; ++p) {
        for (double r2 : radii2) {
            auto [ball, sets] = work.subproblem(p, r2);
            if (detail::popcount(ball) <= lambda) continue;
            const int ub = detail::greedy_cover(ball, sets);
            const int exact =
                ub <= lambda ? ub
                             : detail::min_cover_exact(ball, sets, 0, 0, ub);
            lambda = std::max(lambda, exact);
        }
    }
    return lambda;
}

// Greedy-cover surrogate; an upper bound on the exact doubling constant.
inline int doubling_constant_greedy(const PointSet& X) {
    if (X.size() == 1) return 1;
    detail::DoublingWork work(X);
    int lambda = 1;
    for (std::size_t p = 0; p < work.n; ++p) {
        std::vector<double> radii2;
        for (std::size_t u = 0; u < work.n; ++u)
            if (work.d2[p][u] > 0.0) radii2.push_back(work.d2[p][u]);
        std::sort(radii2.begin(), radii2.end());
        radii2.erase(std::unique(radii2.begin(), radii2.end()), radii2.end());
        for (double r2 : radii2) {
            auto [ball, sets] = work.subproblem(p, r2);
            if (detail::popcount(ball) <= lambda) continue;
            lambda = std::max(lambda, detail::greedy_cover(ball, sets));
        }
    }
    return lambda;
}

enum class DoublingMode { Exact, Greedy };

struct DoublingResult {
    int lambda = 1;
    DoublingMode mode = DoublingMode::Exact;
};

inline DoublingResult doubling_constant(const PointSet& X, std::size_t cap = 24) {
    if (X.size() <= cap) return {doubling_constant_exact(X, cap), DoublingMode::Exact};
    return {doubling_constant_greedy(X), DoublingMode::Greedy};
}

// Greedy farthest-point eps-cover of B_X(p, r) with centers from the set
// itself. The covered set may be empty when p is far from X.
inline BallCover ball_cover(const PointSet& X, const Vector& p, double r,
                            double eps) {
    if (p.size() != X.dimension())
        throw DimensionError("ball_cover: dimension mismatch");
    if (!(r > 0.0) || !(eps > 0.0))
        throw InvalidSpecError("ball_cover: r and eps must be > 0");
    if (eps > r) throw OutOfRangeError("ball_cover: requires eps <= r");

    const double r2 = r * r, eps2 = eps * eps;
    std::vector<std::size_t> ball;
    for (std::size_t i = 0; i < X.size(); ++i)
        if (squared_distance(p, X.points[i]) <= r2) ball.push_back(i);

    BallCover out;
    out.radius = eps;
    out.covered_set_size = ball.size();
    if (ball.empty()) return out;

    std::vector<bool> covered(ball.size(), false);
    std::vector<std::size_t> centers;
    // start from p itself when it belongs to the set
    std::size_t first = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < ball.size(); ++t) {
        const double d2 = squared_distance(p, X.points[ball[t]]);
        if (d2 < bestd) {
            bestd = d2;
            first = t;
        }
    }
    std::vector<double> mind2(ball.size(), std::numeric_limits<double>::infinity());
    auto add_center = [&](std::size_t t) {
        centers.push_back(t);
        for (std::size_t u = 0; u < ball.size(); ++u) {
            const double d2 =
                squared_distance(X.points[ball[t]], X.points[ball[u]]);
            mind2[u] = std::min(mind2[u], d2);
            if (d2 <= eps2) covered[u] = true;
        }
    };
    add_center(first);
    for (;;) {
        std::size_t far = ball.size();
        double fard = -1.0;
        for (std::size_t u = 0; u < ball.size(); ++u)
            if (!covered[u] && mind2[u] > fard) {
                fard = mind2[u];
                far = u;
            }
        if (far == ball.size()) break;
        add_center(far);
    }
    for (std::size_t t : centers) out.centers.push_back(X.points[ball[t]]);
    return out;
}

// Complete enumeration of Z = {x in Z^n_+ (within box) | a^i . x = b_i},
// depth-first in lexicographically ascending order.
inline std::vector<IntVector> enumerate_fiber(const IntegerFiber& F) {
    F.validate();
    const std::size_t n = F.cols();
    const IntVector& a = F.A[F.positive_row];
    const BigInt target = F.b[F.positive_row];

    std::vector<BigInt> lo(n, 0), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (F.box_lower && (*F.box_lower)[j] > 0) lo[j] = (*F.box_lower)[j];
        hi[j] = target / a[j];
        if (F.box_upper && (*F.box_upper)[j] < hi[j]) hi[j] = (*F.box_upper)[j];
    }
    // minimal achievable tail sums, for pruning
    std::vector<BigInt> tail_min(n + 1, 0);
    for (std::size_t j = n; j-- > 0;) tail_min[j] = tail_min[j + 1] + a[j] * lo[j];

    std::vector<IntVector> out;
    IntVector x(n, 0);
    auto rec = [&](auto&& self, std::size_t j, BigInt rem) -> void {
        if (j == n) {
            if (rem == 0) out.push_back(x);
            return;
        }
        if (rem < tail_min[j]) return;
        for (BigInt v = lo[j]; v <= hi[j]; ++v) {
            const BigInt used = a[j] * v;
            if (used > rem) break;
            if (rem - used < tail_min[j + 1]) break;
            x[j] = v;
            self(self, j + 1, rem - used);
        }
        x[j] = 0;
    };
    rec(rec, 0, target);
    return out;
}

}  // namespace rpmem
