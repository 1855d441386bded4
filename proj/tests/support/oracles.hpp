#pragma once

// Independent oracles for the test suites. These deliberately avoid the
// library's own solution paths: the chi-squared CDF comes from boost::math,
// convex distances from brute-force grid refinement, the induced norm from
// exact basic-feasible-solution enumeration, and minimum covers from subset
// enumeration.

#include <bitset>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rpmem/geometry.hpp"
#include "rpmem/linalg.hpp"
#include "rpmem/lp.hpp"

namespace oracles {

using rpmem::Vector;

// Exact chi-squared CDF via the regularized lower incomplete gamma function
// (series / continued fraction evaluation inside boost::math).
inline double chi2_cdf_exact(int k, double x) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(0.5 * k, 0.5 * x);
}

// ---------------------------------------------------------------------------
// Grid refinement for convex minimization over a box
// ---------------------------------------------------------------------------

// Repeated dense grids: evaluate pts^dim lattice over the box, shrink the box
// to +-3 cells around the best point, repeat. Convexity of the objectives
// used here keeps the value convergent.
inline double refine_min(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<std::pair<double, double>> box, int pts, int levels) {
    const std::size_t dim = box.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> arg(dim, 0.0);
    for (int level = 0; level < levels; ++level) {
        std::vector<double> lo(dim), step(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = box[d].first;
            step[d] = (box[d].second - box[d].first) /
                      static_cast<double>(pts - 1);
        }
        std::vector<int> idx(dim, 0);
        std::vector<double> x(dim);
        std::vector<int> best_idx(dim, 0);
        for (;;) {
            for (std::size_t d = 0; d < dim; ++d)
                x[d] = lo[d] + step[d] * idx[d];
            const double v = f(x);
            if (v < best) {
                best = v;
                arg = x;
                best_idx = idx;
            }
            std::size_t d = 0;
            while (d < dim && ++idx[d] == pts) idx[d++] = 0;
            if (d == dim) break;
        }
        for (std::size_t d = 0; d < dim; ++d) {
            const double nl = lo[d] + step[d] * std::max(0, best_idx[d] - 3);
            const double nh = lo[d] + step[d] * std::min(pts - 1, best_idx[d] + 3);
            box[d] = {nl, nh};
        }
    }
    return best;
}

// Distance from b to conv(verts) by grid refinement over simplex weights.
inline double polytope_distance_oracle(const Vector& b,
                                       const std::vector<Vector>& verts,
                                       int pts = 17, int levels = 20) {
    const std::size_t n = verts.size(), m = b.size();
    if (n == 1) return std::sqrt(rpmem::squared_distance(b, verts[0]));
    const std::size_t dim = n - 1;
    auto f = [&](const std::vector<double>& t) {
        double last = 1.0;
        for (double v : t) last -= v;
        if (last < -1e-12) return std::numeric_limits<double>::infinity();
        if (last < 0.0) last = 0.0;
        double s2 = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double xc = last * verts[n - 1][c];
            for (std::size_t i = 0; i < dim; ++i) xc += t[i] * verts[i][c];
            const double d = b[c] - xc;
            s2 += d * d;
        }
        return s2;
    };
    std::vector<std::pair<double, double>> box(dim, {0.0, 1.0});
    return std::sqrt(refine_min(f, std::move(box), pts, levels));
}

// Distance from b to cone(gens) by grid refinement over the coefficient box.
inline double cone_distance_oracle(const Vector& b,
                                   const std::vector<Vector>& gens,
                                   double coeff_cap, int pts = 13,
                                   int levels = 20) {
    const std::size_t n = gens.size(), m = b.size();
    auto f = [&](const std::vector<double>& th) {
        double s2 = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double xc = 0.0;
            for (std::size_t i = 0; i < n; ++i) xc += th[i] * gens[i][c];
            const double d = b[c] - xc;
            s2 += d * d;
        }
        return s2;
    };
    std::vector<std::pair<double, double>> box(n, {0.0, coeff_cap});
    return std::sqrt(refine_min(f, std::move(box), pts, levels));
}

// ---------------------------------------------------------------------------
// Exact induced-norm oracle: enumerate basic feasible solutions
// ---------------------------------------------------------------------------

using rpmem::lp::Rational;

// Solves A_S theta = x exactly for a column subset; nullopt when the subset
// is rank deficient or the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(
    const std::vector<std::vector<Rational>>& cols,  // m x n
    const std::vector<std::size_t>& subset, const std::vector<Rational>& x) {
    const std::size_t m = cols.size(), s = subset.size();
    if (s > m) return std::nullopt;  // necessarily rank deficient
    std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(s + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < s; ++j) aug[i][j] = cols[i][subset[j]];
        aug[i][s] = x[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_row(s, m);
    for (std::size_t col = 0; col < s && row < m; ++col) {
        std::size_t pr = row;
        while (pr < m && aug[pr][col] == 0) ++pr;
        if (pr == m) return std::nullopt;  // dependent subset
        std::swap(aug[pr], aug[row]);
        const Rational p = aug[row][col];
        for (auto& v : aug[row]) v /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            const Rational f = aug[i][col];
            for (std::size_t j = col; j <= s; ++j) aug[i][j] -= f * aug[row][j];
        }
        pivot_row[col] = row;
        ++row;
    }
    for (std::size_t i = row; i < m; ++i)
        if (aug[i][s] != 0) return std::nullopt;  // inconsistent
    std::vector<Rational> theta(s, 0);
    for (std::size_t col = 0; col < s; ++col) theta[col] = aug[pivot_row[col]][s];
    return theta;
}

// min 1.theta over exact representations of x, by enumerating all column
// subsets; nullopt when x is not in the cone.
inline std::optional<Rational> induced_norm_bfs_oracle(
    const std::vector<Vector>& generators, const Vector& x) {
    const std::size_t m = x.size(), n = generators.size();
    std::vector<std::vector<Rational>> cols(m, std::vector<Rational>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) cols[i][j] = Rational(generators[j][i]);
    std::vector<Rational> xr(m);
    bool zero = true;
    for (std::size_t i = 0; i < m; ++i) {
        xr[i] = Rational(x[i]);
        if (x[i] != 0.0) zero = false;
    }
    if (zero) return Rational(0);
    std::optional<Rational> best;
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (std::size_t(1) << j)) subset.push_back(j);
        const auto theta = solve_exact(cols, subset, xr);
        if (!theta) continue;
        bool nonneg = true;
        Rational total = 0;
        for (const auto& v : *theta) {
            if (v < 0) nonneg = false;
            total += v;
        }
        if (!nonneg) continue;
        if (!best || total < *best) best = total;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Exhaustive minimum set cover (for cross-checking the branch and bound)
// ---------------------------------------------------------------------------

inline int min_cover_exhaustive(std::uint32_t universe,
                                const std::vector<std::uint32_t>& sets) {
    const std::size_t s = sets.size();
    int best = static_cast<int>(s) + 1;
    for (std::uint64_t pick = 0; pick < (std::uint64_t(1) << s); ++pick) {
        std::uint32_t covered = 0;
        int count = 0;
        for (std::size_t i = 0; i < s; ++i)
            if (pick & (std::uint64_t(1) << i)) {
                covered |= sets[i];
                ++count;
            }
        if ((universe & ~covered) == 0 && count < best) best = count;
    }
    return best;
}

}  // namespace oracles
