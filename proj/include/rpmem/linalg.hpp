#pragma once

// Dense vectors, the projection specification, and the two application paths
// of a sampled k x m projection operator: floating point for Gaussian or
// Rademacher matrices, and exact arbitrary-precision integer arithmetic for
// unscaled Rademacher matrices.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rpmem/error.hpp"
#include "rpmem/prng.hpp"

namespace rpmem {

using Vector = std::vector<double>;
using BigInt = boost::multiprecision::cpp_int;
using IntVector = std::vector<BigInt>;

inline void check_finite(const Vector& v, const char* what) {
    if (v.empty()) throw InvalidSpecError(std::string(what) + ": empty vector");
    for (double x : v)
        if (!std::isfinite(x))
            throw InvalidSpecError(std::string(what) + ": non-finite entry");
}

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

enum class Distribution { Gaussian, Rademacher };
enum class Scaling { None, InvSqrtK };

struct ProjectionSpec {
    std::size_t m = 0;  // source dimension
    std::size_t k = 0;  // target dimension
    Distribution distribution = Distribution::Gaussian;
    Scaling scaling = Scaling::None;
    std::uint64_t seed = 0;

    void validate() const {
        if (m == 0) throw InvalidSpecError("ProjectionSpec: m must be >= 1");
        if (k == 0) throw InvalidSpecError("ProjectionSpec: k must be >= 1");
    }
};

// A realized k x m projection matrix. Immutable after construction; sampling
// from the same spec reproduces identical entries bit-for-bit.
class ProjectionMatrix {
public:
    ProjectionMatrix(ProjectionSpec spec, std::vector<double> entries)
        : spec_(spec), entries_(std::move(entries)) {
        spec_.validate();
        if (entries_.size() != spec_.k * spec_.m)
            throw DimensionError("ProjectionMatrix: entry count != k*m");
        if (spec_.distribution == Distribution::Rademacher) {
            for (double e : entries_)
                if (e != 1.0 && e != -1.0)
                    throw InvalidSpecError("ProjectionMatrix: Rademacher entry not +-1");
        } else {
            for (double e : entries_)
                if (!std::isfinite(e))
                    throw InvalidSpecError("ProjectionMatrix: non-finite entry");
        }
    }

    const ProjectionSpec& spec() const noexcept { return spec_; }
    std::size_t rows() const noexcept { return spec_.k; }
    std::size_t cols() const noexcept { return spec_.m; }

    double at(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * spec_.m + j];
    }

    // Exact sign of a Rademacher entry; the value is +-1.0 by the class
    // invariant, so the conversion loses nothing.
    int sign_at(std::size_t i, std::size_t j) const {
        const double e = at(i, j);
        if (e == 1.0) return 1;
        if (e == -1.0) return -1;
        throw InvalidSpecError("sign_at: entry is not a Rademacher sign");
    }

    const std::vector<double>& entries() const noexcept { return entries_; }

private:
    ProjectionSpec spec_;
    std::vector<double> entries_;
};

// Samples T from the spec. Entries are filled row-major from a single
// SplitMix64 stream seeded with spec.seed, so the realization is a pure
// function of the spec.
inline ProjectionMatrix sample_projection(const ProjectionSpec& spec) {
    spec.validate();
    SplitMix64 gen(spec.seed);
    std::vector<double> entries(spec.k * spec.m);
    if (spec.distribution == Distribution::Gaussian) {
        for (double& e : entries) e = gen.normal();
    } else {
        for (double& e : entries) e = static_cast<double>(gen.rademacher());
    }
    return ProjectionMatrix(spec, std::move(entries));
}

// T v, scaled by 1/sqrt(k) iff the spec says so.
inline Vector project(const ProjectionMatrix& T, const Vector& v) {
    if (v.size() != T.cols())
        throw DimensionError("project: vector length != spec.m");
    const std::size_t k = T.rows(), m = T.cols();
    Vector out(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += T.at(i, j) * v[j];
        out[i] = s;
    }
    if (T.spec().scaling == Scaling::InvSqrtK) {
        const double c = 1.0 / std::sqrt(static_cast<double>(k));
        for (double& x : out) x *= c;
    }
    return out;
}

// Exact integer image under an unscaled Rademacher matrix. No floating-point
// arithmetic anywhere on this path.
inline IntVector project_exact(const ProjectionMatrix& T, const IntVector& v) {
    if (T.spec().distribution != Distribution::Rademacher ||
        T.spec().scaling != Scaling::None)
        throw InvalidSpecError(
            "project_exact: requires an unscaled Rademacher matrix");
    if (v.size() != T.cols())
        throw DimensionError("project_exact: vector length != spec.m");
    const std::size_t k = T.rows(), m = T.cols();
    IntVector out(k);
    for (std::size_t i = 0; i < k; ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (T.sign_at(i, j) > 0)
                s += v[j];
            else
                s -= v[j];
        }
        out[i] = std::move(s);
    }
    return out;
}

}  // namespace rpmem
