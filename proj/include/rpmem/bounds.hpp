#pragma once

// Closed-form tail bounds on the projected norm and the projection-dimension
// selectors built from them. Every constant the underlying estimates leave
// unspecified lives in ConstantConfig; nothing here hard-codes one.
//
// Log convention: natural logs everywhere, except the doubling-dimension term
// which is an explicit log2. In the finite-threshold selector the ratio of
// logs makes the base cancel anyway.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "rpmem/error.hpp"

namespace rpmem {

struct ConstantConfig {
    double c_jl = 1.0 / 32.0;  // concentration exponent constant
    double c_doubling = 8.0;   // doubling-theorem constant (absorbs c1..c4)
    double kappa = 0.5;        // threshold headroom: tau < kappa * d
    int k_min = 3;             // floor for every selector

    void validate() const {
        if (!(c_jl > 0.0)) throw InvalidSpecError("ConstantConfig: c_jl must be > 0");
        if (!(c_doubling > 0.0))
            throw InvalidSpecError("ConstantConfig: c_doubling must be > 0");
        if (!(kappa > 0.0 && kappa < 1.0))
            throw InvalidSpecError("ConstantConfig: kappa must be in (0,1)");
        if (k_min < 3) throw InvalidSpecError("ConstantConfig: k_min must be >= 3");
    }
};

enum class SelectionRule {
    FiniteThreshold,
    IntegerFiber,
    Polytope,
    Cone,
    DoublingExact,
    DoublingThreshold,
};

// Record of whichever rule inputs were actually used.
struct SelectionInputs {
    std::optional<double> delta;
    std::optional<double> tau;
    std::optional<double> d;
    std::optional<double> big_d;
    std::optional<double> mu_a;
    std::optional<double> lambda_x;
    std::optional<std::size_t> b_bound;
    std::optional<std::size_t> n;
    std::optional<std::size_t> set_size;
    bool mu_a_is_lower_bound = false;
};

struct KSelection {
    int k = 0;
    SelectionRule rule = SelectionRule::FiniteThreshold;
    SelectionInputs inputs;
    ConstantConfig constants;
};

namespace detail {
inline int ceil_int(double v) { return static_cast<int>(std::ceil(v)); }

inline int apply_k_min(double raw, const ConstantConfig& cfg) {
    const int k = ceil_int(raw);
    return k < cfg.k_min ? cfg.k_min : k;
}
}  // namespace detail

// Chernoff upper bound on the chi-squared lower tail:
// F_{chi2_k}(x) <= (z e^{1-z})^{k/2} with z = x/k, valid for 0 < x < k.
inline double chi2_cdf_upper(int k, double x) {
    if (k < 1) throw OutOfRangeError("chi2_cdf_upper: k must be >= 1");
    if (!(x > 0.0 && x < static_cast<double>(k)))
        throw OutOfRangeError("chi2_cdf_upper: requires 0 < x < k");
    const double z = x / static_cast<double>(k);
    return std::pow(z * std::exp(1.0 - z), 0.5 * static_cast<double>(k));
}

// Upper bound on Prob(||Ta|| <= delta) for unit a and unscaled Gaussian T:
// the tightest of (e delta^2 / k)^{k/2} and, for k >= 3, delta^k.
inline double small_norm_prob_bound(int k, double delta) {
    if (k < 1) throw OutOfRangeError("small_norm_prob_bound: k must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("small_norm_prob_bound: requires 0 < delta < 1");
    const double kk = static_cast<double>(k);
    double bound =
        std::pow(std::exp(1.0) * delta * delta / kk, 0.5 * kk);
    if (k >= 3) bound = std::min(bound, std::pow(delta, kk));
    return bound;
}

// Finite-set threshold selector: k >= ln(|X|/delta) / ln(d/tau), floored at
// k_min. Requires tau < d.
inline KSelection k_for_finite_threshold(std::size_t set_size, double delta,
                                         double tau, double d,
                                         const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (set_size == 0) throw OutOfRangeError("k_for_finite_threshold: empty set");
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("k_for_finite_threshold: delta must be in (0,1)");
    if (!(d > 0.0)) throw OutOfRangeError("k_for_finite_threshold: d must be > 0");
    if (!(tau > 0.0 && tau < d))
        throw OutOfRangeError("k_for_finite_threshold: requires 0 < tau < d");
    const double raw =
        std::log(static_cast<double>(set_size) / delta) / std::log(d / tau);
    KSelection sel;
    sel.k = detail::apply_k_min(raw, cfg);
    sel.rule = SelectionRule::FiniteThreshold;
    sel.inputs.delta = delta;
    sel.inputs.tau = tau;
    sel.inputs.d = d;
    sel.inputs.set_size = set_size;
    sel.constants = cfg;
    return sel;
}

// Integer-fiber selector: k >= (ln(2/delta) + B ln(n+B-1)) / C.
inline KSelection k_for_integer_fiber(std::size_t n, std::size_t b_bound,
                                      double delta,
                                      const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (n < 1) throw OutOfRangeError("k_for_integer_fiber: n must be >= 1");
    if (b_bound < 1) throw OutOfRangeError("k_for_integer_fiber: B must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("k_for_integer_fiber: delta must be in (0,1)");
    const double raw = (std::log(2.0 / delta) +
                        static_cast<double>(b_bound) *
                            std::log(static_cast<double>(n + b_bound - 1))) /
                       cfg.c_jl;
    KSelection sel;
    sel.k = detail::apply_k_min(raw, cfg);
    sel.rule = SelectionRule::IntegerFiber;
    sel.inputs.delta = delta;
    sel.inputs.n = n;
    sel.inputs.b_bound = b_bound;
    sel.constants = cfg;
    return sel;
}

struct SuccessBound {
    double bound = 0.0;    // clamped to [0,1]
    double raw = 0.0;      // before clamping
    double epsilon = 0.0;  // the epsilon realizing it
    bool vacuous = false;  // epsilon^2 - epsilon^3 <= 0, bound carries no content
};

namespace detail {

// Max of eps^2 - eps^3 over a 10^4-point geometric grid on (0, ceiling).
// Deterministic and reproducible; resolution near the ceiling is ~0.02%.
inline std::pair<double, double> max_gap_on_grid(double ceiling,
                                                 std::size_t points = 10000) {
    const double floor_ratio = 1e-8;
    double best_g = 0.0, best_eps = ceiling * floor_ratio;
    for (std::size_t i = 1; i <= points; ++i) {
        const double eps =
            ceiling * std::pow(floor_ratio,
                               static_cast<double>(i) / static_cast<double>(points));
        const double g = eps * eps - eps * eps * eps;
        if (g > best_g) {
            best_g = g;
            best_eps = eps;
        }
    }
    return {best_g, best_eps};
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace detail

// Success bound for a polytope with n vertices at separation d and vertex
// spread D: max over eps in (0, d^2/D^2) of 1 - 2 n^2 e^{-C (eps^2-eps^3) k}.
inline SuccessBound polytope_success_bound(std::size_t n, int k, double d,
                                           double big_d,
                                           const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (n < 1 || k < 1) throw OutOfRangeError("polytope_success_bound: n,k >= 1");
    if (!(d > 0.0) || !(big_d > 0.0) || d > big_d)
        throw GeometryError("polytope_success_bound: requires 0 < d <= D");
    double ceiling = (d * d) / (big_d * big_d);
    if (ceiling > 1.0) ceiling = 1.0;
    const auto [g, eps] = detail::max_gap_on_grid(ceiling);
    SuccessBound out;
    out.epsilon = eps;
    out.vacuous = !(g > 0.0);
    const double nn = static_cast<double>(n);
    out.raw = 1.0 - 2.0 * nn * nn * std::exp(-cfg.c_jl * g * static_cast<double>(k));
    out.bound = detail::clamp01(out.raw);
    return out;
}

// Success bound for a cone with n unit generators: eps is pinned by the
// closed form d^2 / (mu^2 + 2 sqrt(1-d^2) mu + 1).
inline SuccessBound cone_success_bound(std::size_t n, int k, double d,
                                       double mu_a,
                                       const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (n < 1 || k < 1) throw OutOfRangeError("cone_success_bound: n,k >= 1");
    if (!(d > 0.0 && d <= 1.0))
        throw GeometryError(
            "cone_success_bound: requires 0 < d <= 1 (unit-norm convention)");
    if (!(mu_a >= 0.0)) throw OutOfRangeError("cone_success_bound: mu_a >= 0");
    const double eps =
        d * d / (mu_a * mu_a + 2.0 * std::sqrt(1.0 - d * d) * mu_a + 1.0);
    const double g = eps * eps - eps * eps * eps;
    SuccessBound out;
    out.epsilon = eps;
    out.vacuous = !(g > 0.0);
    const double nn = static_cast<double>(n);
    out.raw =
        1.0 - 2.0 * nn * (nn + 1.0) * std::exp(-cfg.c_jl * g * static_cast<double>(k));
    out.bound = detail::clamp01(out.raw);
    return out;
}

// Smallest k whose polytope success bound reaches 1 - delta.
inline KSelection k_for_polytope(std::size_t n, double delta, double d,
                                 double big_d, const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("k_for_polytope: delta must be in (0,1)");
    if (!(d > 0.0) || !(big_d > 0.0) || d > big_d)
        throw GeometryError("k_for_polytope: requires 0 < d <= D");
    double ceiling = (d * d) / (big_d * big_d);
    if (ceiling > 1.0) ceiling = 1.0;
    const auto [g, eps] = detail::max_gap_on_grid(ceiling);
    if (!(g > 0.0)) throw OutOfRangeError("k_for_polytope: vacuous epsilon range");
    const double nn = static_cast<double>(n);
    const double raw = std::log(2.0 * nn * nn / delta) / (cfg.c_jl * g);
    KSelection sel;
    sel.k = detail::apply_k_min(raw, cfg);
    sel.rule = SelectionRule::Polytope;
    sel.inputs.delta = delta;
    sel.inputs.d = d;
    sel.inputs.big_d = big_d;
    sel.inputs.n = n;
    sel.constants = cfg;
    (void)eps;
    return sel;
}

// Smallest k whose cone success bound reaches 1 - delta.
inline KSelection k_for_cone(std::size_t n, double delta, double d, double mu_a,
                             const ConstantConfig& cfg = {},
                             bool mu_a_is_lower_bound = false) {
    cfg.validate();
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("k_for_cone: delta must be in (0,1)");
    if (!(d > 0.0 && d <= 1.0))
        throw GeometryError("k_for_cone: requires 0 < d <= 1");
    if (!(mu_a >= 0.0)) throw OutOfRangeError("k_for_cone: mu_a >= 0");
    const double eps =
        d * d / (mu_a * mu_a + 2.0 * std::sqrt(1.0 - d * d) * mu_a + 1.0);
    const double g = eps * eps - eps * eps * eps;
    if (!(g > 0.0)) throw OutOfRangeError("k_for_cone: vacuous epsilon");
    const double nn = static_cast<double>(n);
    const double raw = std::log(2.0 * nn * (nn + 1.0) / delta) / (cfg.c_jl * g);
    KSelection sel;
    sel.k = detail::apply_k_min(raw, cfg);
    sel.rule = SelectionRule::Cone;
    sel.inputs.delta = delta;
    sel.inputs.d = d;
    sel.inputs.mu_a = mu_a;
    sel.inputs.n = n;
    sel.inputs.mu_a_is_lower_bound = mu_a_is_lower_bound;
    sel.constants = cfg;
    return sel;
}

// Doubling threshold selector: combines the threshold-form
// C ln(lambda/delta)/ln(d/tau) with the exact-membership floor C log2(lambda).
// Requires tau < kappa * d.
inline KSelection k_for_doubling(double lambda_x, double delta, double tau,
                                 double d, const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (!(lambda_x >= 1.0))
        throw OutOfRangeError("k_for_doubling: lambda_x must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw OutOfRangeError("k_for_doubling: delta must be in (0,1)");
    if (!(d > 0.0)) throw OutOfRangeError("k_for_doubling: d must be > 0");
    if (!(tau > 0.0 && tau < cfg.kappa * d))
        throw OutOfRangeError("k_for_doubling: requires 0 < tau < kappa*d");
    const double ratio =
        cfg.c_doubling * std::log(lambda_x / delta) / std::log(d / tau);
    const double floor_exact = cfg.c_doubling * std::log2(lambda_x);
    int k = detail::apply_k_min(ratio, cfg);
    const int k2 = detail::ceil_int(floor_exact);
    if (k2 > k) k = k2;
    KSelection sel;
    sel.k = k;
    sel.rule = SelectionRule::DoublingThreshold;
    sel.inputs.delta = delta;
    sel.inputs.tau = tau;
    sel.inputs.d = d;
    sel.inputs.lambda_x = lambda_x;
    sel.constants = cfg;
    return sel;
}

// Exact-membership doubling selector: k >= C log2(lambda).
inline KSelection k_for_doubling_exact(double lambda_x,
                                       const ConstantConfig& cfg = {}) {
    cfg.validate();
    if (!(lambda_x >= 1.0))
        throw OutOfRangeError("k_for_doubling_exact: lambda_x must be >= 1");
    KSelection sel;
    sel.k = detail::apply_k_min(cfg.c_doubling * std::log2(lambda_x), cfg);
    sel.rule = SelectionRule::DoublingExact;
    sel.inputs.lambda_x = lambda_x;
    sel.constants = cfg;
    return sel;
}

inline const char* selection_rule_name(SelectionRule r) {
    switch (r) {
        case SelectionRule::FiniteThreshold: return "finite_threshold";
        case SelectionRule::IntegerFiber: return "integer_fiber";
        case SelectionRule::Polytope: return "polytope";
        case SelectionRule::Cone: return "cone";
        case SelectionRule::DoublingExact: return "doubling_exact";
        case SelectionRule::DoublingThreshold: return "doubling_threshold";
    }
    return "unknown";
}

}  // namespace rpmem
