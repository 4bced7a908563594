#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "isoproxim/matrix.hpp"

namespace isoproxim {

/// A symmetric gauge function: a norm on R^q invariant under coordinate
/// permutations and sign changes. Covers the Schatten-p family (p >= 1,
/// including infinity) and the Ky-Fan-k family.
class Gauge {
public:
    enum class Kind { Schatten, KyFan };

    static Gauge schatten(double p);
    static Gauge ky_fan(std::size_t k);
    static Gauge frobenius() { return schatten(2.0); }

    /// Parses "schatten:<p>" (p a decimal or "inf"), "kyfan:<k>", or the
    /// alias "fro" for "schatten:2". Throws InputError otherwise.
    static Gauge parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double schatten_p() const noexcept { return p_; }
    std::size_t ky_fan_k() const noexcept { return k_; }

    /// True exactly for Schatten-p with 1 < p < infinity.
    bool strictly_convex() const noexcept;

    /// Canonical spelling, e.g. "schatten:2", "schatten:inf", "kyfan:3".
    std::string to_string() const;

private:
    Gauge(Kind kind, double p, std::size_t k) : kind_(kind), p_(p), k_(k) {}

    Kind kind_;
    double p_ = 0.0;
    std::size_t k_ = 0;
};

/// Evaluates the gauge on a real vector (absolute values are taken
/// internally). Ky-Fan-k requires k <= x.size().
double gauge_eval(const Gauge& gauge, std::span<const double> x);

/// The unitarily invariant norm induced by the gauge: gauge applied to the
/// singular values of F.
double ui_norm(const Gauge& gauge, const Matrix& f);

/// Weak (sub)majorization x <_w y: every partial sum of the nonincreasing
/// rearrangement of x is bounded by the matching sum for y, with additive
/// slack 1e-12 * (1 + sum |y_i|).
bool submajorized(std::span<const double> x, std::span<const double> y);

/// Submajorization plus equality of the total sums (same slack).
bool majorized(std::span<const double> x, std::span<const double> y);

} // namespace isoproxim
