#include "isoproxim/gauge.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "isoproxim/errors.hpp"
#include "isoproxim/svd.hpp"

namespace isoproxim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of the k largest absolute values; uses a stack buffer for the small
// vectors this library works with.
double top_k_abs_sum(std::span<const double> x, std::size_t k) {
    if (x.size() <= 32) {
        std::array<double, 32> buf{};
        for (std::size_t i = 0; i < x.size(); ++i) buf[i] = std::abs(x[i]);
        std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k),
                          buf.begin() + static_cast<std::ptrdiff_t>(x.size()), std::greater<>());
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) acc += buf[i];
        return acc;
    }
    std::vector<double> buf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = std::abs(x[i]);
    std::partial_sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k), buf.end(),
                      std::greater<>());
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += buf[i];
    return acc;
}

double parse_double_strict(std::string_view text) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw InputError("gauge: cannot parse number '" + std::string(text) + "'");
    return value;
}

} // namespace

Gauge Gauge::schatten(double p) {
    if (std::isnan(p) || p < 1.0)
        throw PreconditionError("gauge: Schatten exponent must satisfy p >= 1");
    return Gauge(Kind::Schatten, p, 0);
}

Gauge Gauge::ky_fan(std::size_t k) {
    if (k == 0) throw PreconditionError("gauge: Ky-Fan order must be at least 1");
    return Gauge(Kind::KyFan, 0.0, k);
}

Gauge Gauge::parse(std::string_view text) {
    if (text == "fro") return frobenius();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw InputError("gauge: expected 'schatten:<p>', 'kyfan:<k>' or 'fro', got '" +
                         std::string(text) + "'");
    const std::string_view family = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    if (family == "schatten") {
        if (arg == "inf") return Gauge(Kind::Schatten, kInf, 0);
        const double p = parse_double_strict(arg);
        if (p < 1.0) throw InputError("gauge: Schatten exponent must satisfy p >= 1");
        return Gauge(Kind::Schatten, p, 0);
    }
    if (family == "kyfan") {
        std::size_t k = 0;
        const auto* first = arg.data();
        const auto* last = arg.data() + arg.size();
        const auto [ptr, ec] = std::from_chars(first, last, k);
        if (ec != std::errc{} || ptr != last || k == 0)
            throw InputError("gauge: Ky-Fan order must be a positive integer, got '" +
                             std::string(arg) + "'");
        return Gauge(Kind::KyFan, 0.0, k);
    }
    throw InputError("gauge: unknown family '" + std::string(family) + "'");
}

bool Gauge::strictly_convex() const noexcept {
    return kind_ == Kind::Schatten && p_ > 1.0 && std::isfinite(p_);
}

std::string Gauge::to_string() const {
    std::ostringstream out;
    if (kind_ == Kind::KyFan) {
        out << "kyfan:" << k_;
        return out.str();
    }
    out << "schatten:";
    if (!std::isfinite(p_)) {
        out << "inf";
    } else if (p_ == std::floor(p_) && std::abs(p_) < 1e15) {
        out << static_cast<long long>(p_);
    } else {
        out << p_;
    }
    return out.str();
}

double gauge_eval(const Gauge& gauge, std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) throw PreconditionError("gauge_eval: non-finite entry");
    if (gauge.kind() == Gauge::Kind::KyFan) {
        if (gauge.ky_fan_k() > x.size())
            throw PreconditionError("gauge_eval: Ky-Fan order exceeds the vector length");
        return top_k_abs_sum(x, gauge.ky_fan_k());
    }
    const double p = gauge.schatten_p();
    if (!std::isfinite(p)) {
        double best = 0.0;
        for (double v : x) best = std::max(best, std::abs(v));
        return best;
    }
    if (p == 1.0) {
        double acc = 0.0;
        for (double v : x) acc += std::abs(v);
        return acc;
    }
    if (p == 2.0) {
        double acc = 0.0;
        for (double v : x) acc += v * v;
        return std::sqrt(acc);
    }
    // Scale out the largest entry so pow stays well conditioned.
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += std::pow(std::abs(v) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

double ui_norm(const Gauge& gauge, const Matrix& f) {
    const std::vector<double> s = singular_values(f);
    return gauge_eval(gauge, s);
}

namespace {

bool partial_sums_dominated(std::span<const double> x, std::span<const double> y,
                            bool require_total_equality) {
    if (x.size() != y.size())
        throw PreconditionError("majorization: vectors must have equal length");
    std::vector<double> xs(x.begin(), x.end());
    std::vector<double> ys(y.begin(), y.end());
    std::sort(xs.begin(), xs.end(), std::greater<>());
    std::sort(ys.begin(), ys.end(), std::greater<>());

    double abs_sum_y = 0.0;
    for (double v : y) abs_sum_y += std::abs(v);
    const double slack = 1e-12 * (1.0 + abs_sum_y);

    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        if (sx > sy + slack) return false;
    }
    if (require_total_equality && std::abs(sx - sy) > slack) return false;
    return true;
}

} // namespace

bool submajorized(std::span<const double> x, std::span<const double> y) {
    return partial_sums_dominated(x, y, false);
}

bool majorized(std::span<const double> x, std::span<const double> y) {
    return partial_sums_dominated(x, y, true);
}

} // namespace isoproxim
