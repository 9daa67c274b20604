#include "qwalk/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

namespace qwalk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

template <class T>
void check_argument(T z) {
    const double a = std::abs(z);
    if (!(a <= kMaxBesselArgument)) {
        std::ostringstream msg;
        msg << "Bessel argument |z| = " << a << " exceeds supported range " << kMaxBesselArgument;
        throw RangeError(msg.str());
    }
}

template <class T>
struct SeriesResult {
    T value;
    double abs_sum;
};

// sum_m (-1)^m (z/2)^{n+2m} / (m! (n+m)!)
template <class T>
SeriesResult<T> ascending_series(int n, T z) {
    const T half = z / 2.0;
    T lead = T(1.0);
    for (int k = 1; k <= n; ++k) lead *= half / static_cast<double>(k);
    const T q = -(half * half);
    T term = lead;
    T sum = term;
    double abs_sum = std::abs(term);
    for (int m = 1; m < 500; ++m) {
        term *= q / (static_cast<double>(m) * static_cast<double>(n + m));
        sum += term;
        const double at = std::abs(term);
        abs_sum += at;
        if (at == 0.0 || (at <= 1e-17 * std::abs(sum) && m > std::abs(z))) break;
    }
    return {sum, abs_sum};
}

template <class T>
struct MillerResult {
    std::vector<T> values;
    double condition;  // sum of |normalisation terms| relative to the target
    int start;
};

template <class T>
MillerResult<T> miller(T z, int n_max) {
    std::vector<T> out(static_cast<std::size_t>(n_max) + 1, T(0.0));
    const double az = std::abs(z);
    if (az == 0.0) {
        out[0] = T(1.0);
        return {std::move(out), 1.0, 0};
    }
    int start = n_max + static_cast<int>(std::ceil(1.5 * az)) + 30;
    if (start % 2 != 0) ++start;

    T next = T(0.0);
    T cur = T(1e-30);
    T unit_sum = T(0.0);
    T cos_sum = T(0.0);
    T sin_sum = T(0.0);
    double unit_abs = 0.0;
    double trig_abs = 0.0;
    int lowest_stored = n_max + 1;

    for (int k = start; k >= 1; --k) {
        if (k <= n_max) {
            out[static_cast<std::size_t>(k)] = cur;
            lowest_stored = k;
        }
        if (k % 2 == 0) {
            const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
            unit_sum += 2.0 * cur;
            cos_sum += 2.0 * sign * cur;
            unit_abs += 2.0 * std::abs(cur);
        } else {
            const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            sin_sum += 2.0 * sign * cur;
        }
        trig_abs += 2.0 * std::abs(cur);
        const T prev = (2.0 * k / z) * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescaleAbove) {
            cur *= kRescaleBy;
            next *= kRescaleBy;
            unit_sum *= kRescaleBy;
            cos_sum *= kRescaleBy;
            sin_sum *= kRescaleBy;
            unit_abs *= kRescaleBy;
            trig_abs *= kRescaleBy;
            for (int i = lowest_stored; i <= n_max; ++i) out[static_cast<std::size_t>(i)] *= kRescaleBy;
        }
    }
    out[0] = cur;
    unit_sum += cur;
    cos_sum += cur;
    unit_abs += std::abs(cur);
    trig_abs += std::abs(cur);

    T scale;
    double condition;
    if constexpr (std::is_same_v<T, double>) {
        scale = 1.0 / unit_sum;
        condition = unit_abs * std::abs(scale);
    } else {
        // For arguments well off the real axis the unit sum 1 = J_0 + 2 sum J_2k
        // cancels badly; cos z and sin z grow like the terms themselves.
        const T c = std::cos(z);
        const T s = std::sin(z);
        if (std::max(std::abs(c), std::abs(s)) > 2.0) {
            scale = std::abs(c) >= std::abs(s) ? c / cos_sum : s / sin_sum;
            condition = trig_abs * std::abs(scale) / std::max(std::abs(c), std::abs(s));
        } else {
            scale = 1.0 / unit_sum;
            condition = unit_abs * std::abs(scale);
        }
    }
    for (T& v : out) v *= scale;
    return {std::move(out), std::max(condition, 1.0), start};
}

template <class T>
T signed_order(const std::vector<T>& orders, int n) {
    const T v = orders[static_cast<std::size_t>(std::abs(n))];
    return (n < 0 && (n % 2 != 0)) ? -v : v;
}

template <class T>
std::pair<T, double> evaluate_nonnegative(int n, T z) {
    if (std::abs(z) <= kSeriesRadius) {
        const auto r = ascending_series(n, z);
        return {r.value, 4.0 * kEps * r.abs_sum};
    }
    auto r = miller(z, n);
    const T v = r.values.back();
    const double est = 4.0 * kEps * std::sqrt(static_cast<double>(r.start)) * r.condition *
                       std::max(1.0, std::abs(v));
    return {v, est};
}

template <class T>
std::vector<T> row_impl(T z, int n_lo, int n_hi) {
    if (n_lo > n_hi) throw DomainError("bessel_row: n_lo must not exceed n_hi");
    check_argument(z);
    const int reach = std::max(std::abs(n_lo), std::abs(n_hi));
    const auto orders = bessel_orders(z, reach);
    std::vector<T> row;
    row.reserve(static_cast<std::size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) row.push_back(signed_order(orders, n));
    return row;
}

}  // namespace

template <class T>
std::vector<T> bessel_orders(T z, int n_max) {
    check_argument(z);
    if (n_max < 0) throw DomainError("bessel_orders: n_max must be non-negative");
    return miller(z, n_max).values;
}

template std::vector<double> bessel_orders<double>(double, int);
template std::vector<std::complex<double>> bessel_orders<std::complex<double>>(std::complex<double>, int);

BesselEval evaluate_bessel(int n, std::complex<double> z) {
    check_argument(z);
    const int order = std::abs(n);
    auto [value, est] = evaluate_nonnegative(order, z);
    if (n < 0 && (order % 2 != 0)) value = -value;
    return {n, z, value, est};
}

std::complex<double> bessel_j(int n, std::complex<double> z) {
    return evaluate_bessel(n, z).value;
}

double bessel_j(int n, double x) {
    check_argument(x);
    const int order = std::abs(n);
    const double v = evaluate_nonnegative(order, x).first;
    return (n < 0 && (order % 2 != 0)) ? -v : v;
}

std::vector<std::complex<double>> bessel_row(std::complex<double> z, int n_lo, int n_hi) {
    return row_impl(z, n_lo, n_hi);
}

std::vector<double> bessel_row(double x, int n_lo, int n_hi) {
    return row_impl(x, n_lo, n_hi);
}

}  // namespace qwalk
