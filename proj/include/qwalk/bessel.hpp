#pragma once

#include <complex>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

/// Largest |z| accepted by the Bessel routines.
inline constexpr double kMaxBesselArgument = 256.0;

/// |z| up to which bessel_j sums the ascending series; beyond it the value
/// comes from Miller's backward recurrence.
inline constexpr double kSeriesRadius = 8.0;

struct BesselEval {
    int order = 0;
    std::complex<double> argument;
    std::complex<double> value;
    double est_error = 0.0;
};

/// J_n(z) for integer n and complex z, with a rounding-error estimate.
/// Negative orders are obtained from J_{-n} = (-1)^n J_n.
BesselEval evaluate_bessel(int n, std::complex<double> z);

std::complex<double> bessel_j(int n, std::complex<double> z);
double bessel_j(int n, double x);

/// J_{n_lo}(z), ..., J_{n_hi}(z) from a single backward-recurrence pass
/// normalised with the Neumann sums (1, cos z or sin z).
std::vector<std::complex<double>> bessel_row(std::complex<double> z, int n_lo, int n_hi);
std::vector<double> bessel_row(double x, int n_lo, int n_hi);

/// J_0(z), ..., J_{n_max}(z); shared kernel of bessel_row.
template <class T>
std::vector<T> bessel_orders(T z, int n_max);

}  // namespace qwalk
