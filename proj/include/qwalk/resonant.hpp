#pragma once

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qwalk/core.hpp"

namespace qwalk {

using BigInt = boost::multiprecision::cpp_int;

/// Finite Laurent series sum_e c_e x^e with exact integer coefficients,
/// x = e^{ik cos theta}. Zero coefficients are never stored.
class LaurentPoly {
public:
    LaurentPoly() = default;
    /// c * x^exponent
    static LaurentPoly monomial(int exponent, BigInt c = 1);

    const std::map<int, BigInt>& terms() const { return terms_; }
    BigInt coefficient(int exponent) const;
    bool is_zero() const { return terms_.empty(); }
    int min_exponent() const;
    int max_exponent() const;

    /// x -> 1/x, the image of k -> -k.
    LaurentPoly reflected() const;
    /// Multiply by x^shift.
    LaurentPoly shifted(int shift) const;

    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly& operator-=(const LaurentPoly& other);
    LaurentPoly& operator*=(const BigInt& factor);

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const BigInt& f) { return a *= f; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

private:
    void add_term(int exponent, const BigInt& c);

    std::map<int, BigInt> terms_;
};

/// z = 1/x + x
LaurentPoly dickson_z();
/// z~ = 1/x - x
LaurentPoly dickson_z_tilde();

/// a_{l,1}, a_{l,2} for l = 0..N, the coefficients of x^{N - 2l} in p_1 and
/// p_2. Stored as exact integers multiplied by 2^N.
struct DicksonCoefficients {
    int order = 0;
    std::vector<BigInt> a1_scaled;
    std::vector<BigInt> a2_scaled;

    double a1(int l) const;
    double a2(int l) const;

    friend bool operator==(const DicksonCoefficients&, const DicksonCoefficients&) = default;
};

/// p_1^{(N)} and p_2^{(N)} from p = z p' - 2 p''.
std::pair<LaurentPoly, LaurentPoly> dickson_polynomials(int N);

DicksonCoefficients dickson_recursive(int N);
DicksonCoefficients dickson_closed_form(int N);

/// n choose r, zero outside 0 <= r <= n.
BigInt binomial(int n, int r);

/// Entries of (sqrt 2 C K)^T = [[A1, A2], [A3, A4]] as Laurent polynomials,
/// assembled from the Dickson polynomials with N = T - 1. A2 and A3 carry an
/// overall factor i that is not stored.
struct WalkOperatorEntries {
    LaurentPoly a1;
    LaurentPoly a2_over_i;
    LaurentPoly a3_over_i;
    LaurentPoly a4;
};
WalkOperatorEntries walk_operator_entries(int T);

/// Closed-form momentum distribution at exact resonance.
/// Throws DomainError for beta != 0, T < 1, or a non-resonant period with
/// the full free evolution.
MomentumDistribution resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet);

/// Same, with caller-supplied coefficients (used to probe symmetry relations).
MomentumDistribution resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                           const DicksonCoefficients& coefficients);

}  // namespace qwalk
