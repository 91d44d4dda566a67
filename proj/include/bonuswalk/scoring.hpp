#pragma once

// Proper scoring rules for Poisson predictive distributions: Brier
// (quadratic) and logarithmic, each in expected form (scored against a
// known claim-frequency) and observed form (scored against a realized
// count). Series are truncated once cumulative mass reaches 1 - 1e-12.
//
// The logarithmic score is -inf when the forecast puts zero mass where the
// reference has mass (a lambda-hat of 0 against any positive frequency).
// -inf is a value, not an error; aggregation happens in the simulation
// harness, which counts the -inf events separately.

#include <vector>

namespace bonuswalk {

inline constexpr double kForecastTailMass = 1e-12;

struct PoissonForecast {
    double lambda = 0.0;
    std::vector<double> pmf; // indices 0 .. truncation_k

    explicit PoissonForecast(double lambda_hat);

    int truncation_k() const { return static_cast<int>(pmf.size()) - 1; }
    // pmf at any k, recomputed past the truncation point.
    double prob(int k) const;
};

// S(P,Q) = 2 sum_i p_i q_i - sum_i p_i^2 - 1; maximal (0) at p = q = point mass.
double brier_expected(const PoissonForecast& p, const PoissonForecast& q);

// S(P,k) = 2 p_k - sum_j p_j^2 - 1.
double brier_observed(const PoissonForecast& p, int observed_claims);

// S(P,Q) = sum_i q_i log p_i; may be -inf.
double log_expected(const PoissonForecast& p, const PoissonForecast& q);

// S(P,k) = log p_k = k log l - l - log k!; may be -inf.
double log_observed(const PoissonForecast& p, int observed_claims);

// d(P,Q) = S(Q,Q) - S(P,Q); >= 0, and 0 iff the lambdas agree.
double brier_divergence(const PoissonForecast& p, const PoissonForecast& q);
double log_divergence(const PoissonForecast& p, const PoissonForecast& q);

} // namespace bonuswalk
