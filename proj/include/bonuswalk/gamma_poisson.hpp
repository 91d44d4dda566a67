#pragma once

// Gamma mixing distribution, Poisson conditional, the negative-binomial
// marginal, and method-of-moments estimation of the gamma parameters from
// portfolio claim statistics.
//
// Throughout, beta is a *rate*: the prior density is
//   f(x) = x^{alpha-1} beta^alpha e^{-beta x} / Gamma(alpha),
// so the prior mean is alpha/beta and an exposure of t years has marginal
// claim count NegativeBinomial(alpha, beta/(t+beta)).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bonuswalk {

struct GammaPrior {
    double alpha = 0.0; // shape
    double beta = 0.0;  // rate

    void validate() const; // throws ValidationError
    double mean() const { return alpha / beta; }
    double variance() const { return alpha / (beta * beta); }
};

struct ExposureRecord {
    long long claims = 0;        // X_i
    double exposure_years = 0.0; // t_i, need not be an integer
};

double gamma_pdf(const GammaPrior& prior, double x);

// Inverse CDF; p in [0, 1). Used for quadrature cutoffs.
double gamma_quantile(const GammaPrior& prior, double p);

double poisson_pmf(double lambda, int k);
double poisson_log_pmf(double lambda, int k); // -inf where the pmf is 0

// P(X = k) for X ~ NegativeBinomial(alpha, beta/(t+beta)).
double neg_binomial_pmf(const GammaPrior& prior, double exposure_years, int k);

// Method-of-moments fit:
//   alpha/beta = sum X_i / sum t_i
//   1/beta     = (sum t_i / sum t_i^2) (sum X_i^2 / sum X_i - 1) - sum X_i / sum t_i
// evaluated as a single fraction, which is exact on integer sums and avoids
// the cancellation in the two-term form. Throws EmptyData when no claims
// were observed and InsufficientDispersion when the data are at or below
// pure-Poisson dispersion (no gamma mixture fits).
GammaPrior estimate_prior_mom(std::span<const ExposureRecord> records);

namespace detail {
GammaPrior mom_from_sums(double sum_x, double sum_x2, double sum_t, double sum_t2);
}

// CSV with a header naming columns `claims` and `exposure_years` (any
// order). Errors carry `source_name` and the 1-based line number.
std::vector<ExposureRecord> read_exposure_csv(std::istream& in, const std::string& source_name);
std::vector<ExposureRecord> read_exposure_csv_file(const std::string& path);

} // namespace bonuswalk
