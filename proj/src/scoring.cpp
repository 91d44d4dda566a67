#include "bonuswalk/scoring.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/gamma_poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bonuswalk {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

PoissonForecast::PoissonForecast(double lambda_hat) : lambda(lambda_hat) {
    if (!(lambda_hat >= 0.0) || !std::isfinite(lambda_hat)) {
        throw ValidationError("PoissonForecast: lambda must be finite and >= 0");
    }
    double p = std::exp(-lambda);
    double cum = p;
    pmf.push_back(p);
    int k = 0;
    while (cum < 1.0 - kForecastTailMass) {
        ++k;
        p *= lambda / k;
        pmf.push_back(p);
        cum += p;
    }
}

double PoissonForecast::prob(int k) const {
    if (k < 0) {
        throw ValidationError("PoissonForecast::prob: k must be >= 0");
    }
    if (k < static_cast<int>(pmf.size())) {
        return pmf[k];
    }
    return poisson_pmf(lambda, k);
}

double brier_expected(const PoissonForecast& p, const PoissonForecast& q) {
    const int joint = std::min(p.truncation_k(), q.truncation_k());
    double cross = 0.0;
    for (int i = 0; i <= joint; ++i) {
        cross += p.pmf[i] * q.pmf[i];
    }
    double self = 0.0;
    for (double pi : p.pmf) {
        self += pi * pi;
    }
    return 2.0 * cross - self - 1.0;
}

double brier_observed(const PoissonForecast& p, int observed_claims) {
    double self = 0.0;
    for (double pi : p.pmf) {
        self += pi * pi;
    }
    return 2.0 * p.prob(observed_claims) - self - 1.0;
}

double log_expected(const PoissonForecast& p, const PoissonForecast& q) {
    if (p.lambda == 0.0) {
        return q.lambda == 0.0 ? 0.0 : kNegInf;
    }
    double score = 0.0;
    for (int i = 0; i <= q.truncation_k(); ++i) {
        score += q.pmf[i] * poisson_log_pmf(p.lambda, i);
    }
    return score;
}

double log_observed(const PoissonForecast& p, int observed_claims) {
    if (observed_claims < 0) {
        throw ValidationError("log_observed: observed claims must be >= 0");
    }
    return poisson_log_pmf(p.lambda, observed_claims);
}

double brier_divergence(const PoissonForecast& p, const PoissonForecast& q) {
    return brier_expected(q, q) - brier_expected(p, q);
}

double log_divergence(const PoissonForecast& p, const PoissonForecast& q) {
    return log_expected(q, q) - log_expected(p, q);
}

} // namespace bonuswalk
