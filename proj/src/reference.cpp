#include "bonuswalk/reference.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bonuswalk::reference {

MethodOneCurve method1_curve(const BmsSpec& spec, const GammaPrior& prior, int horizon,
                             const QuadratureConfig& qc) {
    spec.validate();
    MethodOneCurve curve;
    curve.system = spec.name;
    curve.horizon = horizon;
    curve.labels = spec.labels;
    curve.cells.assign(spec.n_classes, std::vector<CurveCell>(horizon + 1));
    for (int c = 1; c <= spec.n_classes; ++c) {
        for (int t = 0; t <= horizon; ++t) {
            try {
                double est = estimate_method1(spec, prior, ClassTenureObservation{c, t}, qc, 1);
                curve.cells[c - 1][t] = CurveCell{est, true};
            } catch (const UnreachableState&) {
                // stays marked unreachable
            }
        }
    }
    return curve;
}

Portfolio simulate_portfolio(const BmsSpec& spec, const GammaPrior& prior, std::size_t n,
                             int years, std::uint64_t seed) {
    spec.validate();
    prior.validate();
    if (n < 1) {
        throw ValidationError("simulate_portfolio: n must be >= 1");
    }
    Portfolio pf;
    pf.system = spec.name;
    pf.generating_prior = prior;
    pf.years = years;
    pf.seed = seed;
    pf.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Philox4x32 rng(seed, static_cast<std::uint64_t>(i));
        const double lambda = sample_gamma(rng, prior.alpha, prior.beta);
        pf.records.push_back(simulate_policy(spec, lambda, years, rng));
    }
    return pf;
}

namespace {

struct Accumulator {
    double sum_expected_brier = 0.0;
    double sum_expected_log = 0.0;
    double sum_observed_brier = 0.0;
    double sum_observed_log = 0.0;
    std::size_t expected_log_finite = 0;
    std::size_t observed_log_finite = 0;
    std::size_t expected_log_neg_inf = 0;
    std::size_t observed_log_neg_inf = 0;
    std::size_t count = 0;

    void add(double eb, double el, double ob, double ol) {
        ++count;
        sum_expected_brier += eb;
        sum_observed_brier += ob;
        if (std::isinf(el)) {
            ++expected_log_neg_inf;
        } else {
            sum_expected_log += el;
            ++expected_log_finite;
        }
        if (std::isinf(ol)) {
            ++observed_log_neg_inf;
        } else {
            sum_observed_log += ol;
            ++observed_log_finite;
        }
    }

    MethodScore finish(const std::string& name, std::size_t fallback_count) const {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        MethodScore ms;
        ms.method = name;
        ms.mean_expected_brier = count ? sum_expected_brier / static_cast<double>(count) : nan;
        ms.mean_observed_brier = count ? sum_observed_brier / static_cast<double>(count) : nan;
        ms.mean_expected_log =
            expected_log_finite ? sum_expected_log / static_cast<double>(expected_log_finite) : nan;
        ms.mean_observed_log =
            observed_log_finite ? sum_observed_log / static_cast<double>(observed_log_finite) : nan;
        ms.expected_log_neg_inf = expected_log_neg_inf;
        ms.observed_log_neg_inf = observed_log_neg_inf;
        ms.fallback_count = fallback_count;
        return ms;
    }
};

} // namespace

ScoreReport run_comparison(const Portfolio& portfolio, const BmsSpec& spec,
                           const QuadratureConfig& qc) {
    if (portfolio.records.empty()) {
        throw ValidationError("run_comparison: empty portfolio");
    }
    const std::vector<PolicyObservables> observables = observables_of(portfolio);

    std::vector<ExposureRecord> exposure;
    exposure.reserve(observables.size());
    for (const auto& obs : observables) {
        exposure.push_back(
            ExposureRecord{obs.total_claims(), static_cast<double>(obs.tenure_years)});
    }
    const GammaPrior estimated = estimate_prior_mom(exposure);

    std::vector<ClassObservation> last_year;
    last_year.reserve(observables.size());
    for (const auto& obs : observables) {
        last_year.push_back(ClassObservation{obs.final_year_start_class(), obs.final_year_claims()});
    }
    const std::vector<ClassEstimate> by_class =
        estimate_method2(last_year, spec.n_classes, estimated);

    ScoreReport report;
    report.system = portfolio.system;
    report.portfolio_size = portfolio.records.size();
    report.years = portfolio.years;
    report.seed = portfolio.seed;
    report.generating_prior = portfolio.generating_prior;
    report.estimated_prior = estimated;

    Accumulator acc[4];
    std::size_t method2_fallbacks = 0;
    for (std::size_t i = 0; i < portfolio.records.size(); ++i) {
        const PolicyRecord& rec = portfolio.records[i];
        const PolicyObservables& obs = observables[i];
        const PoissonForecast truth(rec.true_lambda);

        const double est1 = estimate_method1(
            spec, estimated, ClassTenureObservation{obs.final_class(), obs.tenure_years}, qc, 1);
        const ClassEstimate& ce = by_class[obs.final_year_start_class() - 1];
        if (ce.fallback) {
            ++method2_fallbacks;
        }
        const double est3 = estimate_method3(estimated, obs.total_claims(),
                                             static_cast<double>(obs.tenure_years));
        const double ests[4] = {est1, ce.lambda_hat, est3, estimated.mean()};
        for (int m = 0; m < 4; ++m) {
            const PoissonForecast p(ests[m]);
            acc[m].add(brier_expected(p, truth), log_expected(p, truth),
                       brier_observed(p, rec.held_out_claims),
                       log_observed(p, rec.held_out_claims));
        }
    }
    for (int m = 0; m < 4; ++m) {
        report.methods.push_back(
            acc[m].finish(kMethodNames[m], m == 1 ? method2_fallbacks : 0));
    }
    return report;
}

} // namespace bonuswalk::reference
