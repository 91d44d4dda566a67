#pragma once

// Seeded Monte-Carlo portfolio generation and the method-comparison
// experiment: simulate ground truth, hand each estimator only its own
// information set, and score every method with both rules in both forms.
//
// Information sets (the estimators never see the generating parameters or
// each policyholder's true frequency; the prior they use is re-estimated
// from the portfolio by the method of moments):
//   method.1 — (class after the final year, tenure);
//   method.2 — (class at the start of the final year, final-year claims),
//              pooled across the portfolio;
//   method.3 — (total observed claims, tenure);
//   baseline — the estimated prior mean, identical for everyone.
// Expected scores are computed against each policyholder's true frequency;
// observed scores against one held-out simulated year.

#include "bonuswalk/bms.hpp"
#include "bonuswalk/estimators.hpp"
#include "bonuswalk/gamma_poisson.hpp"
#include "bonuswalk/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bonuswalk {

struct PolicyRecord {
    double true_lambda = 0.0;
    int tenure_years = 0;
    std::vector<int> yearly_claims;   // size tenure_years
    std::vector<int> class_trajectory; // size tenure_years + 1, starts at the entry class
    int held_out_claims = 0;           // one extra simulated year, used only for observed scores
};

struct Portfolio {
    std::string system;
    GammaPrior generating_prior;
    int years = 0;
    std::uint64_t seed = 0;
    std::vector<PolicyRecord> records;
};

// What the estimators are allowed to look at. Constructing this type is the
// information barrier: it has no true_lambda and no held-out year.
struct PolicyObservables {
    int tenure_years = 0;
    std::vector<int> yearly_claims;
    std::vector<int> class_trajectory;

    long long total_claims() const;
    int final_class() const { return class_trajectory.back(); }
    int final_year_start_class() const { return class_trajectory[class_trajectory.size() - 2]; }
    int final_year_claims() const { return yearly_claims.back(); }
};

std::vector<PolicyObservables> observables_of(const Portfolio& portfolio);

// One policyholder from an already-positioned substream: true frequency
// `lambda`, `years` Poisson years walked through the rules, plus the
// held-out year. Exposed so tests can pin the frequency directly.
PolicyRecord simulate_policy(const BmsSpec& spec, double lambda, int years, Philox4x32& rng);

// Policy i draws from substream i of `seed`: portfolios are bit-identical
// across runs, thread counts, and portfolio-size changes (growing n appends
// policies without reshuffling existing ones).
Portfolio simulate_portfolio(const BmsSpec& spec, const GammaPrior& prior, std::size_t n,
                             int years, std::uint64_t seed, int threads = 0);

inline constexpr const char* kMethodNames[] = {"method.1", "method.2", "method.3", "baseline"};

// Per-policy estimates for every method, from observables only.
struct MethodEstimates {
    GammaPrior estimated_prior;
    std::vector<double> method1;
    std::vector<double> method2;
    std::vector<bool> method2_fallback;
    std::vector<double> method3;
    std::vector<double> baseline;
};

MethodEstimates estimate_all_methods(const BmsSpec& spec,
                                     std::span<const PolicyObservables> observables,
                                     const QuadratureConfig& qc = {}, int threads = 0);

struct MethodScore {
    std::string method;
    double mean_expected_brier = 0.0;
    double mean_expected_log = 0.0;  // mean over the finite entries
    double mean_observed_brier = 0.0;
    double mean_observed_log = 0.0;  // mean over the finite entries
    std::size_t expected_log_neg_inf = 0; // finite entries + this = portfolio size
    std::size_t observed_log_neg_inf = 0;
    std::size_t fallback_count = 0;
};

struct ScoreReport {
    std::string system;
    std::size_t portfolio_size = 0;
    int years = 0;
    std::uint64_t seed = 0;
    GammaPrior generating_prior;
    GammaPrior estimated_prior;
    std::vector<MethodScore> methods;
};

// Value equality; NaN means (no finite entries) compare equal to NaN.
bool operator==(const MethodScore& a, const MethodScore& b);
bool operator==(const ScoreReport& a, const ScoreReport& b);

// Runs the full experiment. `methods` selects a subset of kMethodNames (the
// report keeps canonical order); an empty selection is an error listing the
// valid names. Propagates InsufficientDispersion/EmptyData from the prior fit.
ScoreReport run_comparison(const Portfolio& portfolio, const BmsSpec& spec,
                           const QuadratureConfig& qc = {},
                           const std::vector<std::string>& methods = {}, int threads = 0);

// CSV: one row per method, fixed column order; `# run_id=` comment first.
void write_report_csv(const ScoreReport& report, std::ostream& out, const std::string& run_id);

std::string report_to_json(const ScoreReport& report, const std::string& run_id);
ScoreReport report_from_json(const std::string& json_text);

// Writes <base>.csv and <base>.json; returns the paths written. `methods`,
// when given, restricts the rendered rows; an explicitly empty subset is an
// error naming the valid methods.
std::vector<std::string> export_report(const ScoreReport& report, const std::string& base_path,
                                       const std::string& run_id,
                                       const std::optional<std::vector<std::string>>& methods =
                                           std::nullopt);

void write_portfolio_csv(const Portfolio& portfolio, std::ostream& out, const std::string& run_id);

} // namespace bonuswalk
