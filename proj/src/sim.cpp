#include "bonuswalk/sim.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/scoring.hpp"
#include "bonuswalk/text.hpp"
#include "bonuswalk/threads.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace bonuswalk {

long long PolicyObservables::total_claims() const {
    long long total = 0;
    for (int k : yearly_claims) {
        total += k;
    }
    return total;
}

std::vector<PolicyObservables> observables_of(const Portfolio& portfolio) {
    std::vector<PolicyObservables> out;
    out.reserve(portfolio.records.size());
    for (const auto& rec : portfolio.records) {
        out.push_back(PolicyObservables{rec.tenure_years, rec.yearly_claims, rec.class_trajectory});
    }
    return out;
}

PolicyRecord simulate_policy(const BmsSpec& spec, double lambda, int years, Philox4x32& rng) {
    if (years < 1) {
        throw ValidationError("simulate_policy: years must be >= 1");
    }
    PolicyRecord rec;
    rec.true_lambda = lambda;
    rec.tenure_years = years;
    rec.yearly_claims.reserve(years);
    rec.class_trajectory.reserve(years + 1);
    rec.class_trajectory.push_back(spec.initial_index);
    int current = spec.initial_index;
    for (int y = 0; y < years; ++y) {
        const int claims = sample_poisson(rng, lambda);
        rec.yearly_claims.push_back(claims);
        current = claim_class_target(spec, current, claims);
        rec.class_trajectory.push_back(current);
    }
    rec.held_out_claims = sample_poisson(rng, lambda);
    return rec;
}

Portfolio simulate_portfolio(const BmsSpec& spec, const GammaPrior& prior, std::size_t n,
                             int years, std::uint64_t seed, int threads) {
    spec.validate();
    prior.validate();
    if (n < 1) {
        throw ValidationError("simulate_portfolio: n must be >= 1");
    }
    if (years < 1) {
        throw ValidationError("simulate_portfolio: years must be >= 1");
    }

    Portfolio pf;
    pf.system = spec.name;
    pf.generating_prior = prior;
    pf.years = years;
    pf.seed = seed;
    pf.records.resize(n);

    const int nthreads = resolve_threads(threads);
    (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        Philox4x32 rng(seed, static_cast<std::uint64_t>(i));
        const double lambda = sample_gamma(rng, prior.alpha, prior.beta);
        pf.records[i] = simulate_policy(spec, lambda, years, rng);
    }
    return pf;
}

namespace {

std::vector<std::string> canonical_methods(const std::vector<std::string>& requested) {
    std::vector<std::string> valid(std::begin(kMethodNames), std::end(kMethodNames));
    if (requested.empty()) {
        return valid;
    }
    for (const auto& name : requested) {
        if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
            std::string all;
            for (const auto& v : valid) {
                all += (all.empty() ? "" : ", ") + v;
            }
            throw ValidationError("unknown method '" + name + "' (valid: " + all + ")");
        }
    }
    std::vector<std::string> out;
    for (const auto& v : valid) {
        if (std::find(requested.begin(), requested.end(), v) != requested.end()) {
            out.push_back(v);
        }
    }
    return out;
}

struct ScoreColumns {
    std::vector<double> expected_brier;
    std::vector<double> expected_log;
    std::vector<double> observed_brier;
    std::vector<double> observed_log;
};

// Scores one method's per-policy estimates against truth and the held-out
// year. Parallel over policies; each slot is written once.
ScoreColumns score_policies(const Portfolio& pf, const std::vector<double>& lambda_hat,
                            int nthreads) {
    const std::size_t n = pf.records.size();
    ScoreColumns cols;
    cols.expected_brier.resize(n);
    cols.expected_log.resize(n);
    cols.observed_brier.resize(n);
    cols.observed_log.resize(n);
    (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const PolicyRecord& rec = pf.records[i];
        const PoissonForecast p(lambda_hat[i]);
        const PoissonForecast q(rec.true_lambda);
        cols.expected_brier[i] = brier_expected(p, q);
        cols.expected_log[i] = log_expected(p, q);
        cols.observed_brier[i] = brier_observed(p, rec.held_out_claims);
        cols.observed_log[i] = log_observed(p, rec.held_out_claims);
    }
    return cols;
}

// Mean over finite entries, in fixed policy order; counts the -inf entries.
void reduce_column(const std::vector<double>& values, double& mean, std::size_t& neg_inf_count) {
    double sum = 0.0;
    std::size_t finite = 0;
    neg_inf_count = 0;
    for (double v : values) {
        if (std::isinf(v)) {
            ++neg_inf_count;
        } else {
            sum += v;
            ++finite;
        }
    }
    mean = finite > 0 ? sum / static_cast<double>(finite)
                      : std::numeric_limits<double>::quiet_NaN();
}

MethodScore reduce_method(const std::string& name, const ScoreColumns& cols,
                          std::size_t fallback_count) {
    MethodScore ms;
    ms.method = name;
    std::size_t ignored = 0;
    reduce_column(cols.expected_brier, ms.mean_expected_brier, ignored);
    reduce_column(cols.expected_log, ms.mean_expected_log, ms.expected_log_neg_inf);
    reduce_column(cols.observed_brier, ms.mean_observed_brier, ignored);
    reduce_column(cols.observed_log, ms.mean_observed_log, ms.observed_log_neg_inf);
    ms.fallback_count = fallback_count;
    return ms;
}

} // namespace

MethodEstimates estimate_all_methods(const BmsSpec& spec,
                                     std::span<const PolicyObservables> observables,
                                     const QuadratureConfig& qc, int threads) {
    if (observables.empty()) {
        throw ValidationError("estimate_all_methods: empty portfolio");
    }
    const std::size_t n = observables.size();

    std::vector<ExposureRecord> exposure;
    exposure.reserve(n);
    int max_tenure = 0;
    for (const auto& obs : observables) {
        if (obs.tenure_years < 1 ||
            static_cast<int>(obs.yearly_claims.size()) != obs.tenure_years ||
            static_cast<int>(obs.class_trajectory.size()) != obs.tenure_years + 1) {
            throw ValidationError("estimate_all_methods: malformed observables");
        }
        exposure.push_back(
            ExposureRecord{obs.total_claims(), static_cast<double>(obs.tenure_years)});
        max_tenure = std::max(max_tenure, obs.tenure_years);
    }

    MethodEstimates est;
    est.estimated_prior = estimate_prior_mom(exposure);

    // method.1: shared matrix powers give every (class, tenure) cell at once.
    const MethodOneCurve curve =
        estimate_method1_curve(spec, est.estimated_prior, max_tenure, qc, threads);
    est.method1.reserve(n);
    for (const auto& obs : observables) {
        const CurveCell& cell = curve.at(obs.final_class(), obs.tenure_years);
        if (!cell.reachable) {
            throw UnreachableState(
                "estimate_all_methods: observed class " + std::to_string(obs.final_class()) +
                " has zero probability after " + std::to_string(obs.tenure_years) + " steps");
        }
        est.method1.push_back(cell.lambda_hat);
    }

    // method.2: pooled last-year statistics, grouped by start-of-year class.
    std::vector<ClassObservation> last_year;
    last_year.reserve(n);
    for (const auto& obs : observables) {
        last_year.push_back(ClassObservation{obs.final_year_start_class(), obs.final_year_claims()});
    }
    const std::vector<ClassEstimate> by_class =
        estimate_method2(last_year, spec.n_classes, est.estimated_prior);
    est.method2.reserve(n);
    est.method2_fallback.reserve(n);
    for (const auto& obs : observables) {
        const ClassEstimate& ce = by_class[obs.final_year_start_class() - 1];
        est.method2.push_back(ce.lambda_hat);
        est.method2_fallback.push_back(ce.fallback);
    }

    // method.3 and the no-information baseline.
    est.method3.reserve(n);
    est.baseline.reserve(n);
    const double prior_mean = est.estimated_prior.mean();
    for (const auto& obs : observables) {
        est.method3.push_back(estimate_method3(est.estimated_prior, obs.total_claims(),
                                               static_cast<double>(obs.tenure_years)));
        est.baseline.push_back(prior_mean);
    }
    return est;
}

ScoreReport run_comparison(const Portfolio& portfolio, const BmsSpec& spec,
                           const QuadratureConfig& qc, const std::vector<std::string>& methods,
                           int threads) {
    if (portfolio.records.empty()) {
        throw ValidationError("run_comparison: empty portfolio");
    }
    const std::vector<std::string> selected = canonical_methods(methods);
    const int nthreads = resolve_threads(threads);

    const std::vector<PolicyObservables> observables = observables_of(portfolio);
    const MethodEstimates est = estimate_all_methods(spec, observables, qc, threads);

    ScoreReport report;
    report.system = portfolio.system;
    report.portfolio_size = portfolio.records.size();
    report.years = portfolio.years;
    report.seed = portfolio.seed;
    report.generating_prior = portfolio.generating_prior;
    report.estimated_prior = est.estimated_prior;

    for (const auto& name : selected) {
        const std::vector<double>* lambda_hat = nullptr;
        std::size_t fallback_count = 0;
        if (name == "method.1") {
            lambda_hat = &est.method1;
        } else if (name == "method.2") {
            lambda_hat = &est.method2;
            fallback_count = static_cast<std::size_t>(
                std::count(est.method2_fallback.begin(), est.method2_fallback.end(), true));
        } else if (name == "method.3") {
            lambda_hat = &est.method3;
        } else {
            lambda_hat = &est.baseline;
        }
        const ScoreColumns cols = score_policies(portfolio, *lambda_hat, nthreads);
        report.methods.push_back(reduce_method(name, cols, fallback_count));
    }
    return report;
}

namespace {
bool double_eq_nan(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}
} // namespace

bool operator==(const MethodScore& a, const MethodScore& b) {
    return a.method == b.method && double_eq_nan(a.mean_expected_brier, b.mean_expected_brier) &&
           double_eq_nan(a.mean_expected_log, b.mean_expected_log) &&
           double_eq_nan(a.mean_observed_brier, b.mean_observed_brier) &&
           double_eq_nan(a.mean_observed_log, b.mean_observed_log) &&
           a.expected_log_neg_inf == b.expected_log_neg_inf &&
           a.observed_log_neg_inf == b.observed_log_neg_inf &&
           a.fallback_count == b.fallback_count;
}

bool operator==(const ScoreReport& a, const ScoreReport& b) {
    return a.system == b.system && a.portfolio_size == b.portfolio_size && a.years == b.years &&
           a.seed == b.seed && a.generating_prior.alpha == b.generating_prior.alpha &&
           a.generating_prior.beta == b.generating_prior.beta &&
           a.estimated_prior.alpha == b.estimated_prior.alpha &&
           a.estimated_prior.beta == b.estimated_prior.beta && a.methods == b.methods;
}

void write_report_csv(const ScoreReport& report, std::ostream& out, const std::string& run_id) {
    if (!run_id.empty()) {
        out << "# run_id=" << run_id << "\n";
    }
    out << "method,mean_expected_brier,mean_expected_log,mean_observed_brier,mean_observed_log,"
           "expected_log_neg_inf,observed_log_neg_inf,fallback_count\n";
    for (const auto& m : report.methods) {
        out << m.method << ',' << format_double(m.mean_expected_brier) << ','
            << format_double(m.mean_expected_log) << ',' << format_double(m.mean_observed_brier)
            << ',' << format_double(m.mean_observed_log) << ',' << m.expected_log_neg_inf << ','
            << m.observed_log_neg_inf << ',' << m.fallback_count << "\n";
    }
}

namespace {

nlohmann::json prior_to_json(const GammaPrior& prior) {
    return nlohmann::json{{"alpha", prior.alpha}, {"beta", prior.beta}};
}

GammaPrior prior_from_json(const nlohmann::json& j) {
    return GammaPrior{j.at("alpha").get<double>(), j.at("beta").get<double>()};
}

} // namespace

std::string report_to_json(const ScoreReport& report, const std::string& run_id) {
    nlohmann::json j;
    j["run_id"] = run_id;
    j["system"] = report.system;
    j["portfolio_size"] = report.portfolio_size;
    j["years"] = report.years;
    j["seed"] = report.seed;
    j["generating_prior"] = prior_to_json(report.generating_prior);
    j["estimated_prior"] = prior_to_json(report.estimated_prior);
    j["methods"] = nlohmann::json::array();
    for (const auto& m : report.methods) {
        j["methods"].push_back(nlohmann::json{
            {"method", m.method},
            {"mean_expected_brier", m.mean_expected_brier},
            {"mean_expected_log", m.mean_expected_log},
            {"mean_observed_brier", m.mean_observed_brier},
            {"mean_observed_log", m.mean_observed_log},
            {"expected_log_neg_inf", m.expected_log_neg_inf},
            {"observed_log_neg_inf", m.observed_log_neg_inf},
            {"fallback_count", m.fallback_count},
        });
    }
    return j.dump(2) + "\n";
}

ScoreReport report_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    // nlohmann serializes NaN as null; map it back.
    auto as_double = [](const nlohmann::json& node) {
        return node.is_null() ? std::numeric_limits<double>::quiet_NaN() : node.get<double>();
    };
    ScoreReport report;
    report.system = j.at("system").get<std::string>();
    report.portfolio_size = j.at("portfolio_size").get<std::size_t>();
    report.years = j.at("years").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.generating_prior = prior_from_json(j.at("generating_prior"));
    report.estimated_prior = prior_from_json(j.at("estimated_prior"));
    for (const auto& jm : j.at("methods")) {
        MethodScore m;
        m.method = jm.at("method").get<std::string>();
        m.mean_expected_brier = as_double(jm.at("mean_expected_brier"));
        m.mean_expected_log = as_double(jm.at("mean_expected_log"));
        m.mean_observed_brier = as_double(jm.at("mean_observed_brier"));
        m.mean_observed_log = as_double(jm.at("mean_observed_log"));
        m.expected_log_neg_inf = jm.at("expected_log_neg_inf").get<std::size_t>();
        m.observed_log_neg_inf = jm.at("observed_log_neg_inf").get<std::size_t>();
        m.fallback_count = jm.at("fallback_count").get<std::size_t>();
        report.methods.push_back(std::move(m));
    }
    return report;
}

std::vector<std::string> export_report(const ScoreReport& report, const std::string& base_path,
                                       const std::string& run_id,
                                       const std::optional<std::vector<std::string>>& methods) {
    ScoreReport rendered = report;
    if (methods.has_value()) {
        const std::vector<std::string> keep = canonical_methods(*methods); // validates names
        if (methods->empty()) {
            std::string all;
            for (const auto& v : kMethodNames) {
                all += (all.empty() ? "" : ", ") + std::string(v);
            }
            throw ValidationError("export_report: empty method subset (valid: " + all + ")");
        }
        std::vector<MethodScore> filtered;
        for (const auto& m : report.methods) {
            if (std::find(keep.begin(), keep.end(), m.method) != keep.end()) {
                filtered.push_back(m);
            }
        }
        rendered.methods = std::move(filtered);
    }

    const std::string csv_path = base_path + ".csv";
    const std::string json_path = base_path + ".json";
    {
        std::ofstream out(csv_path);
        if (!out) {
            throw IoError("cannot open '" + csv_path + "' for writing");
        }
        write_report_csv(rendered, out, run_id);
        if (!out.good()) {
            throw IoError("write failed for '" + csv_path + "'");
        }
    }
    {
        std::ofstream out(json_path);
        if (!out) {
            throw IoError("cannot open '" + json_path + "' for writing");
        }
        out << report_to_json(rendered, run_id);
        if (!out.good()) {
            throw IoError("write failed for '" + json_path + "'");
        }
    }
    return {csv_path, json_path};
}

void write_portfolio_csv(const Portfolio& portfolio, std::ostream& out, const std::string& run_id) {
    if (!run_id.empty()) {
        out << "# run_id=" << run_id << "\n";
    }
    out << "policy_id,true_lambda,tenure_years,yearly_claims,class_trajectory,held_out_claims\n";
    for (std::size_t i = 0; i < portfolio.records.size(); ++i) {
        const PolicyRecord& rec = portfolio.records[i];
        out << i << ',' << format_double(rec.true_lambda) << ',' << rec.tenure_years << ',';
        for (std::size_t y = 0; y < rec.yearly_claims.size(); ++y) {
            out << (y ? ";" : "") << rec.yearly_claims[y];
        }
        out << ',';
        for (std::size_t y = 0; y < rec.class_trajectory.size(); ++y) {
            out << (y ? ";" : "") << rec.class_trajectory[y];
        }
        out << ',' << rec.held_out_claims << "\n";
    }
}

} // namespace bonuswalk
