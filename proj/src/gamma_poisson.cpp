#include "bonuswalk/gamma_poisson.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/text.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

namespace bonuswalk {

void GammaPrior::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("gamma prior: alpha must be finite and > 0");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ValidationError("gamma prior: beta must be finite and > 0");
    }
}

double gamma_pdf(const GammaPrior& prior, double x) {
    prior.validate();
    if (!(x >= 0.0)) {
        throw ValidationError("gamma_pdf: x must be >= 0");
    }
    if (x == 0.0) {
        if (prior.alpha > 1.0) return 0.0;
        if (prior.alpha == 1.0) return prior.beta;
        return std::numeric_limits<double>::infinity();
    }
    double log_pdf = (prior.alpha - 1.0) * std::log(x) + prior.alpha * std::log(prior.beta) -
                     prior.beta * x - std::lgamma(prior.alpha);
    return std::exp(log_pdf);
}

double gamma_quantile(const GammaPrior& prior, double p) {
    prior.validate();
    if (!(p >= 0.0 && p < 1.0)) {
        throw ValidationError("gamma_quantile: p must be in [0, 1)");
    }
    return boost::math::gamma_p_inv(prior.alpha, p) / prior.beta;
}

double poisson_pmf(double lambda, int k) {
    double lp = poisson_log_pmf(lambda, k);
    return std::isinf(lp) ? 0.0 : std::exp(lp);
}

double poisson_log_pmf(double lambda, int k) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("poisson pmf: lambda must be finite and >= 0");
    }
    if (k < 0) {
        throw ValidationError("poisson pmf: k must be >= 0");
    }
    if (lambda == 0.0) {
        return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }
    return k * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0);
}

double neg_binomial_pmf(const GammaPrior& prior, double exposure_years, int k) {
    prior.validate();
    if (!(exposure_years > 0.0) || !std::isfinite(exposure_years)) {
        throw ValidationError("neg_binomial_pmf: exposure must be finite and > 0");
    }
    if (k < 0) {
        throw ValidationError("neg_binomial_pmf: k must be >= 0");
    }
    const double a = prior.alpha;
    const double b = prior.beta;
    const double t = exposure_years;
    double log_pmf = std::lgamma(a + k) - std::lgamma(a) - std::lgamma(static_cast<double>(k) + 1.0) +
                     a * std::log(b / (t + b)) + k * std::log(t / (t + b));
    return std::exp(log_pmf);
}

namespace detail {

GammaPrior mom_from_sums(double sum_x, double sum_x2, double sum_t, double sum_t2) {
    if (sum_x <= 0.0) {
        throw EmptyData("method-of-moments fit: no claims in the data");
    }
    if (!(sum_t > 0.0) || !(sum_t2 > 0.0)) {
        throw ValidationError("method-of-moments fit: exposures must be positive");
    }
    // 1/beta = (T/S)(B/A - 1) - A/T  ==  (T^2 (B - A) - A^2 S) / (A S T)
    const double denominator = sum_t * sum_t * (sum_x2 - sum_x) - sum_x * sum_x * sum_t2;
    if (denominator <= 0.0) {
        throw InsufficientDispersion(
            "method-of-moments fit: empirical dispersion is at or below pure Poisson; "
            "no gamma mixture matches these moments");
    }
    GammaPrior prior;
    prior.beta = sum_x * sum_t2 * sum_t / denominator;
    prior.alpha = prior.beta * sum_x / sum_t;
    prior.validate();
    return prior;
}

} // namespace detail

GammaPrior estimate_prior_mom(std::span<const ExposureRecord> records) {
    if (records.empty()) {
        throw ValidationError("estimate_prior_mom: no records");
    }
    double sum_x = 0.0, sum_x2 = 0.0, sum_t = 0.0, sum_t2 = 0.0;
    for (const auto& r : records) {
        if (r.claims < 0) {
            throw ValidationError("estimate_prior_mom: negative claim count");
        }
        if (!(r.exposure_years > 0.0) || !std::isfinite(r.exposure_years)) {
            throw ValidationError("estimate_prior_mom: exposure_years must be finite and > 0");
        }
        const double x = static_cast<double>(r.claims);
        sum_x += x;
        sum_x2 += x * x;
        sum_t += r.exposure_years;
        sum_t2 += r.exposure_years * r.exposure_years;
    }
    return detail::mom_from_sums(sum_x, sum_x2, sum_t, sum_t2);
}

std::vector<ExposureRecord> read_exposure_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(source_name + ": empty file (header required)");
    }
    auto header = split_char(trim(line), ',');
    int claims_col = -1, exposure_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        if (name == "claims") claims_col = static_cast<int>(i);
        else if (name == "exposure_years") exposure_col = static_cast<int>(i);
    }
    if (claims_col < 0 || exposure_col < 0) {
        throw ValidationError(source_name +
                              ":1: header must name columns 'claims' and 'exposure_years'");
    }

    std::vector<ExposureRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_char(line, ',');
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (static_cast<int>(cells.size()) <= std::max(claims_col, exposure_col)) {
            throw ValidationError(where + ": expected " + std::to_string(header.size()) +
                                  " columns, got " + std::to_string(cells.size()));
        }
        ExposureRecord rec;
        rec.claims = parse_int64(cells[claims_col], where + ": claims");
        rec.exposure_years = parse_double(cells[exposure_col], where + ": exposure_years");
        if (rec.claims < 0) {
            throw ValidationError(where + ": claims must be >= 0");
        }
        if (!(rec.exposure_years > 0.0)) {
            throw ValidationError(where + ": exposure_years must be > 0");
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<ExposureRecord> read_exposure_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_exposure_csv(in, path);
}

} // namespace bonuswalk
