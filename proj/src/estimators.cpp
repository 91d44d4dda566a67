#include "bonuswalk/estimators.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/text.hpp"
#include "bonuswalk/threads.hpp"

#include <cmath>
#include <ostream>

namespace bonuswalk {

namespace detail {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

PosteriorGrid make_posterior_grid(const GammaPrior& prior, const QuadratureConfig& qc) {
    qc.validate();
    prior.validate();

    constexpr int kPanelPoints = 16;
    constexpr double kGradeRatio = 4.0;
    const int panels = (qc.node_count + kPanelPoints - 1) / kPanelPoints;
    const double cutoff = gamma_quantile(prior, qc.upper_quantile);

    std::vector<double> gl_nodes, gl_weights;
    gauss_legendre(kPanelPoints, gl_nodes, gl_weights);

    PosteriorGrid grid;
    grid.lambda.reserve(static_cast<std::size_t>(panels) * kPanelPoints);
    grid.weight.reserve(static_cast<std::size_t>(panels) * kPanelPoints);

    double lower = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double upper = cutoff * std::pow(kGradeRatio, -static_cast<double>(panels - 1 - p));
        const double mid = 0.5 * (lower + upper);
        const double halfwidth = 0.5 * (upper - lower);
        for (int j = 0; j < kPanelPoints; ++j) {
            const double x = mid + halfwidth * gl_nodes[j];
            grid.lambda.push_back(x);
            grid.weight.push_back(halfwidth * gl_weights[j] * gamma_pdf(prior, x));
        }
        lower = upper;
    }
    return grid;
}

} // namespace detail

void QuadratureConfig::validate() const {
    if (node_count < 16) {
        throw ValidationError("quadrature: node_count must be >= 16");
    }
    if (!(upper_quantile > 0.9 && upper_quantile < 1.0)) {
        throw ValidationError("quadrature: upper_quantile must be in (0.9, 1)");
    }
}

double estimate_method1(const BmsSpec& spec, const GammaPrior& prior,
                        const ClassTenureObservation& obs, const QuadratureConfig& qc,
                        int threads) {
    spec.validate();
    if (obs.class_index < 1 || obs.class_index > spec.n_classes) {
        throw ValidationError("estimate_method1: class index out of range");
    }
    if (obs.tenure_steps < 0) {
        throw ValidationError("estimate_method1: tenure must be >= 0");
    }

    const detail::PosteriorGrid grid = detail::make_posterior_grid(prior, qc);
    const int node_count = static_cast<int>(grid.lambda.size());
    std::vector<double> likelihood(node_count);

    const int nthreads = resolve_threads(threads);
    (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (int j = 0; j < node_count; ++j) {
        likelihood[j] =
            class_probability(spec, grid.lambda[j], obs.tenure_steps)[obs.class_index - 1];
    }

    // Fixed ascending-node summation keeps results identical across thread counts.
    double denom = 0.0, numer = 0.0;
    for (int j = 0; j < node_count; ++j) {
        const double wl = grid.weight[j] * likelihood[j];
        denom += wl;
        numer += wl * grid.lambda[j];
    }
    if (!(denom > 0.0)) {
        throw UnreachableState("estimate_method1: class " + std::to_string(obs.class_index) +
                               " is unreachable in " + std::to_string(obs.tenure_steps) +
                               " steps from class " + std::to_string(spec.initial_index));
    }
    return numer / denom;
}

MethodOneCurve estimate_method1_curve(const BmsSpec& spec, const GammaPrior& prior, int horizon,
                                      const QuadratureConfig& qc, int threads) {
    spec.validate();
    if (horizon < 0) {
        throw ValidationError("estimate_method1_curve: horizon must be >= 0");
    }

    const detail::PosteriorGrid grid = detail::make_posterior_grid(prior, qc);
    const int node_count = static_cast<int>(grid.lambda.size());
    const int n = spec.n_classes;
    const std::size_t per_node = static_cast<std::size_t>(horizon + 1) * n;

    // likelihood[j * per_node + t * n + c] = M(lambda_j)^t [initial, c+1]
    std::vector<double> likelihood(static_cast<std::size_t>(node_count) * per_node, 0.0);

    const int nthreads = resolve_threads(threads);
    (void)nthreads;
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (int j = 0; j < node_count; ++j) {
        const TransitionMatrix m = build_transition_matrix(spec, grid.lambda[j]);
        double* base = &likelihood[static_cast<std::size_t>(j) * per_node];
        std::vector<double> row(n, 0.0), next(n, 0.0);
        row[spec.initial_index - 1] = 1.0;
        base[spec.initial_index - 1] = 1.0;
        for (int t = 1; t <= horizon; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int i = 0; i < n; ++i) {
                const double ri = row[i];
                if (ri == 0.0) {
                    continue;
                }
                const double* mrow = &m.entries[static_cast<std::size_t>(i) * n];
                for (int c = 0; c < n; ++c) {
                    next[c] += ri * mrow[c];
                }
            }
            row.swap(next);
            double* dst = base + static_cast<std::size_t>(t) * n;
            for (int c = 0; c < n; ++c) {
                dst[c] = row[c];
            }
        }
    }

    MethodOneCurve curve;
    curve.system = spec.name;
    curve.horizon = horizon;
    curve.labels = spec.labels;
    curve.cells.assign(n, std::vector<CurveCell>(horizon + 1));
    for (int c = 0; c < n; ++c) {
        for (int t = 0; t <= horizon; ++t) {
            double denom = 0.0, numer = 0.0;
            const std::size_t off = static_cast<std::size_t>(t) * n + c;
            for (int j = 0; j < node_count; ++j) {
                const double wl = grid.weight[j] * likelihood[static_cast<std::size_t>(j) * per_node + off];
                denom += wl;
                numer += wl * grid.lambda[j];
            }
            if (denom > 0.0) {
                curve.cells[c][t] = CurveCell{numer / denom, true};
            }
        }
    }
    return curve;
}

void write_curve_csv(const MethodOneCurve& curve, std::ostream& out, const std::string& run_id) {
    if (!run_id.empty()) {
        out << "# run_id=" << run_id << "\n";
    }
    out << "class_label,year,lambda_hat,reachable\n";
    for (std::size_t c = 0; c < curve.cells.size(); ++c) {
        for (int t = 0; t <= curve.horizon; ++t) {
            const CurveCell& cell = curve.cells[c][t];
            out << curve.labels[c] << ',' << t << ',';
            if (cell.reachable) {
                out << format_double(cell.lambda_hat);
            }
            out << ',' << (cell.reachable ? "true" : "false") << "\n";
        }
    }
}

std::vector<ClassEstimate> estimate_method2(std::span<const ClassObservation> last_year,
                                            int n_classes, const GammaPrior& fallback_prior) {
    fallback_prior.validate();
    if (n_classes < 1) {
        throw ValidationError("estimate_method2: n_classes must be >= 1");
    }
    std::vector<double> sums(n_classes, 0.0);
    std::vector<std::size_t> counts(n_classes, 0);
    for (const auto& obs : last_year) {
        if (obs.class_index < 1 || obs.class_index > n_classes) {
            throw ValidationError("estimate_method2: class index " +
                                  std::to_string(obs.class_index) + " out of range");
        }
        if (obs.claims < 0) {
            throw ValidationError("estimate_method2: claims must be >= 0");
        }
        sums[obs.class_index - 1] += obs.claims;
        counts[obs.class_index - 1] += 1;
    }
    std::vector<ClassEstimate> out(n_classes);
    for (int c = 0; c < n_classes; ++c) {
        if (counts[c] > 0) {
            out[c] = ClassEstimate{sums[c] / static_cast<double>(counts[c]), counts[c], false};
        } else {
            out[c] = ClassEstimate{fallback_prior.mean(), 0, true};
        }
    }
    return out;
}

double estimate_method3(const GammaPrior& prior, long long claims, double exposure_years) {
    prior.validate();
    if (claims < 0) {
        throw ValidationError("estimate_method3: claims must be >= 0");
    }
    if (!(exposure_years >= 0.0) || !std::isfinite(exposure_years)) {
        throw ValidationError("estimate_method3: exposure must be finite and >= 0");
    }
    return (static_cast<double>(claims) + prior.alpha) / (exposure_years + prior.beta);
}

} // namespace bonuswalk
