#pragma once

// The three claim-frequency estimators:
//   method.1 — posterior mean of the frequency given the bonus class reached
//              after t steps, with likelihood M(lambda)^t[initial, class]
//              integrated against the gamma prior by quadrature;
//   method.2 — last-year average claims per class;
//   method.3 — individual credibility, (x + alpha) / (t + beta).

#include "bonuswalk/bms.hpp"
#include "bonuswalk/gamma_poisson.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bonuswalk {

struct ClassTenureObservation {
    int class_index = 0;   // 1-based, the class c in "B_t = c"
    int tenure_steps = 0;  // whole steps taken from the entry class
};

// Composite Gauss-Legendre on [0, prior quantile of upper_quantile], with
// 16-point panels graded geometrically (ratio 4) toward 0 so the prior's
// x^{alpha-1} endpoint behaviour costs no accuracy. node_count is rounded
// up to a multiple of 16.
struct QuadratureConfig {
    int node_count = 256;
    double upper_quantile = 1.0 - 1e-10;

    void validate() const; // node_count >= 16, 0.9 < upper_quantile < 1
};

// Posterior-mean estimate for one (class, tenure) observation. Throws
// UnreachableState when the class has probability 0 after tenure_steps.
double estimate_method1(const BmsSpec& spec, const GammaPrior& prior,
                        const ClassTenureObservation& obs, const QuadratureConfig& qc = {},
                        int threads = 0);

struct CurveCell {
    double lambda_hat = 0.0;
    bool reachable = false;
};

// The estimate-vs-time table: one cell per (class, years in system).
struct MethodOneCurve {
    std::string system;
    int horizon = 0;
    std::vector<std::string> labels;          // per class
    std::vector<std::vector<CurveCell>> cells; // [class_index-1][t], t = 0..horizon

    const CurveCell& at(int class_index, int t) const {
        return cells[class_index - 1][t];
    }
};

// Shares the per-node transition-matrix powers across every cell: each
// quadrature node walks t = 0..horizon once, then every (class, t) integral
// is a fixed-order dot product over nodes. Parallel over nodes; results are
// identical for any thread count.
MethodOneCurve estimate_method1_curve(const BmsSpec& spec, const GammaPrior& prior, int horizon,
                                      const QuadratureConfig& qc = {}, int threads = 0);

// CSV columns: class_label,year,lambda_hat,reachable. lambda_hat is empty
// for unreachable cells. `run_id`, when non-empty, is emitted as a leading
// `# run_id=` comment.
void write_curve_csv(const MethodOneCurve& curve, std::ostream& out, const std::string& run_id);

struct ClassObservation {
    int class_index = 0; // 1-based
    int claims = 0;      // that policyholder's claims in the observed year
};

struct ClassEstimate {
    double lambda_hat = 0.0;
    std::size_t count = 0; // policyholders observed in the class
    bool fallback = false; // true when the class was empty and the prior mean was used
};

// Per-class average of last-year claim counts; empty classes fall back to
// the prior mean, flagged. Element [c-1] is class c.
std::vector<ClassEstimate> estimate_method2(std::span<const ClassObservation> last_year,
                                            int n_classes, const GammaPrior& fallback_prior);

// Credibility estimate (x + alpha) / (t + beta); t = 0 returns the prior mean.
double estimate_method3(const GammaPrior& prior, long long claims, double exposure_years);

namespace detail {

// The quadrature grid caches everything lambda-independent of the
// likelihood: node positions, Gauss-Legendre weights, and the prior density
// at the nodes.
struct PosteriorGrid {
    std::vector<double> lambda;
    std::vector<double> weight; // GL weight * prior pdf, ready to dot with likelihoods
};

PosteriorGrid make_posterior_grid(const GammaPrior& prior, const QuadratureConfig& qc);

// Nodes and weights of n-point Gauss-Legendre on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace detail

} // namespace bonuswalk
