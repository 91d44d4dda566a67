#pragma once

// Independent oracles used by the test suites. These deliberately avoid the
// implementation paths they are checking: probabilities come from direct
// formula evaluation, integrals from adaptive Simpson or plain trapezoid
// grids, and state distributions from exhaustive claim-sequence enumeration.

#include "bonuswalk/bms.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// Poisson pmf by direct formula with an explicit factorial; for the small k
// the enumeration oracle needs.
inline double poisson_pmf_direct(double lambda, int k) {
    if (lambda == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) {
        factorial *= i;
    }
    return std::pow(lambda, k) * std::exp(-lambda) / factorial;
}

// Distribution over classes after `years` steps by exhaustive enumeration of
// claim-count sequences. Claim counts above the reset threshold behave
// identically to the threshold, so each year has threshold+1 outcomes with
// the tail mass lumped onto the last one.
inline std::vector<double> enumerate_class_distribution(const bonuswalk::BmsSpec& spec,
                                                        double lambda, int years) {
    const int threshold = spec.reset_threshold;
    std::vector<double> outcome_prob(threshold + 1);
    double head = 0.0;
    for (int k = 0; k < threshold; ++k) {
        outcome_prob[k] = poisson_pmf_direct(lambda, k);
        head += outcome_prob[k];
    }
    outcome_prob[threshold] = 1.0 - head;

    std::vector<double> dist(spec.n_classes, 0.0);
    std::function<void(int, int, double)> walk = [&](int year, int current, double prob) {
        if (year == years) {
            dist[current - 1] += prob;
            return;
        }
        for (int k = 0; k <= threshold; ++k) {
            walk(year + 1, bonuswalk::claim_class_target(spec, current, k),
                 prob * outcome_prob[k]);
        }
    };
    walk(0, spec.initial_index, 1.0);
    return dist;
}

// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double recurse(double a, double m, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return recurse(a, lm, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
                   recurse(m, rm, b, fm, frm, fb, right, tol / 2.0, depth + 1);
        }
    } impl{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return impl.recurse(a, m, b, fa, fm, fb, whole, tol, 0);
}

} // namespace oracles
