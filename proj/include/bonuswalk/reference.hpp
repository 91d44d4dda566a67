#pragma once

// Plain serial re-implementations of the three OpenMP kernels, kept as the
// comparison baseline for tests and the benchmark. They share the low-level
// primitives (rules, pmfs, scores) but take the straightforward route:
// per-cell posterior integrals with repeated-squaring matrix powers instead
// of shared incremental powers, and simple sequential loops instead of
// parallel ones.

#include "bonuswalk/estimators.hpp"
#include "bonuswalk/sim.hpp"

namespace bonuswalk::reference {

// One full posterior integral per (class, t) cell. Numerically equivalent to
// the kernel within rounding (the matrix powers associate differently), not
// bit-identical.
MethodOneCurve method1_curve(const BmsSpec& spec, const GammaPrior& prior, int horizon,
                             const QuadratureConfig& qc = {});

// Same draws as the kernel, plain loop: bit-identical output.
Portfolio simulate_portfolio(const BmsSpec& spec, const GammaPrior& prior, std::size_t n,
                             int years, std::uint64_t seed);

// Sequential estimate + score pipeline with method.1 evaluated per policy.
ScoreReport run_comparison(const Portfolio& portfolio, const BmsSpec& spec,
                           const QuadratureConfig& qc = {});

} // namespace bonuswalk::reference
