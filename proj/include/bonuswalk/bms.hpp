#pragma once

// Bonus-malus systems as rule tables, and the lambda-parametric transition
// matrices of the induced random walk on premium classes.
//
// Classes are indexed 1..n with 1 the worst (highest premium) and n the
// best. A policyholder moves `move_up` classes toward n after a claim-free
// year, drops `per_claim_drop[k-1]` classes after a year with k claims
// (1 <= k < reset_threshold), and is sent to `reset_class` after
// reset_threshold or more claims. All targets clamp into [1, n].

#include <string>
#include <vector>

namespace bonuswalk {

struct BmsSpec {
    std::string name;
    int n_classes = 0;
    int initial_index = 0; // 1-based entry class
    int move_up = 1;
    std::vector<int> per_claim_drop; // drop for k = 1 .. reset_threshold-1
    int reset_threshold = 0;         // K: k >= K sends the driver to reset_class
    int reset_class = 1;
    std::vector<std::string> labels; // size n_classes; defaults to C1..Cn

    // Throws ValidationError on any inconsistency.
    void validate() const;

    const std::string& label(int class_index) const { return labels[class_index - 1]; }
};

// Parses the flat key/value + table format documented in the README.
// `source_name` is used in error messages.
BmsSpec parse_bms_spec(const std::string& config_text, const std::string& source_name = "<config>");

// Built-in systems: "hungarian", "brazilian", "belgian".
const std::vector<std::string>& bms_preset_names();
const std::string& bms_preset_text(const std::string& name);
BmsSpec bms_preset(const std::string& name);

// Next class after a year with `claims` claims. Total on valid inputs.
int claim_class_target(const BmsSpec& spec, int current, int claims);

// Row-stochastic n x n matrix; entry (i, j) is the probability of moving
// from class i to class j in one year.
struct TransitionMatrix {
    int n = 0;
    double lambda = 0.0;
    std::vector<double> entries; // row-major

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]; }
    double& at(int i, int j) { return entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]; }

    static TransitionMatrix identity(int n, double lambda);
};

// Poisson(lambda) claim counts folded through the movement rules. The tail
// k >= reset_threshold is assigned in closed form to the reset target, so
// every row sums to 1 with no truncation error.
TransitionMatrix build_transition_matrix(const BmsSpec& spec, double lambda);

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b);

// Exact t-step matrix by repeated squaring; t = 0 gives the identity.
TransitionMatrix matrix_power(const TransitionMatrix& m, int t);

// Row `initial_index` of M(lambda)^t: the distribution over classes after
// t steps from the entry class. Element [c-1] is the probability of class c.
std::vector<double> class_probability(const BmsSpec& spec, double lambda, int t);

} // namespace bonuswalk
