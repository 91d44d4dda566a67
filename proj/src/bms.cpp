#include "bonuswalk/bms.hpp"

#include "bonuswalk/errors.hpp"
#include "bonuswalk/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bonuswalk {

namespace {

const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> presets = {
        {"hungarian",
         "# Hungarian bonus-malus system (15 classes: M4..M1, A0, B1..B10).\n"
         "# New policies enter at A0. One class up per claim-free year, two\n"
         "# classes down per claim, four or more claims in a year resets to M4.\n"
         "name hungarian\n"
         "classes 15\n"
         "initial 5\n"
         "move_up 1\n"
         "per_claim 1 2\n"
         "per_claim 2 4\n"
         "per_claim 3 6\n"
         "reset_threshold 4\n"
         "reset_class 1\n"
         "labels M4 M3 M2 M1 A0 B1 B2 B3 B4 B5 B6 B7 B8 B9 B10\n"},
        {"brazilian",
         "# Brazilian bonus-malus system (7 classes: A0, B1..B6), rules after\n"
         "# Lemaire (1998): entry at the full-premium class A0, one class up\n"
         "# per claim-free year, one class down per claim.\n"
         "name brazilian\n"
         "classes 7\n"
         "initial 1\n"
         "move_up 1\n"
         "per_claim 1 1\n"
         "per_claim 2 2\n"
         "per_claim 3 3\n"
         "per_claim 4 4\n"
         "per_claim 5 5\n"
         "per_claim 6 6\n"
         "reset_threshold 7\n"
         "reset_class 1\n"
         "labels A0 B1 B2 B3 B4 B5 B6\n"},
        {"belgian",
         "# Belgian bonus-malus system introduced in 1992 (23 classes: M8..M1,\n"
         "# A0, B1..B14), rules after Lemaire (1998): one class up per\n"
         "# claim-free year, five classes down per claim. Entry is A0 for\n"
         "# business users (pleasure users enter at B3). The tariff's special\n"
         "# rule pulling long claim-free histories down to A0 depends on more\n"
         "# than one year of state and is not representable in this rule\n"
         "# table; it is omitted.\n"
         "name belgian\n"
         "classes 23\n"
         "initial 9\n"
         "move_up 1\n"
         "per_claim 1 5\n"
         "per_claim 2 10\n"
         "per_claim 3 15\n"
         "per_claim 4 20\n"
         "reset_threshold 5\n"
         "reset_class 1\n"
         "labels M8 M7 M6 M5 M4 M3 M2 M1 A0 B1 B2 B3 B4 B5 B6 B7 B8 B9 B10 B11 B12 B13 B14\n"},
    };
    return presets;
}

[[noreturn]] void fail(const std::string& source, const std::string& msg) {
    throw ValidationError(source + ": " + msg);
}

} // namespace

void BmsSpec::validate() const {
    const std::string where = "bms spec '" + name + "'";
    if (name.empty()) {
        throw ValidationError("bms spec: name must not be empty");
    }
    if (n_classes < 1) {
        fail(where, "classes must be >= 1");
    }
    if (initial_index < 1 || initial_index > n_classes) {
        fail(where, "initial class " + std::to_string(initial_index) + " out of range [1, " +
                        std::to_string(n_classes) + "]");
    }
    if (move_up < 1) {
        fail(where, "move_up must be >= 1");
    }
    if (reset_threshold < 1) {
        fail(where, "reset_threshold must be >= 1");
    }
    if (reset_class < 1 || reset_class > n_classes) {
        fail(where, "reset_class out of range");
    }
    if (static_cast<int>(per_claim_drop.size()) != reset_threshold - 1) {
        fail(where, "per_claim table must cover claim counts 1.." +
                        std::to_string(reset_threshold - 1) + " (got " +
                        std::to_string(per_claim_drop.size()) + " entries)");
    }
    for (int drop : per_claim_drop) {
        if (drop < 1) {
            fail(where, "per_claim drops must be >= 1");
        }
    }
    if (static_cast<int>(labels.size()) != n_classes) {
        fail(where, "labels must name every class");
    }
}

BmsSpec parse_bms_spec(const std::string& config_text, const std::string& source_name) {
    BmsSpec spec;
    spec.move_up = 0; // so a missing key is detectable
    bool saw_name = false, saw_classes = false, saw_initial = false, saw_move_up = false;
    bool saw_threshold = false, saw_reset_class = false;
    std::map<int, int> drops;

    for (const auto& [key, value, line] : parse_kv_lines(config_text)) {
        const std::string where = source_name + ":" + std::to_string(line);
        if (key == "name") {
            if (saw_name) fail(where, "duplicate key 'name'");
            spec.name = value;
            saw_name = true;
        } else if (key == "classes") {
            if (saw_classes) fail(where, "duplicate key 'classes'");
            spec.n_classes = parse_int(value, where + ": classes");
            saw_classes = true;
        } else if (key == "initial") {
            if (saw_initial) fail(where, "duplicate key 'initial'");
            spec.initial_index = parse_int(value, where + ": initial");
            saw_initial = true;
        } else if (key == "move_up") {
            if (saw_move_up) fail(where, "duplicate key 'move_up'");
            spec.move_up = parse_int(value, where + ": move_up");
            saw_move_up = true;
        } else if (key == "per_claim") {
            std::istringstream iss(value);
            int k = 0, drop = 0;
            if (!(iss >> k >> drop) || !iss.eof()) {
                fail(where, "per_claim expects 'k drop', got '" + value + "'");
            }
            if (k < 1) fail(where, "per_claim claim count must be >= 1");
            if (!drops.emplace(k, drop).second) {
                fail(where, "duplicate per_claim entry for k=" + std::to_string(k));
            }
        } else if (key == "reset_threshold") {
            if (saw_threshold) fail(where, "duplicate key 'reset_threshold'");
            spec.reset_threshold = parse_int(value, where + ": reset_threshold");
            saw_threshold = true;
        } else if (key == "reset_class") {
            if (saw_reset_class) fail(where, "duplicate key 'reset_class'");
            spec.reset_class = parse_int(value, where + ": reset_class");
            saw_reset_class = true;
        } else if (key == "labels") {
            spec.labels = split_ws(value);
        } else {
            fail(where, "unknown key '" + key + "'");
        }
    }

    if (!saw_name) fail(source_name, "missing key 'name'");
    if (!saw_classes) fail(source_name, "missing key 'classes'");
    if (!saw_initial) fail(source_name, "missing key 'initial'");
    if (!saw_move_up) fail(source_name, "missing key 'move_up'");
    if (!saw_threshold) fail(source_name, "missing key 'reset_threshold'");
    if (!saw_reset_class) fail(source_name, "missing key 'reset_class'");

    spec.per_claim_drop.resize(std::max(spec.reset_threshold - 1, 0));
    for (int k = 1; k < spec.reset_threshold; ++k) {
        auto it = drops.find(k);
        if (it == drops.end()) {
            fail(source_name, "per_claim table has a gap: no entry for k=" + std::to_string(k));
        }
        spec.per_claim_drop[k - 1] = it->second;
    }
    for (const auto& [k, drop] : drops) {
        (void)drop;
        if (k >= spec.reset_threshold) {
            fail(source_name, "per_claim entry for k=" + std::to_string(k) +
                                  " is at or beyond reset_threshold");
        }
    }

    if (spec.labels.empty()) {
        spec.labels.reserve(spec.n_classes > 0 ? spec.n_classes : 0);
        for (int c = 1; c <= spec.n_classes; ++c) {
            spec.labels.push_back("C" + std::to_string(c));
        }
    }

    spec.validate();
    return spec;
}

const std::vector<std::string>& bms_preset_names() {
    static const std::vector<std::string> names = {"hungarian", "brazilian", "belgian"};
    return names;
}

const std::string& bms_preset_text(const std::string& name) {
    const auto& presets = preset_texts();
    auto it = presets.find(name);
    if (it == presets.end()) {
        std::string known;
        for (const auto& n : bms_preset_names()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw ValidationError("unknown system preset '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

BmsSpec bms_preset(const std::string& name) {
    return parse_bms_spec(bms_preset_text(name), "preset:" + name);
}

int claim_class_target(const BmsSpec& spec, int current, int claims) {
    if (claims == 0) {
        return std::min(current + spec.move_up, spec.n_classes);
    }
    if (claims >= spec.reset_threshold) {
        return spec.reset_class;
    }
    return std::max(current - spec.per_claim_drop[claims - 1], 1);
}

TransitionMatrix TransitionMatrix::identity(int n, double lambda) {
    TransitionMatrix m;
    m.n = n;
    m.lambda = lambda;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 1; i <= n; ++i) {
        m.at(i, i) = 1.0;
    }
    return m;
}

TransitionMatrix build_transition_matrix(const BmsSpec& spec, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ValidationError("build_transition_matrix: lambda must be finite and >= 0");
    }
    const int n = spec.n_classes;
    const int threshold = spec.reset_threshold;

    // Poisson masses for k = 0 .. threshold-1; the rest of the distribution
    // goes to the reset target as 1 - sum, which keeps rows exactly stochastic.
    std::vector<double> pk(threshold);
    pk[0] = std::exp(-lambda);
    for (int k = 1; k < threshold; ++k) {
        pk[k] = pk[k - 1] * lambda / k;
    }
    double head = 0.0;
    for (double p : pk) {
        head += p;
    }
    const double tail = std::max(0.0, 1.0 - head);

    TransitionMatrix m;
    m.n = n;
    m.lambda = lambda;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 1; i <= n; ++i) {
        for (int k = 0; k < threshold; ++k) {
            m.at(i, claim_class_target(spec, i, k)) += pk[k];
        }
        m.at(i, spec.reset_class) += tail;
    }
    return m;
}

TransitionMatrix multiply(const TransitionMatrix& a, const TransitionMatrix& b) {
    const int n = a.n;
    TransitionMatrix out;
    out.n = n;
    out.lambda = a.lambda;
    out.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a.entries[static_cast<std::size_t>(i) * n + k];
            if (aik == 0.0) {
                continue;
            }
            const double* brow = &b.entries[static_cast<std::size_t>(k) * n];
            double* orow = &out.entries[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) {
                orow[j] += aik * brow[j];
            }
        }
    }
    return out;
}

TransitionMatrix matrix_power(const TransitionMatrix& m, int t) {
    if (t < 0) {
        throw ValidationError("matrix_power: t must be >= 0");
    }
    TransitionMatrix result = TransitionMatrix::identity(m.n, m.lambda);
    TransitionMatrix base = m;
    int e = t;
    while (e > 0) {
        if (e & 1) {
            result = multiply(result, base);
        }
        e >>= 1;
        if (e > 0) {
            base = multiply(base, base);
        }
    }
    return result;
}

std::vector<double> class_probability(const BmsSpec& spec, double lambda, int t) {
    if (t < 0) {
        throw ValidationError("class_probability: t must be >= 0");
    }
    TransitionMatrix mt = matrix_power(build_transition_matrix(spec, lambda), t);
    const int n = spec.n_classes;
    std::vector<double> row(n);
    for (int j = 1; j <= n; ++j) {
        row[j - 1] = mt.at(spec.initial_index, j);
    }
    return row;
}

} // namespace bonuswalk
