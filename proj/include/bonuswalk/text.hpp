#pragma once

// Small text helpers shared by the config grammar, CSV writers, and CLI.

#include <string>
#include <vector>

namespace bonuswalk {

struct KvLine {
    std::string key;
    std::string value; // rest of the line, trimmed
    int line = 0;      // 1-based, for error messages
};

// The flat key/value grammar used by BMS spec files and run config files:
// one `key value...` pair per line, '#' starts a comment, blank lines are
// ignored. Keys may repeat (the BMS per_claim table relies on this).
std::vector<KvLine> parse_kv_lines(const std::string& text);

std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);
std::vector<std::string> split_char(const std::string& s, char sep);

// Throw ValidationError mentioning `what` if the whole string is not a number.
int parse_int(const std::string& s, const std::string& what);
long long parse_int64(const std::string& s, const std::string& what);
double parse_double(const std::string& s, const std::string& what);

// Shortest-ish deterministic rendering used by every CSV writer: %.17g,
// which round-trips IEEE doubles exactly.
std::string format_double(double x);

} // namespace bonuswalk
