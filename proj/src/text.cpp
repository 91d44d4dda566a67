#include "bonuswalk/text.hpp"

#include "bonuswalk/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace bonuswalk {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<KvLine> parse_kv_lines(const std::string& text) {
    std::vector<KvLine> out;
    std::istringstream iss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(iss, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::size_t sp = 0;
        while (sp < line.size() && !std::isspace(static_cast<unsigned char>(line[sp]))) ++sp;
        KvLine kv;
        kv.key = line.substr(0, sp);
        kv.value = trim(line.substr(sp));
        kv.line = line_no;
        out.push_back(std::move(kv));
    }
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    long long v = parse_int64(s, what);
    if (v < INT32_MIN || v > INT32_MAX) {
        throw ValidationError(what + ": value out of range: " + s);
    }
    return static_cast<int>(v);
}

long long parse_int64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(trim(s), &pos);
        if (pos != trim(s).size()) {
            throw ValidationError(what + ": not an integer: '" + s + "'");
        }
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (...) {
        throw ValidationError(what + ": not an integer: '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(trim(s), &pos);
        if (pos != trim(s).size()) {
            throw ValidationError(what + ": not a number: '" + s + "'");
        }
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (...) {
        throw ValidationError(what + ": not a number: '" + s + "'");
    }
}

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace bonuswalk
