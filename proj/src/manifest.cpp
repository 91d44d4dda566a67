#include "bonuswalk/manifest.hpp"

#include "bonuswalk/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bonuswalk {

namespace {

// FIPS 180-4 SHA-256.
class Sha256 {
public:
    void update(const unsigned char* data, std::size_t len) {
        total_bits_ += static_cast<std::uint64_t>(len) * 8;
        while (len > 0) {
            const std::size_t take = std::min(len, std::size_t(64) - fill_);
            std::memcpy(block_.data() + fill_, data, take);
            fill_ += take;
            data += take;
            len -= take;
            if (fill_ == 64) {
                compress();
                fill_ = 0;
            }
        }
    }

    std::string hex_digest() {
        // padding: 0x80, zeros to 56 mod 64, then the 64-bit big-endian
        // length of the original message
        const std::uint64_t bits = total_bits_;
        const unsigned char one = 0x80;
        update(&one, 1);
        const unsigned char zero = 0x00;
        while (fill_ != 56) {
            update(&zero, 1);
        }
        unsigned char len_be[8];
        for (int i = 0; i < 8; ++i) {
            len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        }
        update(len_be, 8);

        std::ostringstream out;
        out << std::hex << std::setfill('0');
        for (std::uint32_t word : h_) {
            out << std::setw(8) << word;
        }
        return out.str();
    }

private:
    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress() {
        static constexpr std::uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(block_[4 * i]) << 24) | (std::uint32_t(block_[4 * i + 1]) << 16) |
                   (std::uint32_t(block_[4 * i + 2]) << 8) | std::uint32_t(block_[4 * i + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3];
        std::uint32_t e = h_[4], f = h_[5], g = h_[6], h = h_[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t temp1 = h + s1 + ch + k[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t temp2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + temp1;
            d = c;
            c = b;
            b = a;
            a = temp1 + temp2;
        }
        h_[0] += a;
        h_[1] += b;
        h_[2] += c;
        h_[3] += d;
        h_[4] += e;
        h_[5] += f;
        h_[6] += g;
        h_[7] += h;
    }

    std::array<std::uint32_t, 8> h_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                       0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<unsigned char, 64> block_{};
    std::size_t fill_ = 0;
    std::uint64_t total_bits_ = 0;
};

} // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 hasher;
    hasher.update(reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return hasher.hex_digest();
}

std::string sha256_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for digesting");
    }
    Sha256 hasher;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        hasher.update(reinterpret_cast<const unsigned char*>(buf),
                      static_cast<std::size_t>(in.gcount()));
    }
    return hasher.hex_digest();
}

std::string compute_run_id(const std::string& subcommand,
                           const std::vector<ManifestParam>& params) {
    std::vector<ManifestParam> sorted = params;
    std::sort(sorted.begin(), sorted.end(),
              [](const ManifestParam& a, const ManifestParam& b) { return a.name < b.name; });
    std::string canonical = subcommand + "\n";
    for (const auto& p : sorted) {
        if (p.name == "out") {
            continue; // output location must not change the run identity
        }
        canonical += p.name + "=" + p.value + "\n";
    }
    return sha256_hex(canonical).substr(0, 16);
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["schema_version"] = manifest.schema_version;
    j["tool"] = manifest.tool;
    j["subcommand"] = manifest.subcommand;
    j["run_id"] = manifest.run_id;
    j["params"] = nlohmann::json::array();
    for (const auto& p : manifest.params) {
        j["params"].push_back(
            nlohmann::json{{"name", p.name}, {"value", p.value}, {"source", p.source}});
    }
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : manifest.inputs) {
        j["inputs"].push_back(nlohmann::json{{"path", in.path}, {"sha256", in.sha256}});
    }
    j["outputs"] = manifest.outputs;
    j["wall_seconds"] = manifest.wall_seconds;
    j["error"] = manifest.error;
    j["exit_code"] = manifest.exit_code;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    RunManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1) {
        throw ValidationError("manifest: unsupported schema_version " +
                              std::to_string(m.schema_version));
    }
    m.tool = j.at("tool").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.run_id = j.at("run_id").get<std::string>();
    for (const auto& jp : j.at("params")) {
        m.params.push_back(ManifestParam{jp.at("name").get<std::string>(),
                                         jp.at("value").get<std::string>(),
                                         jp.at("source").get<std::string>()});
    }
    for (const auto& ji : j.at("inputs")) {
        m.inputs.push_back(
            InputDigest{ji.at("path").get<std::string>(), ji.at("sha256").get<std::string>()});
    }
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.error = j.at("error").get<std::string>();
    m.exit_code = j.at("exit_code").get<int>();
    return m;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << manifest_to_json(manifest);
    if (!out.good()) {
        throw IoError("write failed for '" + path + "'");
    }
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

} // namespace bonuswalk
