// Copyright 2026 The qkr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkr/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "qkr/errors.hpp"

#ifndef QKR_VERSION
#define QKR_VERSION "0.0.0"
#endif

namespace qkr {

using nlohmann::json;

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

// Splits a CSV line into exactly `expected` fields.
std::vector<std::string> split_fields(const std::string& line, std::size_t expected, const std::filesystem::path& path,
                                      std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != expected) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                      " fields, got " + std::to_string(fields.size()));
    }
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& s, const std::filesystem::path& path, std::size_t line_no) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_series_csv(const std::filesystem::path& path, const ObservableSeries& series) {
    auto out = open_for_write(path);
    out << "t,n2,ipr,norm_err\n";
    for (const auto& r : series.records()) {
        out << r.t << ',' << format_double(r.n2) << ',' << format_double(r.ipr) << ',' << format_double(r.norm_err)
            << '\n';
    }
    finish(out, path);
}

ObservableSeries read_series_csv(const std::filesystem::path& path, SeriesMetadata metadata) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || line != "t,n2,ipr,norm_err") {
        throw IoError(path.string() + ": missing or wrong series header");
    }
    ObservableSeries series(metadata);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line, 4, path, line_no);
        try {
            series.push_back({parse_int(f[0], path, line_no), parse_double(f[1], path, line_no),
                              parse_double(f[2], path, line_no), parse_double(f[3], path, line_no)});
        } catch (const ParameterError& e) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return series;
}

void write_snapshot_csv(const std::filesystem::path& path, const ProbabilityDistribution& dist) {
    auto out = open_for_write(path);
    out << "n,W\n";
    const auto half = static_cast<std::int64_t>(dist.dim() / 2);
    for (std::int64_t n = -half; n < half; ++n) {
        out << n << ',' << format_double(dist.at_momentum(n)) << '\n';
    }
    finish(out, path);
}

ProbabilityDistribution read_snapshot_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || line != "n,W") {
        throw IoError(path.string() + ": missing or wrong snapshot header");
    }
    std::vector<std::pair<std::int64_t, double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line, 2, path, line_no);
        rows.emplace_back(parse_int(f[0], path, line_no), parse_double(f[1], path, line_no));
    }
    const std::size_t dim = rows.size();
    if (dim < 4 || !std::has_single_bit(dim)) {
        throw IoError(path.string() + ": snapshot has " + std::to_string(dim) + " rows, not a power of two");
    }
    std::vector<double> w(dim, 0.0);
    std::vector<bool> seen(dim, false);
    const auto half = static_cast<std::int64_t>(dim / 2);
    for (const auto& [n, weight] : rows) {
        if (n < -half || n >= half || seen[momentum_index(n, dim)]) {
            throw IoError(path.string() + ": momentum " + std::to_string(n) + " out of range or repeated");
        }
        seen[momentum_index(n, dim)] = true;
        w[momentum_index(n, dim)] = weight;
    }
    return ProbabilityDistribution(std::move(w));
}

std::string snapshot_file_name(std::int64_t t) { return "snapshot_t" + std::to_string(t) + ".csv"; }
std::string checkpoint_file_name(std::int64_t t) { return "checkpoint_t" + std::to_string(t) + ".bin"; }

std::string sha256_file(const std::filesystem::path& path) {
    auto in = open_for_read(path, std::ios::binary);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("sha256: cannot initialise digest");
    }
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        const auto got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
    }
    if (in.bad()) throw IoError("read failed for " + path.string());
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little-endian doubles");
    auto out = open_for_write(path, std::ios::out | std::ios::binary);
    const json header = {{"format", "qkr-checkpoint-1"},
                         {"t", cp.t},
                         {"n_q", cp.state.n_qubits()},
                         {"representation", to_string(cp.state.representation())},
                         {"seed", cp.seed},
                         {"epsilon", cp.epsilon},
                         {"stream", cp.stream}};
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(cp.state.data()),
              static_cast<std::streamsize>(cp.state.dim() * sizeof(Amplitude)));
    finish(out, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    auto in = open_for_read(path, std::ios::binary);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty checkpoint");
    json header;
    try {
        header = json::parse(line);
        if (header.at("format") != "qkr-checkpoint-1") throw IoError(path.string() + ": unknown checkpoint format");
        Checkpoint cp;
        cp.t = header.at("t").get<std::int64_t>();
        cp.seed = header.at("seed").get<std::uint64_t>();
        cp.epsilon = header.at("epsilon").get<double>();
        cp.stream = header.at("stream").get<std::string>();
        const int n_q = header.at("n_q").get<int>();
        check_qubit_count(n_q);
        const auto rep = header.at("representation").get<std::string>() == "angle" ? Representation::Angle
                                                                                   : Representation::Momentum;
        cp.state = StateVector(n_q, rep);
        in.read(reinterpret_cast<char*>(cp.state.data()),
                static_cast<std::streamsize>(cp.state.dim() * sizeof(Amplitude)));
        if (static_cast<std::size_t>(in.gcount()) != cp.state.dim() * sizeof(Amplitude)) {
            throw IoError(path.string() + ": truncated checkpoint");
        }
        return cp;
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": corrupt checkpoint header: " + e.what());
    } catch (const RangeError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::string software_version() { return std::string("qkr ") + QKR_VERSION; }

std::string manifest_to_json(const RunManifest& m) {
    json doc;
    doc["software_version"] = m.software_version;
    doc["config"] = json::parse(config_to_json(m.config));
    doc["realizations"] = json::array();
    for (const auto& r : m.realizations) {
        doc["realizations"].push_back({{"index", r.index},
                                       {"seed", r.seed},
                                       {"draw_counter", r.draw_counter},
                                       {"steps_completed", r.steps_completed}});
    }
    doc["wall_seconds"] = m.wall_seconds;
    doc["files"] = json::array();
    for (const auto& f : m.files) {
        doc["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    }
    return doc.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        RunManifest m;
        m.software_version = doc.at("software_version").get<std::string>();
        const auto grid = parse_config_grid(doc.at("config").dump());
        if (grid.size() != 1) throw IoError("manifest config expands to more than one run");
        m.config = grid.front();
        for (const auto& r : doc.at("realizations")) {
            m.realizations.push_back({r.at("index").get<int>(), r.at("seed").get<std::uint64_t>(),
                                      r.at("draw_counter").get<std::uint64_t>(),
                                      r.at("steps_completed").get<std::int64_t>()});
        }
        m.wall_seconds = doc.at("wall_seconds").get<double>();
        for (const auto& f : doc.at("files")) {
            m.files.push_back(
                {f.at("path").get<std::string>(), f.at("sha256").get<std::string>(), f.at("bytes").get<std::uintmax_t>()});
        }
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("corrupt manifest: ") + e.what());
    } catch (const ConfigError& e) {
        throw IoError(std::string("corrupt manifest config: ") + e.what());
    }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    write_text_file(path, manifest_to_json(manifest) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    try {
        return manifest_from_json(text);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void verify_manifest_files(const std::filesystem::path& run_dir, const RunManifest& manifest) {
    for (const auto& f : manifest.files) {
        const auto p = run_dir / f.path;
        if (!std::filesystem::exists(p)) throw IoError("missing file " + p.string());
        if (sha256_file(p) != f.sha256) throw IoError("checksum mismatch for " + p.string());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_for_write(path);
    out << text;
    finish(out, path);
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace qkr
