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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "scratch_dir.hpp"
#include "qkr/errors.hpp"
#include "qkr/io.hpp"
#include "qkr/qft_circuit.hpp"

namespace qkr {
namespace {

namespace fs = std::filesystem;

TEST(FormatDouble, RoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
        EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(SeriesCsv, RoundTripAndHeader) {
    testing::ScratchDir dir("series");
    ObservableSeries s;
    s.push_back({0, 0.0, 1.0, 0.0});
    s.push_back({1, 49.413362653642942, 12.5, 1e-16});
    s.push_back({10, 1.0 / 3.0, 2.0 / 3.0, 3e-15});
    write_series_csv(dir / "series.csv", s);
    std::ifstream in(dir / "series.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,n2,ipr,norm_err");
    const auto back = read_series_csv(dir / "series.csv");
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back[i], s[i]);
}

TEST(SeriesCsv, CorruptFilesNameThemselves) {
    testing::ScratchDir dir("series_bad");
    write_text_file(dir / "a.csv", "t,n2,ipr\n0,1,1\n");
    write_text_file(dir / "b.csv", "t,n2,ipr,norm_err\n0,1,1\n");
    write_text_file(dir / "c.csv", "t,n2,ipr,norm_err\n0,x,1,0\n");
    write_text_file(dir / "d.csv", "t,n2,ipr,norm_err\n5,1,1,0\n3,1,1,0\n");
    for (const char* name : {"a.csv", "b.csv", "c.csv", "d.csv", "missing.csv"}) {
        try {
            read_series_csv(dir / name);
            ADD_FAILURE() << name << " was accepted";
        } catch (const IoError& e) {
            EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
        }
    }
}

TEST(SnapshotCsv, RowsInSignedOrder) {
    testing::ScratchDir dir("snap");
    std::vector<double> w(8);
    for (std::size_t i = 0; i < 8; ++i) w[i] = 0.01 * static_cast<double>(i + 1);
    const ProbabilityDistribution d(w);
    write_snapshot_csv(dir / snapshot_file_name(100), d);
    EXPECT_EQ(snapshot_file_name(100), "snapshot_t100.csv");
    const auto text = read_text_file(dir / "snapshot_t100.csv");
    EXPECT_EQ(text.substr(0, 4), "n,W\n");
    EXPECT_EQ(text.substr(4, 6), "-4,0.0");
    const auto back = read_snapshot_csv(dir / "snapshot_t100.csv");
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(back.at_index(i), w[i]);
    write_text_file(dir / "bad.csv", "n,W\n0,1\n1,0\n2,0\n");
    EXPECT_THROW(read_snapshot_csv(dir / "bad.csv"), IoError);
}

TEST(Sha256, KnownVectors) {
    testing::ScratchDir dir("sha");
    write_text_file(dir / "abc", "abc");
    EXPECT_EQ(sha256_file(dir / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    write_text_file(dir / "empty", "");
    EXPECT_EQ(sha256_file(dir / "empty"), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_THROW(sha256_file(dir / "nope"), IoError);
}

TEST(Checkpoint, RoundTripIsExact) {
    testing::ScratchDir dir("ckpt");
    NoiseModel noise(1e-3, 42);
    for (int i = 0; i < 10; ++i) noise.uniform();
    Checkpoint cp{17, noise.save_stream(), 42, 1e-3, StateVector(5, Representation::Momentum)};
    for (std::size_t i = 0; i < cp.state.dim(); ++i) cp.state[i] = {std::sin(1.0 * i), std::cos(3.0 * i)};
    write_checkpoint(dir / "c.bin", cp);
    const auto back = read_checkpoint(dir / "c.bin");
    EXPECT_EQ(back.t, 17);
    EXPECT_EQ(back.seed, 42u);
    EXPECT_EQ(back.epsilon, 1e-3);
    EXPECT_EQ(back.stream, cp.stream);
    EXPECT_EQ(back.state.n_qubits(), 5);
    for (std::size_t i = 0; i < cp.state.dim(); ++i) EXPECT_EQ(back.state[i], cp.state[i]);

    const auto bytes = read_text_file(dir / "c.bin");
    write_text_file(dir / "short.bin", bytes.substr(0, bytes.size() - 8));
    EXPECT_THROW(read_checkpoint(dir / "short.bin"), IoError);
    write_text_file(dir / "junk.bin", "{not json\n");
    EXPECT_THROW(read_checkpoint(dir / "junk.bin"), IoError);
}

TEST(Manifest, RoundTripAndVerification) {
    testing::ScratchDir dir("manifest");
    write_text_file(dir / "r0" / "series.csv", "t,n2,ipr,norm_err\n0,0,1,0\n");
    RunManifest m;
    m.config.steps = 10;
    m.config.seed = 99;
    m.software_version = software_version();
    m.realizations = {{0, 99, 1234, 10}};
    m.wall_seconds = 0.5;
    m.files = {{"r0/series.csv", sha256_file(dir / "r0" / "series.csv"), fs::file_size(dir / "r0" / "series.csv")}};
    write_manifest(dir / "manifest.json", m);
    const auto back = read_manifest(dir / "manifest.json");
    EXPECT_EQ(back.config, m.config);
    EXPECT_EQ(back.realizations, m.realizations);
    EXPECT_EQ(back.files, m.files);
    EXPECT_EQ(back.software_version, m.software_version);
    EXPECT_NO_THROW(verify_manifest_files(dir.path(), back));

    write_text_file(dir / "r0" / "series.csv", "t,n2,ipr,norm_err\n0,1,1,0\n");
    try {
        verify_manifest_files(dir.path(), back);
        ADD_FAILURE() << "tampering not detected";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("series.csv"), std::string::npos);
    }
    fs::remove(dir / "r0" / "series.csv");
    EXPECT_THROW(verify_manifest_files(dir.path(), back), IoError);
    write_text_file(dir / "bad.json", "{\"software_version\": 3}");
    EXPECT_THROW(read_manifest(dir / "bad.json"), IoError);
}

TEST(WriteTextFile, UnwritablePath) {
    testing::ScratchDir dir("unwritable");
    write_text_file(dir / "file", "x");
    EXPECT_THROW(write_text_file(dir / "file" / "sub" / "y", "x"), IoError);
}

}  // namespace
}  // namespace qkr
