// Copyright 2026 The bosonlab Authors
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

#include "bosonlab/report.hpp"

namespace bosonlab {
namespace {

ExperimentReport sample_report() {
    ExperimentReport rep("demo", "p = |Per|^2", Json{{"seed", 7}, {"n", 3}});
    rep.set_columns({"name", "value", "count"});
    rep.row() << "plain" << 0.1 << 3;
    rep.row() << "with,comma" << 1.0 / 3.0 << uint64_t{5};
    rep.row() << "say \"hi\"" << -std::numeric_limits<double>::infinity() << -1;
    rep.summary()["ok"] = true;
    return rep;
}

TEST(Report, CsvQuotingAndLineEndings) {
    const std::string csv = sample_report().csv();
    EXPECT_EQ(
        csv,
        "name,value,count\r\n"
        "plain,0.10000000000000001,3\r\n"
        "\"with,comma\",0.33333333333333331,5\r\n"
        "\"say \"\"hi\"\"\",-inf,-1\r\n");
}

TEST(Report, DoublesRoundTrip) {
    for (double v : {0.1, 1e-300, 6.02214076e23, -2.5}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(json_number(2.0), 2.0);
}

TEST(Report, Deterministic) { EXPECT_EQ(sample_report().csv(), sample_report().csv()); }

TEST(Report, JsonCarriesProvenanceFields) {
    const Json j = sample_report().to_json(1.5);
    std::vector<std::string> keys;
    for (const auto &item : j.items()) {
        keys.push_back(item.key());
    }
    const std::vector<std::string> expected{"tool", "version", "experiment", "anchor", "config", "wall_seconds", "rows", "summary"};
    EXPECT_EQ(keys, expected);
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["config"]["seed"], 7);
    EXPECT_EQ(j["rows"], 3);
    EXPECT_EQ(j["summary"]["ok"], true);
}

TEST(Report, RowWidthMismatchThrows) {
    ExperimentReport rep("demo", "", Json::object());
    rep.set_columns({"a", "b"});
    rep.row() << 1;
    EXPECT_THROW(rep.csv(), std::logic_error);
}

}  // namespace
}  // namespace bosonlab
