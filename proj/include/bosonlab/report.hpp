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

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

namespace bosonlab {

inline constexpr const char *kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Shortest round-trippable text for a double; "inf", "-inf", "nan" otherwise.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// JSON has no infinities; non-finite values are written as strings.
inline Json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

inline std::string csv_escape(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

/// Tabular per-sample records plus a JSON summary. Cells are stored as text so
/// CSV output is byte-stable for a given configuration.
class ExperimentReport {
   public:
    ExperimentReport(std::string experiment, std::string anchor, Json config)
        : experiment_(std::move(experiment)), anchor_(std::move(anchor)), config_(std::move(config)) {}

    void set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }

    class RowBuilder {
       public:
        explicit RowBuilder(std::vector<std::string> &cells) : cells_(cells) {}
        RowBuilder &operator<<(double v) {
            cells_.push_back(format_double(v));
            return *this;
        }
        RowBuilder &operator<<(const std::string &v) {
            cells_.push_back(v);
            return *this;
        }
        RowBuilder &operator<<(const char *v) {
            cells_.emplace_back(v);
            return *this;
        }
        template <class Int>
            requires std::is_integral_v<Int>
        RowBuilder &operator<<(Int v) {
            cells_.push_back(std::to_string(v));
            return *this;
        }

       private:
        std::vector<std::string> &cells_;
    };

    RowBuilder row() {
        rows_.emplace_back();
        return RowBuilder(rows_.back());
    }

    Json &summary() { return summary_; }
    const Json &summary() const { return summary_; }
    const Json &config() const { return config_; }
    const std::string &experiment() const { return experiment_; }
    const std::vector<std::string> &columns() const { return columns_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }

    void write_csv(std::ostream &out) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            out << (i ? "," : "") << csv_escape(columns_[i]);
        }
        out << "\r\n";
        for (const auto &row : rows_) {
            if (row.size() != columns_.size()) {
                throw std::logic_error("ExperimentReport: row width does not match header");
            }
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << csv_escape(row[i]);
            }
            out << "\r\n";
        }
    }

    std::string csv() const {
        std::ostringstream out;
        write_csv(out);
        return out.str();
    }

    /// wall_seconds is the only field that varies between identical runs.
    Json to_json(double wall_seconds) const {
        Json j;
        j["tool"] = "bosonlab";
        j["version"] = kVersion;
        j["experiment"] = experiment_;
        j["anchor"] = anchor_;
        j["config"] = config_;
        j["wall_seconds"] = wall_seconds;
        j["rows"] = rows_.size();
        j["summary"] = summary_;
        return j;
    }

   private:
    std::string experiment_;
    std::string anchor_;
    Json config_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    Json summary_ = Json::object();
};

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace bosonlab
