// Copyright 2026 The QSBM Authors
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

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qsbm::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(const std::string &field);
void write_row(std::ostream &out, const Row &row);

/// Shortest text that parses back to the same double ("%.17g").
std::string format_double(double v);

/// Reads all records; quoted fields may span lines. Throws on malformed input.
std::vector<Row> read_all(std::istream &in);

struct Table {
    Row header;
    std::vector<Row> rows;

    [[nodiscard]] std::optional<std::size_t> column(const std::string &name) const;
};

Table read_table(std::istream &in);

} // namespace qsbm::csv
