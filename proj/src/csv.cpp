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


#include "qsbm/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qsbm::csv {

std::string escape(const std::string &field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream &out, const Row &row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << escape(row[i]);
    }
    out << "\r\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<Row> read_all(std::istream &in) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    char c;
    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started) {
                throw std::runtime_error("csv: stray quote in row " + std::to_string(rows.size() + 1));
            }
            quoted = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (in.peek() == '\n') {
                in.get(c);
            }
            end_row();
            break;
        case '\n':
            end_row();
            break;
        default:
            field += c;
            field_started = true;
        }
    }
    if (quoted) {
        throw std::runtime_error("csv: unterminated quoted field");
    }
    if (field_started || !row.empty()) {
        end_row();
    }
    return rows;
}

std::optional<std::size_t> Table::column(const std::string &name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

Table read_table(std::istream &in) {
    auto rows = read_all(in);
    Table t;
    if (rows.empty()) {
        return t;
    }
    t.header = std::move(rows.front());
    rows.erase(rows.begin());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != t.header.size()) {
            throw std::runtime_error("csv: record " + std::to_string(i + 2) + " has " +
                                     std::to_string(rows[i].size()) + " fields, header has " +
                                     std::to_string(t.header.size()));
        }
    }
    t.rows = std::move(rows);
    return t;
}

} // namespace qsbm::csv
