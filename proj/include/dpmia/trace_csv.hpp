// Copyright 2026 The dpmia Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Trace CSV format:
//
//   id,cell_0,cell_1,...,cell_{L*E-1}
//   u17,0,1,0,...
//
// One row per individual, cells flattened row-major, values 0 or 1. The grid
// shape is not stored in the file; callers supply it and the column count is
// checked against it.

#ifndef DPMIA_TRACE_CSV_HPP_
#define DPMIA_TRACE_CSV_HPP_

#include <cstdint>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpmia/trace.hpp"

namespace dpmia {

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(const std::string& path, std::size_t line,
                  const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace internal {

inline std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace internal

struct TraceCsvContents {
  std::vector<std::string> ids;
  TraceDataset dataset;
};

inline TraceCsvContents ReadTraceCsv(const std::string& path, int sites,
                                     int epochs) {
  CheckShape(sites, epochs);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  const std::size_t cell_count = static_cast<std::size_t>(sites) * epochs;

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::string> ids;
  std::set<std::string> seen;
  std::vector<TraceMatrix> traces;
  std::vector<std::uint8_t> cells(cell_count);
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = internal::Trim(line);
    if (trimmed.empty()) continue;
    const auto fields = internal::SplitCsvLine(trimmed);
    if (!have_header) {
      if (internal::Trim(fields[0]) != "id") {
        throw TraceParseError(path, line_no,
                              "header must start with 'id'");
      }
      if (fields.size() != cell_count + 1) {
        throw TraceParseError(
            path, line_no,
            "header has " + std::to_string(fields.size() - 1) +
                " cell columns but the grid " + std::to_string(sites) + "x" +
                std::to_string(epochs) + " needs " +
                std::to_string(cell_count));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != cell_count + 1) {
      throw TraceParseError(path, line_no,
                            "expected " + std::to_string(cell_count + 1) +
                                " fields, found " +
                                std::to_string(fields.size()));
    }
    std::string id(internal::Trim(fields[0]));
    if (id.empty()) throw TraceParseError(path, line_no, "empty id");
    if (!seen.insert(id).second) {
      throw TraceParseError(path, line_no, "duplicate id '" + id + "'");
    }
    for (std::size_t c = 0; c < cell_count; ++c) {
      const std::string_view v = internal::Trim(fields[c + 1]);
      if (v == "0") {
        cells[c] = 0;
      } else if (v == "1") {
        cells[c] = 1;
      } else {
        throw TraceParseError(path, line_no,
                              "non-binary value '" + std::string(v) +
                                  "' in column " + std::to_string(c + 1));
      }
    }
    ids.push_back(std::move(id));
    traces.emplace_back(sites, epochs, cells);
  }
  if (traces.empty()) throw TraceParseError(path, line_no, "no traces");
  return TraceCsvContents{std::move(ids), TraceDataset(std::move(traces))};
}

inline TraceDataset IngestTracesCsv(const std::string& path, int sites,
                                    int epochs) {
  return ReadTraceCsv(path, sites, epochs).dataset;
}

inline void WriteTraceCsv(std::ostream& out, const TraceDataset& dataset) {
  out << "id";
  const int cell_count = dataset.sites() * dataset.epochs();
  for (int c = 0; c < cell_count; ++c) out << ",cell_" << c;
  out << '\n';
  std::string row;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    row = std::to_string(i);
    for (std::uint8_t v : dataset[i].cells()) {
      row += ',';
      row += v ? '1' : '0';
    }
    row += '\n';
    out << row;
  }
}

}  // namespace dpmia

#endif  // DPMIA_TRACE_CSV_HPP_
