/*
 * Copyright 2026 The pdimp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pdimp/csv.h"

#include <fstream>
#include <unordered_map>

#include "pdimp/error.h"
#include "pdimp/format.h"

namespace pdimp {

std::vector<std::vector<std::string>> read_csv_records(std::istream& source) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool any_char = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A blank line is not a record.
    if (!(record.size() == 1 && record.front().empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };

  char c;
  while (source.get(c)) {
    any_char = true;
    if (in_quotes) {
      if (c == '"') {
        if (source.peek() == '"') {
          source.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case ',':
        end_field();
        break;
      case '"':
        if (field_started) {
          throw ParseError("unexpected quote inside unquoted field on line " +
                               std::to_string(line),
                           line);
        }
        in_quotes = true;
        field_started = true;
        break;
      case '\r':
        if (source.peek() == '\n') source.get(c);
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) {
    throw ParseError("unterminated quoted field", line);
  }
  if (any_char && (field_started || !field.empty() || !record.empty())) {
    end_record();
  }
  return records;
}

std::vector<FeatureSchema> infer_schema(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& raw_columns) {
  std::vector<FeatureSchema> schema;
  schema.reserve(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    const auto& cells = raw_columns[c];
    bool any_value = false;
    bool all_numeric = true;
    for (const auto& cell : cells) {
      if (cell.empty()) continue;
      any_value = true;
      if (!parse_finite_double(cell)) {
        all_numeric = false;
        break;
      }
    }
    if (any_value && all_numeric) {
      schema.push_back(FeatureSchema::continuous(names[c]));
      continue;
    }
    std::vector<std::string> levels;
    std::unordered_map<std::string_view, bool> seen;
    for (const auto& cell : cells) {
      if (cell.empty()) continue;
      if (seen.emplace(cell, true).second) levels.push_back(cell);
    }
    schema.push_back(FeatureSchema::categorical(names[c], std::move(levels)));
  }
  return schema;
}

LoadedCsv load_csv(std::istream& source, const CsvOptions& options) {
  auto records = read_csv_records(source);
  LoadedCsv result;

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (options.has_header) {
    if (records.empty()) throw ParseError("missing header line", 0);
    names = records.front();
    first_data = 1;
  } else if (!records.empty()) {
    for (std::size_t c = 0; c < records.front().size(); ++c) {
      names.push_back("col" + std::to_string(c + 1));
    }
  }
  const std::size_t width = names.size();
  const std::size_t n_rows = records.size() - first_data;

  std::vector<std::vector<std::string>> raw(width);
  for (auto& column : raw) column.reserve(n_rows);
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const std::size_t data_row = r - first_data + 1;
    auto& record = records[r];
    if (record.size() != width) {
      throw ParseError("row " + std::to_string(data_row) + " has " +
                           std::to_string(record.size()) +
                           " fields, expected " + std::to_string(width),
                       data_row);
    }
    for (std::size_t c = 0; c < width; ++c) {
      raw[c].push_back(std::move(record[c]));
    }
  }

  std::vector<FeatureSchema> schema = infer_schema(names, raw);
  for (const auto& declared : options.declared_schema) {
    std::size_t c = 0;
    while (c < width && names[c] != declared.name) ++c;
    if (c == width) {
      throw LookupError("declared column '" + declared.name +
                        "' is not present in the input");
    }
    if (declared.is_continuous()) {
      schema[c] = FeatureSchema::continuous(declared.name);
    } else if (!declared.levels.empty()) {
      schema[c] = declared;
    } else {
      std::vector<std::string> levels;
      for (const auto& cell : raw[c]) {
        if (!cell.empty() &&
            std::find(levels.begin(), levels.end(), cell) == levels.end()) {
          levels.push_back(cell);
        }
      }
      schema[c] = FeatureSchema::categorical(declared.name, std::move(levels));
    }
  }

  std::vector<std::vector<double>> columns(width);
  for (std::size_t c = 0; c < width; ++c) {
    const FeatureSchema& f = schema[c];
    columns[c].reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const std::string& cell = raw[c][r];
      if (cell.empty()) {
        throw CellTypeError("missing value in column '" + f.name + "' at row " +
                                std::to_string(r + 1),
                            f.name, r + 1);
      }
      if (f.is_continuous()) {
        auto v = parse_finite_double(cell);
        if (!v) {
          throw CellTypeError("column '" + f.name + "' row " +
                                  std::to_string(r + 1) + ": '" + cell +
                                  "' is not a finite real number",
                              f.name, r + 1);
        }
        columns[c].push_back(*v);
      } else {
        auto idx = f.level_index(cell);
        if (!idx) {
          throw CellTypeError("column '" + f.name + "' row " +
                                  std::to_string(r + 1) + ": '" + cell +
                                  "' is not a declared level",
                              f.name, r + 1);
        }
        columns[c].push_back(static_cast<double>(*idx));
      }
    }
  }

  if (n_rows == 0) {
    result.warnings.push_back(
        "input has no data rows; all columns inferred as categorical with no "
        "levels");
  }
  result.dataset = Dataset(std::move(schema), std::move(columns));
  return result;
}

LoadedCsv load_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open '" + path + "'");
  return load_csv(in, options);
}

void write_csv(const Dataset& data, std::ostream& out) {
  const auto names = data.feature_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(names[c]);
  }
  out << '\n';
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    for (std::size_t c = 0; c < data.num_columns(); ++c) {
      if (c) out << ',';
      out << csv_escape(data.cell_text(r, c));
    }
    out << '\n';
  }
}

}  // namespace pdimp
