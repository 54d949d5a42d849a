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

#ifndef PDIMP_CSV_H_
#define PDIMP_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "pdimp/dataset.h"

namespace pdimp {

struct CsvOptions {
  bool has_header = true;
  // Columns named here use the declared kind (and level table, when
  // non-empty); the remaining columns are inferred.
  std::vector<FeatureSchema> declared_schema;
};

struct LoadedCsv {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// Reads comma-separated text with RFC-4180 quoting. Ragged rows and
// unparseable cells of declared-continuous columns raise ParseError /
// CellTypeError carrying the 1-based data row. Empty cells are rejected.
LoadedCsv load_csv(std::istream& source, const CsvOptions& options = {});
LoadedCsv load_csv_file(const std::string& path,
                        const CsvOptions& options = {});

// Splits CSV text into records of raw fields.
std::vector<std::vector<std::string>> read_csv_records(std::istream& source);

// A column is continuous iff every non-empty cell parses as a finite real;
// otherwise categorical with levels in order of first appearance.
std::vector<FeatureSchema> infer_schema(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& raw_columns);

// Header plus rows; reals use the shortest round-trip representation.
void write_csv(const Dataset& data, std::ostream& out);

}  // namespace pdimp

#endif  // PDIMP_CSV_H_
