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

#ifndef PDIMP_REPORT_IO_H_
#define PDIMP_REPORT_IO_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdimp/importance.h"
#include "pdimp/interaction.h"
#include "pdimp/partial_dependence.h"

namespace pdimp {

// CSV: one column per grid feature, then "value"; row-major cell order.
std::string pd_to_csv(const PDResult& pd);
std::string pd_to_json(const PDResult& pd);

// Long format: row_id (1-based), grid_value, prediction; n * k rows.
std::string ice_to_csv(const ICEResult& ice);
std::string ice_to_json(const ICEResult& ice);

// feature,score in report order.
std::string importance_to_csv(const ImportanceReport& report);
std::string importance_to_json(const ImportanceReport& report);

// feature_i,feature_j,stat_pd,stat_h; stat_h is "NA" when absent or
// undefined.
std::string interaction_to_csv(const InteractionReport& report);
std::string interaction_to_json(const InteractionReport& report);

// Aligned text tables for terminals.
std::string importance_table(const ImportanceReport& report);
std::string interaction_table(const InteractionReport& report,
                              std::size_t top_n);

using PlotData =
    std::variant<const PDResult*, const ICEResult*, const ImportanceReport*,
                 const InteractionReport*>;

// Writes plot data under `dir`. "csv" writes <stem>.csv plus a sidecar
// <stem>.schema.json documenting the columns (and, for PD, the baseline);
// "json" writes <stem>.json. Returns the files written. Throws
// ParameterError for other formats.
std::vector<std::filesystem::path> emit_plot_data(
    const PlotData& data, std::string_view format,
    const std::filesystem::path& dir, const std::string& stem);

// Sidecar schema document for a CSV artifact.
std::string plot_schema_json(const PlotData& data);

}  // namespace pdimp

#endif  // PDIMP_REPORT_IO_H_
