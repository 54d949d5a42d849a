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

#include "pdimp/report_io.h"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pdimp/error.h"
#include "pdimp/format.h"

namespace pdimp {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string cell_label(const GridAxis& axis, std::size_t i) {
  return csv_escape(axis.label(i));
}

ordered_json grid_json(const Grid& grid) {
  ordered_json axes = ordered_json::array();
  for (const auto& axis : grid.axes) {
    ordered_json a;
    a["feature"] = axis.feature.name;
    a["kind"] = std::string(to_string(axis.feature.kind));
    if (axis.feature.is_categorical()) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < axis.size(); ++i) labels.push_back(axis.label(i));
      a["points"] = labels;
    } else {
      a["points"] = axis.points;
    }
    axes.push_back(std::move(a));
  }
  return axes;
}

std::string h_text(const PairInteraction& p) {
  if (!p.h || !p.h->defined) return "NA";
  return format_double(p.h->value);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LookupError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

ordered_json column(std::string name, std::string type, std::string text) {
  ordered_json c;
  c["name"] = std::move(name);
  c["type"] = std::move(type);
  c["description"] = std::move(text);
  return c;
}

}  // namespace

std::string pd_to_csv(const PDResult& pd) {
  std::ostringstream out;
  for (const auto& axis : pd.grid.axes) out << csv_escape(axis.feature.name) << ',';
  out << "value\n";
  if (pd.grid.axes.size() == 1) {
    for (std::size_t i = 0; i < pd.values.size(); ++i) {
      out << cell_label(pd.grid.axes[0], i) << ',' << format_double(pd.values[i])
          << '\n';
    }
  } else {
    const std::size_t kj = pd.grid.axes[1].size();
    for (std::size_t c = 0; c < pd.values.size(); ++c) {
      out << cell_label(pd.grid.axes[0], c / kj) << ','
          << cell_label(pd.grid.axes[1], c % kj) << ','
          << format_double(pd.values[c]) << '\n';
    }
  }
  return out.str();
}

std::string pd_to_json(const PDResult& pd) {
  ordered_json doc;
  doc["artifact"] = pd.grid.axes.size() == 1 ? "pdp" : "joint_pdp";
  doc["features"] = pd.grid.feature_names();
  doc["strategy"] = pd.grid.strategy.to_string();
  doc["aggregator"] = pd.aggregator.to_string();
  doc["n_train"] = pd.n_train;
  doc["baseline"] = pd.baseline;
  doc["grid"] = grid_json(pd.grid);
  doc["values"] = pd.values;
  return doc.dump(2) + "\n";
}

std::string ice_to_csv(const ICEResult& ice) {
  std::ostringstream out;
  out << "row_id,grid_value,prediction\n";
  const GridAxis& axis = ice.grid.axes.at(0);
  for (std::size_t r = 0; r < ice.n_rows; ++r) {
    for (std::size_t j = 0; j < axis.size(); ++j) {
      out << (r + 1) << ',' << cell_label(axis, j) << ','
          << format_double(ice.at(r, j)) << '\n';
    }
  }
  return out.str();
}

std::string ice_to_json(const ICEResult& ice) {
  ordered_json doc;
  doc["artifact"] = "ice";
  doc["features"] = ice.grid.feature_names();
  doc["strategy"] = ice.grid.strategy.to_string();
  doc["n_rows"] = ice.n_rows;
  doc["grid"] = grid_json(ice.grid);
  ordered_json curves = ordered_json::array();
  const std::size_t k = ice.grid.size();
  for (std::size_t r = 0; r < ice.n_rows; ++r) {
    curves.push_back(std::vector<double>(
        ice.curves.begin() + static_cast<std::ptrdiff_t>(r * k),
        ice.curves.begin() + static_cast<std::ptrdiff_t>((r + 1) * k)));
  }
  doc["curves"] = std::move(curves);
  return doc.dump(2) + "\n";
}

std::string importance_to_csv(const ImportanceReport& report) {
  std::ostringstream out;
  out << "feature,score\n";
  for (const auto& e : report.entries) {
    out << csv_escape(e.feature) << ',' << format_double(e.score) << '\n';
  }
  return out.str();
}

std::string importance_to_json(const ImportanceReport& report) {
  ordered_json doc;
  doc["artifact"] = "importance";
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json j;
    j["feature"] = e.feature;
    j["score"] = e.score;
    j["measure"] = std::string(to_string(e.measure));
    j["grid_size"] = e.grid_size;
    j["degenerate"] = e.degenerate;
    entries.push_back(std::move(j));
  }
  doc["features"] = std::move(entries);
  return doc.dump(2) + "\n";
}

std::string interaction_to_csv(const InteractionReport& report) {
  std::ostringstream out;
  out << "feature_i,feature_j,stat_pd,stat_h\n";
  for (const auto& p : report.pairs) {
    out << csv_escape(p.feature_i) << ',' << csv_escape(p.feature_j) << ','
        << format_double(p.stat_pd) << ',' << h_text(p) << '\n';
  }
  return out.str();
}

std::string interaction_to_json(const InteractionReport& report) {
  ordered_json doc;
  doc["artifact"] = "interaction";
  ordered_json pairs = ordered_json::array();
  for (const auto& p : report.pairs) {
    ordered_json j;
    j["feature_i"] = p.feature_i;
    j["feature_j"] = p.feature_j;
    j["stat_pd"] = p.stat_pd;
    j["spread_i_given_j"] = p.spread_i_given_j;
    j["spread_j_given_i"] = p.spread_j_given_i;
    j["joint_sd"] = p.joint_sd;
    if (p.h) {
      j["stat_h"] = p.h->defined ? ordered_json(p.h->value) : ordered_json();
      j["h_defined"] = p.h->defined;
    }
    pairs.push_back(std::move(j));
  }
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

std::string importance_table(const ImportanceReport& report) {
  std::size_t width = 7;
  for (const auto& e : report.entries) width = std::max(width, e.feature.size());
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %14s  %-7s  %s\n",
                static_cast<int>(width), "feature", "score", "measure", "grid");
  out << line;
  for (const auto& e : report.entries) {
    std::snprintf(line, sizeof(line), "%-*s  %14.6g  %-7s  %zu%s\n",
                  static_cast<int>(width), e.feature.c_str(), e.score,
                  std::string(to_string(e.measure)).c_str(), e.grid_size,
                  e.degenerate ? " (degenerate)" : "");
    out << line;
  }
  return out.str();
}

std::string interaction_table(const InteractionReport& report,
                              std::size_t top_n) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s  %14s  %14s\n", "pair", "stat_pd",
                "stat_h");
  out << line;
  const std::size_t n = std::min(top_n, report.pairs.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = report.pairs[k];
    const std::string pair = p.feature_i + " x " + p.feature_j;
    std::snprintf(line, sizeof(line), "%-24s  %14.6g  %14s\n", pair.c_str(),
                  p.stat_pd, h_text(p).c_str());
    out << line;
  }
  return out.str();
}

std::string plot_schema_json(const PlotData& data) {
  ordered_json doc;
  ordered_json columns = ordered_json::array();
  if (auto* pd = std::get_if<const PDResult*>(&data)) {
    doc["artifact"] = (*pd)->grid.axes.size() == 1 ? "pdp" : "joint_pdp";
    for (const auto& axis : (*pd)->grid.axes) {
      columns.push_back(column(axis.feature.name,
                               axis.feature.is_categorical() ? "string" : "number",
                               "grid value of " + axis.feature.name));
    }
    columns.push_back(column("value", "number",
                             "partial dependence (" +
                                 (*pd)->aggregator.to_string() +
                                 " prediction) at the grid point"));
    doc["baseline"] = (*pd)->baseline;
    doc["baseline_description"] =
        "mean prediction over the unmodified training rows (reference line)";
    doc["n_train"] = (*pd)->n_train;
    doc["strategy"] = (*pd)->grid.strategy.to_string();
  } else if (auto* ice = std::get_if<const ICEResult*>(&data)) {
    doc["artifact"] = "ice";
    columns.push_back(column("row_id", "integer", "1-based training row"));
    columns.push_back(column("grid_value",
                             (*ice)->grid.axes.at(0).feature.is_categorical()
                                 ? "string"
                                 : "number",
                             "grid value of " +
                                 (*ice)->grid.axes.at(0).feature.name));
    columns.push_back(
        column("prediction", "number", "prediction for the row at the grid value"));
    doc["n_rows"] = (*ice)->n_rows;
    doc["grid_size"] = (*ice)->grid.size();
  } else if (std::holds_alternative<const ImportanceReport*>(data)) {
    doc["artifact"] = "importance";
    columns.push_back(column("feature", "string", "feature name"));
    columns.push_back(column("score", "number",
                             "flatness of the partial dependence, sorted "
                             "descending"));
  } else {
    doc["artifact"] = "interaction";
    columns.push_back(column("feature_i", "string", "first feature"));
    columns.push_back(column("feature_j", "string", "second feature"));
    columns.push_back(column("stat_pd", "number",
                             "mean spread of conditional importances, sorted "
                             "descending"));
    columns.push_back(column("stat_h", "number",
                             "Friedman-Popescu H, NA when not computed or "
                             "undefined"));
  }
  doc["columns"] = std::move(columns);
  return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_plot_data(
    const PlotData& data, std::string_view format,
    const std::filesystem::path& dir, const std::string& stem) {
  std::string csv, js;
  std::visit(
      [&](auto* ptr) {
        using T = std::remove_cv_t<std::remove_pointer_t<decltype(ptr)>>;
        if constexpr (std::is_same_v<T, PDResult>) {
          csv = format == "csv" ? pd_to_csv(*ptr) : "";
          js = format == "json" ? pd_to_json(*ptr) : "";
        } else if constexpr (std::is_same_v<T, ICEResult>) {
          csv = format == "csv" ? ice_to_csv(*ptr) : "";
          js = format == "json" ? ice_to_json(*ptr) : "";
        } else if constexpr (std::is_same_v<T, ImportanceReport>) {
          csv = format == "csv" ? importance_to_csv(*ptr) : "";
          js = format == "json" ? importance_to_json(*ptr) : "";
        } else {
          csv = format == "csv" ? interaction_to_csv(*ptr) : "";
          js = format == "json" ? interaction_to_json(*ptr) : "";
        }
      },
      data);
  std::vector<std::filesystem::path> written;
  if (format == "csv") {
    written.push_back(dir / (stem + ".csv"));
    write_file(written.back(), csv);
    written.push_back(dir / (stem + ".schema.json"));
    write_file(written.back(), plot_schema_json(data));
  } else if (format == "json") {
    written.push_back(dir / (stem + ".json"));
    write_file(written.back(), js);
  } else {
    throw ParameterError("unsupported output format '" + std::string(format) +
                         "' (expected csv or json)");
  }
  return written;
}

}  // namespace pdimp
