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

#include "pdimp/linear_model.h"

#include <cmath>

#include "pdimp/error.h"

namespace pdimp {

std::size_t design_width(const std::vector<FeatureSchema>& features) {
  std::size_t width = 0;
  for (const auto& f : features) {
    width += f.is_continuous() ? 1 : (f.levels.empty() ? 0 : f.levels.size() - 1);
  }
  return width;
}

LinearModel::LinearModel(std::vector<FeatureSchema> features, double intercept,
                         std::vector<double> coefficients)
    : features_(std::move(features)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != design_width(features_)) {
    throw ParameterError("linear model has " +
                         std::to_string(coefficients_.size()) +
                         " coefficients for a design of width " +
                         std::to_string(design_width(features_)));
  }
  if (!std::isfinite(intercept_)) {
    throw NumericError("linear model intercept is not finite");
  }
  for (double b : coefficients_) {
    if (!std::isfinite(b)) {
      throw NumericError("linear model coefficient is not finite");
    }
  }
}

std::vector<std::string> LinearModel::design_column_names() const {
  std::vector<std::string> names;
  for (const auto& f : features_) {
    if (f.is_continuous()) {
      names.push_back(f.name);
    } else {
      for (std::size_t l = 1; l < f.levels.size(); ++l) {
        names.push_back(f.name + "=" + f.levels[l]);
      }
    }
  }
  return names;
}

std::vector<double> LinearModel::predict(const Dataset& batch) const {
  const auto columns = bind_columns(batch, features_);
  std::vector<double> out(batch.num_rows(), intercept_);
  std::size_t j = 0;
  for (std::size_t f = 0; f < features_.size(); ++f) {
    auto x = batch.column(columns[f]);
    if (features_[f].is_continuous()) {
      const double b = coefficients_[j++];
      for (std::size_t r = 0; r < out.size(); ++r) out[r] += b * x[r];
    } else {
      const std::size_t k = features_[f].levels.size();
      for (std::size_t r = 0; r < out.size(); ++r) {
        const auto level = static_cast<std::size_t>(x[r]);
        if (level > 0) out[r] += coefficients_[j + level - 1];
      }
      j += k - 1;
    }
  }
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LinearModel fit_linear(const Dataset& data, std::string_view target_name) {
  auto [x, y] = split_target(data, target_name);
  const std::size_t n = x.num_rows();
  const std::vector<FeatureSchema>& features = x.schema();

  // Design matrix, column-major, intercept first.
  std::vector<std::vector<double>> design;
  std::vector<std::string> names = {"(intercept)"};
  design.emplace_back(n, 1.0);
  for (std::size_t f = 0; f < features.size(); ++f) {
    auto col = x.column(f);
    if (features[f].is_continuous()) {
      design.emplace_back(col.begin(), col.end());
      names.push_back(features[f].name);
      continue;
    }
    for (std::size_t l = 1; l < features[f].levels.size(); ++l) {
      std::vector<double> indicator(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        indicator[r] = static_cast<std::size_t>(col[r]) == l ? 1.0 : 0.0;
      }
      design.push_back(std::move(indicator));
      names.push_back(features[f].name + "=" + features[f].levels[l]);
    }
  }
  const std::size_t p = design.size();
  if (n <= p) {
    throw ParameterError("linear fit needs more rows (" + std::to_string(n) +
                         ") than design columns (" + std::to_string(p) + ")");
  }

  // Modified Gram-Schmidt with one re-orthogonalization pass, processing the
  // columns in order so that a dependent column can be named together with
  // the earlier columns it is a combination of.
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> v = design[j];
    const double original_norm = std::sqrt(dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double proj = dot(q[i], v);
        r[i][j] += proj;
        for (std::size_t k = 0; k < n; ++k) v[k] -= proj * q[i][k];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (norm <= 1e-10 * std::max(original_norm, 1.0)) {
      std::string msg = "rank-deficient design: column '" + names[j] +
                        "' is collinear with";
      bool first = true;
      for (std::size_t i = 0; i < j; ++i) {
        if (std::fabs(r[i][j]) > 1e-12 * std::max(original_norm, 1.0)) {
          msg += (first ? " '" : ", '") + names[i] + "'";
          first = false;
        }
      }
      if (first) msg += " the zero vector";
      throw SingularityError(msg);
    }
    r[j][j] = norm;
    for (double& e : v) e /= norm;
    q.push_back(std::move(v));
  }

  // Solve R beta = Q^T y.
  std::vector<double> qty(p);
  for (std::size_t j = 0; j < p; ++j) qty[j] = dot(q[j], y);
  std::vector<double> beta(p, 0.0);
  for (std::size_t jj = p; jj-- > 0;) {
    double s = qty[jj];
    for (std::size_t k = jj + 1; k < p; ++k) s -= r[jj][k] * beta[k];
    beta[jj] = s / r[jj][jj];
  }
  return LinearModel(features, beta.front(),
                     std::vector<double>(beta.begin() + 1, beta.end()));
}

}  // namespace pdimp
