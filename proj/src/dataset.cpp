#include "ebnet/dataset.hpp"

#include <set>

#include "ebnet/error.hpp"

namespace ebnet {

VariableSpec VariableSpec::discrete(std::string name, int cardinality) {
  std::vector<std::string> labels;
  labels.reserve(cardinality > 0 ? static_cast<std::size_t>(cardinality) : 0);
  for (int i = 0; i < cardinality; ++i) labels.push_back(std::to_string(i));
  return discrete(std::move(name), std::move(labels));
}

VariableSpec VariableSpec::discrete(std::string name, std::vector<std::string> levels) {
  return VariableSpec{std::move(name), VariableKind::Discrete, std::move(levels)};
}

VariableSpec VariableSpec::continuous(std::string name) {
  return VariableSpec{std::move(name), VariableKind::Continuous, {}};
}

Dataset Dataset::discrete(std::vector<VariableSpec> variables,
                          std::vector<std::vector<int>> columns) {
  Dataset d;
  d.variables_ = std::move(variables);
  d.kind_ = VariableKind::Discrete;
  d.levels_ = std::move(columns);
  d.rows_ = d.levels_.empty() ? 0 : d.levels_.front().size();
  d.validate();
  return d;
}

Dataset Dataset::continuous(std::vector<VariableSpec> variables,
                            std::vector<std::vector<double>> columns) {
  Dataset d;
  d.variables_ = std::move(variables);
  d.kind_ = VariableKind::Continuous;
  d.values_ = std::move(columns);
  d.rows_ = d.values_.empty() ? 0 : d.values_.front().size();
  d.validate();
  return d;
}

void Dataset::validate() const {
  if (variables_.empty()) throw InvalidArgument("dataset has no variables");
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name).second) throw InvalidArgument("duplicate variable name '" + v.name + "'");
    if (v.kind != kind_) throw InvalidArgument("mixed discrete/continuous variables are not supported");
    if (v.is_discrete() && v.cardinality() < 2)
      throw InvalidArgument("variable '" + v.name + "' has cardinality below 2");
  }
  const std::size_t n_cols = is_discrete() ? levels_.size() : values_.size();
  if (n_cols != variables_.size()) throw InvalidArgument("column count does not match variable count");
  if (rows_ == 0) throw InvalidArgument("dataset has no rows");
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (is_discrete()) {
      const auto& col = levels_[j];
      if (col.size() != rows_) throw InvalidArgument("ragged column '" + variables_[j].name + "'");
      const int card = variables_[j].cardinality();
      for (std::size_t r = 0; r < rows_; ++r) {
        if (col[r] < 0 || col[r] >= card)
          throw InvalidArgument("row " + std::to_string(r) + ", variable '" + variables_[j].name +
                                "': level out of range");
      }
    } else if (values_[j].size() != rows_) {
      throw InvalidArgument("ragged column '" + variables_[j].name + "'");
    }
  }
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  if (rows.empty()) throw InvalidArgument("row selection is empty");
  Dataset d;
  d.variables_ = variables_;
  d.kind_ = kind_;
  d.rows_ = rows.size();
  if (is_discrete()) {
    d.levels_.resize(levels_.size());
    for (std::size_t j = 0; j < levels_.size(); ++j) {
      auto& out = d.levels_[j];
      out.reserve(rows.size());
      for (auto r : rows) out.push_back(levels_[j].at(r));
    }
  } else {
    d.values_.resize(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) {
      auto& out = d.values_[j];
      out.reserve(rows.size());
      for (auto r : rows) out.push_back(values_[j].at(r));
    }
  }
  return d;
}

Dataset Dataset::with_levels(std::size_t var, std::vector<int> column) const {
  if (!is_discrete()) throw InvalidArgument("with_levels on continuous dataset");
  Dataset d = *this;
  d.levels_.at(var) = std::move(column);
  d.validate();
  return d;
}

Dataset Dataset::with_values(std::size_t var, std::vector<double> column) const {
  if (is_discrete()) throw InvalidArgument("with_values on discrete dataset");
  Dataset d = *this;
  d.values_.at(var) = std::move(column);
  d.validate();
  return d;
}

std::vector<VariableSpec> binary_variables(int n) {
  std::vector<VariableSpec> vars;
  vars.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vars.push_back(VariableSpec::discrete("x" + std::to_string(i + 1), 2));
  return vars;
}

}  // namespace ebnet
