#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ebnet {

enum class VariableKind { Discrete, Continuous };

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::Discrete;
  /// Level labels of a discrete variable; index in this vector is the level
  /// code used in memory. Empty for continuous variables.
  std::vector<std::string> levels;

  static VariableSpec discrete(std::string name, int cardinality);
  static VariableSpec discrete(std::string name, std::vector<std::string> levels);
  static VariableSpec continuous(std::string name);

  int cardinality() const { return static_cast<int>(levels.size()); }
  bool is_discrete() const { return kind == VariableKind::Discrete; }

  bool operator==(const VariableSpec&) const = default;
};

/// Complete sample matrix with n variables and m rows, stored by column.
/// All variables share one kind; mixed discrete/continuous data is rejected.
/// Immutable after construction.
class Dataset {
 public:
  Dataset() = default;

  /// Throws InvalidArgument when names repeat, a cardinality is below 2, a
  /// level code is out of range, columns have unequal length or m == 0.
  static Dataset discrete(std::vector<VariableSpec> variables, std::vector<std::vector<int>> columns);
  static Dataset continuous(std::vector<VariableSpec> variables,
                            std::vector<std::vector<double>> columns);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_; }
  VariableKind kind() const { return kind_; }
  bool is_discrete() const { return kind_ == VariableKind::Discrete; }

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const VariableSpec& variable(std::size_t i) const { return variables_.at(i); }
  int cardinality(std::size_t i) const { return variables_.at(i).cardinality(); }

  std::span<const int> levels(std::size_t var) const { return levels_.at(var); }
  std::span<const double> values(std::size_t var) const { return values_.at(var); }

  /// New dataset made of the given rows (repeats allowed).
  Dataset select_rows(std::span<const std::size_t> rows) const;

  /// New dataset with column `var` replaced.
  Dataset with_levels(std::size_t var, std::vector<int> column) const;
  Dataset with_values(std::size_t var, std::vector<double> column) const;

  bool operator==(const Dataset&) const = default;

 private:
  void validate() const;

  std::vector<VariableSpec> variables_;
  VariableKind kind_ = VariableKind::Discrete;
  std::size_t rows_ = 0;
  std::vector<std::vector<int>> levels_;
  std::vector<std::vector<double>> values_;
};

/// Binary variables named x1..xn.
std::vector<VariableSpec> binary_variables(int n);

}  // namespace ebnet
