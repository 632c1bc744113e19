#pragma once

#include <stdexcept>
#include <string>

namespace dppsel {

// Error categories map onto CLI exit codes: config=2, data=3, numeric=4.
enum class ErrorKind { config = 2, data = 3, numeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ConstantColumn : public Error {
 public:
  explicit ConstantColumn(int column)
      : Error(ErrorKind::data, "constant_column",
              "column " + std::to_string(column) + " has zero scale"),
        column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what_matrix)
      : Error(ErrorKind::numeric, "rank_deficient",
              what_matrix + " is numerically rank deficient") {}
};

class SingularCovariance : public Error {
 public:
  explicit SingularCovariance(const std::string& detail)
      : Error(ErrorKind::numeric, "singular_covariance", detail) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& detail)
      : Error(ErrorKind::config, "dimension_mismatch", detail) {}
};

class TooLarge : public Error {
 public:
  TooLarge(const std::string& what, int value, int limit)
      : Error(ErrorKind::config, "too_large",
              what + " = " + std::to_string(value) + " exceeds limit " +
                  std::to_string(limit)) {}
};

class OptimizationFailed : public Error {
 public:
  explicit OptimizationFailed(const std::string& detail)
      : Error(ErrorKind::numeric, "optimization_failed", detail) {}
};

class AllZeroDifferences : public Error {
 public:
  AllZeroDifferences()
      : Error(ErrorKind::numeric, "all_zero_differences",
              "all paired differences are zero") {}
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& detail)
      : Error(ErrorKind::data, "parse_error",
              "parse error at line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class NonNumericCell : public Error {
 public:
  NonNumericCell(int line, int column, const std::string& cell)
      : Error(ErrorKind::data, "non_numeric_cell",
              "non-numeric cell \"" + cell + "\" at line " +
                  std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(const std::string& name)
      : Error(ErrorKind::data, "missing_column",
              "column \"" + name + "\" not found in header"),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace dppsel
