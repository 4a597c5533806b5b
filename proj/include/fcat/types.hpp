#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fcat {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  ConsistencyError(std::string kind, double residual, const std::string& detail = {})
      : Error("consistency failure (" + kind + "), residual " + std::to_string(residual) +
              (detail.empty() ? "" : ": " + detail)),
        kind_(std::move(kind)),
        residual_(residual) {}
  const std::string& kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  std::string kind_;
  double residual_;
};

class MissingData : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& id) : Error("unknown label '" + id + "'") {}
};

class NotBraided : public Error {
 public:
  NotBraided() : Error("category has no braiding data") {}
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class BadPosition : public Error {
 public:
  using Error::Error;
};

class NotHalfBraiding : public Error {
 public:
  explicit NotHalfBraiding(double residual)
      : Error("not a half-braiding, residual " + std::to_string(residual)), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotModular : public Error {
 public:
  NotModular() : Error("category is not modular") {}
};

class DecompositionFailed : public Error {
 public:
  using Error::Error;
};

class SplitFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace fcat
