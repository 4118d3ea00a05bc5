#pragma once

#include <stdexcept>
#include <string>

namespace gammamix {

/// Argument outside the domain of a special function or density.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Moment or cluster statistics cannot be turned into valid parameters.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit produced non-finite quantities (collapsed component, diverging NFE).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undefined metric, e.g. an AUC on single-class truth.
class UndefinedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or argument.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gammamix
