#pragma once

#include <stdexcept>
#include <string>

namespace spinsurf {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid bounds, resolution, flags or CLI/config values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A differentiation scheme was requested on a grid that cannot support it.
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// Fields living on different grids were combined.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// A node path had non-adjacent consecutive nodes.
class PathError : public Error {
 public:
  using Error::Error;
};

/// A reduction met singular-flagged nodes without a mask policy.
class MaskError : public Error {
 public:
  using Error::Error;
};

/// A 1-form failed the loop (path-independence) test.
class NotClosedError : public Error {
 public:
  NotClosedError(const std::string& what, double defect) : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Gauge function rejected because it is not holomorphic on the grid.
class NotHolomorphicError : public Error {
 public:
  NotHolomorphicError(const std::string& what, double dbar_norm) : Error(what), dbar_norm_(dbar_norm) {}
  double dbar_norm() const noexcept { return dbar_norm_; }

 private:
  double dbar_norm_;
};

/// Invalid mathematical input (bad heat datum, bad catalog parameters, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf detected during a computation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An integrand failed the decay check needed for a whole-plane integral.
class DecayError : public Error {
 public:
  using Error::Error;
};

/// No integration constant satisfies the S-pair normalization.
class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Malformed serialized input or an unsupported output format.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinsurf
