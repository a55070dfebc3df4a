#pragma once

#include <stdexcept>
#include <string>

namespace leuko {

/// Input data could not be used: unreadable files, malformed manifests or configs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ellipse fitting failed: too few points or a non-elliptical conic.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A detection cannot yield features (no WBC pixels).
class FeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leuko
