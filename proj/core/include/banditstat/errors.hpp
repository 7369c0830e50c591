#pragma once

#include <stdexcept>
#include <string>

namespace banditstat {

// Malformed or internally inconsistent input data (logs, configs, CSV rows).
class DataIntegrityError : public std::runtime_error {
 public:
  explicit DataIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a calibration run cannot produce usable critical values.
class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace banditstat
