#pragma once

#include <stdexcept>
#include <string>

namespace nlscat {

// Bad parameters, malformed config files, inconsistent grids.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN fields, conservation-law drift, blow-up of a quantity that must stay bounded.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A command was asked to read an output that an earlier stage never produced.
class missing_artifact_error : public std::runtime_error {
 public:
  explicit missing_artifact_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nlscat
