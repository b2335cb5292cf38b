#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace foodqa {

// Malformed or inconsistent input data (files, ids, schemas).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values during training or scoring.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Warnings go to stderr unless silenced (tests silence them).
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace foodqa
