#pragma once

#include <stdexcept>
#include <string>

namespace lacuna {

// Malformed or truncated LACD/LACM input.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File system failures (open, short write).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Non-finite values appearing during training or evaluation.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace lacuna
