#pragma once

#include <stdexcept>
#include <string>

namespace tapscope {

/// Bad key or bad value in a config file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (missing file, unwritable destination).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally invalid CSV content.
struct CsvFormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}
