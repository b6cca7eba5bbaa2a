#pragma once

#include <stdexcept>
#include <string>

namespace relosim {

// Bad flags, bad config file contents, inconsistent parameters. CLI exit 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable/malformed input files, hash mismatches. CLI exit 3.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relosim
