#pragma once

#include <stdexcept>
#include <string>

namespace xproject {

// Error categories map to CLI exit codes: UsageError -> 1, DataError -> 2,
// BackendError -> 3 (see tools/xproject_main.cpp).

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A corpus load whose filters matched nothing at all.
class EmptyResultError : public DataError {
 public:
  explicit EmptyResultError(const std::string& what) : DataError(what) {}
};

class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// A backend answered with an empty string for a non-empty input.
class EmptyTranslationError : public BackendError {
 public:
  explicit EmptyTranslationError(const std::string& what) : BackendError(what) {}
};

}  // namespace xproject
