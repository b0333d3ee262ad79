#ifndef SECRANK_ERRORS_HPP
#define SECRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace secrank {

/// Invalid problem dimensions or malformed configuration supplied by a caller.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Key already present in an index that requires distinct keys.
class DuplicateKeyError : public std::logic_error {
 public:
  explicit DuplicateKeyError(const std::string& what) : std::logic_error(what) {}
};

/// Query against an exhausted free-position set.
class EmptyFreeSetError : public std::logic_error {
 public:
  explicit EmptyFreeSetError(const std::string& what) : std::logic_error(what) {}
};

/// Attempt to take a position that is not currently free.
class PositionNotFreeError : public std::logic_error {
 public:
  explicit PositionNotFreeError(const std::string& what) : std::logic_error(what) {}
};

/// An online algorithm asked about an element that has not arrived yet.
class OnlineConstraintError : public std::logic_error {
 public:
  explicit OnlineConstraintError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace secrank

#endif  // SECRANK_ERRORS_HPP
