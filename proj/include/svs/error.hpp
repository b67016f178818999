#pragma once

#include <stdexcept>
#include <string>

namespace svs {

/// Caller violated a documented precondition (bad flags, shape mismatch).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Mathematically undefined request (inverse of zero, roots of the zero polynomial).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// The request exceeds a desk-scale enumeration or search cap.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// A well-formed request outside what is implemented (e.g. certificates for s != 2).
class UnsupportedError : public std::logic_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace svs
