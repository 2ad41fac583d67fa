#pragma once

#include <stdexcept>
#include <string>

namespace lrc {

// Caller passed arguments outside an operation's domain.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured limit (memory budget, oracle size guard) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Proof assembly found a missing, mismatched or inconsistent input.
class ProofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed persisted data: records, certificates, table caches.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrc
