#pragma once

#include <stdexcept>
#include <string>

namespace t3 {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

// Replay store has no entry for the request; carries the missing hash.
class ReplayMissError : public ProviderError {
 public:
  explicit ReplayMissError(const std::string& hash)
      : ProviderError("replay miss: no transcript entry for request hash " + hash), hash_(hash) {}
  const std::string& hash() const { return hash_; }

 private:
  std::string hash_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Run-level failure budget exceeded; the whole stage stops.
class RunAbortedError : public Error {
 public:
  using Error::Error;
};

}  // namespace t3
