#pragma once

#include <stdexcept>
#include <string>

namespace iwtower {

// Base for every failure the library reports on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, bad PD code, non-prime p, ...
class InputError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition does not hold (non-unit inverse, no root mod p,
// non-QHS base, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The working p-adic precision or truncation cannot decide the answer.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// A configured size bound was hit (oracle index, gcd degree, ...).
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace iwtower
