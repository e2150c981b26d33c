#pragma once

#include <stdexcept>
#include <string>

namespace causalid {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph text, model file or CLI argument.
class ParseError : public Error {
 public:
  using Error::Error;
};

class SelfLoop : public Error {
 public:
  using Error::Error;
};

class CyclicGraph : public Error {
 public:
  using Error::Error;
};

class UnknownVertex : public Error {
 public:
  using Error::Error;
};

class NameCollision : public Error {
 public:
  using Error::Error;
};

class OverlappingSets : public Error {
 public:
  using Error::Error;
};

class InvalidPath : public Error {
 public:
  using Error::Error;
};

class EmptyVar : public Error {
 public:
  using Error::Error;
};

class InvalidQuery : public Error {
 public:
  using Error::Error;
};

// A state the algorithms guarantee cannot be reached.
class InternalError : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

// Structurally invalid causal model (bad CPT, bad latent, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalid
