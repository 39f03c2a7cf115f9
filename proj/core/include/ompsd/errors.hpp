#pragma once

#include <stdexcept>
#include <string>

namespace ompsd {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A factorization met a column (numerically) dependent on the previous ones.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// The sphere decoder was asked for more nonzeros than it has positions.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused: the search space exceeds the guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied parameter violates an operation's precondition.
class ParamError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid sweep configuration (bad field, bad value, unreadable config file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ompsd
