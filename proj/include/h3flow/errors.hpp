#pragma once

#include <stdexcept>
#include <string>

namespace h3flow {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic outside the domain of an operation (inverting zero, etc.).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rational function or automorphy factor was evaluated at a pole.
/// `word` names the group element whose term hit the pole, when known.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, std::string word = {})
      : Error(what), word_(std::move(word)) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InvalidPairingError : public Error {
 public:
  using Error::Error;
};

/// Bad user input: configuration values, CLI arguments, file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace h3flow
