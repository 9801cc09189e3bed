#pragma once

#include <stdexcept>
#include <string>

namespace nashbandit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NASHBANDIT_ERROR(Name)           \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

NASHBANDIT_ERROR(InvalidInstance);
NASHBANDIT_ERROR(InvalidHorizon);
NASHBANDIT_ERROR(InvalidParameter);
NASHBANDIT_ERROR(PolicyContractViolation);
NASHBANDIT_ERROR(EnsembleMismatch);
NASHBANDIT_ERROR(NotApplicable);
NASHBANDIT_ERROR(NotEnoughData);
NASHBANDIT_ERROR(ConfigError);

#undef NASHBANDIT_ERROR

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path) : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace nashbandit
