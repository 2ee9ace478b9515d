#pragma once

#include <stdexcept>
#include <string>

namespace dualpqc {

/// Domain/validation failure: bad indices, malformed configs, value
/// contracts violated. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / parse failure on external files. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when training hits a non-finite loss; carries the path of the
/// diagnostic dump written before aborting.
class TrainAbort : public std::runtime_error {
 public:
  TrainAbort(const std::string& what, std::string dump_path)
      : std::runtime_error(what), dump_path_(std::move(dump_path)) {}
  const std::string& dump_path() const { return dump_path_; }

 private:
  std::string dump_path_;
};

}  // namespace dualpqc
