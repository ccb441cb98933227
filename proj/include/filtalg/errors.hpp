#ifndef FILTALG_ERRORS_HPP
#define FILTALG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace filtalg {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidCutLevel : Error {
  using Error::Error;
};
struct MinimalEnergyViolation : Error {
  using Error::Error;
};
struct SpaceMismatch : Error {
  using Error::Error;
};
struct DegreeError : Error {
  using Error::Error;
};
struct CutRaiseError : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct Unsupported : Error {
  using Error::Error;
};
struct InvalidPartition : Error {
  using Error::Error;
};
struct IOError : Error {
  using Error::Error;
};

// Schema violations carry a JSON-pointer-ish location of the offending field.
struct SchemaError : Error {
  std::string where;
  SchemaError(const std::string& where_, const std::string& what)
      : Error(where_ + ": " + what), where(where_) {}
};

struct PreconditionFailed : Error {
  using Error::Error;
};

}  // namespace filtalg

#endif
