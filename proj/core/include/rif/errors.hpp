#pragma once

#include <stdexcept>
#include <string>

namespace rif {

// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergentQuadrature : Error {
  using Error::Error;
};
struct SeriesInconclusive : Error {
  using Error::Error;
};
struct InconclusiveRegime : Error {
  using Error::Error;
};
struct AllZero : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct UnsupportedRegime : Error {
  using Error::Error;
};
struct NotGpaf : Error {
  using Error::Error;
};
struct RequiresCayley : Error {
  using Error::Error;
};
struct BinGap : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};
struct BadConfig : Error {
  using Error::Error;
};
struct ModelViolation : Error {
  using Error::Error;
};

}  // namespace rif
