#pragma once

#include <stdexcept>
#include <string>

namespace dofib {

// Root of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error block.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DOFIB_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  };

DOFIB_DEFINE_ERROR(ParseError)
DOFIB_DEFINE_ERROR(DivisionByZero)
DOFIB_DEFINE_ERROR(DegenerateInput)
DOFIB_DEFINE_ERROR(DegenerateQuadruple)
DOFIB_DEFINE_ERROR(ExponentOverflow)
DOFIB_DEFINE_ERROR(ParameterDegeneracy)
DOFIB_DEFINE_ERROR(InvalidArrangement)
DOFIB_DEFINE_ERROR(NotSkew)
DOFIB_DEFINE_ERROR(NotNormalized)
DOFIB_DEFINE_ERROR(DegenerateFibration)
DOFIB_DEFINE_ERROR(SingularModel)
DOFIB_DEFINE_ERROR(LineNotLinear)
DOFIB_DEFINE_ERROR(BadSeed)
DOFIB_DEFINE_ERROR(NotANode)
DOFIB_DEFINE_ERROR(NonlinearFactor)
DOFIB_DEFINE_ERROR(NoMatch)
DOFIB_DEFINE_ERROR(NotDominant)
DOFIB_DEFINE_ERROR(Cancelled)

#undef DOFIB_DEFINE_ERROR

}  // namespace dofib
