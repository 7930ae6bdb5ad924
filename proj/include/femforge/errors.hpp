#pragma once

#include <stdexcept>
#include <string>

namespace femforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FEMFORGE_DECLARE_ERROR(Name)        \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(#Name ": " + what) {}       \
  };

FEMFORGE_DECLARE_ERROR(SingularMatrix)
FEMFORGE_DECLARE_ERROR(DimensionMismatch)
FEMFORGE_DECLARE_ERROR(ShapeMismatch)
FEMFORGE_DECLARE_ERROR(DegenerateSimplex)
FEMFORGE_DECLARE_ERROR(WrongCodimension)
FEMFORGE_DECLARE_ERROR(BadDegree)
FEMFORGE_DECLARE_ERROR(UnsupportedTag)
FEMFORGE_DECLARE_ERROR(SameSideApexes)

#undef FEMFORGE_DECLARE_ERROR

}  // namespace femforge
