#ifndef RESUMFEM_ERRORS_HPP
#define RESUMFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace resumfem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct BadDegree : Error { using Error::Error; };
struct BadMesh : Error { using Error::Error; };
struct OrderTooHigh : Error { using Error::Error; };
struct DegenerateFit : Error { using Error::Error; };
struct PoleOnPath : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct UnknownRecipe : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace resumfem

#endif
