#pragma once

#include <stdexcept>
#include <string>

namespace rotsol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define ROTSOL_DEFINE_ERROR(Name)              \
    class Name : public Error                  \
    {                                          \
    public:                                    \
        explicit Name(const std::string& what) \
            : Error(#Name ": " + what)         \
        {                                      \
        }                                      \
    }

/// A coordinate lies outside the usable domain of a profile.
ROTSOL_DEFINE_ERROR(DomainError);
/// An operation that needs an arc-length profile received a general one.
ROTSOL_DEFINE_ERROR(NotUnitSpeed);
/// Quadrature or root finding could not reach the requested tolerance.
ROTSOL_DEFINE_ERROR(ToleranceNotMet);
ROTSOL_DEFINE_ERROR(NonFinite);
ROTSOL_DEFINE_ERROR(ZeroTangent);
ROTSOL_DEFINE_ERROR(StepSizeUnderflow);
/// |u'| is too close to 1 for Lambda = u'/sqrt(1-u'^2) to be evaluated.
ROTSOL_DEFINE_ERROR(NearSingular);
ROTSOL_DEFINE_ERROR(NoValidInterval);
ROTSOL_DEFINE_ERROR(NotClosed);
ROTSOL_DEFINE_ERROR(DegenerateEdge);
/// Explicit curve evolution step exceeds the parabolic stability bound.
ROTSOL_DEFINE_ERROR(StabilityViolation);
ROTSOL_DEFINE_ERROR(DomainExit);
/// Malformed input file or manifest.
ROTSOL_DEFINE_ERROR(InputError);

#undef ROTSOL_DEFINE_ERROR

} // namespace rotsol
