#ifndef WAVELAB_ERRORS_HPP
#define WAVELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavelab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define WAVELAB_DEFINE_ERROR(Name)                                 \
  struct Name : Error {                                            \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

// grid / state construction
WAVELAB_DEFINE_ERROR(NonPositiveSpacing);
WAVELAB_DEFINE_ERROR(DomainTooSmall);
WAVELAB_DEFINE_ERROR(NonIntegralSpan);
WAVELAB_DEFINE_ERROR(WrongDomain);
WAVELAB_DEFINE_ERROR(NonPositiveLambda);
WAVELAB_DEFINE_ERROR(ROutOfRange);

// linear group
WAVELAB_DEFINE_ERROR(HorizonExceedsGrid);
WAVELAB_DEFINE_ERROR(TimeOutOfHorizon);
WAVELAB_DEFINE_ERROR(NegativeTime);
WAVELAB_DEFINE_ERROR(NonIntegrableField);

// solver
WAVELAB_DEFINE_ERROR(DomainTooSmallForHorizon);
WAVELAB_DEFINE_ERROR(GridMismatch);

// special solutions
WAVELAB_DEFINE_ERROR(ZeroEll);
WAVELAB_DEFINE_ERROR(NoBlowUpFound);
WAVELAB_DEFINE_ERROR(TooCloseToSingularity);

// diagnostics
WAVELAB_DEFINE_ERROR(BlowUpRun);
WAVELAB_DEFINE_ERROR(HorizonTooShort);
WAVELAB_DEFINE_ERROR(NonSquareIntegrable);
WAVELAB_DEFINE_ERROR(IndexOutOfRange);

// cli
WAVELAB_DEFINE_ERROR(ConfigParseError);

#undef WAVELAB_DEFINE_ERROR

}  // namespace wavelab

#endif
