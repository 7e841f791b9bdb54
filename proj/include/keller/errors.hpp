#pragma once

#include <stdexcept>
#include <string>

namespace keller {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define KELLER_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

KELLER_DEFINE_ERROR(ParseError);
KELLER_DEFINE_ERROR(DomainError);
KELLER_DEFINE_ERROR(PreconditionError);

// series
KELLER_DEFINE_ERROR(BranchError);
KELLER_DEFINE_ERROR(ExponentError);
KELLER_DEFINE_ERROR(IllDefined);
KELLER_DEFINE_ERROR(PoleAtX0);

// reversion / majorants
KELLER_DEFINE_ERROR(ZeroLinearTerm);
KELLER_DEFINE_ERROR(ZeroLeading);
KELLER_DEFINE_ERROR(MixedShape);
KELLER_DEFINE_ERROR(ExponentRange);
KELLER_DEFINE_ERROR(NegativeDiscriminant);
KELLER_DEFINE_ERROR(Uncertified);

// normalization / transforms
KELLER_DEFINE_ERROR(NotKeller);
KELLER_DEFINE_ERROR(NoValidEll);
KELLER_DEFINE_ERROR(DegeneratePair);
KELLER_DEFINE_ERROR(NoBeta2);
KELLER_DEFINE_ERROR(NewtonDivergence);
KELLER_DEFINE_ERROR(QuadratureUnstable);

// local machinery
KELLER_DEFINE_ERROR(StylePrecondition);
KELLER_DEFINE_ERROR(NoStepFound);
KELLER_DEFINE_ERROR(TangencyNotMet);

#undef KELLER_DEFINE_ERROR

} // namespace keller
