#ifndef PPSLAB_ERRORS_HPP
#define PPSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ppslab {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag; `what()` carries the human-readable diagnostic.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PPSLAB_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

PPSLAB_DEFINE_ERROR(NotHermitian);
PPSLAB_DEFINE_ERROR(NotIdempotent);
PPSLAB_DEFINE_ERROR(NonIntegralTrace);
PPSLAB_DEFINE_ERROR(NotAnEffect);
PPSLAB_DEFINE_ERROR(NotNormalized);
PPSLAB_DEFINE_ERROR(DimensionMismatch);
PPSLAB_DEFINE_ERROR(DimensionCapExceeded);
PPSLAB_DEFINE_ERROR(InvalidTolerance);
PPSLAB_DEFINE_ERROR(NonFiniteEntry);
PPSLAB_DEFINE_ERROR(NotAMeasurement);
PPSLAB_DEFINE_ERROR(NotTracePreservingTotal);
PPSLAB_DEFINE_ERROR(NotAChannel);
PPSLAB_DEFINE_ERROR(PostselectionImpossible);
PPSLAB_DEFINE_ERROR(OrthogonalPrePost);
PPSLAB_DEFINE_ERROR(ClosureBudgetExceeded);
PPSLAB_DEFINE_ERROR(MissingElement);
PPSLAB_DEFINE_ERROR(NumericallyIndeterminate);
PPSLAB_DEFINE_ERROR(TooLarge);
PPSLAB_DEFINE_ERROR(UnknownLabel);
PPSLAB_DEFINE_ERROR(OperatorMismatch);
PPSLAB_DEFINE_ERROR(ModelDoesNotReproduce);
PPSLAB_DEFINE_ERROR(InvalidScenario);
PPSLAB_DEFINE_ERROR(ParseError);

#undef PPSLAB_DEFINE_ERROR

} // namespace ppslab

#endif // PPSLAB_ERRORS_HPP
