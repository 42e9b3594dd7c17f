#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wqed {

// Invalid user input (bad parameters, malformed config). The CLI maps these to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that is undefined or failed for valid inputs. The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularTransmission : public NumericalError {
public:
    SingularTransmission(std::size_t emitter_index, double abs_t1)
        : NumericalError("transmission of emitter " + std::to_string(emitter_index) +
                         " vanishes (|t1| = " + std::to_string(abs_t1) + ")"),
          emitter_index_(emitter_index) {}

    std::size_t emitter_index() const noexcept { return emitter_index_; }

private:
    std::size_t emitter_index_;
};

#define WQED_DEFINE_ERROR(Name, Base) \
    class Name : public Base {        \
    public:                           \
        using Base::Base;             \
    };

WQED_DEFINE_ERROR(DegenerateMatrix, NumericalError)
WQED_DEFINE_ERROR(NearSingularPhase, NumericalError)
WQED_DEFINE_ERROR(TargetOutsideBranch, NumericalError)
WQED_DEFINE_ERROR(NotReachable, NumericalError)
WQED_DEFINE_ERROR(LossyResponse, NumericalError)
WQED_DEFINE_ERROR(ZeroResultant, NumericalError)
WQED_DEFINE_ERROR(AllRealizationsSingular, NumericalError)
WQED_DEFINE_ERROR(QuadratureNotConverged, NumericalError)
WQED_DEFINE_ERROR(GridTooNarrow, NumericalError)
WQED_DEFINE_ERROR(GridMismatch, NumericalError)
WQED_DEFINE_ERROR(DegenerateFit, NumericalError)
WQED_DEFINE_ERROR(NoValidBranch, NumericalError)
WQED_DEFINE_ERROR(OddEmitterCount, ConfigError)

#undef WQED_DEFINE_ERROR

}  // namespace wqed
