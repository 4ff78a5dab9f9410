#pragma once
#include <stdexcept>
#include <string>

namespace specweyl {

// Every failure carries the module error name; the CLI prints it on stderr.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

#define SPECWEYL_ERROR(Name)                                                   \
    struct Name : Error {                                                      \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    };

SPECWEYL_ERROR(ModelError)
SPECWEYL_ERROR(DomainError)
SPECWEYL_ERROR(SingularEval)
SPECWEYL_ERROR(SeedRegion)
SPECWEYL_ERROR(StepUnderflow)
SPECWEYL_ERROR(NonFinite)
SPECWEYL_ERROR(PoleError)
SPECWEYL_ERROR(RangeError)
SPECWEYL_ERROR(BranchError)
SPECWEYL_ERROR(DirichletCollision)
SPECWEYL_ERROR(EigenvalueCollision)
SPECWEYL_ERROR(GaugePole)
SPECWEYL_ERROR(BracketFail)
SPECWEYL_ERROR(NotAnEigenvalue)
SPECWEYL_ERROR(GridMismatch)
SPECWEYL_ERROR(TooFewEigenvalues)
SPECWEYL_ERROR(PoleHit)
SPECWEYL_ERROR(NonConvergent)
SPECWEYL_ERROR(FrameMismatch)
SPECWEYL_ERROR(NonSummable)

#undef SPECWEYL_ERROR

} // namespace specweyl
