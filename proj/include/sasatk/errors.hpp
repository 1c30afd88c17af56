#pragma once

#include <stdexcept>
#include <string>

namespace sasatk {

// Base class for every failure raised by the toolkit. The CLI maps these to
// nonzero exit codes; library callers can catch the specific subclasses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

// Gamma evaluated at (or numerically indistinguishable from) a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

// A special-function branch could not meet its accuracy budget.
class AccuracyLossError : public Error {
public:
    using Error::Error;
};

// Adaptive integrator step fell below the minimum admissible size.
class StepUnderflowError : public Error {
public:
    using Error::Error;
};

// Sampled initial datum is not negligible at the truncation boundary.
class DecayViolationError : public Error {
public:
    using Error::Error;
};

// |s33(k)| below the zero guard on the real axis.
class NearZeroS33Error : public Error {
public:
    NearZeroS33Error(const std::string& what, double k) : Error(what), k_(k) {}
    double k() const noexcept { return k_; }

private:
    double k_;
};

// Spectral table too coarse (or not covering the interval) for a quadrature.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// A structural symmetry of the scattering data failed its tolerance.
class SymmetryError : public Error {
public:
    using Error::Error;
};

// The two independent evaluations of the leading-order term disagree.
class RouteMismatchError : public Error {
public:
    using Error::Error;
};

// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
public:
    using Error::Error;
};

class MassDriftError : public Error {
public:
    using Error::Error;
};

// Significant amplitude reached the edge of the periodic box.
class ContaminationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sasatk
