#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace oiso {

/// Base class of everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (a usage error).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Exact arithmetic was requested but the inputs carry no rational data.
class ExactModeUnavailable : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A mathematical failure: the input is well formed but does not have the
/// property being checked (or recovered). Front ends map these to exit code 2.
class Rejection : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Rejection {
public:
    using Rejection::Rejection;
};

class NotOrderIsomorphism : public Rejection {
public:
    using Rejection::Rejection;
};

/// The zero-set intersection at an anchor is empty, has several points, or
/// (in floating mode) its best candidate does not beat the runner-up by the
/// required margin.
class AmbiguousIntersection : public Rejection {
public:
    AmbiguousIntersection(const std::string& what, std::size_t anchor)
        : Rejection(what), anchor_(anchor) {}
    std::size_t anchor() const noexcept { return anchor_; }

private:
    std::size_t anchor_;
};

/// Only reachable when tolerances are abused: the recovered point map is not
/// a bijection, or an accepted operator fails its own representation.
class InternalContradiction : public Rejection {
public:
    using Rejection::Rejection;
};

class NonPositiveWeight : public Rejection {
public:
    NonPositiveWeight(const std::string& what, std::size_t point)
        : Rejection(what), point_(point) {}
    std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

class NotAnIsometry : public Rejection {
public:
    NotAnIsometry(const std::string& what, std::optional<std::size_t> point)
        : Rejection(what), point_(point) {}
    std::optional<std::size_t> witness_point() const noexcept { return point_; }

private:
    std::optional<std::size_t> point_;
};

class GInvarianceFailure : public Rejection {
public:
    using Rejection::Rejection;
};

class SeparationInfeasible : public Rejection {
public:
    using Rejection::Rejection;
};

class NonconvergentNet : public Rejection {
public:
    NonconvergentNet(const std::string& what, std::size_t sequence, std::size_t generator,
                     double variation)
        : Rejection(what), sequence_(sequence), generator_(generator), variation_(variation) {}
    std::size_t sequence() const noexcept { return sequence_; }
    std::size_t generator() const noexcept { return generator_; }
    double variation() const noexcept { return variation_; }

private:
    std::size_t sequence_;
    std::size_t generator_;
    double variation_;
};

/// T1 is not bounded above and away from zero, so bounded functions need not
/// map to bounded functions.
class BoundedPartViolation : public Rejection {
public:
    using Rejection::Rejection;
};

class AmbiguousBoundary : public Rejection {
public:
    using Rejection::Rejection;
};

/// A bounded search ran out of depth or budget before certifying anything.
class Inconclusive : public Rejection {
public:
    using Rejection::Rejection;
};

} // namespace oiso
