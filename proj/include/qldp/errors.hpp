#pragma once

#include <stdexcept>
#include <string>

namespace qldp {

/// Bad constructor or function argument (p < 1, k > n, malformed grid...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument lies outside the effective domain of a log-MGF, e.g. t2 >= T.
/// Kept distinct from numeric failures so optimizers can treat the domain
/// edge as a barrier.
class DomainViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative routine (quadrature, Newton, bracketing) did not converge.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pair-partition degree outside the supported range 1..5.
class UnsupportedDegree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query point outside the space X (e.g. ||w||_2 > r).
class InvalidPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Importance sampling requested at a threshold whose rate is infinite.
class RefuseTilt : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qldp
