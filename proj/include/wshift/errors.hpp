#ifndef WSHIFT_ERRORS_HPP
#define WSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wshift {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor or operation received parameters outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Materialized data contradicts a declared analytic fact (e.g. a weight above
/// the declared supremum).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

/// Slice measure requested where the normalizer gamma_{0j} vanishes.
class SliceUndefinedError : public Error {
 public:
  using Error::Error;
};

/// A measure decomposition produced an atom of negative mass.
class NegativeMassError : public Error {
 public:
  NegativeMassError(const std::string& what, double mass)
      : Error(what), negative_mass(mass) {}
  double negative_mass;
};

/// A closed-form result was requested but its hypotheses fail on the input.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace wshift

#endif  // WSHIFT_ERRORS_HPP
