#pragma once

#include <stdexcept>
#include <string>

namespace sepsys {

// Base class for everything this library throws on invalid input or
// violated preconditions. Logic bugs (postconditions the theory
// guarantees) throw InternalError instead so tests can tell them apart.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SEPSYS_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
  public:                                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

// Core system validation.
SEPSYS_DEFINE_ERROR(InvolutionError);
SEPSYS_DEFINE_ERROR(CycleError);
SEPSYS_DEFINE_ERROR(OrderReversalError);
SEPSYS_DEFINE_ERROR(UnknownElement);
SEPSYS_DEFINE_ERROR(InconsistentInput);

// Homomorphisms and inverse systems.
SEPSYS_DEFINE_ERROR(InvolutionMismatch);
SEPSYS_DEFINE_ERROR(OrderViolation);
SEPSYS_DEFINE_ERROR(NotDirected);
SEPSYS_DEFINE_ERROR(IncompatibleBonds);
SEPSYS_DEFINE_ERROR(UnknownPoint);
SEPSYS_DEFINE_ERROR(NotAChain);
SEPSYS_DEFINE_ERROR(NotClosed);

// Transfer lemmas.
SEPSYS_DEFINE_ERROR(NotTrivialWithWitness);
SEPSYS_DEFINE_ERROR(NotEpi);
SEPSYS_DEFINE_ERROR(TrivialInput);
SEPSYS_DEFINE_ERROR(PreconditionFailed);
SEPSYS_DEFINE_ERROR(NotSurjective);
SEPSYS_DEFINE_ERROR(NotNested);
SEPSYS_DEFINE_ERROR(DoesNotSplit);
SEPSYS_DEFINE_ERROR(NotAStar);
SEPSYS_DEFINE_ERROR(NotSplitting);
SEPSYS_DEFINE_ERROR(Degenerate);
SEPSYS_DEFINE_ERROR(CoSmallMember);

// Compactness machinery.
SEPSYS_DEFINE_ERROR(LevelTooLarge);
SEPSYS_DEFINE_ERROR(UniverseTooLarge);
SEPSYS_DEFINE_ERROR(NotEssentiallyClosed);

// Chains, generators, instance builders.
SEPSYS_DEFINE_ERROR(BuilderError);
SEPSYS_DEFINE_ERROR(NoGreatest);
SEPSYS_DEFINE_ERROR(UnregisteredChain);
SEPSYS_DEFINE_ERROR(UnknownExample);
SEPSYS_DEFINE_ERROR(BadParams);
SEPSYS_DEFINE_ERROR(TooLarge);

// Interchange documents.
SEPSYS_DEFINE_ERROR(ParseError);

#undef SEPSYS_DEFINE_ERROR

// Thrown when a postcondition that the underlying theory guarantees
// fails to verify. Seeing one of these is a bug, not a bad input.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& msg)
      : std::logic_error("InternalError: " + msg) {}
};

}  // namespace sepsys
