#pragma once

#include <stdexcept>
#include <string>

namespace tracesep {

/// Base class of every error raised by the library. Messages name the
/// offending field or constraint so CLI users can act on them.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Group-spec document does not parse (syntax).
struct MalformedSpec : Error {
  using Error::Error;
};

/// Group-spec document parses but violates a semantic rule
/// (duplicate generator names, order 1, empty factor list, ...).
struct InvalidSpec : Error {
  using Error::Error;
};

/// Element word does not parse ("name:exponent" tokens or "e").
struct MalformedWord : Error {
  using Error::Error;
};

/// Operands belong to different group specs.
struct MixedSpecs : Error {
  using Error::Error;
};

/// Exact-mode operation applied to a floating element or vice versa.
struct ModeMismatch : Error {
  using Error::Error;
};

/// A torsion-only operation was given an element of infinite order.
struct InfiniteOrder : Error {
  using Error::Error;
};

/// Witness fails a trace-matrix hypothesis other than finiteness
/// (identity witness, order < 2).
struct InvalidWitness : Error {
  using Error::Error;
};

/// Two witnesses share the same order; the distinct-orders hypothesis
/// of the trace matrix is violated.
struct DuplicateOrders : Error {
  using Error::Error;
};

/// Closed-form shell counting asked for a class whose cyclically reduced
/// core is not a single torsion syllable.
struct UnsupportedClass : Error {
  using Error::Error;
};

/// Projected enumeration size exceeds the configured cap.
struct ResourceLimit : Error {
  using Error::Error;
};

/// Growth classification needs more nonzero shells than the profile has.
struct InsufficientData : Error {
  using Error::Error;
};

/// Profile does not cover the data it is being checked against.
struct ProfileMismatch : Error {
  using Error::Error;
};

/// Shell schedule is inconsistent with the profile it is applied to.
struct ScheduleInvalid : Error {
  using Error::Error;
};

/// Exact rational arithmetic left the 64-bit range.
struct Overflow : Error {
  using Error::Error;
};

/// Numeric CLI/op parameter outside its documented bounds.
struct InvalidParameter : Error {
  using Error::Error;
};

}  // namespace tracesep
