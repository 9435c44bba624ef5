#pragma once

#include <stdexcept>

namespace blr {

// Base class for every recoverable error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (bin01 matrices, relation files, table files).
struct ParseError : Error {
    using Error::Error;
};

// Operands with incompatible coordinate widths.
struct WidthMismatchError : Error {
    using Error::Error;
};

// An operation that requires at least one element received none
// (empty dataset, empty center set, empty sample, empty point list).
struct EmptyInputError : Error {
    using Error::Error;
};

// A relation coordinate with zero allowed tuples: the instance is infeasible.
struct EmptyRelationError : Error {
    using Error::Error;
};

// Mismatched k/d between a center set and a relation set, or between factors.
struct ShapeMismatchError : Error {
    using Error::Error;
};

// A parameter outside its documented domain (epsilon range, rank cap,
// zero candidate budget, too few elements to enumerate subsets, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

// Work or memory beyond a configured guard (oracle budgets, '*' expansion).
struct LimitsExceededError : Error {
    using Error::Error;
};

// A relation tuple without a generating witness where one is required.
struct MissingWitnessError : Error {
    using Error::Error;
};

}  // namespace blr
