#pragma once

#include <stdexcept>
#include <string>

namespace huffkit {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input table is missing a required column or has an unusable header.
struct SchemaError : Error {
    using Error::Error;
};

// A value is syntactically readable but violates a contract (bad config,
// out-of-range parameter, malformed argument).
struct ValidationError : Error {
    using Error::Error;
};

// Cross-table referential breakage that cannot be handled as a row rejection
// (e.g. a study cell whose district has no indicators record).
struct IntegrityError : Error {
    using Error::Error;
};

// Statistic is undefined on this input (constant series, empty support,
// fewer than two positive incomes, ...).
struct DegenerateError : Error {
    using Error::Error;
};

// Too few observations to run the requested computation at all.
struct InsufficientSampleError : Error {
    using Error::Error;
};

// Design matrix is rank deficient; message names the offending columns.
struct SingularDesignError : Error {
    using Error::Error;
};

}  // namespace huffkit
