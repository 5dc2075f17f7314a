#pragma once

#include <stdexcept>
#include <string>

namespace skelxai {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (NTU skeleton files, JSON documents). Messages carry
// the offending line number where one is known.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid skeleton file whose layout we do not support
// (e.g. a joint count other than 25).
struct UnsupportedSkeleton : Error {
    using Error::Error;
};

// A skeleton file that contains no tracked body in any frame.
struct EmptySample : Error {
    using Error::Error;
};

// A constructed value violates one of its documented invariants.
struct ValidationError : Error {
    using Error::Error;
};

struct PreprocessError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Perturbation target outside the joint range.
struct TargetError : Error {
    using Error::Error;
};

struct ModelError : Error {
    using Error::Error;
};

struct TrainingError : Error {
    using Error::Error;
};

struct AttrError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct MetricError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

}  // namespace skelxai
