#pragma once

#include <stdexcept>
#include <string>

namespace npdist {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A query asked for a value beyond the sieved bound, or for a prime/gap
// index that is not covered by the engine's limit.
class RangeError : public Error {
public:
    using Error::Error;
};

// Exact big-integer product requested above the configured exact cap.
class ExactCapError : public Error {
public:
    using Error::Error;
};

// A regression fit needs at least three grid points.
class InsufficientPointsError : public Error {
public:
    using Error::Error;
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

// Checkpoint file could not be read or written.
class CheckpointIoError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Checkpoint file carries an unsupported version number.
class CheckpointVersionError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

// Checkpoint file is truncated, unparsable, or fails its checksum.
class CheckpointCorruptError : public CheckpointError {
public:
    using CheckpointError::CheckpointError;
};

}  // namespace npdist
