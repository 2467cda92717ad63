#pragma once
// Error types shared across the engine. File-format problems get distinct
// types so callers can tell a stale version from a truncated or corrupt file.

#include <stdexcept>
#include <string>

namespace skycat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// htm
struct DepthLimitError : Error {
    using Error::Error;
};
struct EncodingError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

// region
struct GeometryError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

// catalog
struct LookupError : Error {
    using Error::Error;
};
struct VersionMismatchError : Error {
    using Error::Error;
};
struct TruncatedFileError : Error {
    using Error::Error;
};
struct DigestMismatchError : Error {
    using Error::Error;
};

// loader
struct UnknownEventError : Error {
    using Error::Error;
};
struct AlreadyUndoneError : Error {
    using Error::Error;
};
struct UndoConflictError : Error {
    using Error::Error;
};

}  // namespace skycat
