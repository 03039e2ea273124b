#pragma once

#include <stdexcept>
#include <string>

namespace relmine {

// Split errors into two buckets so the CLI can map them to exit codes:
// input/usage problems exit with 2, runtime estimation failures with 1.
enum class ErrorKind { Input, Runtime };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct NodeOutOfRange : Error {
    explicit NodeOutOfRange(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct DisconnectedNodeSet : Error {
    explicit DisconnectedNodeSet(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct SubgraphTooLarge : Error {
    explicit SubgraphTooLarge(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct InvalidStart : Error {
    explicit InvalidStart(const std::string& m) : Error(ErrorKind::Input, m) {}
};
struct SeedNotFound : Error {
    explicit SeedNotFound(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};
struct EnumerationCapExceeded : Error {
    explicit EnumerationCapExceeded(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};
struct NoBoundary : Error {
    explicit NoBoundary(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};
struct TourTruncated : Error {
    explicit TourTruncated(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};
struct StuckAtIsolatedNode : Error {
    explicit StuckAtIsolatedNode(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};
struct EstimatorError : Error {
    explicit EstimatorError(const std::string& m) : Error(ErrorKind::Runtime, m) {}
};

} // namespace relmine
