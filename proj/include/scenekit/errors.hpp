#pragma once

#include <stdexcept>
#include <string>

namespace scenekit {

// Error taxonomy shared by the library and the CLI. The CLI maps categories
// onto process exit codes, so every throw site picks the category that the
// caller can act on.
enum class ErrorCode {
    Parse,            // malformed input file
    EmptyMesh,        // mesh with no faces where faces are required
    DegenerateMesh,   // zero-extent geometry
    DegenerateInput,  // inputs that make a solve rank-deficient
    ShapeMismatch,    // tensor/size contract violated
    Diverged,         // optimizer failed to reach an acceptable solution
    AllWeightsZero,   // normal gate rejected every sample
    DegenerateConfiguration, // rank-deficient point configuration
    NoValidPixels,    // depth comparison had no overlapping coverage
    PlacementExhausted,
    NoCompatiblePair,
    GenerationFailed,
    LengthMismatch,
    ScaleNonPositive,
    QuaternionDegenerate,
    EmptySet,
    Io,
    Usage,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace scenekit
