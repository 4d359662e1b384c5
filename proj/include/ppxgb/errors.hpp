#pragma once

#include <stdexcept>
#include <string>

namespace ppxgb {

// Malformed input artifacts (model dumps, wire objects).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ciphertext rejected by a decryption routine (off-image OPE value,
// out-of-range or non-invertible SHE value).
struct InvalidCiphertext : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem / store failures surfaced by the service and CLI.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ppxgb
