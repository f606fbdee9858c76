#pragma once

#include <stdexcept>
#include <string>

namespace gpikit {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Brute-force matching enumeration is capped at total degree 16.
struct DegreeTooLarge : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct NotPSD : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptySamples : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct NotSingular : std::domain_error {
    using std::domain_error::domain_error;
};

struct RankDeficient : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace gpikit
