#pragma once
#include <stdexcept>
#include <string>

namespace adsdyn {

// usage-type failures map to exit code 2, numeric ones to 3
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct domain_error : usage_error {
    using usage_error::usage_error;
};
struct range_error : usage_error {
    using usage_error::usage_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct fit_error : numeric_error {
    using numeric_error::numeric_error;
};
struct closure_error : numeric_error {
    using numeric_error::numeric_error;
};

}  // namespace adsdyn
