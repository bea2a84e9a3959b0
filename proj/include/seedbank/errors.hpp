#pragma once

#include <stdexcept>
#include <string>

namespace seedbank {

// Error taxonomy mirrors the CLI exit codes: config (2), regime (3), resource (4).
class invalid_parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A formula or estimator was requested outside its validity regime
// (e.g. stationary law for an infinite-mean age distribution, or a
// q-sum formula whose defining series diverges).
class regime_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace seedbank
