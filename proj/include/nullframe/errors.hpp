#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullframe {

// Recoverable point-evaluation failures. Grid/check drivers catch these,
// skip the point and count it.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct branch_cut_error : numeric_error {
    using numeric_error::numeric_error;
};

struct division_error : numeric_error {
    using numeric_error::numeric_error;
};

// Jet order exhausted (derivative of an order-0 jet) or above the supported cap.
struct order_error : numeric_error {
    using numeric_error::numeric_error;
};

struct singular_frame_error : numeric_error {
    explicit singular_frame_error(const std::string& what, double cond = 0.0)
        : numeric_error(what), condition(cond) {}
    double condition;
};

struct domain_error : numeric_error {
    using numeric_error::numeric_error;
};

// Expression-language syntax / name errors, with the byte offset of the fault.
struct parse_error : std::runtime_error {
    parse_error(std::size_t at, const std::string& what)
        : std::runtime_error(what + " (at byte " + std::to_string(at) + ")"), offset(at) {}
    std::size_t offset;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixing jets of different order or variable count is a caller bug, not data.
struct mismatch_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace nullframe
