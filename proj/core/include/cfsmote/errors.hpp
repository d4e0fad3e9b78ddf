#pragma once

#include <stdexcept>
#include <string>

namespace cfsmote {

// Malformed or inconsistent input data (schema mismatches, bad CSV rows,
// unlabeled instances where labels are required). CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// An augmentation method cannot proceed on the given data (no valid native
// pairs, minority class too small, ...). CLI exit code 3.
class MethodError : public std::runtime_error {
public:
    explicit MethodError(const std::string& what) : std::runtime_error(what) {}
};

// Statistical test undefined for the given input (all differences zero).
class DegenerateTestError : public std::runtime_error {
public:
    explicit DegenerateTestError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cfsmote
