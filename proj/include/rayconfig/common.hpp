#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rayconfig {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;

// Thrown when a precondition on user-supplied data is violated.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotDivisibleByFour : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct NonUnitModulus : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct LabelMembershipError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct SymmetryViolation : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct DensePathUnavailable : InvalidInput {
    using InvalidInput::InvalidInput;
};

// An overlap magnitude fell inside the guard band between "orthogonal"
// and "clearly non-orthogonal"; the graph cannot be trusted.
struct AmbiguousOverlap : std::runtime_error {
    AmbiguousOverlap(std::size_t a, std::size_t b, double magnitude)
        : std::runtime_error("ambiguous overlap |<a,b>| = " + std::to_string(magnitude) +
                             " between rays " + std::to_string(a) + " and " + std::to_string(b)),
          ray_a(a), ray_b(b), value(magnitude) {}
    std::size_t ray_a;
    std::size_t ray_b;
    double value;
};

struct SearchBudgetExceeded : std::runtime_error {
    explicit SearchBudgetExceeded(std::uint64_t visited)
        : std::runtime_error("search budget exceeded after " + std::to_string(visited) + " nodes"),
          nodes_visited(visited) {}
    std::uint64_t nodes_visited;
};

// One failed condition inside a ValidationReport.
struct Violation {
    std::string condition;
    std::vector<int> indices;
    double measured = 0.0;
};

struct ValidationReport {
    bool passed = true;
    std::vector<Violation> violations;

    void fail(std::string condition, std::vector<int> indices, double measured) {
        passed = false;
        violations.push_back({std::move(condition), std::move(indices), measured});
    }
    void merge(const ValidationReport& other) {
        if (!other.passed) passed = false;
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
};

// FNV-1a, used for the stable configuration digest.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), seed);
}

}  // namespace rayconfig
