#pragma once

#include <stdexcept>
#include <string>

namespace chi2qed {

/// Thrown when a computation would exceed a hard resource bound
/// (step count, grid size). Distinct from domain errors so callers
/// can map the two to different exit codes.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const char* message)
{
    if (!ok)
        throw std::domain_error(message);
}

} // namespace detail

} // namespace chi2qed
