//---------------------------------------------------------------------------//
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file blmix/errors.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <stdexcept>
#include <string>

namespace blmix
{
//! Parameter outside the domain of a distribution or chain operation
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! A mixing profile ended before reaching the requested threshold
class HorizonExceeded : public std::runtime_error
{
  public:
    HorizonExceeded(std::string const& what, double last_distance)
        : std::runtime_error(what), last_distance_(last_distance)
    {
    }

    //! d(t_max) of the profile that was too short
    double last_distance() const noexcept { return last_distance_; }

  private:
    double last_distance_;
};

//! Exact computation refused because it would exceed a size guard
class InfeasibleSize : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Throw DomainError with the given message unless the condition holds
inline void require(bool condition, std::string const& message)
{
    if (!condition)
    {
        throw DomainError(message);
    }
}

}  // namespace blmix
