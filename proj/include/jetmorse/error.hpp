#ifndef JETMORSE_ERROR_HPP
#define JETMORSE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jetmorse
{

class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Bad input: wrong dimensions, broken invariants, malformed files.
class validation_error : public error
{
public:
    using error::error;
};

// Numerical guard: overflow, degenerate data, failed tolerance checks.
class numerical_error : public error
{
public:
    using error::error;
};

// The first fiber coordinate of the jet is not immersive (xi_{1,1} == 0).
class degenerate_jet_error : public numerical_error
{
public:
    using numerical_error::numerical_error;
};

} // namespace jetmorse

#endif
