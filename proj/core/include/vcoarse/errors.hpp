#ifndef VCOARSE_ERRORS_HPP
#define VCOARSE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcoarse
{

// Root of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Mismatched descriptors, ranks, or values outside a component's allowed set.
class StructuralError : public Error
{
public:
    using Error::Error;
};

// Input that has no meaningful answer (zero element where a class is needed, zero scale, ...).
class DegenerateInputError : public Error
{
public:
    using Error::Error;
};

// A schedule or approximation that has a maximum, i.e. the element is not immediate.
class NotImmediateError : public Error
{
public:
    using Error::Error;
};

class NotDefectError : public Error
{
public:
    using Error::Error;
};

class WrongCaseError : public Error
{
public:
    using Error::Error;
};

class InconsistentDatumError : public Error
{
public:
    using Error::Error;
};

// Two independent routes to the same quantity disagreed.
class InternalConsistencyError : public Error
{
public:
    using Error::Error;
};

class PreconditionError : public Error
{
public:
    using Error::Error;
};

class UnsupportedError : public Error
{
public:
    using Error::Error;
};

class InvalidSelectionError : public Error
{
public:
    using Error::Error;
};

class VerificationFailure : public Error
{
public:
    using Error::Error;
};

class DefinabilityCheckFailure : public Error
{
public:
    using Error::Error;
};

class EvalError : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(const std::string &msg, std::size_t position)
        : Error(msg + " at position " + std::to_string(position)), position_(position)
    {
    }

    std::size_t position() const noexcept
    {
        return position_;
    }

private:
    std::size_t position_;
};

// Config validation failure; lists every offending field.
class SchemaError : public Error
{
public:
    explicit SchemaError(std::vector<std::string> fields)
        : Error(join(fields)), fields_(std::move(fields))
    {
    }

    const std::vector<std::string> &fields() const noexcept
    {
        return fields_;
    }

private:
    static std::string join(const std::vector<std::string> &fields)
    {
        std::string out = "schema error:";
        for (const auto &f : fields) {
            out += "\n  " + f;
        }
        return out;
    }

    std::vector<std::string> fields_;
};

} // namespace vcoarse

#endif
