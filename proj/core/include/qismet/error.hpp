#ifndef QISMET_ERROR_HPP
#define QISMET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qismet {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression or definition-file input.  Carries a position
/// (character offset for expressions, line number for definition files).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Evaluation left the mathematical domain: division by zero, log or
/// sqrt of a nonpositive argument, fractional power of a negative base,
/// or a non-finite intermediate.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Structural problems in a manifold/embedding definition: bad dimensions,
/// empty domains, unresolved embedding targets, non-SPD metric evaluations.
class DefinitionError : public Error {
public:
    explicit DefinitionError(const std::string& msg) : Error(msg) {}
};

} // namespace qismet

#endif // QISMET_ERROR_HPP
