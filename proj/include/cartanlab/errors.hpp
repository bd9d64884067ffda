#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartanlab {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotAntisymmetric : public Error {
public:
    using Error::Error;
};

class NotAnIdeal : public Error {
public:
    using Error::Error;
};

class EquivarianceViolated : public Error {
public:
    EquivarianceViolated(std::size_t a, std::size_t b, const std::string& what)
        : Error(what), alpha(a), basis(b) {}
    std::size_t alpha;  ///< acting basis element (0-based)
    std::size_t basis;  ///< basis element of g the identity failed on (0-based)
};

class NotASplitting : public Error {
public:
    using Error::Error;
};

class NotReductive : public Error {
public:
    using Error::Error;
};

class NotAMorphism : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t off, const std::string& what)
        : Error(what + " at offset " + std::to_string(off)), offset(off) {}
    std::size_t offset;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::string n, std::size_t off)
        : Error("unknown identifier '" + n + "' at offset " + std::to_string(off)),
          name(std::move(n)), offset(off) {}
    std::string name;
    std::size_t offset;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class BoundaryProximity : public Error {
public:
    using Error::Error;
};

class SingularCoframe : public Error {
public:
    SingularCoframe(std::vector<double> p, const std::string& what)
        : Error(what), point(std::move(p)) {}
    std::vector<double> point;
};

class DegenerateFrame : public Error {
public:
    DegenerateFrame(std::vector<double> p, const std::string& what)
        : Error(what), point(std::move(p)) {}
    std::vector<double> point;
};

class NonComposable : public Error {
public:
    using Error::Error;
};

class SingularDifferential : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input file.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace cartanlab
