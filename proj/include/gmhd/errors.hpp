#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmhd {

/// Base class for every fault raised by the library.
class Fault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value found in a field.
class FieldFault : public Fault {
public:
    FieldFault(const std::string& what, std::size_t index)
        : Fault(what + " (index " + std::to_string(index) + ")"), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Invalid configuration: bad grid size, incompatible presets, unknown options.
class ConfigFault : public Fault {
public:
    using Fault::Fault;
};

/// Argument outside the domain of an evaluator.
class DomainFault : public Fault {
public:
    using Fault::Fault;
};

/// An internal invariant was violated (e.g. nonzero mean of u_x).
class ConsistencyFault : public Fault {
public:
    using Fault::Fault;
};

/// A documented precondition of an operation does not hold.
class PreconditionFault : public Fault {
public:
    using Fault::Fault;
};

/// Time integration produced an inadmissible state.
class IntegrationFault : public Fault {
public:
    using Fault::Fault;
};

/// Output could not be written.
class IoFault : public Fault {
public:
    using Fault::Fault;
};

}  // namespace gmhd
