#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpt {

/// Quadrature or other numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Steady-state linear system is singular or too ill-conditioned.
class SolverError : public NumericalError {
public:
    explicit SolverError(const std::string& what, double condition = 0.0)
        : NumericalError(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

/// A layer of the thick-cell propagation failed; carries the layer index.
class LayerError : public NumericalError {
public:
    LayerError(std::size_t layer, const std::string& what)
        : NumericalError("layer " + std::to_string(layer) + ": " + what), layer_(layer) {}
    std::size_t layer() const { return layer_; }

private:
    std::size_t layer_;
};

/// Result failed an internal consistency check (e.g. complex residue on a real observable).
class InconsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cpt
