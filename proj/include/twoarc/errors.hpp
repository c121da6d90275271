#ifndef TWOARC_ERRORS_HPP
#define TWOARC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twoarc {

/// Base class for all library failures.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

/// Degenerate configuration (coincident points, collapsed modulus, corner hit).
struct degeneracy_error : domain_error {
    using domain_error::domain_error;
};

/// No admissible reordering of the endpoints exists.
struct canonicalization_error : domain_error {
    using domain_error::domain_error;
};

/// Coefficient vectors of invalid length.
struct shape_error : domain_error {
    using domain_error::domain_error;
};

/// Numerical method failed to reach its tolerance.
struct numeric_error : error {
    explicit numeric_error(const std::string& what, double residual = 0.0)
        : error(what), residual(residual) {}
    double residual;
};

/// Evaluation too close to a pole of sn/cn/dn.
struct pole_error : numeric_error {
    explicit pole_error(const std::string& what, double distance)
        : numeric_error(what, distance), distance(distance) {}
    double distance;
};

}  // namespace twoarc

#endif
