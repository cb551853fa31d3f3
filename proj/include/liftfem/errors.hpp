// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace liftfem {

/// A point left the tubular neighbourhood of Γ, or a mesh is incompatible
/// with the boundary (too coarse, inverted, wrong classification).
class GeometryError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Lift evaluation failed: Newton inversion did not converge or the
/// differential degenerated.
class LiftError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace liftfem
