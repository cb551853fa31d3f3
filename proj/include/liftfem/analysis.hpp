// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/eoc.hpp>
#include <liftfem/ventcel.hpp>

namespace liftfem {

/// ‖·‖_L²(Ω), ‖∇·‖_L²(Ω), ‖·‖_L²(Γ), ‖∇_Γ·‖_L²(Γ).
struct FunctionNorms
{
    double l2_omega = 0.0;
    double h1s_omega = 0.0;
    double l2_gamma = 0.0;
    double h1s_gamma = 0.0;

    double l2_omega_gamma() const;  // L²(Ω, Γ)
    double h1_omega_gamma() const;  // full H¹(Ω, Γ)
};

struct ErrorReport
{
    double h = 0.0;
    int ndof = 0;
    FunctionNorms error;
};

/// Error quadrature degree 2k + 2r + 4.
inline int error_quadrature_degree(int k, int r)
{
    return 2 * k + 2 * r + 4;
}

/// Norms of u - u_h^ℓ on Ω and Γ, with u_h^ℓ ∘ G = u_h. Integrals are pulled
/// back to the reference element through the lifted map, so the gradient of
/// u_h^ℓ is DF^e⁻ᵀ ∇̂u_h and the arc length on Γ is |d/dt G(γ(t))| dt.
/// `quadrature_degree` 0 selects error_quadrature_degree(k, r).
ErrorReport lifted_errors(
    const LiftMap& lift,
    const DofMap& dofs,
    const ManufacturedSolution& exact,
    const Eigen::VectorXd& uh,
    int quadrature_degree = 0);

/// Norms of v_h^ℓ on Ω and Γ.
FunctionNorms lifted_norms(const LiftMap& lift, const DofMap& dofs, const Eigen::VectorXd& v, int quadrature_degree = 0);

/// Norms of v_h on Ω_h^(r) and Γ_h^(r).
FunctionNorms mesh_norms(const LiftMap& lift, const DofMap& dofs, const Eigen::VectorXd& v, int quadrature_degree = 0);

/// Lifted interpolant: coefficient i is u(G(x_i)) at the physical P^k node x_i.
Eigen::VectorXd interpolate(const LiftMap& lift, const DofMap& dofs, const ScalarField& u);

} // namespace liftfem
