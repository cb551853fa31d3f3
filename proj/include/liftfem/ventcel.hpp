// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/lift.hpp>

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace liftfem {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Mat2(const Vec2&)>;

/// −Δu + κu = f in Ω,  −βΔ_Γu + ∂_n u + αu = g on Γ.
struct ProblemSpec
{
    double kappa = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    ScalarField f;
    ScalarField g; // evaluated at points of Γ

    /// Throws std::invalid_argument unless α, β > 0 and κ ≥ 0.
    void validate() const;
};

/// Smooth exact solution with analytic derivatives.
struct ManufacturedSolution
{
    std::string name;
    ScalarField u;
    VectorField grad;
    MatrixField hessian;

    double laplacian(const Vec2& x) const { return hessian(x).trace(); }
};

/// u = y e^x.
ManufacturedSolution manufactured_y_exp_x();
ManufacturedSolution manufactured_constant(double c);
/// u = 1 + 2x - y (reproduced exactly by every P^k space).
ManufacturedSolution manufactured_linear();
/// "y_exp_x", "constant" (u = 1) or "linear"; throws std::invalid_argument.
ManufacturedSolution manufactured_by_name(const std::string& name);

/// f = −Δu + κu and g = −βΔ_Γu + ∂_n u + αu, with the Laplace-Beltrami
/// operator Δ_Γu = τᵀ D²u τ − tr(D²d) ∂_n u evaluated on Γ.
ProblemSpec derive_manufactured(
    const ManufacturedSolution& solution,
    double kappa,
    double alpha,
    double beta,
    const SmoothBoundary& boundary);

/// Global numbering of the continuous P^k space on a curved mesh.
class DofMap
{
public:
    DofMap(const CurvedMesh& mesh, int k);

    int degree() const { return m_numbering.degree; }
    int size() const { return m_numbering.size; }
    const std::vector<int>& element_dofs(int element) const { return m_numbering.element_nodes[element]; }
    int num_edges() const { return m_num_edges; }

    /// V + (k-1) E + (k-1)(k-2)/2 T.
    static int expected_size(int k, int vertices, int edges, int triangles);

private:
    LatticeNumbering m_numbering;
    int m_num_edges = 0;
};

struct QuadratureDegrees
{
    int volume = 0;
    int boundary = 0;

    /// 2k + 2r + 2 on elements, 2k + 2r + 4 on boundary edges.
    static QuadratureDegrees assembly(int k, int r) { return {2 * k + 2 * r + 2, 2 * k + 2 * r + 4}; }
};

struct DiscreteSystem
{
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
};

/// Stiffness + mass on Ω_h^(r), Laplace-Beltrami + mass along Γ_h^(r), and
/// the load l_h(v) = ∫ v f(G) J_h dx + ∫ v g(G) J_b dσ_h.
DiscreteSystem assemble(
    const LiftMap& lift,
    const ProblemSpec& spec,
    const DofMap& dofs,
    QuadratureDegrees degrees = {});

struct SolveOptions
{
    double rel_tol = 1e-12;
    int direct_limit = 200000; // sparse Cholesky up to this size, CG beyond
    int max_iterations = 0;    // CG only; 0 selects 10 N
};

/// Throws SolverError when the relative residual stays above rel_tol.
Eigen::VectorXd solve(const DiscreteSystem& system, const SolveOptions& options = {});

inline Eigen::VectorXd solve(const DiscreteSystem& system, double rel_tol)
{
    SolveOptions options;
    options.rel_tol = rel_tol;
    return solve(system, options);
}

struct FormCoefficients
{
    double kappa = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

/// a_h(v, w) on the curved mesh.
double discrete_form(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees = {});

/// a(v^ℓ, w^ℓ) on Ω and Γ, pulled back through the lift.
double exact_form(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees = {});

/// |a(v^ℓ, w^ℓ) − a_h(v, w)|.
double geometric_defect(
    const LiftMap& lift,
    const DofMap& dofs,
    const FormCoefficients& c,
    const Eigen::VectorXd& v,
    const Eigen::VectorXd& w,
    QuadratureDegrees degrees = {});

/// `i j value` per stored entry, 0-based, 17 significant digits.
void write_matrix_coordinates(std::ostream& out, const Eigen::SparseMatrix<double>& matrix);

} // namespace liftfem
