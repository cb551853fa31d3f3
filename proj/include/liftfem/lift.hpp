// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/mesh.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace liftfem {

/// `New` composes the exact map built on F_T^(r) with (F_T^(r))^-1 and
/// coincides with the orthogonal projection on Γ_h^(r). `Former` composes the
/// classical affine-based exact map F_T^(e) with (F_T^(r))^-1 and does not.
enum class LiftVariant
{
    New,
    Former
};

std::string to_string(LiftVariant variant);
LiftVariant parse_lift_variant(const std::string& name);

struct LiftConfig
{
    LiftVariant variant = LiftVariant::New;
    int exponent_s = 0; // 0 selects r + 2

    int resolved_exponent(int r) const { return exponent_s > 0 ? exponent_s : r + 2; }
};

struct LiftDifferential
{
    Mat2 dg = Mat2::Identity();
    double jh = 1.0;
};

/// Everything known at one reference point of one element: the mesh point
/// x = F_T^(r)(x̂), the lifted point G(x) and the Jacobians of both maps with
/// respect to x̂, so DG = exact_jacobian · mesh_jacobian⁻¹.
struct LiftedPoint
{
    Vec2 mesh_point;
    Mat2 mesh_jacobian;
    Vec2 lifted_point;
    Mat2 exact_jacobian;
};

/// Point γ(t) of a boundary edge, t ∈ [0, 1], with its surface lift b(γ(t))
/// and both tangents d/dt. `volume_lift_point` is G(γ(t)), which equals
/// b(γ(t)) for the new lift only.
struct TracePoint
{
    Vec2 xhat;
    Vec2 mesh_point;
    Vec2 mesh_tangent;
    Vec2 lifted_point;
    Vec2 lifted_tangent;
    Vec2 volume_lift_point;
};

///
/// Volume lift G_h^(r): Ω_h^(r) → Ω, evaluated element by element. Reference
/// coordinate queries avoid inversion; physical point queries invert
/// F_T^(r) by Newton iteration.
///
class LiftMap
{
public:
    LiftMap(const CurvedMesh& mesh, const SmoothBoundary& boundary, LiftConfig config = {});

    const CurvedMesh& mesh() const { return *m_mesh; }
    const SmoothBoundary& boundary() const { return *m_boundary; }
    const LiftConfig& config() const { return m_config; }
    int exponent() const { return m_exponent; }

    LiftedPoint at_reference(int element, const Vec2& xhat, bool with_jacobians = true) const;
    Vec2 lift_reference(int element, const Vec2& xhat) const;
    LiftDifferential differential_reference(int element, const Vec2& xhat) const;

    /// Preimage under F_T^(r); throws LiftError after 50 Newton steps.
    Vec2 to_reference(int element, const Vec2& x) const;

    Vec2 eval(int element, const Vec2& x) const;
    LiftDifferential differential(int element, const Vec2& x) const;

    /// G^-1(z) for z in the exact element T^(e).
    Vec2 inverse(int element, const Vec2& z) const;

    TracePoint trace(const BoundaryEdge& edge, double t) const;

private:
    const CurvedMesh* m_mesh;
    const SmoothBoundary* m_boundary;
    LiftConfig m_config;
    int m_exponent;
};

inline Vec2 lift_eval(const LiftMap& map, int element, const Vec2& x)
{
    return map.eval(element, x);
}

inline LiftDifferential lift_differential(const LiftMap& map, int element, const Vec2& x)
{
    return map.differential(element, x);
}

struct BoundaryJacobian
{
    double jb = 1.0;
    Vec2 lifted_point;
};

/// J_b = |d/dt b(γ(t))| / |γ'(t)| with γ = F_T^(r) on the reference edge.
BoundaryJacobian boundary_jacobian(
    const CurvedMesh& mesh,
    const SmoothBoundary& boundary,
    const BoundaryEdge& edge,
    double t);

struct SlopeLevel
{
    int level = 0;
    double h = 0.0;
    double sup_dg_minus_id = 0.0;
    double sup_jh_minus_1 = 0.0;
};

struct SlopeReport
{
    int r = 1;
    LiftConfig config;
    std::vector<SlopeLevel> levels;
    double slope_dg = 0.0;
    double slope_jh = 0.0;
    bool gated = false; // false for s = 1 and the former lift
    bool pass = false;
    std::string note;
};

/// Sampled sup-norms of DG - Id and J_h - 1 over the volume quadrature points
/// and the P^{r+3} lattice of every non-internal element.
SlopeLevel sample_lift_deviation(const LiftMap& map, int quadrature_degree);

/// Slope certificate over a refinement series (at least three meshes).
SlopeReport certify_prop44(
    const std::vector<const CurvedMesh*>& series,
    const std::vector<int>& levels,
    const SmoothBoundary& boundary,
    LiftConfig config);

/// CSV `level,h,sup_dg_minus_id,sup_jh_minus_1` with a `# slope...` footer.
void write_slope_csv(std::ostream& out, const SlopeReport& report);

} // namespace liftfem
