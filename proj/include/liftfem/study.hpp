// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/analysis.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace liftfem {

struct RunConfig
{
    std::vector<int> orders{1, 2, 3};     // r
    std::vector<int> degrees{1, 2, 3, 4}; // k
    int level_min = 1;
    int level_max = 5;
    LiftVariant variant = LiftVariant::New;
    int exponent_s = 0; // 0 = auto (r + 2)
    double kappa = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::string solution = "y_exp_x";
    double rel_tol = 1e-12; // solver relative residual
    std::string out = "out";
    bool dump_mesh = false;
    bool dump_matrix = false;
    bool certify = false;

    std::vector<int> levels() const;
    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

/// "3", "1,2,4" or "1..3".
std::vector<int> parse_int_list(const std::string& text);
/// "A..B" or a single level.
std::pair<int, int> parse_level_range(const std::string& text);
/// "auto" → 0, otherwise a positive integer.
int parse_exponent(const std::string& text);

/// Sets one `key = value` entry; keys match the long CLI flag names.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);
/// `key = value` lines; `#` starts a comment. Throws std::invalid_argument
/// naming the offending line.
void apply_config_file(RunConfig& config, std::istream& in);

/// Affine meshes per level and curved meshes per (r, level), built once.
class MeshCache
{
public:
    explicit MeshCache(const SmoothBoundary& boundary)
        : m_boundary(&boundary)
    {}

    const SmoothBoundary& boundary() const { return *m_boundary; }
    const AffineMesh& affine(int level);
    const CurvedMesh& curved(int r, int level);

private:
    const SmoothBoundary* m_boundary;
    std::map<int, std::unique_ptr<AffineMesh>> m_affine;
    std::map<std::pair<int, int>, std::unique_ptr<CurvedMesh>> m_curved;
};

/// Least-squares EOC over the finest three intervals and the last-interval
/// EOC. Levels with a zero error are dropped first; fewer than three
/// remaining levels leave the fit empty.
struct EocSummary
{
    std::optional<EocFit> fit;
    std::optional<double> last;
};

EocSummary summarize_eoc(const std::vector<double>& h, const std::vector<double>& error);

enum class NormKind
{
    L2Omega,
    H1sOmega,
    L2Gamma,
    H1sGamma
};

inline constexpr std::array<NormKind, 4> all_norms{
    NormKind::L2Omega, NormKind::H1sOmega, NormKind::L2Gamma, NormKind::H1sGamma};

double norm_value(const FunctionNorms& norms, NormKind kind);
std::string norm_label(NormKind kind);

/// One (r, k, lift variant, s) row of the convergence study.
struct StudyEntry
{
    int r = 1;
    int k = 1;
    LiftVariant variant = LiftVariant::New;
    int s = 3;
    std::vector<int> levels;
    std::vector<ErrorReport> reports;
    std::array<EocSummary, 4> eoc;

    std::string directory_name() const; // r{r}_k{k}_{variant}_s{s}
    std::vector<double> h() const;
    std::vector<double> series(NormKind kind) const;
    /// Least-squares EOC or NaN.
    double slope(NormKind kind) const;
};

struct ConvergenceTable
{
    std::vector<StudyEntry> rows;

    const StudyEntry* find(int r, int k, LiftVariant variant, int s) const;
};

/// Solve, lift and measure one (r, k) pair over config.levels().
/// Errors are rethrown as std::runtime_error prefixed with r, k and level.
StudyEntry run_entry(MeshCache& cache, const RunConfig& config, int r, int k);

/// Interpolation errors ‖u − I^ℓu‖ of the configured solution.
StudyEntry run_interpolation_entry(MeshCache& cache, const RunConfig& config, int r, int k);

/// Full sweep over config.orders × config.degrees. When `config.out` is not
/// empty, writes one errors.csv per row and summary.md.
ConvergenceTable run_study(const RunConfig& config, MeshCache& cache);

void write_errors_csv(std::ostream& out, const StudyEntry& entry);

/// Expected interior L² order min(k + 1, r + 1), and the flag raised when a
/// measured r = 3 value falls at least 0.4 below it.
bool cubic_defect_observed(const StudyEntry& entry);

/// Markdown tables in the layout rows = mesh order, columns = P1..P4.
void write_summary(std::ostream& out, const ConvergenceTable& table);

struct CheckResult
{
    std::string name;
    bool pass = false;
    std::string detail;
    bool gated = true; // report-only lines print INFO
};

/// Lightweight versions of the module invariant suites on coarse meshes.
std::vector<CheckResult> run_property_checks(MeshCache& cache);

/// max |G(x) − b(x)| over the boundary quadrature points of one mesh.
double trace_compatibility_defect(const LiftMap& lift, int quadrature_degree);

/// Property checks, trace compatibility, slope certification for every
/// configured r with s ∈ {1, 2, r + 2}, and the s = 2 versus s = r + 2 EOC
/// comparison. Slope CSVs go to `out/slopes/` when out is not empty.
/// `baseline` may hold the already computed s = r + 2 table of `config`.
std::vector<CheckResult> certify(
    const RunConfig& config,
    MeshCache& cache,
    const ConvergenceTable* baseline = nullptr);

bool all_passed(const std::vector<CheckResult>& checks);

void write_checks(std::ostream& out, const std::vector<CheckResult>& checks);

} // namespace liftfem
