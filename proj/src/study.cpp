// SPDX-License-Identifier: Apache-2.0
#include <liftfem/mesh_io.hpp>
#include <liftfem/study.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace liftfem {

namespace {

int parse_int(const std::string& text)
{
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw std::invalid_argument("expected an integer, got '" + text + "'");
    }
    return value;
}

double parse_real(const std::string& text)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw std::invalid_argument("expected a number, got '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text)
{
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw std::invalid_argument("expected a boolean, got '" + text + "'");
}

std::string trim(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

} // namespace

std::vector<int> RunConfig::levels() const
{
    std::vector<int> result;
    for (int l = level_min; l <= level_max; ++l) {
        result.push_back(l);
    }
    return result;
}

void RunConfig::validate() const
{
    if (orders.empty() || degrees.empty()) {
        throw std::invalid_argument("at least one mesh order r and one degree k are required");
    }
    for (int r : orders) {
        if (r < 1 || r > 3) throw std::invalid_argument("mesh order r must lie in 1..3, got " + std::to_string(r));
    }
    for (int k : degrees) {
        if (k < 1 || k > max_lagrange_degree) {
            throw std::invalid_argument("finite element degree k must lie in 1..4, got " + std::to_string(k));
        }
    }
    if (level_min < 0 || level_max < level_min) {
        throw std::invalid_argument("invalid level range");
    }
    if (!(rel_tol > 0.0)) {
        throw std::invalid_argument("solver tolerance must be positive");
    }
    if (exponent_s < 0) {
        throw std::invalid_argument("lift exponent s must be auto or positive");
    }
    ProblemSpec probe;
    probe.kappa = kappa;
    probe.alpha = alpha;
    probe.beta = beta;
    probe.f = probe.g = [](const Vec2&) { return 0.0; };
    probe.validate();
    manufactured_by_name(solution);
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> values;
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const int a = parse_int(trim(text.substr(0, dots)));
        const int b = parse_int(trim(text.substr(dots + 2)));
        if (b < a) throw std::invalid_argument("empty range '" + text + "'");
        for (int v = a; v <= b; ++v) values.push_back(v);
        return values;
    }
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        values.push_back(parse_int(trim(item)));
    }
    if (values.empty()) throw std::invalid_argument("empty list");
    return values;
}

std::pair<int, int> parse_level_range(const std::string& text)
{
    const auto values = parse_int_list(text);
    if (text.find(',') != std::string::npos) {
        throw std::invalid_argument("levels must be a range A..B, got '" + text + "'");
    }
    return {values.front(), values.back()};
}

int parse_exponent(const std::string& text)
{
    if (text == "auto") return 0;
    const int s = parse_int(text);
    if (s < 1) throw std::invalid_argument("lift exponent s must be auto or positive, got '" + text + "'");
    return s;
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value)
{
    if (key == "r") {
        config.orders = parse_int_list(value);
    } else if (key == "k") {
        config.degrees = parse_int_list(value);
    } else if (key == "levels") {
        std::tie(config.level_min, config.level_max) = parse_level_range(value);
    } else if (key == "lift") {
        config.variant = parse_lift_variant(value);
    } else if (key == "s") {
        config.exponent_s = parse_exponent(value);
    } else if (key == "kappa") {
        config.kappa = parse_real(value);
    } else if (key == "alpha") {
        config.alpha = parse_real(value);
    } else if (key == "beta") {
        config.beta = parse_real(value);
    } else if (key == "rel-tol") {
        config.rel_tol = parse_real(value);
    } else if (key == "solution") {
        config.solution = value;
    } else if (key == "out") {
        config.out = value;
    } else if (key == "dump-mesh") {
        config.dump_mesh = parse_bool(value);
    } else if (key == "dump-matrix") {
        config.dump_matrix = parse_bool(value);
    } else if (key == "certify") {
        config.certify = parse_bool(value);
    } else {
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

void apply_config_file(RunConfig& config, std::istream& in)
{
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
        }
        try {
            apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": " + e.what());
        }
    }
}

const AffineMesh& MeshCache::affine(int level)
{
    auto& slot = m_affine[level];
    if (!slot) {
        slot = std::make_unique<AffineMesh>(generate_disk_mesh(*m_boundary, level));
    }
    return *slot;
}

const CurvedMesh& MeshCache::curved(int r, int level)
{
    auto& slot = m_curved[{r, level}];
    if (!slot) {
        slot = std::make_unique<CurvedMesh>(build_curved_mesh(affine(level), *m_boundary, r));
    }
    return *slot;
}

EocSummary summarize_eoc(const std::vector<double>& h, const std::vector<double>& error)
{
    // Errors at the round-off floor carry no rate information.
    constexpr double floor = 1e-13;
    std::vector<double> hs, es;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (error[i] > floor && std::isfinite(error[i])) {
            hs.push_back(h[i]);
            es.push_back(error[i]);
        }
    }
    EocSummary summary;
    if (hs.size() >= 2) {
        summary.last = eoc_last(hs, es);
    }
    if (hs.size() >= 3) {
        const std::size_t first = hs.size() > 4 ? hs.size() - 4 : 0;
        summary.fit = eoc_fit(
            std::span<const double>(hs).subspan(first),
            std::span<const double>(es).subspan(first));
    }
    return summary;
}

double norm_value(const FunctionNorms& norms, NormKind kind)
{
    switch (kind) {
    case NormKind::L2Omega: return norms.l2_omega;
    case NormKind::H1sOmega: return norms.h1s_omega;
    case NormKind::L2Gamma: return norms.l2_gamma;
    case NormKind::H1sGamma: return norms.h1s_gamma;
    }
    return 0.0;
}

std::string norm_label(NormKind kind)
{
    switch (kind) {
    case NormKind::L2Omega: return "L2(Omega)";
    case NormKind::H1sOmega: return "grad L2(Omega)";
    case NormKind::L2Gamma: return "L2(Gamma)";
    case NormKind::H1sGamma: return "tangential grad L2(Gamma)";
    }
    return {};
}

std::string StudyEntry::directory_name() const
{
    return "r" + std::to_string(r) + "_k" + std::to_string(k) + "_" + to_string(variant) + "_s" + std::to_string(s);
}

std::vector<double> StudyEntry::h() const
{
    std::vector<double> values;
    for (const auto& report : reports) values.push_back(report.h);
    return values;
}

std::vector<double> StudyEntry::series(NormKind kind) const
{
    std::vector<double> values;
    for (const auto& report : reports) values.push_back(norm_value(report.error, kind));
    return values;
}

double StudyEntry::slope(NormKind kind) const
{
    const auto& summary = eoc[static_cast<int>(kind)];
    return summary.fit ? summary.fit->slope : std::numeric_limits<double>::quiet_NaN();
}

const StudyEntry* ConvergenceTable::find(int r, int k, LiftVariant variant, int s) const
{
    for (const auto& row : rows) {
        if (row.r == r && row.k == k && row.variant == variant && row.s == s) return &row;
    }
    return nullptr;
}

namespace {

void finish_entry(StudyEntry& entry)
{
    const auto h = entry.h();
    for (auto kind : all_norms) {
        entry.eoc[static_cast<int>(kind)] = summarize_eoc(h, entry.series(kind));
    }
}

StudyEntry make_entry(const RunConfig& config, int r, int k)
{
    StudyEntry entry;
    entry.r = r;
    entry.k = k;
    entry.variant = config.variant;
    entry.s = LiftConfig{config.variant, config.exponent_s}.resolved_exponent(r);
    entry.levels = config.levels();
    return entry;
}

std::string context(const StudyEntry& entry, int level)
{
    return entry.directory_name() + " level " + std::to_string(level) + ": ";
}

std::filesystem::path entry_directory(const RunConfig& config, const StudyEntry& entry)
{
    return std::filesystem::path(config.out) / entry.directory_name();
}

} // namespace

StudyEntry run_entry(MeshCache& cache, const RunConfig& config, int r, int k)
{
    StudyEntry entry = make_entry(config, r, k);
    const auto solution = manufactured_by_name(config.solution);
    const auto spec = derive_manufactured(solution, config.kappa, config.alpha, config.beta, cache.boundary());
    const LiftConfig lift_config{config.variant, config.exponent_s};
    for (int level : entry.levels) {
        try {
            const auto& mesh = cache.curved(r, level);
            const LiftMap lift(mesh, cache.boundary(), lift_config);
            const DofMap dofs(mesh, k);
            const auto system = assemble(lift, spec, dofs);
            const auto uh = solve(system, config.rel_tol);
            entry.reports.push_back(lifted_errors(lift, dofs, solution, uh));
            if (config.dump_matrix && !config.out.empty()) {
                const auto dir = entry_directory(config, entry);
                std::filesystem::create_directories(dir);
                std::ofstream out(dir / ("matrix_level" + std::to_string(level) + ".txt"));
                write_matrix_coordinates(out, system.matrix);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error(context(entry, level) + e.what());
        }
    }
    finish_entry(entry);
    return entry;
}

StudyEntry run_interpolation_entry(MeshCache& cache, const RunConfig& config, int r, int k)
{
    StudyEntry entry = make_entry(config, r, k);
    const auto solution = manufactured_by_name(config.solution);
    const LiftConfig lift_config{config.variant, config.exponent_s};
    for (int level : entry.levels) {
        try {
            const auto& mesh = cache.curved(r, level);
            const LiftMap lift(mesh, cache.boundary(), lift_config);
            const DofMap dofs(mesh, k);
            entry.reports.push_back(lifted_errors(lift, dofs, solution, interpolate(lift, dofs, solution.u)));
        } catch (const std::exception& e) {
            throw std::runtime_error(context(entry, level) + e.what());
        }
    }
    finish_entry(entry);
    return entry;
}

void write_errors_csv(std::ostream& out, const StudyEntry& entry)
{
    const auto precision = out.precision(17);
    out << "level,h,ndof,e_l2_omega,e_h1s_omega,e_l2_gamma,e_h1s_gamma\n";
    for (std::size_t i = 0; i < entry.reports.size(); ++i) {
        const auto& rep = entry.reports[i];
        out << entry.levels[i] << ',' << rep.h << ',' << rep.ndof << ',' << rep.error.l2_omega << ','
            << rep.error.h1s_omega << ',' << rep.error.l2_gamma << ',' << rep.error.h1s_gamma << '\n';
    }
    out.precision(precision);
}

ConvergenceTable run_study(const RunConfig& config, MeshCache& cache)
{
    config.validate();
    ConvergenceTable table;
    for (int r : config.orders) {
        if (config.dump_mesh && !config.out.empty()) {
            const auto dir = std::filesystem::path(config.out) / "meshes";
            std::filesystem::create_directories(dir);
            for (int level : config.levels()) {
                std::ofstream out(dir / ("r" + std::to_string(r) + "_level" + std::to_string(level) + ".txt"));
                write_mesh(out, cache.curved(r, level));
            }
        }
        for (int k : config.degrees) {
            table.rows.push_back(run_entry(cache, config, r, k));
            if (!config.out.empty()) {
                const auto dir = entry_directory(config, table.rows.back());
                std::filesystem::create_directories(dir);
                std::ofstream out(dir / "errors.csv");
                write_errors_csv(out, table.rows.back());
            }
        }
    }
    if (!config.out.empty()) {
        std::filesystem::create_directories(config.out);
        std::ofstream out(std::filesystem::path(config.out) / "summary.md");
        write_summary(out, table);
    }
    return table;
}

bool cubic_defect_observed(const StudyEntry& entry)
{
    if (entry.r != 3) return false;
    const double measured = entry.slope(NormKind::L2Omega);
    const double expected = std::min(entry.k, entry.r) + 1;
    return std::isfinite(measured) && measured <= expected - 0.4;
}

namespace {

std::string format_eoc(const EocSummary& summary)
{
    char buffer[64];
    if (!summary.fit) return "n/a";
    if (summary.last) {
        std::snprintf(buffer, sizeof buffer, "%.2f (%.2f)", summary.fit->slope, *summary.last);
    } else {
        std::snprintf(buffer, sizeof buffer, "%.2f", summary.fit->slope);
    }
    return buffer;
}

std::string exponent_label(const StudyEntry& entry)
{
    return entry.s == entry.r + 2 ? "s = r+2" : "s = " + std::to_string(entry.s);
}

} // namespace

void write_summary(std::ostream& out, const ConvergenceTable& table)
{
    out << "# Convergence orders\n\n"
        << "Each cell: least-squares EOC over the finest three intervals, last-interval EOC in parentheses.\n";

    // Groups in first-appearance order, keyed by lift variant and exponent rule.
    std::vector<std::pair<LiftVariant, std::string>> groups;
    for (const auto& row : table.rows) {
        const std::pair key{row.variant, exponent_label(row)};
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [variant, exponent] : groups) {
        std::vector<int> orders;
        for (const auto& row : table.rows) {
            if (row.variant == variant && exponent_label(row) == exponent &&
                std::find(orders.begin(), orders.end(), row.r) == orders.end()) {
                orders.push_back(row.r);
            }
        }
        std::sort(orders.begin(), orders.end());
        for (auto kind : all_norms) {
            out << "\n## " << norm_label(kind) << ", " << to_string(variant) << " lift, " << exponent << "\n\n"
                << "| mesh | P1 | P2 | P3 | P4 |\n|---|---|---|---|---|\n";
            for (int r : orders) {
                out << "| r = " << r;
                for (int k = 1; k <= max_lagrange_degree; ++k) {
                    const StudyEntry* entry = nullptr;
                    for (const auto& row : table.rows) {
                        if (row.r == r && row.k == k && row.variant == variant && exponent_label(row) == exponent) {
                            entry = &row;
                        }
                    }
                    out << " | " << (entry ? format_eoc(entry->eoc[static_cast<int>(kind)]) : "-");
                }
                out << " |\n";
            }
        }
    }

    out << "\n## Cubic mesh check\n\n";
    bool any = false;
    for (const auto& row : table.rows) {
        if (row.r != 3) continue;
        any = true;
        char buffer[160];
        std::snprintf(
            buffer,
            sizeof buffer,
            "- %s: L2(Omega) EOC %.2f, expected %d: %s\n",
            row.directory_name().c_str(),
            row.slope(NormKind::L2Omega),
            std::min(row.k, row.r) + 1,
            cubic_defect_observed(row) ? "defect observed" : "no defect");
        out << buffer;
    }
    if (!any) out << "- no r = 3 rows in this run\n";
}

} // namespace liftfem
