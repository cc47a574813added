#pragma once

#include "shellfh/approximant.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace shellfh {

/// Experiment functions on the default shell [1, 1.001] x S^2:
/// f1 is rough radially and smooth angularly, f2 the other way round, and
/// f3 (Franke plus a radially modulated cone over a spherical cap) is
/// non-smooth in both directions.
double f1(const ShellPoint& p);
double f2(const ShellPoint& p);
double f3(const ShellPoint& p);

/// Lookup by id "f1" | "f2" | "f3"; throws std::invalid_argument otherwise.
ShellFunction test_function(const std::string& id);

/// Finite evaluation grid on the shell. Tensor mode pairs every radius
/// with every direction; scattered mode pairs radial[i] with angular[i].
struct EvalGrid {
    enum class Mode { tensor, scattered };

    Mode mode = Mode::tensor;
    std::vector<double> radial;
    std::vector<SphPoint> angular;

    static EvalGrid tensor(std::vector<double> radial, std::vector<SphPoint> angular);
    static EvalGrid scattered(std::vector<double> radial, std::vector<SphPoint> angular);
    std::size_t point_count() const;
};

/// Sup-norm estimation grid parameters. Defaults: 33 Chebyshev-extrema
/// radii times a 61 x 122 equiangular lattice, plus 10^4 seeded random
/// shell points.
struct GridSpec {
    int radial_points = 33;
    int theta_points = 61;
    int phi_points = 122;
    std::size_t random_points = 10000;
    std::uint64_t seed = 424242;
};

/// Chebyshev-extrema radii tensored with an inclusive-theta, periodic-phi
/// lattice.
EvalGrid tensor_grid(const JacobiBasis& basis, int n_radial, int n_theta, int n_phi);

/// Scattered points: radius uniform on [r_in, r_out], direction a
/// normalised triple of standard normals; mt19937_64 with the given seed,
/// so the set is reproducible bit for bit.
EvalGrid random_shell_points(const JacobiBasis& basis, std::size_t n,
                             std::uint64_t seed);

struct SupResult {
    double value = 0.0;
    ShellPoint argmax;
};

/// max |f - approx| over the grid, with the maximising point. Iteration
/// order is fixed (direction outer, radius inner), so results are
/// deterministic.
SupResult sup_error(const ShellFunction& f, const ShellFunction& approx,
                    const EvalGrid& grid);

/// Wraps an approximant as a ShellFunction that reuses the angular profile
/// while consecutive calls share a direction — the tensor-grid fast path.
/// The returned function carries internal state: use one instance per
/// thread.
ShellFunction cached_evaluator(ShellApproximant approx);
ShellFunction cached_evaluator(BaselineApproximant approx);

/// Least-squares slope of log10(err) vs log10(deg). NaN given fewer than
/// two usable points.
double log_log_slope(const std::vector<double>& degrees,
                     const std::vector<double>& errors);

struct StudyConfig {
    std::string function = "f1";
    std::vector<int> k_schedule{2, 4, 8, 16, 32};
    std::vector<int> l_schedule{4};
    std::string filter_rad = "exp";
    std::string filter_ang = "exp";
    double alpha = -0.5;
    double beta = -0.5;
    double r_in = 1.0;
    double r_out = 1.001;
    double a = 2.0;
    double b = 2.0;
    std::string designs; ///< manifest path; empty = product rules only
    GridSpec grid;
    std::string output; ///< CSV path; empty = in-memory only

    static StudyConfig from_json(std::istream& in);
    static StudyConfig from_json_file(const std::filesystem::path& path);
};

struct StudyRow {
    int degree = 0;
    std::size_t n_radial_nodes = 0;
    std::size_t n_angular_nodes = 0;
    double sup_error_filtered = 0.0;
    double sup_error_baseline = 0.0;
    double fit_seconds = 0.0;
};

struct StudyResult {
    char vary = 'K';
    std::vector<StudyRow> rows;
    /// Least-squares slopes over the schedule tail (entries past the
    /// first); NaN when every tail error sits at rounding level (< 1e-12).
    double slope_filtered = 0.0;
    double slope_baseline = 0.0;
};

/// Runs the schedule, fitting the filtered scheme and the non-filtered
/// baseline per entry and recording both sup errors over the configured
/// grid. Rows are appended (and flushed) to the CSV as they finish, so
/// partial results survive a late failure.
StudyResult convergence_study(const StudyConfig& cfg);

struct LayerField {
    double r = 1.0;
    std::vector<double> thetas;
    std::vector<double> phis;
    std::vector<double> values; ///< row-major, thetas x phis
};

/// |f - approx| on a regular theta x phi lattice at fixed radius.
LayerField layer_field(const ShellFunction& f, const ShellFunction& approx,
                       double r, int n_theta, int n_phi);
/// Writes <prefix>_theta.txt, <prefix>_phi.txt and <prefix>_error.txt
/// (matrix, one theta row per line).
void write_layer_field(const LayerField& field, const std::string& prefix);

struct RadialLine {
    SphPoint sigma;
    std::vector<double> radii;
    std::vector<double> values;
};

/// |f - approx| along n equispaced radii at a fixed direction.
RadialLine radial_line(const ShellFunction& f, const ShellFunction& approx,
                       const SphPoint& sigma, int n, const JacobiBasis& basis);
void write_radial_line(const RadialLine& line, const std::string& path);

} // namespace shellfh
