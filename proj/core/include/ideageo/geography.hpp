#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ideageo/analytics.hpp"

namespace ideageo {

struct ScoredDesign {
  std::string design_id;
  std::string participant_id;
  int group = 0;
  Point2 point;
  std::vector<double> scores;  // per evaluator, Likert [1, 5]
  double mean_score = 0.0;
};

// Computes mean_score; throws validation when scores are empty or out of range.
ScoredDesign make_scored_design(std::string design_id, std::string participant_id, int group,
                                Point2 point, std::vector<double> scores);

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::size_t nx = 100;
  std::size_t ny = 100;

  double cell_width() const noexcept { return (x_max - x_min) / static_cast<double>(nx); }
  double cell_height() const noexcept { return (y_max - y_min) / static_cast<double>(ny); }
  Point2 cell_center(std::size_t row, std::size_t col) const noexcept;
  void validate() const;
};

// Bounding box of the design points grown by 10% on every side.
GridSpec default_grid(std::span<const ScoredDesign> designs, std::size_t nx = 100,
                      std::size_t ny = 100);
double default_bandwidth(const GridSpec& grid) noexcept;

inline constexpr double default_weight_floor = 1e-6;
inline constexpr double masked_elevation = std::numeric_limits<double>::quiet_NaN();

// Rows run along y (row 0 at y_min), columns along x.
struct TerrainGrid {
  GridSpec grid;
  std::vector<double> elevation;  // ny * nx, row-major; NaN where masked
  std::vector<bool> mask;         // true = defined

  double at(std::size_t row, std::size_t col) const { return elevation[row * grid.nx + col]; }
  bool defined(std::size_t row, std::size_t col) const { return mask[row * grid.nx + col]; }
};

struct TerrainOptions {
  double bandwidth = 0.0;  // <= 0 selects default_bandwidth(grid)
  double weight_floor = default_weight_floor;
  unsigned threads = 1;
};

// Gaussian-kernel (Nadaraya-Watson) average of design mean scores.
TerrainGrid build_terrain(std::span<const ScoredDesign> designs, const GridSpec& grid,
                          const TerrainOptions& options = {});
TerrainGrid build_terrain(std::span<const ScoredDesign> designs);

// Kernel average at a single point; nullopt-equivalent NaN below the floor.
double elevation_at(std::span<const ScoredDesign> designs, Point2 where, double bandwidth,
                    double weight_floor = default_weight_floor);

struct Peak {
  std::size_t row = 0;
  std::size_t col = 0;
  Point2 location;
  double elevation = 0.0;
};

// Local maxima over 8-neighborhoods. A flat region counts once, at its first
// cell in row-major order, and only if no cell of it borders a higher cell.
// Sorted by elevation descending. Throws all_masked.
std::vector<Peak> find_peaks(const TerrainGrid& terrain);

// Highest defined cell; first in row-major order on ties. Throws all_masked.
Peak terrain_argmax(const TerrainGrid& terrain);

// argmax mean_score, ties to the lowest design_id. Throws empty_designs.
const ScoredDesign& best_design(std::span<const ScoredDesign> designs);

struct TerrainFiles {
  std::filesystem::path grid;
  std::filesystem::path image;
};

// Writes <base>.csv and <base>.ppm. Throws Error{io} with the offending path.
TerrainFiles export_terrain(const TerrainGrid& terrain, std::span<const ScoredDesign> designs,
                            const std::filesystem::path& base_path);

std::string format_grid(const TerrainGrid& terrain);
TerrainGrid parse_grid(const std::string& text);
TerrainGrid read_grid(const std::filesystem::path& path);

}  // namespace ideageo
