#include "ideageo/geography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ideageo/error.hpp"

namespace ideageo {

namespace {

struct ScoreRange {
  double lo;
  double hi;
};

ScoreRange score_range(std::span<const ScoredDesign> designs) {
  ScoreRange r{designs.front().mean_score, designs.front().mean_score};
  for (const auto& d : designs) {
    r.lo = std::min(r.lo, d.mean_score);
    r.hi = std::max(r.hi, d.mean_score);
  }
  return r;
}

// Kernel average written as lo + weighted excess so that a lone design (or
// equal scores) reproduces its score exactly.
double kernel_average(std::span<const ScoredDesign> designs, Point2 where, double inv_two_h2,
                      double weight_floor, ScoreRange range) {
  double weight_sum = 0.0;
  double excess_sum = 0.0;
  for (const auto& d : designs) {
    const double dx = where.x - d.point.x;
    const double dy = where.y - d.point.y;
    const double w = std::exp(-(dx * dx + dy * dy) * inv_two_h2);
    weight_sum += w;
    excess_sum += w * (d.mean_score - range.lo);
  }
  if (!(weight_sum >= weight_floor) || weight_sum == 0.0) return masked_elevation;
  return std::clamp(range.lo + excess_sum / weight_sum, range.lo, range.hi);
}

std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", v);
  return buffer;
}

void check_bandwidth(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw Error(ErrorCode::invalid_parameter, "terrain bandwidth must be a positive number");
  }
}

}  // namespace

ScoredDesign make_scored_design(std::string design_id, std::string participant_id, int group,
                                Point2 point, std::vector<double> scores) {
  if (scores.empty()) {
    throw Error(ErrorCode::validation, "design '" + design_id + "' has no scores");
  }
  double sum = 0.0;
  for (const double s : scores) {
    if (!(s >= 1.0 && s <= 5.0)) {
      throw Error(ErrorCode::validation,
                  "design '" + design_id + "' has score " + format_value(s) + " outside [1, 5]");
    }
    sum += s;
  }
  ScoredDesign d{std::move(design_id), std::move(participant_id), group, point, std::move(scores), 0.0};
  d.mean_score = sum / static_cast<double>(d.scores.size());
  return d;
}

Point2 GridSpec::cell_center(std::size_t row, std::size_t col) const noexcept {
  return {x_min + (static_cast<double>(col) + 0.5) * cell_width(),
          y_min + (static_cast<double>(row) + 0.5) * cell_height()};
}

void GridSpec::validate() const {
  if (nx == 0 || ny == 0) throw Error(ErrorCode::invalid_parameter, "grid needs at least one cell");
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max - x_min) ||
      !std::isfinite(y_max - y_min)) {
    throw Error(ErrorCode::invalid_parameter, "grid extent is degenerate");
  }
}

GridSpec default_grid(std::span<const ScoredDesign> designs, std::size_t nx, std::size_t ny) {
  if (designs.empty()) throw Error(ErrorCode::empty_designs, "default_grid: no designs");
  double x_lo = designs.front().point.x, x_hi = x_lo;
  double y_lo = designs.front().point.y, y_hi = y_lo;
  for (const auto& d : designs) {
    x_lo = std::min(x_lo, d.point.x);
    x_hi = std::max(x_hi, d.point.x);
    y_lo = std::min(y_lo, d.point.y);
    y_hi = std::max(y_hi, d.point.y);
  }
  double width = x_hi - x_lo;
  double height = y_hi - y_lo;
  // A collapsed axis borrows the other axis' span, or 1 when both collapse.
  const double fallback = std::max(width, height) > 0.0 ? std::max(width, height) : 1.0;
  if (width <= 0.0) {
    x_lo -= fallback / 2.0;
    width = fallback;
  }
  if (height <= 0.0) {
    y_lo -= fallback / 2.0;
    height = fallback;
  }
  return GridSpec{x_lo - 0.1 * width, x_lo + 1.1 * width, y_lo - 0.1 * height,
                  y_lo + 1.1 * height, nx, ny};
}

double default_bandwidth(const GridSpec& grid) noexcept {
  return 0.1 * std::max(grid.x_max - grid.x_min, grid.y_max - grid.y_min);
}

double elevation_at(std::span<const ScoredDesign> designs, Point2 where, double bandwidth,
                    double weight_floor) {
  if (designs.empty()) throw Error(ErrorCode::empty_designs, "elevation_at: no designs");
  check_bandwidth(bandwidth);
  return kernel_average(designs, where, 1.0 / (2.0 * bandwidth * bandwidth), weight_floor,
                        score_range(designs));
}

TerrainGrid build_terrain(std::span<const ScoredDesign> designs, const GridSpec& grid,
                          const TerrainOptions& options) {
  if (designs.empty()) throw Error(ErrorCode::empty_designs, "build_terrain: no designs");
  grid.validate();
  const double bandwidth = options.bandwidth > 0.0 ? options.bandwidth : default_bandwidth(grid);
  check_bandwidth(bandwidth);
  if (!(options.weight_floor >= 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "terrain weight floor must be >= 0");
  }

  TerrainGrid terrain{grid, std::vector<double>(grid.nx * grid.ny, masked_elevation),
                      std::vector<bool>(grid.nx * grid.ny, false)};
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  const ScoreRange range = score_range(designs);

  // Rows are independent; each thread writes its own row band.
  auto fill_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t row = row_begin; row < row_end; ++row) {
      for (std::size_t col = 0; col < grid.nx; ++col) {
        terrain.elevation[row * grid.nx + col] =
            kernel_average(designs, grid.cell_center(row, col), inv_two_h2, options.weight_floor, range);
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, grid.ny);
  if (threads == 1) {
    fill_rows(0, grid.ny);
  } else {
    std::vector<std::thread> pool;
    const std::size_t band = (grid.ny + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(grid.ny, t * band);
      const std::size_t end = std::min(grid.ny, begin + band);
      pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < terrain.elevation.size(); ++i) {
    terrain.mask[i] = !std::isnan(terrain.elevation[i]);
  }
  return terrain;
}

TerrainGrid build_terrain(std::span<const ScoredDesign> designs) {
  return build_terrain(designs, default_grid(designs));
}

std::vector<Peak> find_peaks(const TerrainGrid& terrain) {
  const std::size_t nx = terrain.grid.nx;
  const std::size_t ny = terrain.grid.ny;
  if (std::none_of(terrain.mask.begin(), terrain.mask.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::all_masked, "find_peaks: every cell is masked");
  }

  auto for_each_neighbor = [&](std::size_t index, auto&& fn) {
    const std::size_t row = index / nx;
    const std::size_t col = index % nx;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const auto r = static_cast<long long>(row) + dr;
        const auto c = static_cast<long long>(col) + dc;
        if (r < 0 || c < 0 || r >= static_cast<long long>(ny) || c >= static_cast<long long>(nx)) continue;
        const auto neighbor = static_cast<std::size_t>(r) * nx + static_cast<std::size_t>(c);
        if (terrain.mask[neighbor]) fn(neighbor);
      }
    }
  };

  std::vector<Peak> peaks;
  std::vector<bool> visited(terrain.elevation.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < terrain.elevation.size(); ++start) {
    if (!terrain.mask[start] || visited[start]) continue;
    const double level = terrain.elevation[start];
    // Flood the flat region containing `start`; row-major scan makes start its lowest cell.
    bool dominated = false;
    visited[start] = true;
    stack.assign(1, start);
    while (!stack.empty()) {
      const std::size_t cell = stack.back();
      stack.pop_back();
      for_each_neighbor(cell, [&](std::size_t n) {
        const double v = terrain.elevation[n];
        if (v > level) {
          dominated = true;
        } else if (v == level && !visited[n]) {
          visited[n] = true;
          stack.push_back(n);
        }
      });
    }
    if (!dominated) {
      const std::size_t row = start / nx;
      const std::size_t col = start % nx;
      peaks.push_back(Peak{row, col, terrain.grid.cell_center(row, col), level});
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.elevation > b.elevation; });
  return peaks;
}

Peak terrain_argmax(const TerrainGrid& terrain) {
  std::size_t best = terrain.elevation.size();
  for (std::size_t i = 0; i < terrain.elevation.size(); ++i) {
    if (terrain.mask[i] && (best == terrain.elevation.size() || terrain.elevation[i] > terrain.elevation[best])) {
      best = i;
    }
  }
  if (best == terrain.elevation.size()) {
    throw Error(ErrorCode::all_masked, "terrain_argmax: every cell is masked");
  }
  const std::size_t row = best / terrain.grid.nx;
  const std::size_t col = best % terrain.grid.nx;
  return Peak{row, col, terrain.grid.cell_center(row, col), terrain.elevation[best]};
}

const ScoredDesign& best_design(std::span<const ScoredDesign> designs) {
  if (designs.empty()) throw Error(ErrorCode::empty_designs, "best_design: no designs");
  const ScoredDesign* best = &designs.front();
  for (const auto& d : designs) {
    if (d.mean_score > best->mean_score ||
        (d.mean_score == best->mean_score && d.design_id < best->design_id)) {
      best = &d;
    }
  }
  return *best;
}

std::string format_grid(const TerrainGrid& terrain) {
  const auto& g = terrain.grid;
  std::string out = format_value(g.x_min) + "," + format_value(g.x_max) + "," +
                    format_value(g.y_min) + "," + format_value(g.y_max) + "," +
                    std::to_string(g.nx) + "," + std::to_string(g.ny) + "\n";
  for (std::size_t row = 0; row < g.ny; ++row) {
    for (std::size_t col = 0; col < g.nx; ++col) {
      if (col > 0) out += ',';
      out += terrain.defined(row, col) ? format_value(terrain.at(row, col)) : "NA";
    }
    out += '\n';
  }
  return out;
}

TerrainGrid parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto fields_of = [](const std::string& l) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(l);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    return fields;
  };
  auto number = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(ErrorCode::parse, "grid: bad number '" + s + "'");
    return v;
  };

  if (!std::getline(in, line)) throw Error(ErrorCode::parse, "grid: missing header");
  const auto header = fields_of(line);
  if (header.size() != 6) throw Error(ErrorCode::parse, "grid: header needs 6 fields");
  TerrainGrid t;
  t.grid = GridSpec{number(header[0]), number(header[1]), number(header[2]), number(header[3]),
                    static_cast<std::size_t>(number(header[4])),
                    static_cast<std::size_t>(number(header[5]))};
  t.grid.validate();
  t.elevation.assign(t.grid.nx * t.grid.ny, masked_elevation);
  t.mask.assign(t.grid.nx * t.grid.ny, false);
  for (std::size_t row = 0; row < t.grid.ny; ++row) {
    if (!std::getline(in, line)) throw Error(ErrorCode::parse, "grid: missing row " + std::to_string(row));
    const auto fields = fields_of(line);
    if (fields.size() != t.grid.nx) {
      throw Error(ErrorCode::parse, "grid: row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " values");
    }
    for (std::size_t col = 0; col < t.grid.nx; ++col) {
      if (fields[col] == "NA") continue;
      t.elevation[row * t.grid.nx + col] = number(fields[col]);
      t.mask[row * t.grid.nx + col] = true;
    }
  }
  return t;
}

TerrainGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open grid file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_grid(buffer.str());
}

namespace {

using Rgb = std::array<unsigned char, 3>;

Rgb ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {40, 60, 140}, {40, 150, 160}, {110, 180, 80}, {230, 200, 80}, {200, 70, 50}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  Rgb c{};
  for (std::size_t k = 0; k < 3; ++k) {
    c[k] = static_cast<unsigned char>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  }
  return c;
}

std::string render_ppm(const TerrainGrid& terrain, std::span<const ScoredDesign> designs) {
  constexpr std::size_t scale = 4;
  const auto& g = terrain.grid;
  const std::size_t width = g.nx * scale;
  const std::size_t height = g.ny * scale;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < terrain.elevation.size(); ++i) {
    if (!terrain.mask[i]) continue;
    lo = any ? std::min(lo, terrain.elevation[i]) : terrain.elevation[i];
    hi = any ? std::max(hi, terrain.elevation[i]) : terrain.elevation[i];
    any = true;
  }
  std::vector<Rgb> pixels(width * height, Rgb{128, 128, 128});
  for (std::size_t row = 0; row < g.ny; ++row) {
    for (std::size_t col = 0; col < g.nx; ++col) {
      if (!terrain.defined(row, col)) continue;
      const Rgb c = ramp(hi > lo ? (terrain.at(row, col) - lo) / (hi - lo) : 1.0);
      const std::size_t top = (g.ny - 1 - row) * scale;  // image rows run downward
      for (std::size_t dy = 0; dy < scale; ++dy) {
        for (std::size_t dx = 0; dx < scale; ++dx) pixels[(top + dy) * width + col * scale + dx] = c;
      }
    }
  }
  for (const auto& d : designs) {
    const double fx = (d.point.x - g.x_min) / (g.x_max - g.x_min);
    const double fy = (d.point.y - g.y_min) / (g.y_max - g.y_min);
    if (fx < 0.0 || fx > 1.0 || fy < 0.0 || fy > 1.0) continue;
    const auto px = static_cast<long long>(fx * static_cast<double>(width - 1));
    const auto py = static_cast<long long>((1.0 - fy) * static_cast<double>(height - 1));
    for (int k = -3; k <= 3; ++k) {
      for (const auto& [x, y] : {std::pair{px + k, py}, std::pair{px, py + k}}) {
        if (x < 0 || y < 0 || x >= static_cast<long long>(width) || y >= static_cast<long long>(height)) continue;
        pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] =
            k == 0 ? Rgb{255, 255, 255} : Rgb{0, 0, 0};
      }
    }
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + pixels.size() * 3);
  for (const auto& p : pixels) out.append(reinterpret_cast<const char*>(p.data()), 3);
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace

TerrainFiles export_terrain(const TerrainGrid& terrain, std::span<const ScoredDesign> designs,
                            const std::filesystem::path& base_path) {
  TerrainFiles files{base_path, base_path};
  files.grid += ".csv";
  files.image += ".ppm";
  write_bytes(files.grid, format_grid(terrain));
  write_bytes(files.image, render_ppm(terrain, designs));
  return files;
}

}  // namespace ideageo
