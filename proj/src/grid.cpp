#include "gammalab/grid.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gammalab/banach.hpp"

namespace gammalab::gamma {

void MeasuredGrid::validate() const {
  if (coordinates.size() != cell_masses.size())
    throw InvalidInput("grid: coordinate/mass count mismatch");
  for (double m : cell_masses)
    if (!(m > 0.0)) throw InvalidInput("grid: cell masses must be positive");
  if (tag != MeasureTag::PlanarRegion) {
    for (std::size_t i = 1; i < coordinates.size(); ++i)
      if (!(coordinates[i] > coordinates[i - 1]))
        throw InvalidInput("grid: coordinates must be strictly increasing");
  }
}

MeasuredGrid MeasuredGrid::uniform(double lo, double hi, std::size_t cells) {
  if (!(hi > lo) || cells == 0) throw InvalidInput("uniform grid: bad range");
  MeasuredGrid g;
  g.tag = MeasureTag::LebesgueInterval;
  const double h = (hi - lo) / static_cast<double>(cells);
  g.coordinates.resize(cells);
  g.cell_masses.assign(cells, h);
  for (std::size_t k = 0; k < cells; ++k)
    g.coordinates[k] = lo + (static_cast<double>(k) + 0.5) * h;
  return g;
}

MeasuredGrid MeasuredGrid::log_halfline(double t_lo, double t_hi, std::size_t cells) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw InvalidInput("log grid: need 0 < t_lo < t_hi");
  MeasuredGrid g = uniform(std::log(t_lo), std::log(t_hi), cells);
  g.tag = MeasureTag::HalflineDtOverT;
  return g;
}

MeasuredGrid MeasuredGrid::planar(std::vector<double> masses) {
  MeasuredGrid g;
  g.tag = MeasureTag::PlanarRegion;
  g.cell_masses = std::move(masses);
  g.coordinates.resize(g.cell_masses.size());
  for (std::size_t k = 0; k < g.coordinates.size(); ++k)
    g.coordinates[k] = static_cast<double>(k);
  g.validate();
  return g;
}

void GridFunction::validate() const {
  grid.validate();
  if (values.size() != grid.cells())
    throw InvalidInput("grid function: value count != cell count");
  for (const auto& v : values)
    if (v.size() != space.dim())
      throw InvalidInput("grid function: value dimension != space dimension");
}

banach::VectorFamily GridFunction::indicator_family() const {
  banach::VectorFamily fam{space, {}};
  fam.vectors.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    fam.vectors.push_back(std::sqrt(grid.cell_masses[k]) * values[k]);
  return fam;
}

GridFunction GridFunction::restrict_to(const std::vector<std::size_t>& cell_indices) const {
  GridFunction out;
  out.space = space;
  out.grid.tag = grid.tag;
  for (std::size_t idx : cell_indices) {
    if (idx >= grid.cells()) throw InvalidInput("restrict_to: cell index out of range");
    out.grid.coordinates.push_back(grid.coordinates[idx]);
    out.grid.cell_masses.push_back(grid.cell_masses[idx]);
    out.values.push_back(values[idx]);
  }
  return out;
}

void GridFunction::write_csv(std::ostream& os) const {
  const int n = space.dim();
  os << "coord,mass";
  for (int j = 1; j <= n; ++j) os << ",re_" << j;
  for (int j = 1; j <= n; ++j) os << ",im_" << j;
  os << "\n";
  for (std::size_t k = 0; k < grid.cells(); ++k) {
    os << format_double(grid.coordinates[k]) << "," << format_double(grid.cell_masses[k]);
    for (int j = 0; j < n; ++j) os << "," << format_double(values[k][j].real());
    for (int j = 0; j < n; ++j) os << "," << format_double(values[k][j].imag());
    os << "\n";
  }
}

GridFunction GridFunction::read_csv(std::istream& is, const SpaceDescriptor& space,
                                    MeasureTag tag) {
  GridFunction f;
  f.space = space;
  f.grid.tag = tag;
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("grid csv: missing header");
  const int n = space.dim();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> fields;
    while (std::getline(ss, tok, ',')) fields.push_back(std::stod(tok));
    if (static_cast<int>(fields.size()) != 2 + 2 * n)
      throw InvalidInput("grid csv: wrong column count");
    f.grid.coordinates.push_back(fields[0]);
    f.grid.cell_masses.push_back(fields[1]);
    Vector v(n);
    for (int j = 0; j < n; ++j) v[j] = Complex(fields[2 + j], fields[2 + n + j]);
    f.values.push_back(std::move(v));
  }
  f.validate();
  return f;
}

GridFunction sample_on_grid(const MeasuredGrid& grid, const SpaceDescriptor& space,
                            const std::function<Vector(double)>& fn) {
  grid.validate();
  GridFunction f;
  f.grid = grid;
  f.space = space;
  f.values.reserve(grid.cells());
  for (double c : grid.coordinates) f.values.push_back(fn(c));
  f.validate();
  return f;
}

}  // namespace gammalab::gamma
