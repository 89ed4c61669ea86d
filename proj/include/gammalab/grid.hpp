#ifndef GAMMALAB_GRID_HPP_
#define GAMMALAB_GRID_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gammalab/banach.hpp"

namespace gammalab::gamma {

using banach::SpaceDescriptor;
using banach::Vector;

enum class MeasureTag { LebesgueInterval, HalflineDtOverT, PlanarRegion };

/// Cells of a measured grid: midpoints plus positive masses. Half-line dt/t
/// grids are stored in log coordinates, where the measure is Lebesgue, so all
/// one-dimensional code paths see Lebesgue cells. Planar grids index their
/// cells 0..M-1; the geometry lives with whoever built them.
struct MeasuredGrid {
  std::vector<double> coordinates;
  std::vector<double> cell_masses;
  MeasureTag tag = MeasureTag::LebesgueInterval;

  std::size_t cells() const { return coordinates.size(); }
  void validate() const;

  /// M equal cells covering (lo, hi), Lebesgue measure.
  static MeasuredGrid uniform(double lo, double hi, std::size_t cells);
  /// M log-spaced cells covering (t_lo, t_hi) under dt/t; coordinates are log t.
  static MeasuredGrid log_halfline(double t_lo, double t_hi, std::size_t cells);
  /// Flat cell list with explicit masses (planar regions).
  static MeasuredGrid planar(std::vector<double> masses);
};

/// A piecewise-constant X-valued function: one vector per cell.
struct GridFunction {
  MeasuredGrid grid;
  SpaceDescriptor space;
  std::vector<Vector> values;

  void validate() const;
  banach::VectorFamily indicator_family() const;  // { sqrt(mass_k) value_k }

  /// Restriction to a cell subset (masses/values kept, others dropped).
  GridFunction restrict_to(const std::vector<std::size_t>& cell_indices) const;

  /// Columns: coord, mass, re_1..re_n, im_1..im_n.
  void write_csv(std::ostream& os) const;
  static GridFunction read_csv(std::istream& is, const SpaceDescriptor& space,
                               MeasureTag tag = MeasureTag::LebesgueInterval);
};

/// Samples an evaluator at cell midpoints.
GridFunction sample_on_grid(const MeasuredGrid& grid, const SpaceDescriptor& space,
                            const std::function<Vector(double)>& fn);

}  // namespace gammalab::gamma

#endif  // GAMMALAB_GRID_HPP_
