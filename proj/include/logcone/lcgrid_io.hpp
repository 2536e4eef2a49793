#pragma once

#include <iosfwd>
#include <string>

#include "logcone/grid.hpp"

namespace logcone {

// LCGRID v1 text format:
//   LCGRID v1
//   dim <d>
//   shape n1 .. nd
//   origin o1 .. od
//   spacing h1 .. hd
//   <one value per line, row-major>
// Reals are written with 17 significant digits so a write/read cycle is bit-exact.

void write_lcgrid(std::ostream& os, const DensityGrid& g);
DensityGrid read_lcgrid(std::istream& is);

void save_lcgrid(const std::string& path, const DensityGrid& g);
DensityGrid load_lcgrid(const std::string& path);

}  // namespace logcone
