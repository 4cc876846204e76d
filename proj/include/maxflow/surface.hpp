#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "maxflow/problem.hpp"

namespace maxflow {

// Edge weight standing in for infinity: the largest capacity a residual
// edge can hold.
inline constexpr uint32_t kInfiniteWeight = 0x7FFFFFFFu;

// Per-voxel integer costs on an X*Y*Z grid. Storage is x-fastest, then y,
// then z, independent of the vertex numbering of the built graphs. An
// optional mask excludes whole (x,y) columns from surface search.
struct CostVolume {
  uint32_t x = 0, y = 0, z = 0;
  std::vector<int32_t> cost;             // x + X*y + X*Y*z
  std::vector<uint8_t> column_excluded;  // x + X*y; empty means none

  int32_t at(uint32_t xi, uint32_t yi, uint32_t zi) const {
    return cost[xi + static_cast<size_t>(x) * (yi + static_cast<size_t>(y) * zi)];
  }
  bool excluded(uint32_t xi, uint32_t yi) const {
    return !column_excluded.empty() && column_excluded[xi + static_cast<size_t>(x) * yi];
  }
};

// One surface height per column, kNoHeight for columns with no surface.
// Multi-surface maps hold k layers.
inline constexpr int32_t kNoHeight = -1;
struct HeightMap {
  uint32_t x = 0, y = 0, k = 1;
  std::vector<int32_t> h;  // x + X*y + X*Y*surface

  int32_t at(uint32_t xi, uint32_t yi, uint32_t surface = 0) const {
    return h[xi + static_cast<size_t>(x) * (yi + static_cast<size_t>(y) * surface)];
  }
  int32_t& at(uint32_t xi, uint32_t yi, uint32_t surface = 0) {
    return h[xi + static_cast<size_t>(x) * (yi + static_cast<size_t>(y) * surface)];
  }
};

// Vertex numbering of the built graphs. Single surface counts x fastest,
// then z, then y; multi-surface x, then z, then surface index, then y, so
// every edge's id offset is bounded independently of Y.
inline uint64_t surface_vertex_id(uint32_t xi, uint32_t zi, uint32_t yi, uint32_t X,
                                  uint32_t Z) {
  return xi + static_cast<uint64_t>(X) * zi + static_cast<uint64_t>(X) * Z * yi;
}
inline uint64_t multi_surface_vertex_id(uint32_t xi, uint32_t zi, uint32_t surface,
                                        uint32_t yi, uint32_t X, uint32_t Z, uint32_t k) {
  return xi + static_cast<uint64_t>(X) * zi + static_cast<uint64_t>(X) * Z * surface +
         static_cast<uint64_t>(X) * Z * k * yi;
}

class SurfaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimum-cut formulation of single-surface detection: terminal weights
// from the signed z-difference of the costs, infinite downward edges
// inside each column, the top layer (and every voxel of an excluded
// column) tied to the sink, and infinite smoothness edges
// (p,z) -> (q, max(0, z-delta)) between 4-neighbor columns. A column with
// no source weight anywhere gets a unit source cap at z=0 so that, unless
// the whole grid goes sink-side, every column yields a height.
Problem build_single_surface(const CostVolume& volume, uint32_t delta);

// k stacked single-surface graphs plus infinite inter-surface margin
// edges enforcing dmin <= h[i+1] - h[i] <= dmax per column. Throws
// SurfaceError if dmax * (k-1) >= Z.
Problem build_multi_surface(const std::vector<CostVolume>& volumes, uint32_t delta,
                            uint32_t dmin, uint32_t dmax);

// Heights from a finished cut: per column the topmost source-side voxel,
// kNoHeight if the column is entirely sink-side. Throws SurfaceError if
// the source side is not downward closed (which would mean the built
// graph was broken).
HeightMap extract_surface(const CutAssignment& cut, uint32_t X, uint32_t Y, uint32_t Z,
                          uint32_t k = 1);

// Deterministic synthetic volume with a planted delta_truth-Lipschitz
// height field. Costs rise by one per layer up to the plant and fall
// beyond it, with a sharp drop just above the boundary, so the planted
// surface is the unique minimum cut whenever delta >= delta_truth.
std::pair<CostVolume, HeightMap> synth_volume(uint64_t seed, uint32_t X, uint32_t Y,
                                              uint32_t Z, uint32_t delta_truth);

// Plain text grid: one row per y, k blocks separated by blank lines.
void write_heightmap(const HeightMap& map, std::ostream& out);

// Raw little-endian voxel stream in storage order; element_bytes is 1, 2
// or 4 (signed). Dims come from the JSON sidecar, parsed by the CLI.
CostVolume read_volume_raw(std::istream& in, uint32_t X, uint32_t Y, uint32_t Z,
                           uint32_t element_bytes);

}  // namespace maxflow
