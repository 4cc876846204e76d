#include "maxflow/surface.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>

#include "maxflow/oracle.hpp"

namespace maxflow {

namespace {

// Saturating accumulation into a 32-bit terminal capacity.
void add_terminal(uint32_t& slot, uint64_t amount) {
  uint64_t total = slot + amount;
  slot = total > std::numeric_limits<uint32_t>::max()
             ? std::numeric_limits<uint32_t>::max()
             : static_cast<uint32_t>(total);
}

// Signed z-difference of the costs, range-checked against the 31-bit
// capacity budget.
int64_t z_diff(const CostVolume& vol, uint32_t x, uint32_t y, uint32_t z) {
  int64_t d = static_cast<int64_t>(vol.at(x, y, z)) - vol.at(x, y, z - 1);
  if (d > kInfiniteWeight || d < -static_cast<int64_t>(kInfiniteWeight))
    throw SurfaceError("cost difference does not fit in 31 bits");
  return d;
}

void check_dims(const CostVolume& vol) {
  if (vol.x == 0 || vol.y == 0 || vol.z < 2)
    throw SurfaceError("volume needs X >= 1, Y >= 1, Z >= 2");
  if (vol.cost.size() != static_cast<size_t>(vol.x) * vol.y * vol.z)
    throw SurfaceError("cost array does not match the dimensions");
}

constexpr int kNeighborDx[4] = {1, -1, 0, 0};
constexpr int kNeighborDy[4] = {0, 0, 1, -1};

// Shared column machinery for single- and multi-surface builds. `id_of`
// maps (x,z,y) to the vertex id of the current subgraph.
template <typename IdOf>
void emit_subgraph(const CostVolume& vol, uint32_t delta, const IdOf& id_of, Problem& p) {
  const uint32_t X = vol.x, Y = vol.y, Z = vol.z;
  for (uint32_t y = 0; y < Y; ++y) {
    for (uint32_t x = 0; x < X; ++x) {
      if (vol.excluded(x, y)) {
        for (uint32_t z = 0; z < Z; ++z)
          add_terminal(p.terminal_caps[id_of(x, z, y)].to_sink, kInfiniteWeight);
        continue;
      }
      bool any_source = false;
      for (uint32_t z = 1; z < Z; ++z) {
        int64_t d = z_diff(vol, x, y, z);
        if (d > 0) {
          add_terminal(p.terminal_caps[id_of(x, z, y)].from_source, d);
          any_source = true;
        } else if (d < 0) {
          add_terminal(p.terminal_caps[id_of(x, z, y)].to_sink, -d);
        }
      }
      add_terminal(p.terminal_caps[id_of(x, Z - 1, y)].to_sink, kInfiniteWeight);
      if (!any_source) add_terminal(p.terminal_caps[id_of(x, 0, y)].from_source, 1);
      for (uint32_t z = 1; z < Z; ++z)
        p.add_edge(id_of(x, z, y), id_of(x, z - 1, y), kInfiniteWeight);
      for (int k = 0; k < 4; ++k) {
        int64_t qx = static_cast<int64_t>(x) + kNeighborDx[k];
        int64_t qy = static_cast<int64_t>(y) + kNeighborDy[k];
        if (qx < 0 || qy < 0 || qx >= X || qy >= Y) continue;
        if (vol.excluded(qx, qy)) continue;
        for (uint32_t z = 0; z < Z; ++z) {
          uint32_t zq = z > delta ? z - delta : 0;
          p.add_edge(id_of(x, z, y), id_of(qx, zq, qy), kInfiniteWeight);
        }
      }
    }
  }
}

}  // namespace

Problem build_single_surface(const CostVolume& volume, uint32_t delta) {
  check_dims(volume);
  const uint32_t X = volume.x, Z = volume.z;
  Problem p;
  p.n = static_cast<uint64_t>(X) * volume.y * Z;
  p.terminal_caps.resize(p.n);
  emit_subgraph(volume, delta,
                [&](uint32_t x, uint32_t z, uint32_t y) {
                  return surface_vertex_id(x, z, y, X, Z);
                },
                p);
  return p;
}

Problem build_multi_surface(const std::vector<CostVolume>& volumes, uint32_t delta,
                            uint32_t dmin, uint32_t dmax) {
  const uint32_t k = static_cast<uint32_t>(volumes.size());
  if (k < 2) throw SurfaceError("multi-surface build needs at least two volumes");
  check_dims(volumes[0]);
  const uint32_t X = volumes[0].x, Y = volumes[0].y, Z = volumes[0].z;
  for (const CostVolume& v : volumes)
    if (v.x != X || v.y != Y || v.z != Z)
      throw SurfaceError("all surface volumes must share dimensions");
  if (dmin > dmax || dmax >= Z) throw SurfaceError("need 0 <= dmin <= dmax < Z");
  if (static_cast<uint64_t>(dmax) * (k - 1) >= Z)
    throw SurfaceError("infeasible margins: dmax * (k-1) >= Z");

  Problem p;
  p.n = static_cast<uint64_t>(X) * Y * Z * k;
  p.terminal_caps.resize(p.n);
  for (uint32_t i = 0; i < k; ++i) {
    check_dims(volumes[i]);
    emit_subgraph(volumes[i], delta,
                  [&, i](uint32_t x, uint32_t z, uint32_t y) {
                    return multi_surface_vertex_id(x, z, i, y, X, Z, k);
                  },
                  p);
  }

  // Margin edges: (i,z) -> (i+1, z+dmin) keeps surface i+1 at least dmin
  // above surface i (targets past the top clamp onto the sink-forced
  // layer), and (i+1,z) -> (i, z-dmax) caps the gap at dmax (targets below
  // the grid clamp onto the base).
  for (uint32_t i = 0; i + 1 < k; ++i) {
    for (uint32_t y = 0; y < Y; ++y) {
      for (uint32_t x = 0; x < X; ++x) {
        for (uint32_t z = 0; z < Z; ++z) {
          uint32_t up = std::min(z + dmin, Z - 1);
          p.add_edge(multi_surface_vertex_id(x, z, i, y, X, Z, k),
                     multi_surface_vertex_id(x, up, i + 1, y, X, Z, k), kInfiniteWeight);
          uint32_t down = z > dmax ? z - dmax : 0;
          p.add_edge(multi_surface_vertex_id(x, z, i + 1, y, X, Z, k),
                     multi_surface_vertex_id(x, down, i, y, X, Z, k), kInfiniteWeight);
        }
      }
    }
  }
  return p;
}

HeightMap extract_surface(const CutAssignment& cut, uint32_t X, uint32_t Y, uint32_t Z,
                          uint32_t k) {
  if (cut.side.size() != static_cast<size_t>(X) * Y * Z * k)
    throw SurfaceError("cut does not match the volume dimensions");
  HeightMap map;
  map.x = X;
  map.y = Y;
  map.k = k;
  map.h.assign(static_cast<size_t>(X) * Y * k, kNoHeight);
  for (uint32_t i = 0; i < k; ++i) {
    for (uint32_t y = 0; y < Y; ++y) {
      for (uint32_t x = 0; x < X; ++x) {
        auto id = [&](uint32_t z) {
          return k == 1 ? surface_vertex_id(x, z, y, X, Z)
                        : multi_surface_vertex_id(x, z, i, y, X, Z, k);
        };
        int32_t h = kNoHeight;
        for (int64_t z = Z - 1; z >= 0; --z) {
          if (cut.side[id(static_cast<uint32_t>(z))] == 0) {
            h = static_cast<int32_t>(z);
            break;
          }
        }
        for (int64_t z = 0; z < h; ++z) {
          if (cut.side[id(static_cast<uint32_t>(z))] != 0)
            throw SurfaceError("source side is not downward closed");
        }
        map.at(x, y, i) = h;
      }
    }
  }
  return map;
}

std::pair<CostVolume, HeightMap> synth_volume(uint64_t seed, uint32_t X, uint32_t Y,
                                              uint32_t Z, uint32_t delta_truth) {
  if (delta_truth < 1) throw SurfaceError("delta_truth must be >= 1");
  if (Z < 3) throw SurfaceError("synthetic volumes need Z >= 3");
  SplitMix64 rng(seed);

  // Height field as a sum of two bounded-step walks, one per axis; the sum
  // moves by at most delta_truth between 4-neighbor columns and the final
  // clamp keeps that property.
  auto walk = [&](uint32_t len) {
    std::vector<int64_t> w(len, 0);
    for (uint32_t i = 1; i < len; ++i) {
      int64_t step = static_cast<int64_t>(rng.below(2 * delta_truth + 1)) - delta_truth;
      w[i] = w[i - 1] + step;
    }
    return w;
  };
  std::vector<int64_t> fx = walk(X), gy = walk(Y);

  HeightMap truth;
  truth.x = X;
  truth.y = Y;
  truth.k = 1;
  truth.h.resize(static_cast<size_t>(X) * Y);
  const int64_t base = Z / 2;
  for (uint32_t y = 0; y < Y; ++y)
    for (uint32_t x = 0; x < X; ++x)
      truth.at(x, y) = static_cast<int32_t>(
          std::clamp<int64_t>(base + fx[x] + gy[y], 0, static_cast<int64_t>(Z) - 2));

  // Tent costs: +1 per layer up to the plant, then a sharp drop and -1
  // per layer above, so the column cost is minimized exactly at the plant.
  constexpr int32_t kBoundaryDrop = 16;
  CostVolume vol;
  vol.x = X;
  vol.y = Y;
  vol.z = Z;
  vol.cost.resize(static_cast<size_t>(X) * Y * Z);
  for (uint32_t y = 0; y < Y; ++y) {
    for (uint32_t x = 0; x < X; ++x) {
      const int32_t h = truth.at(x, y);
      for (uint32_t z = 0; z < Z; ++z) {
        int32_t zi = static_cast<int32_t>(z);
        int32_t c = zi <= h ? zi : h - kBoundaryDrop - (zi - h - 1);
        vol.cost[x + static_cast<size_t>(X) * (y + static_cast<size_t>(Y) * z)] = c;
      }
    }
  }
  return {std::move(vol), std::move(truth)};
}

void write_heightmap(const HeightMap& map, std::ostream& out) {
  for (uint32_t i = 0; i < map.k; ++i) {
    if (i > 0) out << '\n';
    for (uint32_t y = 0; y < map.y; ++y) {
      for (uint32_t x = 0; x < map.x; ++x) {
        if (x > 0) out << ' ';
        out << map.at(x, y, i);
      }
      out << '\n';
    }
  }
}

CostVolume read_volume_raw(std::istream& in, uint32_t X, uint32_t Y, uint32_t Z,
                           uint32_t element_bytes) {
  if (element_bytes != 1 && element_bytes != 2 && element_bytes != 4)
    throw SurfaceError("element width must be 1, 2 or 4 bytes");
  CostVolume vol;
  vol.x = X;
  vol.y = Y;
  vol.z = Z;
  const size_t count = static_cast<size_t>(X) * Y * Z;
  vol.cost.resize(count);
  std::vector<char> buf(count * element_bytes);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!in) throw SurfaceError("volume file shorter than its dimensions");
  for (size_t i = 0; i < count; ++i) {
    int64_t v = 0;
    for (uint32_t b = 0; b < element_bytes; ++b)
      v |= static_cast<int64_t>(static_cast<unsigned char>(buf[i * element_bytes + b]))
           << (8 * b);
    // sign extend
    const int64_t sign_bit = int64_t{1} << (8 * element_bytes - 1);
    if (v & sign_bit) v -= sign_bit << 1;
    vol.cost[i] = static_cast<int32_t>(v);
  }
  return vol;
}

}  // namespace maxflow
