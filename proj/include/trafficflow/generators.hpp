#pragma once

#include <cstddef>
#include <cstdint>

#include "trafficflow/network.hpp"

namespace trafficflow {

/// Cell-grid family: m x m cells with four nodes each, n = 4 m^2.
struct CellGridSpec {
  std::size_t m = 2;
  double delta = 0.0;
  double epsilon = 0.0;
};

/// Cells are numbered column by column from the south-west corner; within a
/// cell the nodes run SW, NW, NE, SE. Edges leaving the grid are dropped.
Network gen_example1(const CellGridSpec& spec);

/// Worst-case family for the overflow iteration count.
Network gen_example2(std::size_t n);

/// Four-node network that is NI but not FD.
Network gen_example3();

/// Three-node network whose overflow equation has a unique solution, a
/// continuum of solutions or none depending on alpha1.
Network gen_example4(double alpha1);

struct RandomSpec {
  std::size_t n = 5;
  std::uint64_t seed = 1;
  double p_density = 0.5;
  double q_density = 0.5;
  double leak = 0.1;
};

/// splitmix64 stream: state += 0x9e3779b97f4a7c15, then the standard
/// xor-shift-multiply finalizer; uniforms are (next >> 11) * 2^-53.
/// For each row i of P, then of Q: for each j != i in increasing order draw u
/// and keep the edge if u < density, with weight 0.05 + uniform; the kept
/// weights are scaled to sum to 1 - leak. Then alpha gets one entry at
/// floor(u n) of size n (0.5 + u), and mu_i = 0.5 + u for each i.
Network gen_random(const RandomSpec& spec);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace trafficflow
