#pragma once
/// @file biot_savart.hpp
/// Velocity from vorticity through grad-perp of the Dirichlet Green function,
/// the boundary trace u^1(., 0) and the normalization that moves that trace
/// into a boundary layer.

#include "hpvort/grid.hpp"

namespace hpv {

/// u = int grad-perp_x D(x, y) mu(dy) on the grid nodes.
///
/// Atoms and sheet samples are summed with the exact kernel. A node sitting
/// on an atom keeps only the image part and is counted in *flagged. Nodes
/// within one cell of a sheet sample use the cell-averaged direct kernel.
/// The density part is grad-perp_h of the spectral stream function with
/// centred differences, so its discrete divergence vanishes identically at
/// interior nodes. Boundary layers contribute nothing.
VectorField velocity_from_measure(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad = 4,
                                  std::size_t* flagged = nullptr);

/// (d2 psi, -d1 psi) with centred differences; odd reflection of psi across
/// x2 = 0 on the boundary row, one-sided at the other edges.
VectorField grad_perp_h(const ScalarField& psi);

/// Centred-difference divergence on interior nodes (zero on edge nodes).
ScalarField divergence_h(const VectorField& u);

/// u^1(x1, 0) = int P_{y2}(x1 - y1) mu(dy) on the grid's x1 nodes. Sources on
/// x2 = 0 (boundary layers included) do not contribute.
LineSamples boundary_trace(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad = 4);

/// Same on an arbitrary window of n uniform nodes. A density component is
/// only accepted when the window is the grid's own boundary row.
LineSamples boundary_trace(const VorticityMeasure& mu, double x1_min, double x1_max, std::size_t n,
                           int pad = 4);

/// Subtracts the boundary trace from the boundary layer (created on the
/// grid's boundary row if absent). The velocity is unchanged.
VorticityMeasure normalize_measure(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad = 4);

}  // namespace hpv
