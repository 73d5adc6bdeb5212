#pragma once
/// @file semigroups.hpp
/// Half-plane heat semigroups with Neumann (even image) and Dirichlet (odd
/// image) kernels, and the inverse Dirichlet / Neumann Laplacians.

#include "hpvort/grid.hpp"

namespace hpv {

/// Field input: spectral in x1 (zero padded by `pad`), image-kernel product
/// integration of the piecewise cubic interpolant in x2. The field is taken
/// as zero above the grid.
ScalarField heat_neumann(const ScalarField& f, double t, int pad = 4);
ScalarField heat_dirichlet(const ScalarField& f, double t, int pad = 4);

/// Measure input: exact kernel sums for atoms and sheet samples, the field
/// path for the density, a line heat flow for the boundary layer.
ScalarField heat_neumann(const VorticityMeasure& mu, const HalfPlaneGrid& grid, double t, int pad = 4);
ScalarField heat_dirichlet(const VorticityMeasure& mu, const HalfPlaneGrid& grid, double t, int pad = 4);

/// psi = int D(x, y) mu(dy). Nodes that coincide with an atom take the cell
/// mean of the log singularity. The density is handled spectrally in x1 with
/// exact exponential product integration in x2.
ScalarField inv_laplace_dirichlet(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad = 4);

/// int (E(x - y) + E(x - y*)) mu(dy), defined up to an additive constant for
/// the density part (the x1-mean mode keeps the finite part only). Boundary
/// layers are not supported.
ScalarField inv_laplace_neumann(const VorticityMeasure& mu, const HalfPlaneGrid& grid, int pad = 4);

}  // namespace hpv
