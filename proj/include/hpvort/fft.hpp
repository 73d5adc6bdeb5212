#pragma once
/// @file fft.hpp
/// Thin FFTW3 wrappers. Plans are created once per length with FFTW_ESTIMATE
/// (measured plans could pick different algorithms run to run, which would
/// break bitwise reproducibility) and reused through the new-array API.

#include <complex>
#include <cstddef>
#include <vector>

namespace hpv::fft {

using cplx = std::complex<double>;

/// Smallest 2^a 3^b 5^c that is >= n.
std::size_t nice_size(std::size_t n);

/// Unnormalized real-to-complex transform of length n; out has n/2+1 entries.
void r2c(const std::vector<double>& in, std::vector<cplx>& out);

/// Unnormalized inverse of r2c; `n` is the real length.
void c2r(const std::vector<cplx>& in, std::size_t n, std::vector<double>& out);

/// DCT-I (REDFT00), unnormalized. Round trip scales by 2(n-1).
void dct1(const std::vector<double>& in, std::vector<double>& out);

/// DST-I (RODFT00), unnormalized. Round trip scales by 2(n+1).
void dst1(const std::vector<double>& in, std::vector<double>& out);

}  // namespace hpv::fft
