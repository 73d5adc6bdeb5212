#include "hpvort/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <utility>

namespace hpv::fft {
namespace {

enum class Kind { R2C, C2R, DCT1, DST1 };

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffers {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  double* real2 = nullptr;
};

// One plan per (kind, n); plans are never destroyed.
fftw_plan get_plan(Kind kind, std::size_t n) {
  static std::map<std::pair<int, std::size_t>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int ni = static_cast<int>(n);
  double* r = fftw_alloc_real(n);
  double* r2 = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  fftw_plan p = nullptr;
  switch (kind) {
    case Kind::R2C: p = fftw_plan_dft_r2c_1d(ni, r, c, FFTW_ESTIMATE); break;
    case Kind::C2R: p = fftw_plan_dft_c2r_1d(ni, c, r, FFTW_ESTIMATE); break;
    case Kind::DCT1: p = fftw_plan_r2r_1d(ni, r, r2, FFTW_REDFT00, FFTW_ESTIMATE); break;
    case Kind::DST1: p = fftw_plan_r2r_1d(ni, r, r2, FFTW_RODFT00, FFTW_ESTIMATE); break;
  }
  fftw_free(r);
  fftw_free(r2);
  fftw_free(c);
  cache.emplace(key, p);
  return p;
}

}  // namespace

std::size_t nice_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best *= 2;
  for (std::size_t p5 = 1; p5 <= best; p5 *= 5)
    for (std::size_t p3 = p5; p3 <= best; p3 *= 3) {
      std::size_t v = p3;
      while (v < n) v *= 2;
      if (v < best) best = v;
    }
  return best;
}

void r2c(const std::vector<double>& in, std::vector<cplx>& out) {
  const std::size_t n = in.size();
  fftw_plan p = get_plan(Kind::R2C, n);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  std::memcpy(r, in.data(), n * sizeof(double));
  fftw_execute_dft_r2c(p, r, c);
  out.resize(n / 2 + 1);
  std::memcpy(static_cast<void*>(out.data()), c, (n / 2 + 1) * sizeof(fftw_complex));
  fftw_free(r);
  fftw_free(c);
}

void c2r(const std::vector<cplx>& in, std::size_t n, std::vector<double>& out) {
  fftw_plan p = get_plan(Kind::C2R, n);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  std::memcpy(c, in.data(), (n / 2 + 1) * sizeof(fftw_complex));
  fftw_execute_dft_c2r(p, c, r);
  out.assign(r, r + n);
  fftw_free(r);
  fftw_free(c);
}

static void r2r(Kind kind, const std::vector<double>& in, std::vector<double>& out) {
  const std::size_t n = in.size();
  fftw_plan p = get_plan(kind, n);
  double* a = fftw_alloc_real(n);
  double* b = fftw_alloc_real(n);
  std::memcpy(a, in.data(), n * sizeof(double));
  fftw_execute_r2r(p, a, b);
  out.assign(b, b + n);
  fftw_free(a);
  fftw_free(b);
}

void dct1(const std::vector<double>& in, std::vector<double>& out) { r2r(Kind::DCT1, in, out); }
void dst1(const std::vector<double>& in, std::vector<double>& out) { r2r(Kind::DST1, in, out); }

}  // namespace hpv::fft
