#pragma once

#include <complex>
#include <span>

namespace besovq::fft {

using cplx = std::complex<double>;

// In-place unnormalized transforms on a dim-dimensional cube of side `size`,
// row-major. forward uses e^{-i}, backward e^{+i}. Plans are cached and
// guarded by a mutex; execution is thread-safe.
void forward(std::span<cplx> data, int dim, int size);
void backward(std::span<cplx> data, int dim, int size);

}  // namespace besovq::fft
