#pragma once

#include <complex>

// Thin wrappers over FFTW3 with a plan cache. Planning is serialized behind a
// mutex (FFTW planning is not thread-safe); execution on distinct buffers is
// concurrent-safe. Transforms are unnormalized:
//   forward:  X_m = sum_j x_j exp(-2 pi i m j / n)
//   backward: X_j = sum_m x_m exp(+2 pi i m j / n)

namespace qmarket::detail {

void fft_forward(std::complex<double>* data, int n);
void fft_backward(std::complex<double>* data, int n);

} // namespace qmarket::detail
