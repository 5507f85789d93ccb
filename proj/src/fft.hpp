#pragma once

#include <span>

#include "helicity_lab/vec3.hpp"

namespace hlab::detail {

/// In-place 3-D complex transform on an n^3 row-major array.
/// Backward computes sum_k c_k e^{+i k.x_j}; forward uses e^{-i k.x_j} and
/// is unnormalized.
void fft3d_forward(int n, std::span<Complex> data);
void fft3d_backward(int n, std::span<Complex> data);

/// Wraps a signed mode index into [0, n).
inline int wrap(int k, int n) { return ((k % n) + n) % n; }
/// Signed mode index of FFT bin i.
inline int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace hlab::detail
