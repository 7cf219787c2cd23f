#pragma once

#include <complex>
#include <vector>

namespace atollpr {

using cd = std::complex<double>;

// Unnormalized in-place DFT: X_k = sum_j x_j exp(sign * 2 pi i j k / n).
// sign = -1 is the forward direction. Thread safe.
void fft_inplace(std::vector<cd>& data, int sign);

}  // namespace atollpr
