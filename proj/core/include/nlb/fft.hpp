#pragma once

#include <complex>
#include <vector>

namespace nlb {

// Unnormalized in-place complex DFT of any length:
// sign = -1: X_k = sum_j x_j e^{-2 pi i jk/n};  sign = +1: the conjugate kernel.
// Plans are cached per (n, sign) and created with FFTW_ESTIMATE so results are
// reproducible run to run.  Safe to call from several threads.
void dft(std::vector<std::complex<double>>& data, int sign);

}  // namespace nlb
