#pragma once

#include <span>

#include "boussinesq/types.hpp"

namespace bsq {

enum class FftDirection { forward, backward };

// Unnormalised in-place DFT: forward uses e^{-2 pi i j m / n}, backward e^{+2 pi i j m / n}.
void fft_inplace(std::span<cplx> data, FftDirection direction);

}  // namespace bsq
