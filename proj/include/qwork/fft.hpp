#pragma once

#include <complex>
#include <cstddef>

// Thin wrapper over FFTW with a shared plan cache. Transforms are
// unnormalized; forward uses the e^{-ikx} sign convention. in and out must
// not alias. Plan creation is serialized internally; execution is
// thread-safe on distinct arrays.
namespace qwork::fft {

using cdouble = std::complex<double>;

void forward(const cdouble* in, cdouble* out, std::size_t n);
void inverse(const cdouble* in, cdouble* out, std::size_t n);

}  // namespace qwork::fft
