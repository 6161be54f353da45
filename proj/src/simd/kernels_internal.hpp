#pragma once

#include "fsd/simd/kernels.hpp"

namespace fsd::simd::detail {

extern const Kernels kScalarKernels;
#if defined(FSD_HAVE_AVX2_KERNELS)
extern const Kernels kAvx2Kernels;
#endif
#if defined(FSD_HAVE_NEON_KERNELS)
extern const Kernels kNeonKernels;
#endif

}  // namespace fsd::simd::detail
