#pragma once

#include "specfun/simd.hpp"

namespace specfun::simd::detail {

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

}  // namespace specfun::simd::detail
