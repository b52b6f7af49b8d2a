#pragma once

#include "seqspace/kernels.hpp"

namespace seqspace::kernels::detail {

// Defined only in translation units compiled with the matching ISA flags.
const KernelTable& avx2_table();
const KernelTable& neon_table();

}  // namespace seqspace::kernels::detail
