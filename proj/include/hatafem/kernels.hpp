// Copyright 2026 The hat-afem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace hatafem::kernels {

/// Dense vector and CSR kernels used by the conjugate-gradient solver.
struct KernelTable {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = x + b * y
  void (*xpay)(const double* x, double b, double* y, std::size_t n);
  /// z = x .* y
  void (*mul)(const double* x, const double* y, double* z, std::size_t n);
  /// y = A x for a CSR matrix with n rows.
  void (*spmv)(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
               const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(HATAFEM_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(HATAFEM_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// Every variant compiled in and supported by this CPU, scalar first.
std::vector<const KernelTable*> available();

/// Best supported variant. HAT_AFEM_SIMD=scalar|avx2|neon overrides the choice
/// when the named variant is available.
const KernelTable& active();

}  // namespace hatafem::kernels
