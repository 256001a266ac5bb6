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

#include <cstdlib>
#include <string_view>

#include "hatafem/kernels.hpp"

namespace hatafem::kernels {

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_table()};
#if defined(HATAFEM_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) out.push_back(&avx2_table());
#endif
#if defined(HATAFEM_HAVE_NEON)
  out.push_back(&neon_table());
#endif
  return out;
}

namespace {

const KernelTable& select() {
  const auto tables = available();
  if (const char* env = std::getenv("HAT_AFEM_SIMD")) {
    for (const auto* t : tables)
      if (std::string_view(env) == t->name) return *t;
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace hatafem::kernels
