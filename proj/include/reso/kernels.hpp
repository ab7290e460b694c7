#pragma once

#include <string_view>

// Small dense kernels used by the integrator hot loop. Every ISA variant
// performs the same operations in the same order, so results match the
// scalar reference bit for bit.
namespace reso::kern {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  // y = A x, A column-major n x n.
  void (*matvec)(const double* A, const double* x, double* y, int n);
  // out = s + c k
  void (*stage)(const double* s, double c, const double* k, double* out, int n);
  // out = s + c ((k1 + 2 (k2 + k3)) + k4)
  void (*rk4_combine)(const double* s, double c, const double* k1, const double* k2,
                      const double* k3, const double* k4, double* out, int n);
};

bool avx2_available();
bool neon_available();
bool available(Isa isa);
Isa best_isa();

// Throws InvalidParameter for an ISA the CPU cannot run.
const KernelTable& table(Isa isa);
const KernelTable& best();

// "auto", "scalar", "avx2" or "neon".
Isa parse_isa(std::string_view name);
const char* isa_name(Isa isa);

}  // namespace reso::kern
