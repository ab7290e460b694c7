#include "reso/kernels.hpp"

#include <string>

#include "reso/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define RESO_HAVE_X86 1
#endif

#if defined(__aarch64__)
#include <arm_neon.h>
#define RESO_HAVE_NEON 1
#endif

namespace reso::kern {

namespace {

void matvec_scalar(const double* A, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += A[j * n + i] * x[j];
    y[i] = acc;
  }
}

void stage_scalar(const double* s, double c, const double* k, double* out, int n) {
  for (int i = 0; i < n; ++i) out[i] = s[i] + c * k[i];
}

void rk4_combine_scalar(const double* s, double c, const double* k1, const double* k2,
                        const double* k3, const double* k4, double* out, int n) {
  for (int i = 0; i < n; ++i) {
    double m = k2[i] + k3[i];
    m = m + m;
    double acc = k1[i] + m;
    acc = acc + k4[i];
    out[i] = s[i] + c * acc;
  }
}

constexpr KernelTable kScalar{Isa::Scalar, matvec_scalar, stage_scalar, rk4_combine_scalar};

#ifdef RESO_HAVE_X86

__attribute__((target("avx2"))) inline __m256i tail_mask(int rem) {
  const __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(rem), idx);
}

__attribute__((target("avx2"))) void matvec_avx2(const double* A, const double* x, double* y,
                                                  int n) {
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < n; ++j) {
      const __m256d a = _mm256_loadu_pd(A + j * n + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(a, _mm256_set1_pd(x[j])));
    }
    _mm256_storeu_pd(y + i, acc);
  }
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < n; ++j) {
      const __m256d a = _mm256_maskload_pd(A + j * n + i, m);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(a, _mm256_set1_pd(x[j])));
    }
    _mm256_maskstore_pd(y + i, m, acc);
  }
}

__attribute__((target("avx2"))) void stage_avx2(const double* s, double c, const double* k,
                                                 double* out, int n) {
  const __m256d vc = _mm256_set1_pd(c);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_add_pd(_mm256_loadu_pd(s + i),
                                    _mm256_mul_pd(vc, _mm256_loadu_pd(k + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = s[i] + c * k[i];
}

__attribute__((target("avx2"))) void rk4_combine_avx2(const double* s, double c,
                                                       const double* k1, const double* k2,
                                                       const double* k3, const double* k4,
                                                       double* out, int n) {
  const __m256d vc = _mm256_set1_pd(c);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
    m = _mm256_add_pd(m, m);
    __m256d acc = _mm256_add_pd(_mm256_loadu_pd(k1 + i), m);
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(s + i), _mm256_mul_pd(vc, acc)));
  }
  for (; i < n; ++i) {
    double m = k2[i] + k3[i];
    m = m + m;
    double acc = k1[i] + m;
    acc = acc + k4[i];
    out[i] = s[i] + c * acc;
  }
}

constexpr KernelTable kAvx2{Isa::Avx2, matvec_avx2, stage_avx2, rk4_combine_avx2};

#endif

#ifdef RESO_HAVE_NEON

void matvec_neon(const double* A, const double* x, double* y, int n) {
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (int j = 0; j < n; ++j)
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(A + j * n + i), vdupq_n_f64(x[j])));
    vst1q_f64(y + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += A[j * n + i] * x[j];
    y[i] = acc;
  }
}

void stage_neon(const double* s, double c, const double* k, double* out, int n) {
  const float64x2_t vc = vdupq_n_f64(c);
  int i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(s + i), vmulq_f64(vc, vld1q_f64(k + i))));
  for (; i < n; ++i) out[i] = s[i] + c * k[i];
}

void rk4_combine_neon(const double* s, double c, const double* k1, const double* k2,
                      const double* k3, const double* k4, double* out, int n) {
  const float64x2_t vc = vdupq_n_f64(c);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t m = vaddq_f64(vld1q_f64(k2 + i), vld1q_f64(k3 + i));
    m = vaddq_f64(m, m);
    float64x2_t acc = vaddq_f64(vld1q_f64(k1 + i), m);
    acc = vaddq_f64(acc, vld1q_f64(k4 + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(s + i), vmulq_f64(vc, acc)));
  }
  for (; i < n; ++i) {
    double m = k2[i] + k3[i];
    m = m + m;
    double acc = k1[i] + m;
    acc = acc + k4[i];
    out[i] = s[i] + c * acc;
  }
}

constexpr KernelTable kNeon{Isa::Neon, matvec_neon, stage_neon, rk4_combine_neon};

#endif

}  // namespace

bool neon_available() {
#ifdef RESO_HAVE_NEON
  return true;
#else
  return false;
#endif
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return avx2_available();
    case Isa::Neon: return neon_available();
  }
  return false;
}

bool avx2_available() {
#ifdef RESO_HAVE_X86
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa best_isa() {
  if (avx2_available()) return Isa::Avx2;
  if (neon_available()) return Isa::Neon;
  return Isa::Scalar;
}

const KernelTable& table(Isa isa) {
  if (isa == Isa::Scalar) return kScalar;
#ifdef RESO_HAVE_X86
  if (isa == Isa::Avx2 && avx2_available()) return kAvx2;
#endif
#ifdef RESO_HAVE_NEON
  if (isa == Isa::Neon) return kNeon;
#endif
  throw InvalidParameter(std::string(isa_name(isa)) + " kernels not supported on this CPU");
}

const KernelTable& best() { return table(best_isa()); }

Isa parse_isa(std::string_view name) {
  if (name == "auto") return best_isa();
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  throw InvalidParameter("unknown kernel ISA '" + std::string(name) + "'");
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    default: return "scalar";
  }
}

}  // namespace reso::kern
