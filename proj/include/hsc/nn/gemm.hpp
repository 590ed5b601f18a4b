#pragma once

#include <cstddef>

namespace hsc::nn::detail {

// Minimal row-major matrix kernels. The loop orders keep the innermost index
// contiguous in memory so the compiler can vectorize over it; the batch
// dimension is always placed there by the layers.

// C(M,N) += A(M,K) * B(K,N)
template <class T>
void gemm_accum(T* c, const T* a, const T* b, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T* crow = c + i * n;
        const T* arow = a + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const T av = arow[p];
            const T* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C(K,N) += A^T * B where A is (M,K), B is (M,N)
template <class T>
void gemm_at_accum(T* c, const T* a, const T* b, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const T* arow = a + i * k;
        const T* brow = b + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const T av = arow[p];
            T* crow = c + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

// C(M,K) += A * B^T where A is (M,N), B is (K,N)
template <class T>
void gemm_abt_accum(T* c, const T* a, const T* b, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const T* arow = a + i * n;
        T* crow = c + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const T* brow = b + p * n;
            T acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += arow[j] * brow[j];
            crow[p] += acc;
        }
    }
}

} // namespace hsc::nn::detail
