#pragma once

// Dense products on the solvers' hot paths.
//
// The top-level functions split work into fixed-size blocks and spread the
// blocks over OpenMP threads. Block boundaries never depend on the thread
// count, so results are bit-identical for any --jobs value. The `serial`
// namespace holds plain-loop reference versions used by tests and the
// benchmark.

#include "scca/types.hpp"

namespace scca::kernels {

/// Width of the fixed partition used by the parallel kernels.
inline constexpr Index kBlock = 256;

/// y = A x
void gemv(const Matrix& a, const Vector& x, Vector& y);

/// y = A' x
void gemv_t(const Matrix& a, const Vector& x, Vector& y);

/// A' B
Matrix crossprod(const Matrix& a, const Matrix& b);

/// Sets the OpenMP worker count used by kernels and grid loops. Values < 1
/// select the number of logical cores.
void set_threads(int jobs);
int threads();

namespace serial {
void gemv(const Matrix& a, const Vector& x, Vector& y);
void gemv_t(const Matrix& a, const Vector& x, Vector& y);
Matrix crossprod(const Matrix& a, const Matrix& b);
}  // namespace serial

}  // namespace scca::kernels
