#include "scca/kernels.hpp"

#include <Eigen/Core>
#include <omp.h>

#include <algorithm>
#include <atomic>

namespace scca::kernels {

namespace {

// Eigen's own GEMM threading would make block results depend on the thread
// count; all parallelism goes through the loops below instead.
const bool kEigenSingleThreaded = [] {
    Eigen::setNbThreads(1);
    return true;
}();

std::atomic<int> g_threads{0};

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr Index kParallelWork = 1 << 16;

int active_threads() {
    const int t = g_threads.load();
    return t > 0 ? t : omp_get_max_threads();
}

Index block_count(Index extent) { return (extent + kBlock - 1) / kBlock; }

}  // namespace

void set_threads(int jobs) {
    (void)kEigenSingleThreaded;
    g_threads.store(jobs > 0 ? jobs : omp_get_num_procs());
}

int threads() { return active_threads(); }

void gemv(const Matrix& a, const Vector& x, Vector& y) {
    const Index rows = a.rows();
    y.resize(rows);
    const Index nb = block_count(rows);
    const bool par = a.size() >= kParallelWork && !omp_in_parallel();
#pragma omp parallel for schedule(static) num_threads(active_threads()) if (par)
    for (Index b = 0; b < nb; ++b) {
        const Index r0 = b * kBlock;
        const Index len = std::min(kBlock, rows - r0);
        y.segment(r0, len).noalias() = a.middleRows(r0, len) * x;
    }
}

void gemv_t(const Matrix& a, const Vector& x, Vector& y) {
    const Index cols = a.cols();
    y.resize(cols);
    const Index nb = block_count(cols);
    const bool par = a.size() >= kParallelWork && !omp_in_parallel();
#pragma omp parallel for schedule(static) num_threads(active_threads()) if (par)
    for (Index b = 0; b < nb; ++b) {
        const Index c0 = b * kBlock;
        const Index len = std::min(kBlock, cols - c0);
        y.segment(c0, len).noalias() = a.middleCols(c0, len).transpose() * x;
    }
}

Matrix crossprod(const Matrix& a, const Matrix& b) {
    Matrix out(a.cols(), b.cols());
    const Index nb = block_count(b.cols());
    const bool par = a.size() * b.cols() >= kParallelWork && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) num_threads(active_threads()) if (par)
    for (Index blk = 0; blk < nb; ++blk) {
        const Index c0 = blk * kBlock;
        const Index len = std::min(kBlock, b.cols() - c0);
        out.middleCols(c0, len).noalias() = a.transpose() * b.middleCols(c0, len);
    }
    return out;
}

namespace serial {

void gemv(const Matrix& a, const Vector& x, Vector& y) {
    y.setZero(a.rows());
    for (Index j = 0; j < a.cols(); ++j) {
        const double xj = x[j];
        for (Index i = 0; i < a.rows(); ++i) y[i] += a(i, j) * xj;
    }
}

void gemv_t(const Matrix& a, const Vector& x, Vector& y) {
    y.resize(a.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (Index i = 0; i < a.rows(); ++i) s += a(i, j) * x[i];
        y[j] = s;
    }
}

Matrix crossprod(const Matrix& a, const Matrix& b) {
    Matrix out(a.cols(), b.cols());
    for (Index j = 0; j < b.cols(); ++j)
        for (Index i = 0; i < a.cols(); ++i) {
            double s = 0.0;
            for (Index k = 0; k < a.rows(); ++k) s += a(k, i) * b(k, j);
            out(i, j) = s;
        }
    return out;
}

}  // namespace serial

}  // namespace scca::kernels
