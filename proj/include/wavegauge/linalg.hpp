#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wavegauge/types.hpp"

namespace wavegauge {

/// Scaling-and-squaring matrix exponential.
Matrix mat_exp(const Matrix& x);

/// Principal-branch matrix logarithm. Throws BranchFailure when an
/// eigenvalue sits on the closed negative real axis.
Matrix mat_log(const Matrix& g);

/// Thin-QR orthonormal basis of the column span of z.
/// Throws RankDeficient when the smallest singular value of z is below
/// 1e-10 times the largest.
Matrix orthonormalize(const Matrix& z);

double fro_norm(const Matrix& a);

/// ||a - b||_F / max(1, ||b||_F)
double rel_error(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// Deterministic stream of Gaussian complex matrices. Box-Muller on top of
/// a splitmix-seeded xoshiro-like generator so results do not depend on the
/// standard library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    double uniform();       // [0, 1)
    double gaussian();      // standard normal
    cxd gaussian_complex(); // independent N(0,1) real and imaginary parts
    Matrix gaussian_matrix(int rows, int cols);
    /// Gaussian matrix pushed away from singularity (adds lambda * I).
    Matrix invertible_matrix(int n, double lambda = 2.0);
    Matrix hermitian_matrix(int n);

private:
    std::uint64_t next_u64();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index storage; the schedule is deterministic.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Least-squares slope of log(y) against log(x). Ignores non-positive y.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace wavegauge
