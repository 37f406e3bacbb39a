#include "wavegauge/linalg.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "wavegauge/errors.hpp"

namespace wavegauge {

Matrix mat_exp(const Matrix& x) {
    if (x.rows() != x.cols()) throw DimensionMismatch("mat_exp: square matrix required");
    return x.exp();
}

Matrix mat_log(const Matrix& g) {
    if (g.rows() != g.cols()) throw DimensionMismatch("mat_log: square matrix required");
    // principal branch: reject eigenvalues on the closed negative real axis
    Eigen::ComplexEigenSolver<Matrix> es(g, /*computeEigenvectors=*/false);
    const double scale = g.norm();
    for (Eigen::Index k = 0; k < g.rows(); ++k) {
        const cxd ev = es.eigenvalues()(k);
        if (std::abs(ev) < 1e-14 * std::max(1.0, scale))
            throw BranchFailure("mat_log: singular matrix");
        if (ev.real() < 0.0 && std::abs(ev.imag()) < 1e-12 * std::abs(ev))
            throw BranchFailure("mat_log: eigenvalue on the negative real axis");
    }
    return g.log();
}

Matrix orthonormalize(const Matrix& z) {
    Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        throw RankDeficient("orthonormalize: rank-deficient frame");
    return svd.matrixU();
}

double fro_norm(const Matrix& a) { return a.norm(); }

double rel_error(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

bool is_hermitian(const Matrix& a, double tol) {
    return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

Rng::Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
    // warm up
    for (int k = 0; k < 4; ++k) next_u64();
}

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

cxd Rng::gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
}

Matrix Rng::gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = gaussian_complex();
    return m;
}

Matrix Rng::invertible_matrix(int n, double lambda) {
    return gaussian_matrix(n, n) + lambda * Matrix::Identity(n, n);
}

Matrix Rng::hermitian_matrix(int n) {
    const Matrix a = gaussian_matrix(n, n);
    return 0.5 * (a + a.adjoint());
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
        if (y[k] <= 0.0 || x[k] <= 0.0) continue;
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace wavegauge
