#pragma once

#include <cstdint>
#include <functional>

#include "wavegauge/types.hpp"

namespace wavegauge {

/// The two concrete structure groupoids used by the library.
///
/// GL_ADJ:  G = H = GL(m, C), t = id, alpha_g(h) = g h g^{-1}.
/// CENTRAL: H = C^* embedded as scalar matrices inside G = GL(m, C),
///          t the embedding, alpha_g(h) = h.
enum class CrossedModuleKind { GL_ADJ, CENTRAL };

class CrossedModule {
public:
    using ActionFn = std::function<Matrix(const Matrix&, const Matrix&)>;

    CrossedModule(CrossedModuleKind kind, int m) : kind_(kind), m_(m) {}
    /// Variant with a custom group action; used for synthetic instances and
    /// negative controls. The Lie-level action stays tied to `kind`.
    CrossedModule(CrossedModuleKind kind, int m, ActionFn alpha_override)
        : kind_(kind), m_(m), alpha_override_(std::move(alpha_override)) {}

    CrossedModuleKind kind() const { return kind_; }
    int dim() const { return m_; }

    Matrix identity_G() const { return Matrix::Identity(m_, m_); }
    Matrix identity_H() const { return Matrix::Identity(m_, m_); }

    /// t : H -> G
    Matrix t(const Matrix& h) const;
    /// alpha_g(h), the action of G on H
    Matrix alpha(const Matrix& g, const Matrix& h) const;
    /// t^Lie : h -> g
    Matrix t_lie(const Matrix& y) const;
    /// alpha^Lie_X(Y), the induced action on the Lie algebra
    Matrix alpha_lie(const Matrix& x, const Matrix& y) const;

    /// true when `y` lies in the Lie algebra of H (always for GL_ADJ,
    /// scalar matrices for CENTRAL).
    bool in_h_lie(const Matrix& y, double tol = 1e-9) const;
    /// Preimage of x under t^Lie; throws NotInImage when none exists.
    Matrix t_lie_preimage(const Matrix& x, double tol = 1e-9) const;

private:
    void check_dim(const Matrix& a, const char* where) const;

    CrossedModuleKind kind_;
    int m_;
    ActionFn alpha_override_;
};

/// Groupoid arrow (h, g) with source g and target t(h) g.
struct Arrow2 {
    Matrix h;
    Matrix g;

    Matrix source() const { return g; }
};

Matrix arrow_target(const CrossedModule& cm, const Arrow2& a);
Arrow2 identity_arrow(const CrossedModule& cm, const Matrix& g);
Arrow2 arrow_inverse_vertical(const CrossedModule& cm, const Arrow2& a);

/// (h, g) . (h', g') = (h alpha_g(h'), g g')
Arrow2 horizontal_compose(const CrossedModule& cm, const Arrow2& a, const Arrow2& b);

/// (h2, t(h1) g1) o (h1, g1) = (h2 h1, g1). Requires g2 = t(h1) g1 within
/// `tol` (relative Frobenius); throws CompositionMismatch otherwise.
Arrow2 vertical_compose(const CrossedModule& cm, const Arrow2& a2, const Arrow2& a1,
                        double tol = 1e-8);

/// Element (Y, X) of the semidirect sum h (+ g.
struct AlgebraElement {
    Matrix Y; // h part
    Matrix X; // g part
};

/// [ (Y1,X1), (Y2,X2) ]_s = ([Y1,Y2] + alpha^Lie_{X1}(Y2) - alpha^Lie_{X2}(Y1), [X1,X2])
AlgebraElement semidirect_bracket(const CrossedModule& cm, const AlgebraElement& x1,
                                  const AlgebraElement& x2);

/// Ad(h,g) X = h g X g^{-1} h^{-1}, applied blockwise to (Y, X).
AlgebraElement adjoint(const CrossedModule& cm, const Matrix& h, const Matrix& g,
                       const AlgebraElement& x);

struct CrossedModuleReport {
    double max_equivariance_residual = 0.0;
    double max_peiffer_residual = 0.0;
    bool pass(double tol) const {
        return max_equivariance_residual <= tol && max_peiffer_residual <= tol;
    }
};

/// Max residuals of t(alpha_g(h)) = g t(h) g^{-1} and alpha_{t(h)}(h') = h h' h^{-1}
/// over `samples` seeded draws.
CrossedModuleReport verify_crossed_module(const CrossedModule& cm, int samples,
                                          std::uint64_t seed);

} // namespace wavegauge
