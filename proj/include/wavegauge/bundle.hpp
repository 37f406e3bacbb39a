#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wavegauge/crossed_module.hpp"
#include "wavegauge/grassmann.hpp"

namespace wavegauge {

/// Local trivialization of the Stiefel categorical bundle:
/// phi^i(P, g) = Z0^i g with Z0^i the coordinate matrix of P.
Frame phi(const Chart& chart, const Projector& p, const Matrix& g);

/// Weak inverse: Z -> (Z (Z^dag Z)^{-1} Z^dag, (Z0^dag Z0)^{-1} Z0^dag Z).
std::pair<Projector, Matrix> phi_bar(const Chart& chart, const Frame& z);

/// g^ij(P) = (Z0^i dag Z0^i)^{-1} Z0^i dag Z0^j.
Matrix g_transition(const Chart& i, const Chart& j, const Projector& p);

/// h^ij(Q,P) = (W0^i dag W0^i)^{-1} W0^i dag W0^j (Z0^j dag Z0^j)^{-1} Z0^j dag Z0^i.
Matrix h_transition(const Chart& i, const Chart& j, const Projector& q, const Projector& p);

/// Objects: Z -> Z g.
Frame right_action(const Matrix& h, const Matrix& g, const Frame& z);
/// Arrows in the trivialized picture: (h_f, g_f) -> (h_f alpha_{g_f}(h), g_f g).
Arrow2 right_action(const CrossedModule& cm, const Matrix& h, const Matrix& g,
                    const Arrow2& arrow);

/// Chart-indexed transition data over the Grassmannian G_m(C^n). The Stiefel
/// instance has k^i = e_H and is trivial (h^ijk = e_H); synthetic instances
/// twist the underlying cocycle by arbitrary k^i and may inject defects for
/// negative controls.
class TransitionData {
public:
    using KFn = std::function<Matrix(int, const Projector&)>;
    using DefectFn = std::function<Matrix(int, int, const Projector&, const Projector&)>;

    static TransitionData stiefel(CrossedModuleKind kind, int n, int m);
    static TransitionData twisted(CrossedModuleKind kind, int n, int m, std::uint64_t seed);

    const CrossedModule& cm() const { return cm_; }
    const std::vector<Chart>& charts() const { return charts_; }
    int n() const { return n_; }
    int m() const { return m_; }

    Matrix k(int i, const Projector& x) const;
    Matrix g(int i, int j, const Projector& x) const;
    Matrix h(int i, int j, const Projector& y, const Projector& x) const;
    Matrix h2(int i, int j, int kk, const Projector& x) const;

    /// Multiplies every h^ij (i != j) by a defect; for negative controls.
    void inject_h_defect(DefectFn defect) { h_defect_ = std::move(defect); }
    /// Left-multiplies g^ik for one fixed (i,k) pair by a raw G element d;
    /// two_transition then reports the t-preimage of d on that triple overlap,
    /// or throws NotInImage when d is not in t(H).
    void inject_g_defect(int i, int k, const Matrix& d);

private:
    TransitionData(CrossedModuleKind kind, int n, int m);

    CrossedModule cm_;
    int n_;
    int m_;
    std::vector<Chart> charts_;
    KFn k_;
    DefectFn h_defect_;
    int g_defect_i_ = -1;
    int g_defect_k_ = -1;
    Matrix g_defect_;
};

/// t-preimage of g^ik (g^ij g^jk)^{-1}; identity for the Stiefel instance.
/// Throws NotInImage when the defect leaves t(H) (CENTRAL modules).
Matrix two_transition(const TransitionData& data, int i, int j, int k, const Projector& p);

struct BundleReport {
    double g_ii = 0.0;       // g^ii = t(k^i)
    double g_ji = 0.0;       // g^ji = t(k^j) (g^ij)^{-1} t(k^i)
    double th_g = 0.0;       // t(h^ij(y,x)) g^ij(x) = g^ij(y)
    double h_ii = 0.0;       // h^ii(y,x) = k^i(y) k^i(x)^{-1}
    double h_cocycle = 0.0;  // h^ij alpha_{g^ij}(h^jk) = (h^ijk)^{-1} h^ik h^ijk
    double h2_cocycle = 0.0; // h^ijl alpha_{g^ij}(h^jkl) = h^ikl h^ijk
    int samples = 0;

    double max_residual() const;
    bool pass(double tol) const { return max_residual() <= tol; }
};

/// Max residuals of the transition-function identities over seeded samples.
BundleReport verify_bundle_identities(const TransitionData& data, int samples,
                                      std::uint64_t seed);

} // namespace wavegauge
