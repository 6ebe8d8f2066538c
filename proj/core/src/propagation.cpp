#include "gpeoct/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gpeoct/fft.hpp"
#include "gpeoct/observables.hpp"

namespace gpeoct {

namespace {

// --- potential column sampling ----------------------------------------------

void sample_column(const Potential1D& pot, const Grid1D& grid, double lambda,
                   std::vector<double>& out) {
    out.resize(static_cast<size_t>(grid.n_x));
    for (int i = 0; i < grid.n_x; ++i)
        out[i] = pot.value_extended(grid.x(i), lambda);
}

void sample_column_2d(const Potential2D& pot, const Grid2D& grid, double lambda,
                      std::vector<double>& out) {
    out.resize(static_cast<size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j)
            out[static_cast<size_t>(grid.index(i, j))] =
                pot.value_extended(grid.x(i), grid.y(j), lambda);
}

double subtract_min(std::vector<double>& v) {
    const double v0 = *std::min_element(v.begin(), v.end());
    for (double& x : v) x -= v0;
    return v0;
}

double subtract_min_tracked(std::vector<double>& v, int* argmin) {
    const auto it = std::min_element(v.begin(), v.end());
    *argmin = static_cast<int>(it - v.begin());
    const double v0 = *it;
    for (double& x : v) x -= v0;
    return v0;
}

// --- cyclic tridiagonal solve -----------------------------------------------

// Solves A x = r in place where A is tridiagonal with constant off-diagonal
// `off` and periodic corner entries equal to `off`, via the rank-1
// correction of the plain tridiagonal solve.
class CyclicTridiagonal {
public:
    explicit CyclicTridiagonal(int n) : n_(n), scratch_c_(n), y_(n), z_(n), u_(n) {}

    void solve(const std::vector<cplx>& diag, cplx off, std::vector<cplx>& rhs) {
        const int n = n_;
        const cplx gamma = -diag[0];
        u_.assign(static_cast<size_t>(n), cplx(0.0));
        u_[0] = gamma;
        u_[static_cast<size_t>(n - 1)] = off;

        thomas(diag, off, gamma, rhs, y_);
        thomas(diag, off, gamma, u_, z_);

        const cplx v_dot_y = y_[0] + (off / gamma) * y_[static_cast<size_t>(n - 1)];
        const cplx v_dot_z = z_[0] + (off / gamma) * z_[static_cast<size_t>(n - 1)];
        const cplx denom = 1.0 + v_dot_z;
        if (std::abs(denom) < 1e-300)
            throw NumericalError("cyclic tridiagonal solve: singular correction");
        const cplx factor = v_dot_y / denom;
        for (int i = 0; i < n; ++i) rhs[static_cast<size_t>(i)] = y_[static_cast<size_t>(i)] - factor * z_[static_cast<size_t>(i)];
    }

private:
    // Plain Thomas solve of the corner-modified system T x = r with
    // T = tridiag(off, diag', off), diag'[0] = diag[0] - gamma,
    // diag'[n-1] = diag[n-1] - off^2 / gamma.
    void thomas(const std::vector<cplx>& diag, cplx off, cplx gamma,
                const std::vector<cplx>& r, std::vector<cplx>& x) {
        const int n = n_;
        auto modified_diag = [&](int i) -> cplx {
            if (i == 0) return diag[0] - gamma;
            if (i == n - 1) return diag[static_cast<size_t>(n - 1)] - off * off / gamma;
            return diag[static_cast<size_t>(i)];
        };
        cplx piv = modified_diag(0);
        if (std::abs(piv) < 1e-300) throw NumericalError("tridiagonal solve: zero pivot");
        x[0] = r[0] / piv;
        for (int i = 1; i < n; ++i) {
            scratch_c_[static_cast<size_t>(i - 1)] = off / piv;
            piv = modified_diag(i) - off * scratch_c_[static_cast<size_t>(i - 1)];
            if (std::abs(piv) < 1e-300)
                throw NumericalError("tridiagonal solve: zero pivot");
            x[static_cast<size_t>(i)] = (r[static_cast<size_t>(i)] - off * x[static_cast<size_t>(i - 1)]) / piv;
        }
        for (int i = n - 2; i >= 0; --i)
            x[static_cast<size_t>(i)] -= scratch_c_[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 1)];
    }

    int n_;
    std::vector<cplx> scratch_c_, y_, z_, u_;
};

// --- nonlinear stage adjoint --------------------------------------------------

// The density inside each half phase makes the stage map real-linear rather
// than holomorphic in psi. Transposing its differential adds, on top of the
// conjugated phase, the per-point correction
//   p <- p + i dt g Re(p* u) u,
// where u is the stage's state. Splitting p into real and imaginary parts is
// exactly what the Re(.) coupling implements, and the resulting backward
// map is the transpose of the forward scheme stage by stage, which is what
// the finite-difference gradient comparison probes.
inline void nonlinear_stage_adjoint(std::vector<cplx>& p, const std::vector<cplx>& u,
                                    double g, double dt) {
    for (size_t i = 0; i < p.size(); ++i) {
        const double w = (std::conj(p[i]) * u[i]).real();
        p[i] += cplx(0.0, dt * g * w) * u[i];
    }
}

// --- 1D stepper ---------------------------------------------------------------

class Stepper1D {
public:
    explicit Stepper1D(const PropagationSpec& spec)
        : spec_(spec), grid_(spec.grid), n_(grid_.n_x), dt_(grid_.dt()), dx_(grid_.dx()) {
        if (!spec.potential) throw ContractViolation("propagation needs a potential");
        if (static_cast<int>(spec.control.size()) != grid_.n_nodes())
            throw DimensionError("control trajectory length must be n_t + 1");
        if (spec_.scheme == Scheme::crank_nicolson_1d) {
            if (spec_.g != 0.0)
                throw ContractViolation("crank_nicolson_1d supports g = 0 only");
            solver_.emplace(n_);
        } else {
            fft_.emplace(n_);
            const auto k = kinetic_wavenumbers(grid_);
            kin_forward_.resize(static_cast<size_t>(n_));
            for (int j = 0; j < n_; ++j)
                kin_forward_[static_cast<size_t>(j)] =
                    std::exp(cplx(0.0, -0.5 * dt_ * k[j] * k[j]));
        }
    }

    // psi^m -> psi^{m+1}; returns the global-phase increment of this step
    // (zero when offset splitting is off).
    double advance(std::vector<cplx>& psi, int m) {
        if (spec_.scheme == Scheme::crank_nicolson_1d) return advance_cn(psi, m);
        return advance_split(psi, m);
    }

    // p^{m+1} -> p^m, adjoint step over interval m. With `grad` non-null the
    // exact derivative of the discrete cost with respect to the lambda nodes
    // touched by this interval is accumulated as a density (fidelity part
    // only; the caller owns the penalty term).
    void retreat(std::vector<cplx>& p, int m, const std::vector<cplx>* psi_m,
                 const std::vector<cplx>* psi_mp1, std::vector<double>* grad = nullptr) {
        if (spec_.scheme == Scheme::crank_nicolson_1d) {
            retreat_cn(p, m, psi_m, psi_mp1, grad);
        } else {
            retreat_split(p, m, psi_m, psi_mp1, grad);
        }
    }

    const Grid1D& grid() const { return grid_; }

private:
    double lambda_at(int node) const { return spec_.control[static_cast<size_t>(node)]; }

    // Column of the (possibly offset-shifted) potential at a time node,
    // cached so consecutive steps share the common node.
    const std::vector<double>& node_column(int node, double* v0_out) {
        if (node != cached_node_) {
            sample_column(*spec_.potential, grid_, lambda_at(node), cached_col_);
            cached_v0_ = spec_.offset_splitting ? subtract_min(cached_col_) : 0.0;
            cached_node_ = node;
        }
        if (v0_out) *v0_out = cached_v0_;
        return cached_col_;
    }

    // dV/dlambda at a node; with offset splitting the derivative of the
    // removed offset (the envelope derivative at the column's minimum) is
    // subtracted, matching what the shifted dynamics actually see.
    const std::vector<double>& deriv_column(int node) {
        if (node != cached_dnode_) {
            fill_deriv(lambda_at(node), cached_dcol_);
            cached_dnode_ = node;
        }
        return cached_dcol_;
    }

    void fill_deriv(double lambda, std::vector<double>& out) {
        out.resize(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i)
            out[static_cast<size_t>(i)] =
                spec_.potential->lambda_derivative_extended(grid_.x(i), lambda);
        if (spec_.offset_splitting) {
            std::vector<double> v;
            sample_column(*spec_.potential, grid_, lambda, v);
            int amin = 0;
            subtract_min_tracked(v, &amin);
            const double envelope = out[static_cast<size_t>(amin)];
            for (double& d : out) d -= envelope;
        }
    }

    double advance_cn(std::vector<cplx>& psi, int m) {
        const double lam_mid = 0.5 * (lambda_at(m) + lambda_at(m + 1));
        sample_column(*spec_.potential, grid_, lam_mid, col_mid_);
        const double v0 = spec_.offset_splitting ? subtract_min(col_mid_) : 0.0;
        build_cn(col_mid_);
        // rhs = (1 - i dt/2 H) psi
        rhs_.resize(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const int im = i == 0 ? n_ - 1 : i - 1;
            const int ip = i == n_ - 1 ? 0 : i + 1;
            rhs_[static_cast<size_t>(i)] = diag_b_[static_cast<size_t>(i)] * psi[static_cast<size_t>(i)] +
                      off_b_ * (psi[static_cast<size_t>(im)] + psi[static_cast<size_t>(ip)]);
        }
        solver_->solve(diag_a_, off_a_, rhs_);
        psi.swap(rhs_);
        return spec_.offset_splitting ? dt_ * v0 : 0.0;
    }

    void retreat_cn(std::vector<cplx>& p, int m, const std::vector<cplx>* psi_m,
                    const std::vector<cplx>* psi_mp1, std::vector<double>* grad) {
        const double lam_mid = 0.5 * (lambda_at(m) + lambda_at(m + 1));
        sample_column(*spec_.potential, grid_, lam_mid, col_mid_);
        if (spec_.offset_splitting) subtract_min(col_mid_);
        build_cn(col_mid_);
        // p^m = (1 + i dt/2 H)(1 - i dt/2 H)^{-1} p^{m+1}
        rhs_ = p;
        solver_->solve(diag_b_, off_b_, rhs_);
        if (grad) {
            // lambda_m enters this interval through the midpoint Hamiltonian
            // with weight 1/2; the intermediate solve B^{-1} p^{m+1} is the
            // co-state the variation pairs with.
            fill_deriv(lam_mid, dv_scratch_);
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                acc += (std::conj(rhs_[static_cast<size_t>(i)]) * dv_scratch_[static_cast<size_t>(i)] *
                        ((*psi_m)[static_cast<size_t>(i)] + (*psi_mp1)[static_cast<size_t>(i)]))
                           .real();
            const double cd = -0.5 * dx_ * acc;
            if (m >= 1) (*grad)[static_cast<size_t>(m)] += 0.5 * cd;
            if (m + 1 <= grid_.n_t - 1) (*grad)[static_cast<size_t>(m + 1)] += 0.5 * cd;
        }
        for (int i = 0; i < n_; ++i) {
            const int im = i == 0 ? n_ - 1 : i - 1;
            const int ip = i == n_ - 1 ? 0 : i + 1;
            p[static_cast<size_t>(i)] = diag_a_[static_cast<size_t>(i)] * rhs_[static_cast<size_t>(i)] +
                   off_a_ * (rhs_[static_cast<size_t>(im)] + rhs_[static_cast<size_t>(ip)]);
        }
    }

    void build_cn(const std::vector<double>& v) {
        const double eps = 0.5 * dt_;
        const double inv_dx2 = 1.0 / (dx_ * dx_);
        diag_a_.resize(static_cast<size_t>(n_));
        diag_b_.resize(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            const double h_diag = inv_dx2 + v[static_cast<size_t>(i)];
            diag_a_[static_cast<size_t>(i)] = cplx(1.0, eps * h_diag);
            diag_b_[static_cast<size_t>(i)] = cplx(1.0, -eps * h_diag);
        }
        off_a_ = cplx(0.0, -eps * 0.5 * inv_dx2);
        off_b_ = cplx(0.0, eps * 0.5 * inv_dx2);
    }

    double advance_split(std::vector<cplx>& psi, int m) {
        double v0_m = 0.0, v0_mp1 = 0.0;
        {
            const auto& vm = node_column(m, &v0_m);
            apply_half_phase(psi, vm, -1.0);
        }
        fft_->forward(psi);
        for (int j = 0; j < n_; ++j) psi[static_cast<size_t>(j)] *= kin_forward_[static_cast<size_t>(j)];
        fft_->inverse(psi);
        {
            const auto& vp = node_column(m + 1, &v0_mp1);
            apply_half_phase(psi, vp, -1.0);
        }
        return spec_.offset_splitting ? 0.5 * dt_ * (v0_m + v0_mp1) : 0.0;
    }

    // Transpose of the forward split step, stage by stage. Stage fields are
    // reconstructed pointwise from the stored nodes (the trailing half phase
    // cannot change the modulus, so the node density doubles as the stage
    // density). Gradient terms pair the co-state with dV/dlambda at the two
    // stages the node's lambda touches.
    void retreat_split(std::vector<cplx>& p, int m, const std::vector<cplx>* psi_m,
                       const std::vector<cplx>* psi_mp1, std::vector<double>* grad) {
        const double s = 0.5 * dt_;
        const double g = spec_.g;
        const bool nonlinear = g != 0.0;

        if (grad && m + 1 <= grid_.n_t - 1) {
            const auto& dv = deriv_column(m + 1);
            double acc = 0.0;
            for (int i = 0; i < n_; ++i)
                acc += (std::conj(p[static_cast<size_t>(i)]) * dv[static_cast<size_t>(i)] *
                        (*psi_mp1)[static_cast<size_t>(i)])
                           .real();
            (*grad)[static_cast<size_t>(m + 1)] += -0.5 * dx_ * acc;
        }

        {
            const auto& vp = node_column(m + 1, nullptr);
            if (nonlinear) {
                chi_.resize(static_cast<size_t>(n_));
                for (int i = 0; i < n_; ++i) {
                    const cplx ps = (*psi_mp1)[static_cast<size_t>(i)];
                    const double veff = vp[static_cast<size_t>(i)] + g * std::norm(ps);
                    const cplx phase = std::exp(cplx(0.0, s * veff));
                    chi_[static_cast<size_t>(i)] = phase * ps;
                    p[static_cast<size_t>(i)] *= phase;
                }
                nonlinear_stage_adjoint(p, chi_, g, dt_);
            } else {
                for (int i = 0; i < n_; ++i)
                    p[static_cast<size_t>(i)] *= std::exp(cplx(0.0, s * vp[static_cast<size_t>(i)]));
            }
        }

        fft_->forward(p);
        for (int j = 0; j < n_; ++j) p[static_cast<size_t>(j)] *= std::conj(kin_forward_[static_cast<size_t>(j)]);
        fft_->inverse(p);

        {
            const auto& vm = node_column(m, nullptr);
            if (grad && m >= 1) {
                const auto& dv = deriv_column(m);
                double acc = 0.0;
                for (int i = 0; i < n_; ++i) {
                    const cplx ps = (*psi_m)[static_cast<size_t>(i)];
                    const double veff =
                        vm[static_cast<size_t>(i)] + (nonlinear ? g * std::norm(ps) : 0.0);
                    const cplx phi = std::exp(cplx(0.0, -s * veff)) * ps;
                    acc += (std::conj(p[static_cast<size_t>(i)]) * dv[static_cast<size_t>(i)] * phi).real();
                }
                (*grad)[static_cast<size_t>(m)] += -0.5 * dx_ * acc;
            }
            if (nonlinear) {
                for (int i = 0; i < n_; ++i) {
                    const cplx ps = (*psi_m)[static_cast<size_t>(i)];
                    const double veff = vm[static_cast<size_t>(i)] + g * std::norm(ps);
                    p[static_cast<size_t>(i)] *= std::exp(cplx(0.0, s * veff));
                }
                nonlinear_stage_adjoint(p, *psi_m, g, dt_);
            } else {
                for (int i = 0; i < n_; ++i)
                    p[static_cast<size_t>(i)] *= std::exp(cplx(0.0, s * vm[static_cast<size_t>(i)]));
            }
        }
    }

    // exp(sign * i * (dt/2) * V_eff) applied pointwise; V_eff picks up the
    // state's own density when g != 0.
    void apply_half_phase(std::vector<cplx>& psi, const std::vector<double>& v,
                          double sign) {
        const double c = sign * 0.5 * dt_;
        if (spec_.g == 0.0) {
            for (int i = 0; i < n_; ++i)
                psi[static_cast<size_t>(i)] *= std::exp(cplx(0.0, c * v[static_cast<size_t>(i)]));
        } else {
            for (int i = 0; i < n_; ++i) {
                const double veff = v[static_cast<size_t>(i)] + spec_.g * std::norm(psi[static_cast<size_t>(i)]);
                psi[static_cast<size_t>(i)] *= std::exp(cplx(0.0, c * veff));
            }
        }
    }

    const PropagationSpec& spec_;
    Grid1D grid_;
    int n_;
    double dt_, dx_;

    std::optional<Fft> fft_;
    std::vector<cplx> kin_forward_;

    std::optional<CyclicTridiagonal> solver_;
    std::vector<cplx> diag_a_, diag_b_, rhs_;
    cplx off_a_{}, off_b_{};

    std::vector<double> col_mid_;
    std::vector<double> cached_col_;
    double cached_v0_ = 0.0;
    int cached_node_ = -1;
    std::vector<double> cached_dcol_;
    int cached_dnode_ = -1;
    std::vector<double> dv_scratch_;
    std::vector<cplx> chi_;
};

// --- 2D stepper ---------------------------------------------------------------

class Stepper2D {
public:
    explicit Stepper2D(const PropagationSpec2D& spec)
        : spec_(spec), grid_(spec.grid), fft_(grid_.n_x, grid_.n_y), dt_(grid_.dt()) {
        if (!spec.potential) throw ContractViolation("propagation needs a potential");
        if (static_cast<int>(spec.control.size()) != grid_.n_nodes())
            throw DimensionError("control trajectory length must be n_t + 1");
        const auto kx = kinetic_wavenumbers(grid_.n_x, grid_.length_x());
        const auto ky = kinetic_wavenumbers(grid_.n_y, grid_.length_y());
        kin_forward_.resize(static_cast<size_t>(grid_.n_points()));
        for (int i = 0; i < grid_.n_x; ++i)
            for (int j = 0; j < grid_.n_y; ++j)
                kin_forward_[static_cast<size_t>(grid_.index(i, j))] = std::exp(
                    cplx(0.0, -0.5 * dt_ * (kx[i] * kx[i] + ky[j] * ky[j])));

        separable_ = spec_.g == 0.0 &&
                     std::holds_alternative<SeparablePotential2D>(spec.potential->kind());
        if (separable_) {
            const auto& sep = std::get<SeparablePotential2D>(spec.potential->kind());
            uy_col_.resize(static_cast<size_t>(grid_.n_y));
            for (int j = 0; j < grid_.n_y; ++j)
                uy_col_[static_cast<size_t>(j)] = sep.uy.value_extended(grid_.y(j), sep.uy_lambda);
            uy_min_ = spec_.offset_splitting ? subtract_min(uy_col_) : 0.0;
            phase_y_.resize(static_cast<size_t>(grid_.n_y));
            for (int j = 0; j < grid_.n_y; ++j)
                phase_y_[static_cast<size_t>(j)] = std::exp(cplx(0.0, -0.5 * dt_ * uy_col_[static_cast<size_t>(j)]));
        }
    }

    double advance(std::vector<cplx>& psi, int m) {
        double v0_m = 0.0, v0_mp1 = 0.0;
        half_phase(psi, m, -1.0, &v0_m);
        fft_.forward(psi);
        for (size_t q = 0; q < psi.size(); ++q) psi[q] *= kin_forward_[q];
        fft_.inverse(psi);
        half_phase(psi, m + 1, -1.0, &v0_mp1);
        return spec_.offset_splitting ? 0.5 * dt_ * (v0_m + v0_mp1) : 0.0;
    }

    void retreat(std::vector<cplx>& p, int m, const std::vector<cplx>* psi_m,
                 const std::vector<cplx>* psi_mp1, std::vector<double>* grad = nullptr) {
        const double s = 0.5 * dt_;
        const double g = spec_.g;

        if (grad && m + 1 <= grid_.n_t - 1) {
            const auto& dv = deriv_column(m + 1);
            double acc = 0.0;
            for (size_t q = 0; q < p.size(); ++q)
                acc += (std::conj(p[q]) * dv[q] * (*psi_mp1)[q]).real();
            (*grad)[static_cast<size_t>(m + 1)] += -0.5 * grid_.dx() * grid_.dy() * acc;
        }

        if (g == 0.0) {
            half_phase(p, m + 1, 1.0, nullptr);
        } else {
            const auto& vp = node_column(m + 1, nullptr);
            chi_.resize(p.size());
            for (size_t q = 0; q < p.size(); ++q) {
                const cplx ps = (*psi_mp1)[q];
                const double veff = vp[q] + g * std::norm(ps);
                const cplx phase = std::exp(cplx(0.0, s * veff));
                chi_[q] = phase * ps;
                p[q] *= phase;
            }
            nonlinear_stage_adjoint(p, chi_, g, dt_);
        }

        fft_.forward(p);
        for (size_t q = 0; q < p.size(); ++q) p[q] *= std::conj(kin_forward_[q]);
        fft_.inverse(p);

        if (grad && m >= 1) {
            const auto& vm = node_column(m, nullptr);
            const auto& dv = deriv_column(m);
            double acc = 0.0;
            for (size_t q = 0; q < p.size(); ++q) {
                const cplx ps = (*psi_m)[q];
                const double veff = vm[q] + (g != 0.0 ? g * std::norm(ps) : 0.0);
                const cplx phi = std::exp(cplx(0.0, -s * veff)) * ps;
                acc += (std::conj(p[q]) * dv[q] * phi).real();
            }
            (*grad)[static_cast<size_t>(m)] += -0.5 * grid_.dx() * grid_.dy() * acc;
        }

        if (g == 0.0) {
            half_phase(p, m, 1.0, nullptr);
        } else {
            const auto& vm = node_column(m, nullptr);
            for (size_t q = 0; q < p.size(); ++q) {
                const cplx ps = (*psi_m)[q];
                const double veff = vm[q] + g * std::norm(ps);
                p[q] *= std::exp(cplx(0.0, s * veff));
            }
            nonlinear_stage_adjoint(p, *psi_m, g, dt_);
        }
    }

    const Grid2D& grid() const { return grid_; }

private:
    double lambda_at(int node) const { return spec_.control[static_cast<size_t>(node)]; }

    const std::vector<double>& node_column(int node, double* v0_out) {
        if (node != cached_node_) {
            sample_column_2d(*spec_.potential, grid_, lambda_at(node), cached_col_);
            cached_v0_ = spec_.offset_splitting ? subtract_min(cached_col_) : 0.0;
            cached_node_ = node;
        }
        if (v0_out) *v0_out = cached_v0_;
        return cached_col_;
    }

    const std::vector<double>& deriv_column(int node) {
        if (node != cached_dnode_) {
            const double lambda = lambda_at(node);
            cached_dcol_.resize(static_cast<size_t>(grid_.n_points()));
            for (int i = 0; i < grid_.n_x; ++i)
                for (int j = 0; j < grid_.n_y; ++j)
                    cached_dcol_[static_cast<size_t>(grid_.index(i, j))] =
                        spec_.potential->lambda_derivative_extended(grid_.x(i), grid_.y(j),
                                                                    lambda);
            if (spec_.offset_splitting) {
                std::vector<double> v;
                sample_column_2d(*spec_.potential, grid_, lambda, v);
                int amin = 0;
                subtract_min_tracked(v, &amin);
                const double envelope = cached_dcol_[static_cast<size_t>(amin)];
                for (double& d : cached_dcol_) d -= envelope;
            }
            cached_dnode_ = node;
        }
        return cached_dcol_;
    }

    // For separable g = 0 potentials the half phase factorizes into per-axis
    // arrays; everything else samples the full column.
    void half_phase(std::vector<cplx>& psi, int node, double sign, double* v0_out) {
        if (separable_) {
            if (node != phase_node_) {
                const auto& sep = std::get<SeparablePotential2D>(spec_.potential->kind());
                vx_col_.resize(static_cast<size_t>(grid_.n_x));
                for (int i = 0; i < grid_.n_x; ++i)
                    vx_col_[static_cast<size_t>(i)] = sep.vx.value_extended(grid_.x(i), lambda_at(node));
                const double vx_min = spec_.offset_splitting ? subtract_min(vx_col_) : 0.0;
                phase_v0_ = vx_min + uy_min_;
                phase_x_.resize(static_cast<size_t>(grid_.n_x));
                for (int i = 0; i < grid_.n_x; ++i)
                    phase_x_[static_cast<size_t>(i)] = std::exp(cplx(0.0, -0.5 * dt_ * vx_col_[static_cast<size_t>(i)]));
                phase_node_ = node;
            }
            if (v0_out) *v0_out = phase_v0_;
            if (sign < 0) {
                for (int i = 0; i < grid_.n_x; ++i) {
                    const cplx px = phase_x_[static_cast<size_t>(i)];
                    cplx* row = psi.data() + grid_.index(i, 0);
                    for (int j = 0; j < grid_.n_y; ++j) row[j] *= px * phase_y_[static_cast<size_t>(j)];
                }
            } else {
                for (int i = 0; i < grid_.n_x; ++i) {
                    const cplx px = std::conj(phase_x_[static_cast<size_t>(i)]);
                    cplx* row = psi.data() + grid_.index(i, 0);
                    for (int j = 0; j < grid_.n_y; ++j)
                        row[j] *= px * std::conj(phase_y_[static_cast<size_t>(j)]);
                }
            }
            return;
        }
        double v0 = 0.0;
        const auto& v = node_column(node, &v0);
        if (v0_out) *v0_out = v0;
        const double c = sign * 0.5 * dt_;
        if (spec_.g == 0.0) {
            for (size_t q = 0; q < psi.size(); ++q)
                psi[q] *= std::exp(cplx(0.0, c * v[q]));
        } else {
            for (size_t q = 0; q < psi.size(); ++q) {
                const double veff = v[q] + spec_.g * std::norm(psi[q]);
                psi[q] *= std::exp(cplx(0.0, c * veff));
            }
        }
    }

    const PropagationSpec2D& spec_;
    Grid2D grid_;
    Fft fft_;
    double dt_;
    std::vector<cplx> kin_forward_;

    bool separable_ = false;
    std::vector<double> uy_col_, vx_col_;
    double uy_min_ = 0.0;
    std::vector<cplx> phase_x_, phase_y_;
    int phase_node_ = -1;
    double phase_v0_ = 0.0;

    std::vector<double> cached_col_;
    double cached_v0_ = 0.0;
    int cached_node_ = -1;
    std::vector<double> cached_dcol_;
    int cached_dnode_ = -1;
    std::vector<cplx> chi_;
};

double edge_density_1d(const std::vector<cplx>& psi) {
    return std::max(std::norm(psi.front()), std::norm(psi.back()));
}

double edge_density_2d(const Grid2D& g, const std::vector<cplx>& psi) {
    double m = 0.0;
    for (int j = 0; j < g.n_y; ++j) {
        m = std::max(m, std::norm(psi[static_cast<size_t>(g.index(0, j))]));
        m = std::max(m, std::norm(psi[static_cast<size_t>(g.index(g.n_x - 1, j))]));
    }
    for (int i = 0; i < g.n_x; ++i) {
        m = std::max(m, std::norm(psi[static_cast<size_t>(g.index(i, 0))]));
        m = std::max(m, std::norm(psi[static_cast<size_t>(g.index(i, g.n_y - 1))]));
    }
    return m;
}

} // namespace

// --- TrajectoryStore ----------------------------------------------------------

TrajectoryStore::TrajectoryStore(int n_nodes, int field_size, int stride)
    : n_nodes_(n_nodes), field_size_(field_size), stride_(std::max(1, stride)) {
    const int last = n_nodes_ - 1;
    int slots = last / stride_ + 1;
    if (last % stride_ != 0) ++slots;
    slots_.resize(static_cast<size_t>(slots));
}

bool TrajectoryStore::stored(int m) const {
    return m % stride_ == 0 || m == n_nodes_ - 1;
}

int TrajectoryStore::slot_of(int m) const {
    if (m < 0 || m >= n_nodes_) throw DimensionError("trajectory node out of range");
    if (!stored(m)) return -1;
    const int last = n_nodes_ - 1;
    if (m == last && last % stride_ != 0) return last / stride_ + 1;
    return m / stride_;
}

void TrajectoryStore::put(int m, const std::vector<cplx>& snapshot) {
    const int s = slot_of(m);
    if (s < 0) return;
    slots_[static_cast<size_t>(s)] = snapshot;
}

const std::vector<cplx>& TrajectoryStore::at(int m) const {
    const int s = slot_of(m);
    if (s < 0)
        throw DimensionError("trajectory node not stored under the strided policy");
    return slots_[static_cast<size_t>(s)];
}

// --- TrajectoryCursor ---------------------------------------------------------

struct TrajectoryCursor::Impl {
    const TrajectoryStore& store;
    std::optional<Stepper1D> st1;
    std::optional<Stepper2D> st2;
    int win_lo = -1;
    std::vector<std::vector<cplx>> window; // nodes win_lo+1 .. win_lo+len

    explicit Impl(const TrajectoryStore& s) : store(s) {}

    const std::vector<cplx>& at(int m) {
        if (store.stored(m)) return store.at(m);
        const int stride = store.stride();
        const int w0 = (m / stride) * stride;
        if (w0 != win_lo) {
            const int w_end = std::min(w0 + stride, store.n_nodes() - 1);
            std::vector<cplx> cur = store.at(w0);
            window.assign(static_cast<size_t>(w_end - w0), {});
            for (int k = w0; k < w_end; ++k) {
                if (st1)
                    st1->advance(cur, k);
                else
                    st2->advance(cur, k);
                window[static_cast<size_t>(k - w0)] = cur;
            }
            win_lo = w0;
        }
        return window[static_cast<size_t>(m - win_lo - 1)];
    }
};

TrajectoryCursor::TrajectoryCursor(const PropagationSpec& spec, const TrajectoryStore& store)
    : impl_(std::make_unique<Impl>(store)) {
    if (store.stride() > 1) impl_->st1.emplace(spec);
}

TrajectoryCursor::TrajectoryCursor(const PropagationSpec2D& spec, const TrajectoryStore& store)
    : impl_(std::make_unique<Impl>(store)) {
    if (store.stride() > 1) impl_->st2.emplace(spec);
}

TrajectoryCursor::~TrajectoryCursor() = default;
TrajectoryCursor::TrajectoryCursor(TrajectoryCursor&&) noexcept = default;

const std::vector<cplx>& TrajectoryCursor::at(int m) { return impl_->at(m); }

// --- forward drivers ----------------------------------------------------------

namespace {

TrajectoryStore run_forward_1d(const PropagationSpec& spec, const Wave1D& initial) {
    if (!same_spatial_grid(spec.grid, initial.grid))
        throw DimensionError("initial state grid does not match propagation grid");
    Stepper1D stepper(spec);
    const int stride = spec.policy == TrajectoryPolicy::full ? 1 : std::max(1, spec.stride);
    TrajectoryStore store(spec.grid.n_nodes(), spec.grid.n_x, stride);
    if (spec.offset_splitting)
        store.global_phase.assign(static_cast<size_t>(spec.grid.n_nodes()), 0.0);

    std::vector<cplx> psi = initial.values;
    store.put(0, psi);
    store.edge_density_max = edge_density_1d(psi);
    double phi = 0.0;
    for (int m = 0; m < spec.grid.n_t; ++m) {
        phi += stepper.advance(psi, m);
        if (spec.offset_splitting) store.global_phase[static_cast<size_t>(m + 1)] = phi;
        store.put(m + 1, psi);
        store.edge_density_max = std::max(store.edge_density_max, edge_density_1d(psi));
    }
    return store;
}

} // namespace

TrajectoryStore propagate_cn_1d(const PropagationSpec& spec, const Wave1D& initial) {
    PropagationSpec s = spec;
    s.scheme = Scheme::crank_nicolson_1d;
    return run_forward_1d(s, initial);
}

TrajectoryStore propagate_split_operator(const PropagationSpec& spec, const Wave1D& initial) {
    if (spec.g != 0.0)
        throw ContractViolation("propagate_split_operator is the g = 0 path");
    PropagationSpec s = spec;
    s.scheme = Scheme::split_operator;
    return run_forward_1d(s, initial);
}

TrajectoryStore propagate_split_operator_nonlinear(const PropagationSpec& spec,
                                                   const Wave1D& initial) {
    PropagationSpec s = spec;
    s.scheme = Scheme::split_operator_nonlinear;
    return run_forward_1d(s, initial);
}

TrajectoryStore propagate(const PropagationSpec& spec, const Wave1D& initial) {
    switch (spec.scheme) {
        case Scheme::crank_nicolson_1d: return propagate_cn_1d(spec, initial);
        case Scheme::split_operator: return propagate_split_operator(spec, initial);
        case Scheme::split_operator_nonlinear:
            return propagate_split_operator_nonlinear(spec, initial);
    }
    throw ContractViolation("unknown scheme");
}

TrajectoryStore propagate_split_operator_2d(const PropagationSpec2D& spec,
                                            const Wave2D& initial) {
    if (!initial.grid.same_extents(spec.grid))
        throw DimensionError("initial state grid does not match propagation grid");
    Stepper2D stepper(spec);
    const int stride = spec.policy == TrajectoryPolicy::full ? 1 : std::max(1, spec.stride);
    TrajectoryStore store(spec.grid.n_nodes(), spec.grid.n_points(), stride);
    if (spec.offset_splitting)
        store.global_phase.assign(static_cast<size_t>(spec.grid.n_nodes()), 0.0);

    std::vector<cplx> psi = initial.values;
    store.put(0, psi);
    store.edge_density_max = edge_density_2d(spec.grid, psi);
    double phi = 0.0;
    for (int m = 0; m < spec.grid.n_t; ++m) {
        phi += stepper.advance(psi, m);
        if (spec.offset_splitting) store.global_phase[static_cast<size_t>(m + 1)] = phi;
        store.put(m + 1, psi);
        if ((m & 15) == 0 || m == spec.grid.n_t - 1)
            store.edge_density_max =
                std::max(store.edge_density_max, edge_density_2d(spec.grid, psi));
    }
    return store;
}

// --- adjoint ------------------------------------------------------------------

namespace {
template <class GridT>
WaveField<GridT> terminal_impl(const WaveField<GridT>& psi_final,
                               const WaveField<GridT>& desired) {
    const cplx c = inner_product(desired, psi_final);
    WaveField<GridT> p(psi_final.grid, psi_final.time_index);
    for (size_t i = 0; i < p.values.size(); ++i)
        p.values[i] = cplx(0.0, 1.0) * c * desired.values[i];
    return p;
}
} // namespace

Wave1D adjoint_terminal(const Wave1D& psi_final, const Wave1D& desired) {
    return terminal_impl(psi_final, desired);
}
Wave2D adjoint_terminal(const Wave2D& psi_final, const Wave2D& desired) {
    return terminal_impl(psi_final, desired);
}

struct AdjointSweep::Impl {
    std::optional<Stepper1D> st1;
    std::optional<Stepper2D> st2;
    TrajectoryCursor cursor;
    std::vector<cplx> p;
    int node;
    bool nonlinear;

    Impl(const PropagationSpec& spec, const TrajectoryStore& forward, const Wave1D& pt)
        : cursor(full_cursor(spec, forward)), p(pt.values),
          node(spec.grid.n_t), nonlinear(spec.g != 0.0) {
        if (forward.n_nodes() != spec.grid.n_nodes() ||
            forward.field_size() != spec.grid.n_x)
            throw DimensionError("forward trajectory does not match the spec");
        st1.emplace(spec);
    }

    Impl(const PropagationSpec2D& spec, const TrajectoryStore& forward, const Wave2D& pt)
        : cursor(full_cursor_2d(spec, forward)), p(pt.values),
          node(spec.grid.n_t), nonlinear(spec.g != 0.0) {
        if (forward.n_nodes() != spec.grid.n_nodes() ||
            forward.field_size() != spec.grid.n_points())
            throw DimensionError("forward trajectory does not match the spec");
        st2.emplace(spec);
    }

    static TrajectoryCursor full_cursor(const PropagationSpec& spec,
                                        const TrajectoryStore& forward) {
        return TrajectoryCursor(spec, forward);
    }
    static TrajectoryCursor full_cursor_2d(const PropagationSpec2D& spec,
                                           const TrajectoryStore& forward) {
        return TrajectoryCursor(spec, forward);
    }

    void step_back() {
        if (node <= 0) throw ContractViolation("adjoint sweep already at t = 0");
        const int m = node - 1;
        if (nonlinear) {
            const std::vector<cplx>& psi_mp1 = cursor.at(m + 1);
            // copy: the cursor may rebuild its window when fetching node m
            std::vector<cplx> psi_hi = psi_mp1;
            const std::vector<cplx>& psi_lo = cursor.at(m);
            if (st1)
                st1->retreat(p, m, &psi_lo, &psi_hi);
            else
                st2->retreat(p, m, &psi_lo, &psi_hi);
        } else {
            if (st1)
                st1->retreat(p, m, nullptr, nullptr);
            else
                st2->retreat(p, m, nullptr, nullptr);
        }
        node = m;
    }
};

AdjointSweep::AdjointSweep(const PropagationSpec& spec, const TrajectoryStore& forward,
                           const Wave1D& p_terminal)
    : impl_(std::make_unique<Impl>(spec, forward, p_terminal)) {}

AdjointSweep::AdjointSweep(const PropagationSpec2D& spec, const TrajectoryStore& forward,
                           const Wave2D& p_terminal)
    : impl_(std::make_unique<Impl>(spec, forward, p_terminal)) {}

AdjointSweep::~AdjointSweep() = default;

int AdjointSweep::node() const { return impl_->node; }
const std::vector<cplx>& AdjointSweep::p() const { return impl_->p; }
void AdjointSweep::step_back() { impl_->step_back(); }

TrajectoryStore propagate_adjoint(const PropagationSpec& spec,
                                  const TrajectoryStore& forward,
                                  const Wave1D& p_terminal) {
    AdjointSweep sweep(spec, forward, p_terminal);
    TrajectoryStore store(spec.grid.n_nodes(), spec.grid.n_x, 1);
    store.put(spec.grid.n_t, sweep.p());
    while (!sweep.done()) {
        sweep.step_back();
        store.put(sweep.node(), sweep.p());
    }
    return store;
}

TrajectoryStore propagate_adjoint_2d(const PropagationSpec2D& spec,
                                     const TrajectoryStore& forward,
                                     const Wave2D& p_terminal) {
    AdjointSweep sweep(spec, forward, p_terminal);
    TrajectoryStore store(spec.grid.n_nodes(), spec.grid.n_points(), 1);
    store.put(spec.grid.n_t, sweep.p());
    while (!sweep.done()) {
        sweep.step_back();
        store.put(sweep.node(), sweep.p());
    }
    return store;
}

std::vector<double> adjoint_fidelity_gradient(const PropagationSpec& spec,
                                              const TrajectoryStore& forward,
                                              const Wave1D& p_terminal) {
    if (forward.n_nodes() != spec.grid.n_nodes() || forward.field_size() != spec.grid.n_x)
        throw DimensionError("forward trajectory does not match the spec");
    Stepper1D stepper(spec);
    TrajectoryCursor cursor(spec, forward);
    std::vector<double> grad(static_cast<size_t>(spec.grid.n_nodes()), 0.0);
    std::vector<cplx> p = p_terminal.values;
    for (int m = spec.grid.n_t - 1; m >= 0; --m) {
        const std::vector<cplx> psi_hi = cursor.at(m + 1);
        const std::vector<cplx>& psi_lo = cursor.at(m);
        stepper.retreat(p, m, &psi_lo, &psi_hi, &grad);
    }
    return grad;
}

std::vector<double> adjoint_fidelity_gradient_2d(const PropagationSpec2D& spec,
                                                 const TrajectoryStore& forward,
                                                 const Wave2D& p_terminal) {
    if (forward.n_nodes() != spec.grid.n_nodes() ||
        forward.field_size() != spec.grid.n_points())
        throw DimensionError("forward trajectory does not match the spec");
    Stepper2D stepper(spec);
    TrajectoryCursor cursor(spec, forward);
    std::vector<double> grad(static_cast<size_t>(spec.grid.n_nodes()), 0.0);
    std::vector<cplx> p = p_terminal.values;
    for (int m = spec.grid.n_t - 1; m >= 0; --m) {
        const std::vector<cplx> psi_hi = cursor.at(m + 1);
        const std::vector<cplx>& psi_lo = cursor.at(m);
        stepper.retreat(p, m, &psi_lo, &psi_hi, &grad);
    }
    return grad;
}

// --- groundstate ----------------------------------------------------------------

namespace {

// Exact imaginary-time sub-flow of the local terms over a half step h:
// the density obeys rho' = -2 (V + g rho) rho, a Bernoulli equation with
// closed form, so the amplitude factor needs no frozen-density
// approximation and the Strang composition stays second order.
inline double local_decay_factor(double v, double g, double rho, double h) {
    const double damp = std::exp(-v * h);
    if (g == 0.0) return damp;
    const double em = std::abs(v) > 1e-30 ? -std::expm1(-2.0 * v * h) / v : 2.0 * h;
    return damp / std::sqrt(1.0 + g * rho * em);
}

// Imaginary-time relaxation on a flat field with precomputed shifted
// potential column; renormalizes after every step.
void relax(std::vector<cplx>& psi, const Fft& fft, const std::vector<double>& kin_decay,
           const std::vector<double>& vt, double g, double dt, double cell_vol,
           const GroundstateOptions& opts, GroundstateInfo* info) {
    const size_t n = psi.size();
    auto renorm = [&](std::vector<cplx>& f) {
        double s = 0.0;
        for (const cplx& v : f) s += std::norm(v);
        s = std::sqrt(s * cell_vol);
        const double inv = 1.0 / s;
        for (cplx& v : f) v *= inv;
    };
    renorm(psi);
    std::vector<cplx> next(n);
    double residual = 0.0;
    // Running chemical-potential shift: keeping the norm nearly constant
    // through the step keeps the density seen by the g-term self-consistent,
    // which the renormalization alone only fixes to first order in dt.
    double mu_shift = 0.0;
    for (long it = 0; it < opts.step_cap; ++it) {
        next = psi;
        for (size_t i = 0; i < n; ++i)
            next[i] *= local_decay_factor(vt[i] - mu_shift, g, std::norm(next[i]), 0.5 * dt);
        fft.forward(next);
        for (size_t i = 0; i < n; ++i) next[i] *= kin_decay[i];
        fft.inverse(next);
        for (size_t i = 0; i < n; ++i)
            next[i] *= local_decay_factor(vt[i] - mu_shift, g, std::norm(next[i]), 0.5 * dt);
        double s = 0.0;
        for (const cplx& v : next) s += std::norm(v);
        const double step_norm = std::sqrt(s * cell_vol);
        mu_shift -= std::log(step_norm) / dt;
        renorm(next);
        residual = 0.0;
        for (size_t i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(next[i] - psi[i]));
        psi.swap(next);
        if (residual < opts.tolerance) {
            if (info) {
                info->iterations += it + 1;
                info->residual = residual;
            }
            return;
        }
    }
    throw ConvergenceError("imaginary-time relaxation did not converge", residual);
}

std::vector<double> kinetic_decay_1d(const Grid1D& grid, double dt) {
    const auto k = kinetic_wavenumbers(grid);
    std::vector<double> d(k.size());
    for (size_t j = 0; j < k.size(); ++j) d[j] = std::exp(-0.5 * dt * k[j] * k[j]);
    return d;
}

} // namespace

Wave1D groundstate_imaginary_time(const Grid1D& grid, const Potential1D& potential,
                                  double lambda, double g, GroundstateInfo* info,
                                  const GroundstateOptions& opts, const Wave1D* seed) {
    const int n = grid.n_x;
    std::vector<double> vt;
    sample_column(potential, grid, lambda, vt);
    subtract_min(vt);

    const double dt = opts.dt > 0.0 ? opts.dt : grid.dt();
    Fft fft(n);
    const auto kin_decay = kinetic_decay_1d(grid, dt);
    GroundstateInfo local;
    Wave1D psi(grid);

    if (seed) {
        if (!same_spatial_grid(seed->grid, grid))
            throw DimensionError("groundstate seed lives on a different grid");
        psi.values = seed->values;
        relax(psi.values, fft, kin_decay, vt, g, dt, grid.dx(), opts, &local);
    } else {
        // Boltzmann-shaped warm-up exp(-V / omega) with omega from the local
        // curvature at the minimum: reduces to the exact Gaussian for a
        // harmonic well and, unlike a single off-center Gaussian, respects
        // the potential's symmetry, so degenerate double wells relax to the
        // symmetric groundstate instead of a one-sided state.
        int i_min = 0;
        for (int i = 1; i < n; ++i)
            if (vt[static_cast<size_t>(i)] < vt[static_cast<size_t>(i_min)]) i_min = i;
        const int im = (i_min + n - 1) % n, ip = (i_min + 1) % n;
        const double curv = (vt[static_cast<size_t>(ip)] - 2.0 * vt[static_cast<size_t>(i_min)] +
                             vt[static_cast<size_t>(im)]) /
                            (grid.dx() * grid.dx());
        const double omega = curv > 1e-12 ? std::sqrt(curv) : 1.0;
        for (int i = 0; i < n; ++i)
            psi.values[static_cast<size_t>(i)] = std::exp(-vt[static_cast<size_t>(i)] / omega);
        relax(psi.values, fft, kin_decay, vt, 0.0, dt, grid.dx(), opts, &local);
        if (g != 0.0) relax(psi.values, fft, kin_decay, vt, g, dt, grid.dx(), opts, &local);
    }

    const auto e = energy_breakdown(psi, potential, lambda, g);
    local.energy = e.total();
    local.chemical_potential = e.chemical_potential();
    if (info) *info = local;
    return psi;
}

Wave2D groundstate_imaginary_time_2d(const Grid2D& grid, const Potential2D& potential,
                                     double lambda, double g, GroundstateInfo* info,
                                     const GroundstateOptions& opts, const Wave2D* seed) {
    std::vector<double> vt;
    sample_column_2d(potential, grid, lambda, vt);
    subtract_min(vt);

    const double dt = opts.dt > 0.0 ? opts.dt : grid.dt();
    Fft fft(grid.n_x, grid.n_y);
    const auto kx = kinetic_wavenumbers(grid.n_x, grid.length_x());
    const auto ky = kinetic_wavenumbers(grid.n_y, grid.length_y());
    std::vector<double> kin_decay(static_cast<size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_y; ++j)
            kin_decay[static_cast<size_t>(grid.index(i, j))] =
                std::exp(-0.5 * dt * (kx[i] * kx[i] + ky[j] * ky[j]));

    GroundstateInfo local;
    Wave2D psi(grid);

    if (seed) {
        if (!seed->grid.same_extents(grid))
            throw DimensionError("groundstate seed lives on a different grid");
        psi.values = seed->values;
        relax(psi.values, fft, kin_decay, vt, g, dt, grid.dx() * grid.dy(), opts, &local);
    } else {
        // symmetric Boltzmann-shaped warm-up, as in the 1D relaxation
        int q_min = 0;
        for (int q = 1; q < grid.n_points(); ++q)
            if (vt[static_cast<size_t>(q)] < vt[static_cast<size_t>(q_min)]) q_min = q;
        const int i_c = q_min / grid.n_y, j_c = q_min % grid.n_y;
        auto curv_along = [&](int di, int dj, double h) {
            const int ip = grid.index((i_c + di) % grid.n_x, (j_c + dj) % grid.n_y);
            const int im = grid.index((i_c - di + grid.n_x) % grid.n_x,
                                      (j_c - dj + grid.n_y) % grid.n_y);
            return (vt[static_cast<size_t>(ip)] - 2.0 * vt[static_cast<size_t>(q_min)] +
                    vt[static_cast<size_t>(im)]) /
                   (h * h);
        };
        const double curv =
            std::max(curv_along(1, 0, grid.dx()), curv_along(0, 1, grid.dy()));
        const double omega = curv > 1e-12 ? std::sqrt(curv) : 1.0;
        for (int q = 0; q < grid.n_points(); ++q)
            psi.values[static_cast<size_t>(q)] = std::exp(-vt[static_cast<size_t>(q)] / omega);
        relax(psi.values, fft, kin_decay, vt, 0.0, dt, grid.dx() * grid.dy(), opts, &local);
        if (g != 0.0)
            relax(psi.values, fft, kin_decay, vt, g, dt, grid.dx() * grid.dy(), opts, &local);
    }

    const auto e = energy_breakdown(psi, potential, lambda, g);
    local.energy = e.total();
    local.chemical_potential = e.chemical_potential();
    if (info) *info = local;
    return psi;
}

} // namespace gpeoct
