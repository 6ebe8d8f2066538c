#pragma once

#include <memory>
#include <vector>

#include "gpeoct/grid.hpp"
#include "gpeoct/potential.hpp"
#include "gpeoct/wavefield.hpp"

namespace gpeoct {

enum class Scheme { crank_nicolson_1d, split_operator, split_operator_nonlinear };

enum class TrajectoryPolicy { full, strided_with_recompute };

/// Everything a propagation run needs. The potential is borrowed and must
/// outlive the run. `control` holds lambda at the n_t + 1 time nodes.
struct PropagationSpec {
    Grid1D grid;
    const Potential1D* potential = nullptr;
    std::vector<double> control;
    double g = 0.0;
    Scheme scheme = Scheme::crank_nicolson_1d;

    /// Propagate with V - V0(lambda) and track the global phase
    /// Phi(t) = integral of V0(lambda(s)) ds instead of carrying large
    /// potential offsets through the dynamics.
    bool offset_splitting = false;

    TrajectoryPolicy policy = TrajectoryPolicy::full;
    int stride = 1;
};

struct PropagationSpec2D {
    Grid2D grid;
    const Potential2D* potential = nullptr;
    std::vector<double> control;
    double g = 0.0;
    bool offset_splitting = false;
    TrajectoryPolicy policy = TrajectoryPolicy::full;
    int stride = 1;
};

/// Per-time-node snapshots psi^0 .. psi^{n_t}. Snapshot m corresponds to
/// time m * dt exactly. With the strided policy only every stride-th node
/// (plus the final one) is kept; intermediate nodes are regenerated on
/// demand by replaying the forward scheme from the nearest stored node.
class TrajectoryStore {
public:
    TrajectoryStore() = default;
    TrajectoryStore(int n_nodes, int field_size, int stride);

    int n_nodes() const { return n_nodes_; }
    int field_size() const { return field_size_; }
    int stride() const { return stride_; }

    bool stored(int m) const;
    void put(int m, const std::vector<cplx>& snapshot);
    const std::vector<cplx>& at(int m) const;

    /// Global phase Phi(t_m) accumulated by offset splitting; empty when
    /// offset splitting is off. The physical state is e^{-i Phi_m} times
    /// the stored snapshot.
    std::vector<double> global_phase;

    /// Largest boundary density max_i |psi_i|^2 seen at the domain edge
    /// during propagation; above 1e-6 the domain is too small.
    double edge_density_max = 0.0;
    bool edge_warning() const { return edge_density_max > 1e-6; }

private:
    int n_nodes_ = 0;
    int field_size_ = 0;
    int stride_ = 1;
    std::vector<std::vector<cplx>> slots_;
    int slot_of(int m) const;
};

/// Sequential access to forward snapshots while marching backwards,
/// regenerating strided windows as needed.
class TrajectoryCursor {
public:
    TrajectoryCursor(const PropagationSpec& spec, const TrajectoryStore& store);
    TrajectoryCursor(const PropagationSpec2D& spec, const TrajectoryStore& store);
    ~TrajectoryCursor();
    TrajectoryCursor(TrajectoryCursor&&) noexcept;

    const std::vector<cplx>& at(int m);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// --- forward propagation ----------------------------------------------------

/// Crank-Nicolson with the periodic finite-difference Laplacian; the update
/// is the unitary Cayley transform of H sampled mid-step, solved through the
/// cyclic tridiagonal structure. 1D, linear (g = 0) only.
TrajectoryStore propagate_cn_1d(const PropagationSpec& spec, const Wave1D& initial);

/// Split-operator scheme with the kinetic factor applied in spectral space;
/// g = 0 path.
TrajectoryStore propagate_split_operator(const PropagationSpec& spec,
                                         const Wave1D& initial);

/// Nonlinear split-operator: the modulus of the next step is computed first,
/// which closes the implicit dependence of the effective potential on the
/// new state. Reduces to propagate_split_operator bit for bit when g = 0.
TrajectoryStore propagate_split_operator_nonlinear(const PropagationSpec& spec,
                                                   const Wave1D& initial);

/// Dispatch on spec.scheme.
TrajectoryStore propagate(const PropagationSpec& spec, const Wave1D& initial);

TrajectoryStore propagate_split_operator_2d(const PropagationSpec2D& spec,
                                            const Wave2D& initial);

// --- adjoint (backward) propagation ----------------------------------------

/// Terminal condition p(T) = i <desired|psi(T)> desired.
Wave1D adjoint_terminal(const Wave1D& psi_final, const Wave1D& desired);
Wave2D adjoint_terminal(const Wave2D& psi_final, const Wave2D& desired);

/// Integrates the adjoint equation backwards from p(T). For g = 0 this is
/// the time-reversed forward scheme; for g > 0 the kinetic factor alternates
/// with an exact per-point update of the local terms, with the state's
/// quadratic coupling handled by splitting p into real and imaginary parts.
/// p is not normalized.
TrajectoryStore propagate_adjoint(const PropagationSpec& spec,
                                  const TrajectoryStore& forward,
                                  const Wave1D& p_terminal);

TrajectoryStore propagate_adjoint_2d(const PropagationSpec2D& spec,
                                     const TrajectoryStore& forward,
                                     const Wave2D& p_terminal);

/// Fidelity part of the control gradient as a density over the time nodes
/// (pinned endpoints return zero): the exact derivative of the discrete
/// final-state cost through the scheme's own stages, which keeps the
/// finite-difference comparison tight for every node, nonlinearity
/// included. Equals -Re<psi|dV/dlambda|p> sampled around node m up to
/// O(dt^2).
std::vector<double> adjoint_fidelity_gradient(const PropagationSpec& spec,
                                              const TrajectoryStore& forward,
                                              const Wave1D& p_terminal);

std::vector<double> adjoint_fidelity_gradient_2d(const PropagationSpec2D& spec,
                                                 const TrajectoryStore& forward,
                                                 const Wave2D& p_terminal);

/// Streaming form of the backward solve: holds p at one node at a time so
/// gradient assembly does not need a second full trajectory in memory.
class AdjointSweep {
public:
    AdjointSweep(const PropagationSpec& spec, const TrajectoryStore& forward,
                 const Wave1D& p_terminal);
    AdjointSweep(const PropagationSpec2D& spec, const TrajectoryStore& forward,
                 const Wave2D& p_terminal);
    ~AdjointSweep();

    int node() const;
    const std::vector<cplx>& p() const;
    bool done() const { return node() == 0; }
    void step_back();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// --- groundstate ------------------------------------------------------------

struct GroundstateOptions {
    double tolerance = 1e-10;  // max-norm change per step
    long step_cap = 100000;
    double dt = 0.0;           // 0 reuses the grid's real-time dt
};

struct GroundstateInfo {
    double energy = 0.0;
    double chemical_potential = 0.0;
    long iterations = 0;
    double residual = 0.0;
};

/// Imaginary-time relaxation with the split-operator scheme, renormalizing
/// after each step. For g > 0 the g = 0 groundstate seeds the nonlinear
/// relaxation. A caller-supplied seed (e.g. a state converged at a coarser
/// imaginary step) replaces the built-in warm-up entirely.
Wave1D groundstate_imaginary_time(const Grid1D& grid, const Potential1D& potential,
                                  double lambda, double g,
                                  GroundstateInfo* info = nullptr,
                                  const GroundstateOptions& opts = {},
                                  const Wave1D* seed = nullptr);

Wave2D groundstate_imaginary_time_2d(const Grid2D& grid, const Potential2D& potential,
                                     double lambda, double g,
                                     GroundstateInfo* info = nullptr,
                                     const GroundstateOptions& opts = {},
                                     const Wave2D* seed = nullptr);

} // namespace gpeoct
