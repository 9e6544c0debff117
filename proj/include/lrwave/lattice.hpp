#pragma once

#include <Eigen/Core>
#include <functional>

#include "lrwave/potentials.hpp"
#include "lrwave/solver.hpp"

namespace lrwave {

// Finite chain of particles j in [-N, N] with frozen equilibrium background
// outside the simulated range: x_j = nu j on the left and nu j - right_offset
// on the right. A traveling-wave initial condition translates the half chain
// ahead of the front by the total displacement X(+inf), so the frozen right
// background must carry the same offset or the boundary bond would start
// stretched by |W|_1. Positions stay strictly increasing for admissible data.
struct LatticeState {
  int N = 0;
  Eigen::ArrayXd x;  // positions, index j + N
  Eigen::ArrayXd v;  // velocities
  double t = 0.0;
  PotentialFamily fam;
  int M_sim = 1;            // interaction range cutoff
  double right_offset = 0;  // background translation beyond +N

  long size() const { return 2L * N + 1; }
  double position(long idx) const;  // frozen background beyond the chain
};

struct PropagationReport {
  double c_measured = 0.0;
  bool c_defined = false;
  double c_predicted = 0.0;
  double shape_error = 0.0;   // min over shifts of the relative L2 deviation
  double energy_drift = 0.0;  // |H(T) - H(0)| / |H(0)|, rebased Hamiltonian
  bool ordering_ok = true;
  double min_gap = 0.0;
  long steps = 0;
};

// Traveling-wave initial condition x_j = nu j - X(j), v_j = c W(j).
// Error when the chain is too short for X to be flat at both ends.
LatticeState init_from_wave(const WaveSolution& sol, const PotentialFamily& fam,
                            int N, int M_sim = 0);

// Accelerations of Eq. of motion with pair forces over m <= M_sim; throws on
// particle collision.
Eigen::ArrayXd forces(const LatticeState& state);

// Total energy rebased against the equilibrium value:
// sum v^2/2 + sum_pairs [Phi_m(gap) - Phi_m(nu m)].
double lattice_energy(const LatticeState& state);

// Snapshot sink: called with (step, state) every `stride` steps when set.
struct RunObserver {
  long stride = 0;
  std::function<void(long, const LatticeState&)> callback;
};

// Velocity-Verlet integration over [0, T]; measures the propagation speed by
// sub-lattice cross-correlation of the strain field and the shape error at
// the optimal shift.
PropagationReport run(LatticeState& state, double dt, double T,
                      const RunObserver* observer = nullptr);

// Strain field r_j = nu - (x_{j+1} - x_j), length 2N.
Eigen::ArrayXd strain_field(const LatticeState& state);

}  // namespace lrwave
