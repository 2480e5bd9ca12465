#include "vvlab/commutator.hpp"

#include <algorithm>
#include <cmath>

#include "vvlab/errors.hpp"

namespace vvlab {

CommutatorReport commutator_residual(const Trajectory& traj,
                                     const std::vector<std::pair<double, double>>& s_pairs,
                                     const std::vector<WindowShape>& shapes, const GasLaw& law,
                                     const JacobiQuadrature& quad, Window K, double spline_width) {
  if (!(spline_width > 0.0)) throw DomainError("commutator_residual: spline width must be positive");
  const Grid1D& g = traj.grid;
  int i0 = g.n_cells(), i1 = -1;
  for (int i = 0; i < g.n_cells(); ++i) {
    if (g.x(i) >= K.a && g.x(i) <= K.b) {
      i0 = std::min(i0, i);
      i1 = std::max(i1, i);
    }
  }
  if (i1 < i0) throw DomainError("commutator_residual: window K contains no cell centre");
  const int nx = i1 - i0 + 1;
  const int nt = static_cast<int>(traj.snapshots.size());
  if (nt < 1) throw DomainError("commutator_residual: empty trajectory");
  // Each snapshot stands for one sampling interval of the space-time region.
  const double dt_sample =
      nt > 1 ? (traj.snapshots.back().t - traj.snapshots.front().t) / (nt - 1) : 1.0;

  CommutatorReport rep;
  rep.spline_width = spline_width;
  for (const auto& [s1, s2] : s_pairs) {
    const EntropyWeight p1 = EntropyWeight::bump(s1 - 0.5 * spline_width, s1 + 0.5 * spline_width);
    const EntropyWeight p2 = EntropyWeight::bump(s2 - 0.5 * spline_width, s2 + 0.5 * spline_width);
    // Pair fields on the analysis region, row-major (snapshot, cell).
    std::vector<double> e1(nt * nx), q1(nt * nx), e2(nt * nx), q2(nt * nx);
    for (int n = 0; n < nt; ++n) {
      for (int i = 0; i < nx; ++i) {
        const State s = traj.snapshots[n].state(i0 + i);
        const PairValue a = entropy_pair(law, p1, quad, s);
        const PairValue b = entropy_pair(law, p2, quad, s);
        e1[n * nx + i] = a.eta;
        q1[n * nx + i] = a.q;
        e2[n * nx + i] = b.eta;
        q2[n * nx + i] = b.q;
      }
    }
    for (const WindowShape& shape : shapes) {
      if (shape.cells < 1 || shape.snapshots < 1) {
        throw DomainError("commutator_residual: window shape must be positive");
      }
      CommutatorEntry entry{s1, s2, shape, 0, 0.0, 0.0};
      for (int n0 = 0; n0 < nt; n0 += shape.snapshots) {
        const int n1 = std::min(nt, n0 + shape.snapshots);
        for (int c0 = 0; c0 < nx; c0 += shape.cells) {
          const int c1 = std::min(nx, c0 + shape.cells);
          double se1 = 0, sq1 = 0, se2 = 0, sq2 = 0, sp = 0;
          for (int n = n0; n < n1; ++n) {
            for (int i = c0; i < c1; ++i) {
              const int k = n * nx + i;
              se1 += e1[k];
              sq1 += q1[k];
              se2 += e2[k];
              sq2 += q2[k];
              sp += e1[k] * q2[k] - e2[k] * q1[k];
            }
          }
          const double cnt = static_cast<double>((n1 - n0) * (c1 - c0));
          const double avg_p = sp / cnt;
          const double prod = (se1 / cnt) * (sq2 / cnt) - (se2 / cnt) * (sq1 / cnt);
          const double res = std::abs(avg_p - prod);
          const double area = (c1 - c0) * g.dx() * (n1 - n0) * dt_sample;
          entry.residual += res * area;
          entry.max_window = std::max(entry.max_window, res);
          ++entry.n_windows;
        }
      }
      rep.entries.push_back(entry);
    }
  }
  return rep;
}

}  // namespace vvlab
