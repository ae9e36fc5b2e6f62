#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "veccomp/types.hpp"

namespace veccomp {

// Small dense semidefinite solver for the robust constellation problem:
//
//     maximize    E
//     subject to  alpha_c^H W alpha_c >= E * gamma_c   for every constraint c,
//                 tr W <= 1,
//                 W Hermitian positive semidefinite.
//
// Log-barrier interior-point method on the real parameterization of W
// (n diagonal entries, then (Re, Im) pairs for each upper off-diagonal).
// Problem sizes are tiny by SDP standards (n <= 64), so dense Newton steps
// with explicit Hessians are the simplest reliable choice.

template <typename Scalar = double>
struct SdpOptions {
  Scalar gap_tol = Scalar(1e-7);  // stop when barrier gap < gap_tol * max(1, E)
  Scalar mu = Scalar(20);         // barrier parameter multiplier per stage
  int max_newton_total = 20000;   // Newton iteration budget across all stages
  int max_newton_per_stage = 400;
  int max_backtrack = 60;
};

template <typename Scalar = double>
struct SdpSolution {
  ComplexMatrix<Scalar> W;     // n x n Hermitian PSD with tr W <= 1
  Scalar eps_star = Scalar(0); // achieved objective E
  int newton_iterations = 0;
  bool converged = false;
};

// Thrown when the Newton budget runs out before the gap criterion is met;
// carries the best iterate found so callers can inspect or salvage it.
class SdpNonConvergence : public std::runtime_error {
 public:
  SdpNonConvergence(const std::string& msg, SdpSolution<double> best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const SdpSolution<double>& best() const { return best_; }

 private:
  SdpSolution<double> best_;
};

// Smallest constraint ratio alpha^H W alpha / gamma over all constraints.
template <typename Scalar>
Scalar sdp_margin(const ComplexMatrix<Scalar>& W,
                  const std::vector<ComplexVector<Scalar>>& alphas,
                  const std::vector<Scalar>& gammas) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (size_t c = 0; c < alphas.size(); ++c) {
    const Scalar q = (alphas[c].adjoint() * W * alphas[c]).value().real();
    best = std::min(best, q / gammas[c]);
  }
  return best;
}

// Smallest margin |<alpha_c, X>|^2 / gamma_c achieved by a vector solution.
template <typename Scalar>
Scalar constellation_margin(const ComplexVector<Scalar>& X,
                            const std::vector<ComplexVector<Scalar>>& alphas,
                            const std::vector<Scalar>& gammas) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (size_t c = 0; c < alphas.size(); ++c)
    best = std::min(best, std::norm(alphas[c].dot(X)) / gammas[c]);
  return best;
}

namespace sdp_detail {

// Real coordinates of a Hermitian matrix: [diag; (2 Re M_ij, 2 Im M_ij)_{i<j}].
// With this scaling, <w, coords(M)> = tr(W M) for W built by to_matrix(w).
template <typename Scalar>
RealVector<Scalar> coords(const ComplexMatrix<Scalar>& m) {
  const int n = int(m.rows());
  RealVector<Scalar> v(n * n);
  for (int i = 0; i < n; ++i) v[i] = m(i, i).real();
  int p = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      v[p++] = Scalar(2) * m(i, j).real();
      v[p++] = Scalar(2) * m(i, j).imag();
    }
  return v;
}

template <typename Scalar>
ComplexMatrix<Scalar> to_matrix(const RealVector<Scalar>& w, int n) {
  ComplexMatrix<Scalar> m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = w[i];
  int p = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Complex<Scalar> v(w[p], w[p + 1]);
      p += 2;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  return m;
}

// Hessian of -log det W in the real coordinates: D(p,q) = tr(S T_p S T_q)
// with S = W^{-1}.  Each basis element has at most two nonzero entries, so
// every S T_p S is a sum of two outer products of S's columns/rows.
template <typename Scalar>
RealMatrix<Scalar> logdet_hessian(const ComplexMatrix<Scalar>& S) {
  const int n = int(S.rows());
  const int nv = n * n;
  RealMatrix<Scalar> D(nv, nv);
  ComplexMatrix<Scalar> M(n, n);
  const Complex<Scalar> iunit(Scalar(0), Scalar(1));
  int p = 0;
  auto emit = [&]() {
    D.row(p) = coords<Scalar>(M).transpose();
    ++p;
  };
  for (int i = 0; i < n; ++i) {
    M.noalias() = S.col(i) * S.row(i);
    emit();
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix<Scalar> sij = S.col(i) * S.row(j);
      ComplexMatrix<Scalar> sji = S.col(j) * S.row(i);
      M = sij + sji;
      emit();
      M = iunit * (sij - sji);
      emit();
    }
  // tr(S T_p S T_q) is symmetric in (p,q); re-symmetrize to kill rounding.
  D = ((D + D.transpose()) / Scalar(2)).eval();
  return D;
}

}  // namespace sdp_detail

template <typename Scalar = double>
SdpSolution<Scalar> solve_margin_sdp(const std::vector<ComplexVector<Scalar>>& alphas,
                                     const std::vector<Scalar>& gammas,
                                     const SdpOptions<Scalar>& opts = {}) {
  using sdp_detail::coords;
  using sdp_detail::to_matrix;
  const size_t m = alphas.size();
  if (m == 0) throw std::invalid_argument("solve_margin_sdp: no constraints");
  if (gammas.size() != m)
    throw std::invalid_argument("solve_margin_sdp: alphas/gammas size mismatch");
  const int n = int(alphas.front().size());
  for (const auto& a : alphas) {
    if (int(a.size()) != n)
      throw std::invalid_argument("solve_margin_sdp: inconsistent constraint dimensions");
    if (a.norm() == Scalar(0))
      throw std::invalid_argument("solve_margin_sdp: zero constraint vector");
  }
  for (Scalar g : gammas)
    if (!(g > Scalar(0)))
      throw std::invalid_argument("solve_margin_sdp: weights must be positive");

  const int nw = n * n;   // Hermitian coordinates
  const int nv = nw + 1;  // plus the objective variable E

  // Constraint gradients g_c = coords(alpha_c alpha_c^H) and trace direction.
  std::vector<RealVector<Scalar>> grads(m);
  for (size_t c = 0; c < m; ++c) {
    const ComplexMatrix<Scalar> outer = alphas[c] * alphas[c].adjoint();
    grads[c] = coords<Scalar>(outer);
  }
  const RealVector<Scalar> trace_dir = coords<Scalar>(ComplexMatrix<Scalar>::Identity(n, n));

  // Strictly feasible start: W = I/(n+1), E at half the worst ratio.
  RealVector<Scalar> v = RealVector<Scalar>::Zero(nv);
  for (int i = 0; i < n; ++i) v[i] = Scalar(1) / Scalar(n + 1);
  Scalar min_ratio = std::numeric_limits<Scalar>::infinity();
  for (size_t c = 0; c < m; ++c)
    min_ratio = std::min(min_ratio, grads[c].dot(v.head(nw)) / gammas[c]);
  v[nw] = Scalar(0.5) * min_ratio;

  struct State {
    ComplexMatrix<Scalar> W;
    Eigen::LLT<ComplexMatrix<Scalar>> llt;
    std::vector<Scalar> slacks;
    Scalar trace_slack = 0;
    bool feasible = false;
  };
  auto evaluate = [&](const RealVector<Scalar>& vv, State& st) {
    st.W = to_matrix<Scalar>(vv.head(nw).eval(), n);
    st.llt.compute(st.W);
    st.feasible = (st.llt.info() == Eigen::Success);
    if (st.feasible) {
      // LLT succeeds on some near-singular matrices; insist on a positive
      // floor so logs stay finite.
      const auto& l = st.llt.matrixLLT();
      for (int i = 0; i < n; ++i)
        if (!(l(i, i).real() > Scalar(1e-150))) st.feasible = false;
    }
    st.trace_slack = Scalar(1) - vv.head(nw).head(n).sum();
    if (!(st.trace_slack > Scalar(0))) st.feasible = false;
    st.slacks.resize(m);
    for (size_t c = 0; c < m; ++c) {
      st.slacks[c] = grads[c].dot(vv.head(nw)) - vv[nw] * gammas[c];
      if (!(st.slacks[c] > Scalar(0))) st.feasible = false;
    }
    return st.feasible;
  };
  auto barrier_value = [&](const State& st, const RealVector<Scalar>& vv, Scalar t) {
    Scalar log_det = 0;
    const auto& l = st.llt.matrixLLT();
    for (int i = 0; i < n; ++i) log_det += Scalar(2) * std::log(l(i, i).real());
    Scalar val = -t * vv[nw] - log_det - std::log(st.trace_slack);
    for (size_t c = 0; c < m; ++c) val -= std::log(st.slacks[c]);
    return val;
  };

  State cur;
  evaluate(v, cur);
  if (!cur.feasible)
    throw std::logic_error("solve_margin_sdp: initial point infeasible");

  const Scalar nu = Scalar(m) + Scalar(1) + Scalar(n);  // total barrier degree
  Scalar t = std::max(nu / std::max(v[nw], Scalar(1e-8)), Scalar(10));
  int newton_total = 0;
  bool converged = false;

  RealVector<Scalar> grad(nv);
  RealMatrix<Scalar> hess(nv, nv);

  for (int stage = 0; stage < 64; ++stage) {
    for (int it = 0; it < opts.max_newton_per_stage; ++it) {
      if (newton_total >= opts.max_newton_total) break;
      ++newton_total;

      const ComplexMatrix<Scalar> S =
          cur.llt.solve(ComplexMatrix<Scalar>::Identity(n, n));

      grad.setZero();
      grad[nw] = -t;
      grad.head(nw) = -coords<Scalar>(S);
      grad.head(nw) += trace_dir / cur.trace_slack;
      for (size_t c = 0; c < m; ++c) {
        const Scalar inv = Scalar(1) / cur.slacks[c];
        grad.head(nw) -= grads[c] * inv;
        grad[nw] += gammas[c] * inv;
      }

      hess.setZero();
      hess.topLeftCorner(nw, nw) = sdp_detail::logdet_hessian<Scalar>(S);
      const Scalar inv_tr2 = Scalar(1) / (cur.trace_slack * cur.trace_slack);
      hess.topLeftCorner(nw, nw).noalias() += inv_tr2 * (trace_dir * trace_dir.transpose());
      for (size_t c = 0; c < m; ++c) {
        const Scalar inv2 = Scalar(1) / (cur.slacks[c] * cur.slacks[c]);
        hess.topLeftCorner(nw, nw).noalias() += inv2 * (grads[c] * grads[c].transpose());
        hess.block(0, nw, nw, 1).noalias() -= inv2 * gammas[c] * grads[c];
        hess.block(nw, 0, 1, nw).noalias() -= inv2 * gammas[c] * grads[c].transpose();
        hess(nw, nw) += inv2 * gammas[c] * gammas[c];
      }

      Eigen::LDLT<RealMatrix<Scalar>> solver(hess);
      RealVector<Scalar> step = solver.solve(-grad);
      const Scalar decrement2 = -grad.dot(step);
      if (!(decrement2 > Scalar(0))) break;  // numerically flat; stage done
      if (decrement2 / Scalar(2) < Scalar(1e-10)) break;

      // Backtrack to stay strictly feasible, then Armijo on the barrier.
      const Scalar phi0 = barrier_value(cur, v, t);
      Scalar s = Scalar(1);
      State trial;
      bool moved = false;
      for (int bt = 0; bt < opts.max_backtrack; ++bt) {
        const RealVector<Scalar> cand = v + s * step;
        if (evaluate(cand, trial) &&
            barrier_value(trial, cand, t) <= phi0 + Scalar(0.25) * s * grad.dot(step)) {
          v = cand;
          cur = trial;
          moved = true;
          break;
        }
        s /= Scalar(2);
      }
      if (!moved) break;  // step vanished; stage cannot improve further
    }

    if (nu / t < opts.gap_tol * std::max(Scalar(1), std::abs(v[nw]))) {
      converged = true;
      break;
    }
    if (newton_total >= opts.max_newton_total) break;
    t *= opts.mu;
  }

  SdpSolution<Scalar> sol;
  sol.W = to_matrix<Scalar>(v.head(nw).eval(), n);
  sol.eps_star = v[nw];
  sol.newton_iterations = newton_total;
  sol.converged = converged;
  if (!converged) {
    SdpSolution<double> best;
    best.W = sol.W.template cast<std::complex<double>>();
    best.eps_star = double(sol.eps_star);
    best.newton_iterations = sol.newton_iterations;
    best.converged = false;
    throw SdpNonConvergence("solve_margin_sdp: Newton budget exhausted before the gap "
                            "criterion was met",
                            std::move(best));
  }
  return sol;
}

}  // namespace veccomp
