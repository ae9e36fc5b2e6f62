#pragma once

#include <complex>

#include <Eigen/Dense>

namespace veccomp {

// Dense linear-algebra aliases, templated on the real scalar type.  Double is
// the working precision throughout the library; the templates keep the core
// generic so float instantiations compile for quick experiments.
template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using RealVector = Eigen::Vector<Scalar, Eigen::Dynamic>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using IntVector = Eigen::VectorXi;
using IntMatrix = Eigen::MatrixXi;

// Shared numeric tolerances.  These are part of the library contract: unit
// tests and the acceptance gate pin behavior against these exact values, so
// changing one is an interface change.
inline constexpr double kConstraintTol = 1e-8;      // absolute: constraint re-verification slack
inline constexpr double kRankOneTol = 1e-6;         // relative: lambda2/lambda1 rank-1 detection
inline constexpr double kDedupTolScale = 1e-6;      // times max |point|: decoder point merging
inline constexpr double kOrthogonalityTol = 1e-12;  // relative: orthogonal-partition test
inline constexpr double kDecompositionTol = 1e-12;  // relative: received-signal decomposition

}  // namespace veccomp
