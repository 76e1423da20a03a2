#pragma once

#include <Eigen/Dense>
#include <complex>

namespace pulsekit {

using OperatorMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxDimension = 64;

OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
OperatorMatrix identity_op(Eigen::Index dim);

/// Kronecker product, row-major convention: (A kron B)(i*p+k, j*q+l) = A(i,j) B(k,l).
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// Max-norm Hermiticity test, relative to max(1, max |entry|).
bool is_hermitian(const OperatorMatrix& a, double tol = 1e-10);

/// A Hermitian involution Omega (Omega^2 = 1), e.g. a parity or kick
/// operator. Construction verifies both properties to 1e-12.
class InvolutionOperator {
public:
    explicit InvolutionOperator(OperatorMatrix matrix);

    const OperatorMatrix& matrix() const { return matrix_; }
    Eigen::Index dimension() const { return matrix_.rows(); }

private:
    OperatorMatrix matrix_;
};

/// A = anti + comm with {anti, Omega} anticommuting and [comm, Omega] = 0.
/// comm is computed as A - anti so the two parts recompose to A exactly.
struct InvolutionSplit {
    OperatorMatrix anti;
    OperatorMatrix comm;
};

InvolutionSplit split_by_involution(const OperatorMatrix& a, const InvolutionOperator& omega);

/// exp(-i A t) for Hermitian A via spectral decomposition. Rejects
/// non-Hermitian or non-finite input and dimensions above kMaxDimension.
OperatorMatrix hermitian_propagator(const OperatorMatrix& a, double t);

/// Spectral norm (largest singular value).
double operator_norm(const OperatorMatrix& a);

}  // namespace pulsekit
