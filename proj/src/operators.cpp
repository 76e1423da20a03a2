#include "pulsekit/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

namespace pulsekit {

namespace {

const std::complex<double> kI(0.0, 1.0);

void check_square(const OperatorMatrix& a, const char* who) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    if (a.rows() < 1 || a.rows() > kMaxDimension)
        throw std::invalid_argument(std::string(who) + ": dimension " +
                                    std::to_string(a.rows()) + " outside [1, " +
                                    std::to_string(kMaxDimension) + "]");
    if (!a.allFinite())
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

OperatorMatrix pauli_x() {
    OperatorMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

OperatorMatrix pauli_y() {
    OperatorMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

OperatorMatrix pauli_z() {
    OperatorMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

OperatorMatrix identity_op(Eigen::Index dim) {
    return OperatorMatrix::Identity(dim, dim);
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool is_hermitian(const OperatorMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

InvolutionOperator::InvolutionOperator(OperatorMatrix matrix) : matrix_(std::move(matrix)) {
    check_square(matrix_, "InvolutionOperator");
    if (!is_hermitian(matrix_, 1e-12))
        throw std::invalid_argument("InvolutionOperator: matrix is not Hermitian");
    const OperatorMatrix square = matrix_ * matrix_;
    const OperatorMatrix id = identity_op(matrix_.rows());
    if ((square - id).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("InvolutionOperator: matrix squared is not the identity");
}

InvolutionSplit split_by_involution(const OperatorMatrix& a, const InvolutionOperator& omega) {
    check_square(a, "split_by_involution");
    if (a.rows() != omega.dimension())
        throw std::invalid_argument("split_by_involution: dimension mismatch");
    const OperatorMatrix& w = omega.matrix();
    InvolutionSplit out;
    out.anti = 0.5 * (a - w * a * w);
    out.comm = a - out.anti;  // recomposes to a exactly
    return out;
}

OperatorMatrix hermitian_propagator(const OperatorMatrix& a, double t) {
    check_square(a, "hermitian_propagator");
    if (!std::isfinite(t))
        throw std::invalid_argument("hermitian_propagator: time must be finite");
    if (!is_hermitian(a, 1e-10))
        throw std::invalid_argument("hermitian_propagator: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_propagator: eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();
    Eigen::VectorXcd phases(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k)
        phases(k) = std::exp(kI * (-evals(k) * t));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

double operator_norm(const OperatorMatrix& a) {
    if (a.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
    if (!a.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
    Eigen::JacobiSVD<OperatorMatrix> svd(a);
    return svd.singularValues()(0);
}

}  // namespace pulsekit
