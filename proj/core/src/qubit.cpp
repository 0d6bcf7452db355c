#include "qlab/qubit.hpp"

#include <Eigen/Eigenvalues>

namespace qlab {

using namespace std::complex_literals;

Matrix2c sigma_x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2c sigma_y() {
    Matrix2c m;
    m << 0, -1i, 1i, 0;
    return m;
}

Matrix2c sigma_z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}

QubitState::QubitState() {
    rho_ << 1, 0, 0, 0;
}

QubitState::QubitState(const Matrix2c& rho) : rho_(rho) {
    rho_ = 0.5 * (rho_ + rho_.adjoint().eval());  // symmetrize accumulated float error
    validate();
}

QubitState QubitState::from_bloch(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1.0 + tol) throw std::domain_error("Bloch vector outside unit ball");
    Matrix2c rho = 0.5 * (Matrix2c::Identity() + x * sigma_x() + y * sigma_y() + z * sigma_z());
    return QubitState(rho);
}

QubitState QubitState::pure(const Vector2c& psi) {
    Vector2c v = psi.normalized();
    return QubitState(v * v.adjoint());
}

void QubitState::validate() const {
    if (std::abs(rho_.trace().real() - 1.0) > 1e-9 || std::abs(rho_.trace().imag()) > 1e-9)
        throw std::domain_error("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::domain_error("density matrix not positive semidefinite");
}

Bloch QubitState::bloch() const {
    Bloch b;
    b.x = (rho_ * sigma_x()).trace().real();
    b.y = (rho_ * sigma_y()).trace().real();
    b.z = (rho_ * sigma_z()).trace().real();
    return b;
}

double QubitState::purity() const {
    return (rho_ * rho_).trace().real();
}

Matrix2c MeasurementAxis::op() const {
    return std::cos(theta) * sigma_z() + std::sin(theta) * sigma_x();
}

Vector2c MeasurementAxis::eigvec(int outcome) const {
    Vector2c v;
    if (outcome == +1)
        v << std::cos(theta / 2), std::sin(theta / 2);
    else if (outcome == -1)
        v << -std::sin(theta / 2), std::cos(theta / 2);
    else
        throw std::invalid_argument("outcome must be +1 or -1");
    return v;
}

Matrix2c pauli_axis_operator(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
    return MeasurementAxis{theta}.op();
}

Projector axis_projector(double theta, int outcome) {
    Vector2c v = MeasurementAxis{theta}.eigvec(outcome);
    return Projector{v * v.adjoint(), outcome};
}

QubitState rotate_y(const QubitState& state, double theta) {
    Matrix2c r;
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    r << c, -s, s, c;  // exp(-i theta sy / 2)
    return QubitState(r * state.matrix() * r.adjoint());
}

ProjectiveResult projective_measure(const QubitState& state, const MeasurementAxis& axis, Rng& rng) {
    Projector pp = axis_projector(axis.theta, +1);
    const double p_plus = (state.matrix() * pp.matrix).trace().real();
    const int outcome = (rng.uniform() < p_plus) ? +1 : -1;
    Projector proj = (outcome == +1) ? pp : axis_projector(axis.theta, -1);
    const double p = (outcome == +1) ? p_plus : 1.0 - p_plus;
    // post state is the eigen-projector state regardless of float noise in rho
    Vector2c v = MeasurementAxis{axis.theta}.eigvec(outcome);
    return ProjectiveResult{outcome, QubitState::pure(v), p};
}

std::pair<Bloch, double> purity_and_convert(const QubitState& state) {
    return {state.bloch(), state.purity()};
}

}  // namespace qlab
