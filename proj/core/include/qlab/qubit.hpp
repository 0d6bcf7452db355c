#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "qlab/rng.hpp"

namespace qlab {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

struct Bloch {
    double x = 0.0, y = 0.0, z = 0.0;
};

Matrix2c sigma_x();
Matrix2c sigma_y();
Matrix2c sigma_z();

// Single qubit density matrix with validity checks and a Bloch-vector view.
class QubitState {
public:
    QubitState();  // |0><0|
    explicit QubitState(const Matrix2c& rho);
    static QubitState from_bloch(double x, double y, double z);
    static QubitState from_bloch(const Bloch& b) { return from_bloch(b.x, b.y, b.z); }
    static QubitState pure(const Vector2c& psi);

    const Matrix2c& matrix() const { return rho_; }
    Bloch bloch() const;
    double purity() const;

    static constexpr double tol = 1e-12;

private:
    void validate() const;
    Matrix2c rho_;
};

// operator cos(theta) sz + sin(theta) sx with its eigendecomposition
struct MeasurementAxis {
    double theta = 0.0;
    Matrix2c op() const;
    Vector2c eigvec(int outcome) const;  // outcome +1 or -1
};

struct Projector {
    Matrix2c matrix;
    int label;  // +1 or -1
};

Matrix2c pauli_axis_operator(double theta);
Projector axis_projector(double theta, int outcome);

QubitState rotate_y(const QubitState& state, double theta);

struct ProjectiveResult {
    int outcome;
    QubitState post;
    double probability;
};

ProjectiveResult projective_measure(const QubitState& state, const MeasurementAxis& axis, Rng& rng);

// roundtrip helper: Bloch view plus Tr[rho^2]
std::pair<Bloch, double> purity_and_convert(const QubitState& state);

}  // namespace qlab
