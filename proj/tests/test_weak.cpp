#include <doctest.h>

#include <cmath>
#include <vector>

#include "qlab/bounds.hpp"
#include "qlab/weak.hpp"

using namespace qlab;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_SUITE("weak-measurement") {

TEST_CASE("kraus operator on an eigenstate is a gaussian weight") {
    const double s = 0.375;
    auto k = kraus_operator(1.0, MeasurementStrength{s}, MeasurementAxis{0.0});
    Vector2c zero;
    zero << 1, 0;
    const double amp2 = (k.matrix * zero).squaredNorm();
    const double expected = std::sqrt(s / (2 * pi));  // exp(0) at j = mean
    CHECK(amp2 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kraus at j=0 is symmetric under the z flip") {
    auto k = kraus_operator(0.0, MeasurementStrength{0.375}, MeasurementAxis{0.0});
    CHECK(std::abs(k.matrix(0, 0) - k.matrix(1, 1)) < 1e-14);
}

TEST_CASE("kraus completeness by quadrature") {
    const double s = 0.375, dj = 1e-3;
    Matrix2c sum = Matrix2c::Zero();
    for (double j = -12.0; j <= 12.0 + 1e-12; j += dj) {
        auto k = kraus_operator(j, MeasurementStrength{s}, MeasurementAxis{0.6});
        sum += k.matrix.adjoint() * k.matrix * dj;
    }
    CHECK((sum - Matrix2c::Identity()).norm() < 1e-6);
}

TEST_CASE("kraus rejects nonfinite record") {
    CHECK_THROWS(kraus_operator(std::nan(""), MeasurementStrength{0.375}, MeasurementAxis{0.0}));
}

TEST_CASE("weak measurement is QND on eigenstates") {
    Rng rng(42);
    QubitState zero;
    QubitState st = zero;
    for (int k = 0; k < 200; ++k) {
        auto r = weak_measure(st, MeasurementStrength{0.375}, MeasurementAxis{0.0}, rng);
        st = r.post;
        CHECK((st.matrix() - zero.matrix()).norm() < 1e-12);
    }
}

TEST_CASE("backaction sign follows the record") {
    Rng rng(7);
    auto plus_x = QubitState::from_bloch(1, 0, 0);
    for (int k = 0; k < 500; ++k) {
        auto r = weak_measure(plus_x, MeasurementStrength{0.375}, MeasurementAxis{0.0}, rng);
        if (std::abs(r.j) < 1e-3) continue;
        CHECK(r.post.bloch().z * r.j > 0);
    }
}

TEST_CASE("outcome probability closed forms") {
    const double inf = std::numeric_limits<double>::infinity();
    MeasurementStrength s{0.375};
    QubitState zero;
    CHECK(outcome_probability(zero, s, MeasurementAxis{0.0}, -inf, inf) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(outcome_probability(zero, s, MeasurementAxis{0.0}, 1.0, inf) ==
          doctest::Approx(0.5).epsilon(1e-12));
    auto mixed = QubitState::from_bloch(0, 0, 0);
    CHECK(outcome_probability(mixed, s, MeasurementAxis{0.0}, 0.0, inf) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bayesian update examples") {
    auto r = bayesian_update(0.0, 1.0, 0.375);
    CHECK(r.z == doctest::Approx(std::tanh(0.375)).epsilon(1e-12));
    CHECK(std::abs(r.z - 0.35835) < 1e-5);
    CHECK(std::abs(r.x - 0.93359) < 1e-5);

    CHECK(bayesian_update(0.0, 0.0, 0.375).z == doctest::Approx(0.0));
    CHECK(bayesian_update(1.0, -3.0, 0.375).z == doctest::Approx(1.0));    // fixed point
    CHECK(bayesian_update(-1.0, 3.0, 0.375).z == doctest::Approx(-1.0));
    CHECK(bayesian_update(0.5, 4.0, 1e-12).z == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("kraus and bayes agree") {
    Rng rng(123);
    for (int k = 0; k < 1000; ++k) {
        const double z0 = rng.uniform(-0.999, 0.999);
        const double j = rng.uniform(-6, 6);
        const double s = rng.uniform(1e-3, 2.0);
        auto bayes = bayesian_update(z0, j, s);
        auto st = QubitState::from_bloch(std::sqrt(1 - z0 * z0), 0, z0);
        auto [post, pdf] = kraus_update(st, j, MeasurementStrength{s}, MeasurementAxis{0.0});
        CHECK(std::abs(post.bloch().z - bayes.z) < 1e-10);
        CHECK(std::abs(post.bloch().x - bayes.x) < 1e-10);
        CHECK(pdf == doctest::Approx(record_pdf(z0, j, s)).epsilon(1e-10));
    }
}

TEST_CASE("calibration formulas") {
    const double chi = -2 * pi * 1.5e6, kappa = 2 * pi * 4.5e6;
    auto cal = calibration(chi, kappa, 0.5, 1.0, 1e-6);
    CHECK(cal.gamma_m / (2 * pi) == doctest::Approx(2.0e6).epsilon(1e-9));
    CHECK(cal.stark == doctest::Approx(2 * chi * 0.5).epsilon(1e-12));

    // inverse helper roundtrips nbar from the measurement rate
    const double chi2 = -2 * pi * 0.25e6, kappa2 = 2 * pi * 3.37e6, eta = 0.31;
    const double inv_tau = 2 * pi * 2.54e6;
    const double nbar = nbar_from_inv_tau(inv_tau, chi2, kappa2, eta);
    CHECK(calibration(chi2, kappa2, nbar, eta, 1e-6).inv_tau ==
          doctest::Approx(inv_tau).epsilon(1e-9));

    auto dark = calibration(chi, kappa, 0.0, 1.0, 1e-6);
    CHECK(dark.gamma_m == 0.0);
    CHECK(dark.S == 0.0);
    CHECK_THROWS(calibration(chi, 0.0, 0.5, 1.0, 1e-6));
}

TEST_CASE("record binning") {
    ReadoutModel model;
    auto single = bin_record(std::vector<double>(100, 0.3), model);
    CHECK(shannon_entropy(single.probs) == doctest::Approx(0.0));

    std::vector<double> uniform;
    for (int b = 0; b < model.bins; ++b) uniform.push_back(model.bin_center(b));
    auto flat = bin_record(uniform, model);
    CHECK(shannon_entropy(flat.probs) == doctest::Approx(std::log2(52.0)).epsilon(1e-12));
    CHECK(std::abs(shannon_entropy(flat.probs) - 5.70044) < 1e-5);

    CHECK_THROWS(bin_record({}, model));

    // out-of-range samples clamp to the edge bins
    auto clamped = bin_record({-100.0, 100.0}, model);
    CHECK(clamped.counts.front() == 1);
    CHECK(clamped.counts.back() == 1);
}

TEST_CASE("histogram matches analytic bin masses") {
    const double s = 0.375;
    ReadoutModel model;
    Rng rng(99);
    const long n = 1000000;
    std::vector<double> samples(n);
    for (auto& v : samples) v = rng.normal() / std::sqrt(s);
    auto hist = bin_record(samples, model);
    for (int b = 0; b < model.bins; ++b) {
        const double lo = model.j_min + b * model.bin_width();
        const double hi = lo + model.bin_width();
        const double sig = 1.0 / std::sqrt(s);
        const double mass =
            0.5 * (std::erf(hi / (sig * std::sqrt(2.0))) - std::erf(lo / (sig * std::sqrt(2.0))));
        const double err = std::sqrt(std::max(mass * (1 - mass) / n, 1e-18));
        // 4 sigma: 52 simultaneous comparisons make 3 sigma a coin flip
        CHECK(std::abs(hist.probs[b] - mass) < 4 * err + 1e-9);
    }
}

TEST_CASE("decay channel") {
    auto one = QubitState::from_bloch(0, 0, -1);  // |1>
    CHECK((decay_channel(one, 0.0, 10e-6, 0.0).matrix() - one.matrix()).norm() < 1e-12);
    CHECK(decay_channel(one, 1.0, 1e-9, 0.0).bloch().z == doctest::Approx(1.0).epsilon(1e-9));

    auto plus = QubitState::from_bloch(1, 0, 0);
    auto dephased = decay_channel(plus, 1.0, 1e30, 1.0);  // gamma_phi * t = 1
    CHECK(dephased.bloch().x == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));

    Rng rng(31);
    for (int k = 0; k < 1000; ++k) {
        double z = rng.uniform(-1, 1), r = rng.uniform() * std::sqrt(1 - z * z);
        auto st = QubitState::from_bloch(r, 0, z);
        auto out = decay_channel(st, rng.uniform(0, 3e-6), 1e-6, rng.uniform(0, 1e6));
        CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(out.purity() <= 1.0 + 1e-12);  // construction validates PSD
    }
}

TEST_CASE("correlated tomography") {
    ReadoutModel model;
    MeasurementStrength s{0.375};

    auto rows0 = correlated_tomography(QubitState{}, 100000, s, MeasurementAxis{0.0}, model, 5);
    for (const auto& row : rows0)
        if (!row.underfilled) CHECK(row.pred_z == doctest::Approx(1.0).epsilon(1e-9));

    auto plus = QubitState::from_bloch(1, 0, 0);
    auto rows = correlated_tomography(plus, 1000000, s, MeasurementAxis{0.0}, model, 5);
    bool found = false;
    for (const auto& row : rows) {
        if (row.underfilled) continue;
        if (std::abs(row.j_center - 1.0) < model.bin_width()) {
            CHECK(std::abs(row.pred_z - std::tanh(0.375 * row.j_center)) < 1e-9);
            found = true;
        }
        const double err = 4.0 / std::sqrt(static_cast<double>(row.count));
        CHECK(std::abs(row.sampled_z - row.pred_z) < err + 0.02);
        CHECK(std::abs(row.sampled_y) < err + 0.02);
    }
    CHECK(found);

    // zero strength leaves the preparation untouched
    auto weak0 = correlated_tomography(plus, 100000, MeasurementStrength{1e-9},
                                       MeasurementAxis{0.0}, model, 5);
    for (const auto& row : weak0)
        if (!row.underfilled) CHECK(std::abs(row.pred_x - 1.0) < 1e-6);
}

}  // TEST_SUITE
