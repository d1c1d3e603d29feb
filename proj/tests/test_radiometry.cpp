#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "risvlc/radiometry.hpp"

using namespace risvlc;

namespace {

SteeringGeometry random_geometry() {
    return SteeringGeometry{oracle::uniform(2, 40), oracle::uniform(0.1, 3), oracle::uniform(0.01, 3), 1.0,
                            oracle::uniform(1.3, 2.5)};
}

IncidentWave wave(double lambda_nm, double theta_deg, int m = 1) {
    return IncidentWave{Wavelength{lambda_nm}, Angle::degrees(theta_deg), 1.0, m};
}

}  // namespace

TEST(Transmittance, CosineLaw) {
    for (int i = 0; i < 300; ++i) {
        const auto g = random_geometry();
        const double lam = oracle::uniform(300, 1000);
        const double th = oracle::uniform(0, 89.99);
        const int m = i % 2;
        TransmittanceResult t0, t1;
        try {
            t0 = transmittance(g, wave(lam, 0, m));
            t1 = transmittance(g, wave(lam, th, m));
        } catch (const EvanescentOrder&) {
            continue;
        }
        ASSERT_GT(t0.value, 0.0);
        EXPECT_NEAR(t1.value / t0.value, std::cos(Angle::degrees(th).rad()), 1e-12);
        EXPECT_EQ(t1.incidence_factor, std::cos(Angle::degrees(th).rad()));
    }
}

TEST(Transmittance, ExactlyZeroAtGrazingIncidence) {
    const auto t = transmittance(SteeringGeometry{4, 0.75, 1, 1, 1.5}, wave(550, 90, 0));
    EXPECT_EQ(t.value, 0.0);
    EXPECT_EQ(t.captured_power_w, 0.0);
    EXPECT_EQ(t.incidence_factor, 0.0);
}

TEST(Transmittance, EnergyConservation) {
    for (int i = 0; i < 300; ++i) {
        const auto g = random_geometry();
        auto w = wave(oracle::uniform(300, 1000), oracle::uniform(0, 60), 0);
        w.power_w = oracle::uniform(0, 5);
        const auto t = transmittance(g, w);
        EXPECT_LE(t.captured_power_w, w.power_w);
        EXPECT_GE(t.value, 0.0);
        EXPECT_LE(t.value, 1.0);
        EXPECT_DOUBLE_EQ(t.captured_power_w, t.value * w.power_w);
    }
}

TEST(Transmittance, NondecreasingInPdLength) {
    for (int i = 0; i < 100; ++i) {
        auto g = random_geometry();
        const auto w = wave(oracle::uniform(300, 1000), oracle::uniform(0, 60), 0);
        double prev = 0.0;
        for (double x = 0.001; x < 50; x *= 1.5) {
            g.pd_length_mm = x;
            const double t = transmittance(g, w).value;
            EXPECT_GE(t, prev - 1e-9);
            prev = t;
        }
    }
}

TEST(Transmittance, PropagatesEvanescentOrder) {
    EXPECT_THROW(transmittance(SteeringGeometry{0.4, 1, 1, 1, 1.1}, wave(800, 90, 1)), EvanescentOrder);
}

TEST(TuningGain, IdentityAndAntisymmetry) {
    for (int i = 0; i < 200; ++i) {
        const auto a = random_geometry();
        const auto b = random_geometry();
        const auto w = wave(oracle::uniform(300, 1000), oracle::uniform(0, 80), 0);
        EXPECT_EQ(tuning_gain(a, a, w).gain, 0.0);
        const double ab = tuning_gain(a, b, w).gain;
        const double ba = tuning_gain(b, a, w).gain;
        EXPECT_EQ(ab, -ba);
        EXPECT_GE(ab, -1.0);
        EXPECT_LE(ab, 1.0);
    }
}

TEST(TuningGain, NamesFailingState) {
    const SteeringGeometry ok{4, 1, 1, 1, 1.5};
    const SteeringGeometry bad{0.4, 1, 1, 1, 1.1};
    try {
        (void)tuning_gain(ok, bad, wave(800, 90, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EvanescentOrder);
        EXPECT_NE(std::string(e.what()).find("after"), std::string::npos);
    }
}

TEST(Grid, LinearAndLog) {
    const auto lin = make_grid(400, 700, 4);
    EXPECT_EQ(lin, (std::vector<double>{400, 500, 600, 700}));
    const auto lg = make_grid(1, 1000, 4, GridSpacing::Log);
    EXPECT_EQ(lg.front(), 1.0);
    EXPECT_EQ(lg.back(), 1000.0);
    EXPECT_NEAR(lg[1], 10.0, 1e-12);
    EXPECT_THROW(make_grid(1, 2, 1), RangeError);
}

TEST(WavelengthSweep, GuardBandAndPerPointErrors) {
    const SteeringGeometry g{0.6, 1, 1, 1, 1.2};
    EXPECT_THROW(wavelength_sweep(g, wave(550, 0), 150, 700, 5), RangeError);
    const auto s = wavelength_sweep(g, wave(550, 0), 400, 800, 5);
    ASSERT_EQ(s.size(), 5u);
    EXPECT_TRUE(s.front().result.has_value());
    // 800 nm first order through a 0.6 um slit into n=1.2 does not propagate.
    EXPECT_FALSE(s.back().result.has_value());
    EXPECT_EQ(s.back().error, ErrorKind::EvanescentOrder);
    std::ostringstream os;
    write_csv(os, s);
    EXPECT_NE(os.str().find("nan"), std::string::npos);
    EXPECT_EQ(os.str().rfind("wavelength_nm,transmittance,incidence_factor,captured_power_w\n", 0), 0u);
}
