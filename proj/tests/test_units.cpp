#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "polariton/units.hpp"

using namespace polariton;

TEST_CASE("wavenumber conversion") {
  CHECK(units::wavenumber_to_angular_frequency(0.0) == 0.0);
  CHECK(units::wavenumber_to_angular_frequency(1.0) == doctest::Approx(0.188365).epsilon(1e-6));
  CHECK(units::wavenumber_to_angular_frequency(1.0) == doctest::Approx(0.18836515673).epsilon(1e-10));

  const double b = units::wavenumber_to_angular_frequency(0.20286);
  CHECK(b == doctest::Approx(0.038213).epsilon(1e-4));
  CHECK(kPi / b == doctest::Approx(82.2).epsilon(1e-3));
}

TEST_CASE("internal time to picoseconds") {
  const auto ocs = MoleculeSpec::ocs();
  CHECK(internal_time_to_ps(0.0, ocs) == 0.0);
  CHECK(internal_time_to_ps(kPi, ocs) == doctest::Approx(82.2).epsilon(1e-3));
  CHECK(internal_time_to_ps(10.0 * kPi, ocs) == doctest::Approx(822.0).epsilon(1e-3));
}

TEST_CASE("time conversion round trip") {
  const auto ocs = MoleculeSpec::ocs();
  for (double t : {1e-6, 0.3, kPi, 123.456, 3.8e4, 1e7}) {
    const double back = ps_to_internal_time(internal_time_to_ps(t, ocs), ocs);
    CHECK(std::abs(back - t) / t <= 1e-12);
  }
}

TEST_CASE("rotational period of OCS") {
  const double tau0 = rotational_period_ps(MoleculeSpec::ocs());
  CHECK(tau0 >= 82.1);
  CHECK(tau0 <= 82.3);
}

TEST_CASE("molecule and cavity validation") {
  CHECK_NOTHROW(MoleculeSpec::ocs().validate());
  CHECK_THROWS_AS((MoleculeSpec{0.0, 0.715}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MoleculeSpec{-0.2, 0.715}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MoleculeSpec{0.2, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MoleculeSpec{0.2, std::nan("")}.validate()), std::invalid_argument);

  CHECK(CavitySpec{CavityConfig::Fundamental, 0.2}.frequency() == 2.0);
  CHECK(CavitySpec{CavityConfig::SecondHarmonic, 0.2}.frequency() == 4.0);
  CHECK_THROWS_AS((CavitySpec{CavityConfig::Fundamental, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(cavity_config_from_string("third_harmonic"), std::invalid_argument);
  CHECK(cavity_config_from_string(to_string(CavityConfig::SecondHarmonic)) == CavityConfig::SecondHarmonic);
}

TEST_CASE("Rabi coupling to field strength") {
  // mu E = B  =>  E = h c B / mu
  const double expected = 1.98644586e-23 * 0.20286 / (0.715 * 3.33564e-30) * 1e-5;
  CHECK(rabi_to_field_kv_per_cm(1.0, MoleculeSpec::ocs()) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rabi_to_field_kv_per_cm(1.0, MoleculeSpec::ocs()) == doctest::Approx(16.9).epsilon(1e-2));
  CHECK(rabi_to_field_kv_per_cm(0.0, MoleculeSpec::ocs()) == 0.0);
}

TEST_CASE("OCS preset file matches built-in constants") {
  std::ifstream in(std::string(POLARITON_SOURCE_DIR) + "/presets/ocs.json");
  REQUIRE(in);
  const auto j = nlohmann::json::parse(in);
  const auto ocs = MoleculeSpec::ocs();
  CHECK(j.at("molecule").at("B_cm1").get<double>() == ocs.rotational_constant_cm1);
  CHECK(j.at("molecule").at("mu_debye").get<double>() == ocs.dipole_debye);
  CHECK(j.at("cavity").at("g_over_B").get<double>() == CavitySpec{}.coupling_g);
  CHECK(j.at("derived").at("tau0_ps").get<double>() == doctest::Approx(rotational_period_ps(ocs)).epsilon(1e-3));
}
