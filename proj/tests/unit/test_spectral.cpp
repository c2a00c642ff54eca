#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/operators.hpp"
#include "nslab/random_fields.hpp"
#include "nslab/snapshot_io.hpp"
#include "nslab/transform.hpp"
#include "oracles.hpp"

using namespace nslab;

namespace {

const double pi = std::numbers::pi;

double rel(double err, double ref) { return ref > 0 ? err / ref : err; }

double max_abs_diff(const RealScalarField& a, const RealScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec(3), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(2), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(8, -1.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(8, 2 * pi, 0.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec(8, 2 * pi, 1.5), InvalidArgument);
  CHECK(GridSpec(32).dealias_cutoff() == 10);
  CHECK(GridSpec(24).dealias_cutoff() == 7);
  CHECK(GridSpec(16, 2 * pi, 1.0).dealias_cutoff() == 7);
}

TEST_CASE("forward transform of a constant has only the mean mode") {
  const GridSpec g(16);
  const auto f = forward_transform(RealScalarField::sample(g, [](double, double, double) { return 1.0; }));
  CHECK(std::abs(f.at(0, 0, 0) - Complex(1.0, 0.0)) < 1e-15);
  double rest = 0.0;
  for_each_mode(g, [&](std::size_t i, int kx, int ky, int kz) {
    if (kx || ky || kz) rest = std::max(rest, std::abs(f.coeffs()[i]));
  });
  CHECK(rest < 1e-15);
}

TEST_CASE("forward transform of sin x1 has two conjugate coefficients") {
  const GridSpec g(16);
  const auto f = forward_transform(RealScalarField::sample(g, [](double x, double, double) { return std::sin(x); }));
  CHECK(std::abs(f.at(1, 0, 0) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(f.at(-1, 0, 0) - Complex(0.0, 0.5)) < 1e-15);
  double rest = 0.0;
  for_each_mode(g, [&](std::size_t i, int kx, int ky, int kz) {
    if (!(kx == 1 && ky == 0 && kz == 0)) rest = std::max(rest, std::abs(f.coeffs()[i]));
  });
  CHECK(rest < 1e-15);
}

TEST_CASE("forward transform matches a direct DFT") {
  const GridSpec g(8);
  const auto u = RealScalarField::sample(g, [](double x, double y, double z) {
    return std::exp(std::sin(x) * std::cos(2 * y)) + std::cos(x + 3 * z) * y;
  });
  const auto f = forward_transform(u);
  const int n = g.n();
  double err = 0.0;
  for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz) {
    Complex s = 0.0;
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
          const double phase = -2 * pi * (double(kx) * a + double(ky) * b + double(kz) * c) / n;
          s += u(a, b, c) * std::polar(1.0, phase);
        }
    s /= double(n) * n * n;
    err = std::max(err, std::abs(s - f.coeffs()[idx]));
  });
  CHECK(err < 1e-13);
}

TEST_CASE("inverse transform basics") {
  const GridSpec g(16);
  const auto zero = inverse_transform(SpectralScalarField(g));
  for (double v : zero.values()) CHECK(v == 0.0);
  SpectralScalarField c(g);
  c.set(0, 0, 0, Complex(2.5, 0.0));
  const auto cst = inverse_transform(c);
  for (double v : cst.values()) CHECK(std::abs(v - 2.5) < 1e-15);
}

TEST_CASE("round trip and Parseval on random fields") {
  const GridSpec g(32);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto phys = inverse_transform(random_scalar_field(g, seed, g.n() / 2 - 1));
    const auto back = inverse_transform(forward_transform(phys));
    double ref = 0.0;
    for (double v : phys.values()) ref = std::max(ref, std::abs(v));
    CHECK(rel(max_abs_diff(phys, back), ref) <= 1e-12);

    double quad = 0.0;
    for (double v : phys.values()) quad += v * v;
    quad *= g.cell_volume();
    const double spec = std::pow(spectral_l2(forward_transform(phys)), 2);
    CHECK(rel(std::abs(quad - spec), quad) <= 1e-12);
  }
}

TEST_CASE("inverse transform rejects non-Hermitian coefficients") {
  const GridSpec g(8);
  SpectralScalarField f(g);
  f.coeffs()[g.spectral_offset(0, 1, 0)] = Complex(1.0, 0.0);  // partner at (0,-1,0) left at 0
  CHECK_THROWS_AS(inverse_transform(f), InvalidArgument);
  SpectralScalarField h(g);
  h.coeffs()[0] = Complex(0.0, 1.0);  // imaginary mean
  CHECK_THROWS_AS(inverse_transform(h), InvalidArgument);
}

TEST_CASE("partial derivatives of closed forms") {
  const GridSpec g(16);
  const auto s = forward_transform(RealScalarField::sample(g, [](double x, double, double) { return std::sin(x); }));
  const auto c = RealScalarField::sample(g, [](double x, double, double) { return std::cos(x); });
  CHECK(max_abs_diff(inverse_transform(partial_derivative(s, 0)), c) <= 1e-12);
  const auto d2 = inverse_transform(partial_derivative(s, 1));
  for (double v : d2.values()) CHECK(std::abs(v) <= 1e-15);
  CHECK_THROWS_AS(partial_derivative(s, 3), InvalidArgument);
}

TEST_CASE("box length scales the derivative symbol") {
  const double L = 3.0;
  const GridSpec g(16, L);
  const double k = 2 * pi / L;
  const auto s = forward_transform(RealScalarField::sample(g, [&](double, double, double z) { return std::sin(2 * k * z); }));
  const auto c = RealScalarField::sample(g, [&](double, double, double z) { return 2 * k * std::cos(2 * k * z); });
  CHECK(max_abs_diff(inverse_transform(partial_derivative(s, 2)), c) <= 1e-12);
}

TEST_CASE("mixed partial derivatives commute") {
  const GridSpec g(32);
  const auto phi = random_scalar_field(g, 7);
  const auto a = partial_derivative(partial_derivative(phi, 0), 1);
  const auto b = partial_derivative(partial_derivative(phi, 1), 0);
  CHECK(spectral_l2(a - b) <= 1e-14 * spectral_l2(a));
}

TEST_CASE("vector calculus identities on random fields") {
  const GridSpec g(32);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto phi = random_scalar_field(g, seed);
    const auto v = random_vector_field(g, 100 + seed);
    const double s2 = spectral_l2(laplacian(phi));
    const double v2 = spectral_l2(laplacian(v));

    CHECK(spectral_l2(curl(gradient(phi))) <= 1e-12 * s2);
    CHECK(spectral_l2(divergence(gradient(phi)) - laplacian(phi)) <= 1e-12 * s2);
    CHECK(spectral_l2(divergence(curl(v))) <= 1e-12 * v2);
    const auto lhs = -1.0 * curl(curl(v)) + gradient(divergence(v));
    CHECK(spectral_l2(lhs - laplacian(v)) <= 1e-12 * v2);
  }
}

TEST_CASE("operators preserve Hermitian symmetry") {
  const GridSpec g(16);
  const auto v = random_vector_field(g, 3, 7);
  CHECK(v.hermitian_defect() <= 1e-13);
  CHECK(curl(v).hermitian_defect() <= 1e-13);
  CHECK(divergence(v).hermitian_defect() <= 1e-13);
  CHECK(gradient(divergence(v)).hermitian_defect() <= 1e-13);
  CHECK(laplacian(v).hermitian_defect() <= 1e-13);
  CHECK(partial_derivative(v, 2).hermitian_defect() <= 1e-13);
}

TEST_CASE("partial derivative is linear") {
  const GridSpec g(16);
  const auto u = random_scalar_field(g, 1);
  const auto v = random_scalar_field(g, 2);
  const double a = 1.7, b = -0.3;
  const auto lhs = partial_derivative(a * u + b * v, 1);
  const auto rhs = a * partial_derivative(u, 1) + b * partial_derivative(v, 1);
  CHECK(spectral_l2(lhs - rhs) <= 1e-14 * spectral_l2(lhs));
}

TEST_CASE("Nyquist plane has zero derivative symbol") {
  const GridSpec g(8);
  SpectralScalarField f(g);
  f.set(4, 0, 0, Complex(1.0, 0.0));
  CHECK(spectral_l2(partial_derivative(f, 0)) == 0.0);
}

TEST_CASE("dealiasing truncation") {
  const GridSpec g(32);
  auto v = truncate(random_scalar_field(g, 4, 15), 2.0 / 3.0);
  for_each_mode(g, [&](std::size_t i, int kx, int ky, int kz) {
    if (!g.retains(kx, ky, kz)) CHECK(v.coeffs()[i] == Complex(0.0, 0.0));
  });
}

TEST_CASE("resample preserves band-limited fields") {
  const GridSpec g(16), fine(32);
  const auto v = random_vector_field(g, 9);
  const auto up = resample(v, fine);
  CHECK(std::abs(spectral_l2(up) - spectral_l2(v)) <= 1e-13 * spectral_l2(v));
  const auto down = resample(up, g);
  CHECK(spectral_l2(down - v) <= 1e-14 * spectral_l2(v));
}

TEST_CASE("snapshot files round trip") {
  const GridSpec g(8, 2.0);
  const auto v = random_vector_field(g, 5);
  const Snapshot snap = make_snapshot(v, 0.125, "velocity");
  std::stringstream ss;
  write_snapshot(ss, snap);
  const std::string bytes = ss.str();
  CHECK(bytes.rfind("NSLAB-SNAPSHOT 1\n", 0) == 0);
  const Snapshot back = read_snapshot(ss);
  CHECK(back.header.n == 8);
  CHECK(back.header.box_length == 2.0);
  CHECK(back.header.time == 0.125);
  CHECK(back.header.field_name == "velocity");
  CHECK(back.header.components == 3);
  for (int c = 0; c < 3; ++c) CHECK(back.data[c].values() == snap.data[c].values());
  const auto v2 = snapshot_to_vector(back);
  CHECK(spectral_l2(v2 - v) <= 1e-14 * spectral_l2(v));
}

TEST_CASE("snapshot payload is little-endian x-fastest float64") {
  const GridSpec g(4);
  RealScalarField f(g);
  f(1, 0, 0) = 1.5;
  Snapshot s;
  s.header = {4, g.box_length(), 0.0, "p", 1};
  s.data.push_back(f);
  std::stringstream ss;
  write_snapshot(ss, s);
  const std::string bytes = ss.str();
  const std::size_t start = bytes.find("end\n") + 4;
  REQUIRE(bytes.size() == start + 64 * 8);
  double x;
  std::memcpy(&x, bytes.data() + start + 8, 8);
  CHECK(x == 1.5);
}

TEST_CASE("malformed snapshot header is rejected") {
  std::stringstream ss("NSLAB-SNAPSHOT 2\n");
  CHECK_THROWS_AS(read_snapshot(ss), Error);
}
