#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "msparse/fields.hpp"
#include "msparse/grid.hpp"

using namespace msparse;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("msparse_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

VectorField shear(const Grid3& g) {
  return sample_field(g, [](double, double y, double) { return Eigen::Vector3d(std::sin(y), 0, 0); });
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid3(6), RangeError);
  CHECK_THROWS_AS(Grid3(9), RangeError);
  CHECK_THROWS_AS(Grid3(16, 2.0), RangeError);
  const Grid3 g(16, 8.0);
  CHECK(g.spacing() == 0.5);
  CHECK(g.flat(-1, 0, 0) == g.flat(15, 0, 0));
  CHECK((g.unflat(g.flat(3, 4, 5)) == Index3(3, 4, 5)).all());
}

TEST_CASE("spectral curl of a shear layer matches the analytic curl") {
  const Grid3 g(32);
  const VectorField w = curl(shear(g));
  double err = 0.0;
  for (Eigen::Index f = 0; f < g.size(); ++f) {
    const Point x = g.center(g.unflat(f));
    err = std::max({err, std::abs(w.data()(f, 0)), std::abs(w.data()(f, 1)),
                    std::abs(w.data()(f, 2) + std::cos(x[1]))});
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("curl annihilates constants and gradients") {
  const Grid3 g(16);
  VectorField c(g);
  c.data().col(0).setConstant(2.5);
  c.data().col(2).setConstant(-1.0);
  CHECK(sup_norm(curl(c)) <= 1e-12);

  const ScalarField phi = sample_scalar(g, [](double x, double y, double) { return std::sin(x) * std::sin(y); });
  CHECK(sup_norm(curl(gradient(phi))) <= 1e-10);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ScalarField pot = random_band_limited_scalar(g, 4.0, seed);
    CHECK(sup_norm(curl(gradient(pot))) <= 1e-10);
  }
}

TEST_CASE("random band-limited fields are divergence-free") {
  const Grid3 g(16);
  const VectorField f = random_band_limited_field(g, 4.0, 7);
  CHECK(sup_norm(f) == doctest::Approx(1.0));
  CHECK(divergence(f).data().abs().maxCoeff() <= 1e-10);
}

TEST_CASE("sup norm") {
  const Grid3 g(32);
  const VectorField f = shear(g);
  CHECK(sup_norm(f) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sup_norm(VectorField(g)) == 0.0);
  CHECK(sup_norm(3.0 * f) == doctest::Approx(3.0 * sup_norm(f)).epsilon(1e-15));
}

TEST_CASE("ball kernel counts voxels") {
  const Grid3 g(32);
  const BallKernel k(g, 0.9);
  CHECK(k.voxel_count() == static_cast<std::int64_t>(k.mask().data().sum()));
  CHECK(k.volume_error() < 0.1);
  CHECK_THROWS_AS(BallKernel(g, 4.0), RangeError);
}

TEST_CASE("sliding ball Lp of a constant field") {
  const Grid3 g(32);
  VectorField f(g);
  f.data().col(0).setOnes();
  for (double r : {0.4, 0.75, 1.0}) {
    const ScalarField s = sliding_ball_lp(f, 2.0, r);
    const auto kernel = ball_kernel(g, r);
    const double discrete = std::sqrt(kernel->discrete_volume());
    CHECK(s.data().maxCoeff() == doctest::Approx(discrete).epsilon(1e-12));
    CHECK(s.data().minCoeff() == doctest::Approx(discrete).epsilon(1e-12));
    const double continuum = std::sqrt(kUnitBallVolume * r * r * r);
    const double ratio = discrete / continuum;
    CHECK(std::abs(ratio * ratio - 1.0) == doctest::Approx(kernel->volume_error()).epsilon(1e-9));
  }
  CHECK(sliding_ball_lp(VectorField(g), 2.0, 0.5).data().abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(sliding_ball_lp(f, 2.0, 0.1), RangeError);
  CHECK_THROWS_AS(sliding_ball_lp(f, 2.0, 3.5), RangeError);
  CHECK_THROWS_AS(sliding_ball_lp(f, 0.5, 0.5), RangeError);
}

TEST_CASE("sliding ball Lp peaks at the center of a compact bump") {
  const Grid3 g(32);
  const double r = 1.0;
  const Index3 x0(10, 20, 5);
  const Point c0 = g.center(x0);
  const VectorField f = sample_field(g, [&](double x, double y, double z) {
    const double d = g.displacement(c0, Point(x, y, z)).norm() / (r / 4);
    return Eigen::Vector3d(std::max(0.0, 1.0 - d * d), 0, 0);
  });
  const ScalarField s = sliding_ball_lp(f, 2.0, r);
  Eigen::Index arg = 0;
  s.data().maxCoeff(&arg);
  CHECK(s.data()[g.flat(x0)] == doctest::Approx(s.data()[arg]).epsilon(1e-12));
  // brute-force scan agrees on the maximum
  double brute_max = 0.0;
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j)
      for (int k = -4; k <= 4; ++k)
        brute_max = std::max(brute_max, ball_lp_bruteforce(f, 2.0, x0 + Index3(i, j, k), r));
  CHECK(brute_max == doctest::Approx(s.data()[arg]).epsilon(1e-10));
}

TEST_CASE("sliding ball Lp matches the brute-force oracle") {
  std::mt19937_64 rng(42);
  for (int n : {8, 16}) {
    const Grid3 g(n);
    std::uniform_real_distribution<double> radius(g.spacing() * 1.01, 1.0);
    std::uniform_real_distribution<double> expo(1.0, 4.0);
    std::uniform_int_distribution<int> idx(0, n - 1);
    for (int trial = 0; trial < 6; ++trial) {
      const VectorField f = random_band_limited_field(g, n / 4.0, 100 + trial);
      const double r = radius(rng);
      const double p = expo(rng);
      const ScalarField fast = sliding_ball_lp(f, p, r);
      for (int s = 0; s < 20; ++s) {
        const Index3 x(idx(rng), idx(rng), idx(rng));
        const double brute = ball_lp_bruteforce(f, p, x, r);
        CHECK(std::abs(fast.data()[g.flat(x)] - brute) <= 1e-10 * brute);
      }
    }
  }
}

TEST_CASE("brute-force ball Lp edge cases") {
  const Grid3 g(16);
  CHECK(ball_lp_bruteforce(VectorField(g), 2.0, Index3(1, 2, 3), 0.8) == 0.0);
  const VectorField f = random_band_limited_field(g, 4.0, 3);
  const Index3 x(4, 5, 6);
  const double mag = std::sqrt(f.data().row(g.flat(x)).square().sum());
  const double h3 = g.voxel_volume();
  CHECK(ball_lp_bruteforce(f, 3.0, x, 0.4 * g.spacing()) ==
        doctest::Approx(std::pow(std::pow(mag, 3.0) * h3, 1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("sliding ball Lp is translation equivariant and homogeneous") {
  const Grid3 g(16);
  const VectorField f = random_band_limited_field(g, 4.0, 11);
  const ScalarField base = sliding_ball_lp(f, 2.0, 0.9);
  VectorField shifted(g);
  const Index3 shift(3, -5, 7);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    shifted.data().row(g.flat(g.unflat(i) + shift)) = f.data().row(i);
  }
  const ScalarField moved = sliding_ball_lp(shifted, 2.0, 0.9);
  double err = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(moved.data()[g.flat(g.unflat(i) + shift)] - base.data()[i]) / base.data()[i]);
  }
  CHECK(err <= 1e-12);

  const ScalarField scaled = sliding_ball_lp(-2.5 * f, 2.0, 0.9);
  CHECK(((scaled.data() - 2.5 * base.data()).abs() / base.data()).maxCoeff() <= 1e-12);
}

TEST_CASE("field files round trip bit-exactly") {
  const Grid3 g(16);
  const VectorField f = random_band_limited_field(g, 4.0, 5);
  const std::string path = temp_path("roundtrip.fld");
  save_field(f, path);
  const VectorField back = load_field(path);
  CHECK(back.grid() == g);
  CHECK(std::memcmp(back.data().data(), f.data().data(), sizeof(double) * 3 * g.size()) == 0);

  const std::string first = slurp(path);
  save_field(f, path);
  CHECK(slurp(path) == first);

  const std::string header = first.substr(0, first.find('\n') + 1);
  CHECK(header == "{\"version\":1,\"n\":16,\"box_len\":6.283185307179586,\"ncomp\":3,\"dtype\":\"f64le\",\"order\":\"zyx-c\"}\n");
  CHECK(fs::file_size(path) == header.size() + 3 * g.size() * 8);

  ScalarField s(g);
  s.data().setConstant(1.25);
  save_field(s, path);
  CHECK(load_scalar_field(path).data().isApproxToConstant(1.25));
  CHECK_THROWS_AS(load_field(path), LoadError);
  fs::remove(path);
}

TEST_CASE("field loading reports distinct errors") {
  auto kind_of = [](const std::string& path) {
    try {
      load_field(path);
    } catch (const LoadError& e) {
      return e.kind();
    }
    FAIL("expected a load error");
    return LoadError::Kind::Io;
  };
  CHECK(kind_of(temp_path("does_not_exist.fld")) == LoadError::Kind::Io);

  const std::string path = temp_path("bad.fld");
  {
    std::ofstream out(path, std::ios::binary);
    out << "{\"version\":1,\"n\":32,\"box_len\":6.283185307179586,\"ncomp\":3,\"dtype\":\"f64le\",\"order\":\"zyx-c\"}\n";
    const std::vector<double> payload(16 * 16 * 16 * 3, 0.5);
    out.write(reinterpret_cast<const char*>(payload.data()), payload.size() * 8);
  }
  CHECK(kind_of(path) == LoadError::Kind::SizeMismatch);

  {
    std::ofstream out(path, std::ios::binary);
    out << "not json\n";
  }
  CHECK(kind_of(path) == LoadError::Kind::MalformedHeader);

  const Grid3 g(8);
  VectorField f(g);
  f.data()(17, 1) = std::numeric_limits<double>::quiet_NaN();
  save_field(f, path);
  CHECK(kind_of(path) == LoadError::Kind::NonFinite);
  fs::remove(path);

  CHECK_THROWS_AS(save_field(f, "/nonexistent_dir/x.fld"), IoError);
}
