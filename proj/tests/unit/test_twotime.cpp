#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spindyn/twotime.hpp"

using namespace spindyn;

namespace {
using TT3 = TwoTimeFunction<double, 3>;

TT3 filled(Parity p, std::size_t n = 5) {
  TT3 f(TimeGrid(n, 0.1), p, 3);
  for (std::size_t i = 0; i < n; ++i) {
    f.append_row();
    for (std::size_t j = 0; j <= i; ++j) {
      Eigen::Matrix3d b;
      for (int r = 0; r < 9; ++r) b.data()[r] = 100.0 * i + 10.0 * j + r;
      f.set(i, j, b);
    }
  }
  return f;
}
}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(TimeGrid(1, 0.1), ValidationError);
  CHECK_THROWS_AS(TimeGrid(4, 0.0), ValidationError);
  CHECK(TimeGrid(4, 0.25).time(3) == 0.75);
}

TEST_CASE("parity reflection on access") {
  const TT3 s = filled(Parity::symmetric);
  const TT3 a = filled(Parity::antisymmetric);
  CHECK(s.get(1, 2) == s.get(2, 1).transpose());
  CHECK(a.get(1, 2) == Eigen::Matrix3d(-a.get(2, 1).transpose()));
  CHECK(s.get(1, 1) == Eigen::Matrix3d(s.at(1, 1)));
}

TEST_CASE("set/get round trip for every pair") {
  for (Parity p : {Parity::symmetric, Parity::antisymmetric}) {
    TT3 f(TimeGrid(6, 0.1), p, 3);
    for (std::size_t i = 0; i < 6; ++i) f.append_row();
    const double sign = p == Parity::symmetric ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const Eigen::Matrix3d b = Eigen::Matrix3d::Random();
        f.set(i, j, b);
        CHECK(f.get(j, i) == Eigen::Matrix3d(sign * b.transpose()));
        // writing through the upper triangle lands on the stored entry
        f.set(j, i, b);
        CHECK(f.get(j, i) == b);
      }
  }
}

TEST_CASE("access outside the filled extent throws") {
  TT3 f(TimeGrid(4, 0.1), Parity::symmetric, 3);
  f.append_row();
  f.append_row();
  CHECK_NOTHROW(f.get(1, 0));
  CHECK_THROWS_AS(f.get(2, 0), OutOfExtent);
  CHECK_THROWS_AS(f.get(0, 3), OutOfExtent);
  f.append_row();
  f.append_row();
  CHECK_THROWS_AS(f.append_row(), OutOfExtent);
}

TEST_CASE("trapezoid sums") {
  const double h = 0.1;
  const Eigen::Matrix2d c = (Eigen::Matrix2d() << 1, 2, 3, 4).finished();
  auto constant = [&](std::size_t) { return c; };
  CHECK(causal_integral(constant, 0, 4, h).isApprox(4 * h * c));
  CHECK(causal_integral(constant, 3, 3, h).isZero());
  auto affine = [&](std::size_t k) { return h * static_cast<double>(k); };
  CHECK(causal_integral(affine, 0, 2, h) == doctest::Approx(2 * h * h).epsilon(1e-15));

  for (std::size_t m : {10u, 40u, 160u}) {
    const double hm = 1.0 / static_cast<double>(m);
    auto sq = [&](std::size_t k) { return std::pow(hm * static_cast<double>(k), 2); };
    const double err = std::abs(causal_integral(sq, 0, m, hm) - 1.0 / 3.0);
    CHECK(err <= hm * hm / 6.0 + 1e-15);
  }
}

TEST_CASE("trapezoid converges at second order") {
  auto error = [](std::size_t m) {
    const double h = 2.0 / static_cast<double>(m);
    auto f = [&](std::size_t k) { return std::sin(h * static_cast<double>(k)); };
    return std::abs(causal_integral(f, 0, m, h) - (1.0 - std::cos(2.0)));
  };
  for (std::size_t m : {16u, 32u, 64u}) {
    const double ratio = error(m) / error(2 * m);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("memory grows with the triangle") {
  for (std::size_t n : {10u, 20u, 40u}) {
    TwoTimeFunction<double, 4> f(TimeGrid(n, 0.1), Parity::symmetric, 4);
    CHECK(f.allocated_bytes() == n * (n + 1) / 2 * 16 * sizeof(double));
    TwoTimeFunction<double, 4> d(TimeGrid(n, 0.1), Parity::symmetric, 4, Storage::equal_time);
    CHECK(d.allocated_bytes() == n * 16 * sizeof(double));
  }
}

TEST_CASE("binary checkpoint round trip") {
  const TT3 f = filled(Parity::antisymmetric, 4);
  std::stringstream ss;
  f.write(ss);
  const TT3 g = TT3::read(ss);
  CHECK(g.filled_rows() == f.filled_rows());
  CHECK(g.parity() == Parity::antisymmetric);
  CHECK(g.grid().dt == f.grid().dt);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(g.get(i, j) == f.get(i, j));

  std::stringstream junk("XXXX");
  CHECK_THROWS_AS(TT3::read(junk), IoError);
}
