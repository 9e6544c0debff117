#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lrwave/profile.hpp"
#include "lrwave/pwlinear.hpp"
#include "test_support.hpp"

using namespace lrwave;

TEST_CASE("grid: validation and geometry") {
  CHECK_THROWS_AS(Grid(3, 10.0), ConfigError);   // odd q breaks window alignment
  CHECK_THROWS_AS(Grid(0, 10.0), ConfigError);
  CHECK_THROWS_AS(Grid(16, 10.03), ConfigError); // R not a multiple of h
  CHECK_THROWS_AS(Grid(16, -2.0), ConfigError);

  const Grid g(16, 60.0);
  CHECK(g.n() == 2 * 60 * 16 + 1);
  CHECK(g.n() % 2 == 1);
  CHECK(g.node(g.center()) == 0.0);
  CHECK(g.node(0) == doctest::Approx(-60.0));
  // every half-integer window edge m/2 lies on a node
  for (int m = 1; m <= 7; ++m) {
    const double edge = 0.5 * m;
    const double cells = edge * g.q();
    CHECK(cells == doctest::Approx(std::round(cells)));
  }
}

TEST_CASE("project_to_cone: idempotent on cone members") {
  const Grid g(4, 5.0);
  std::mt19937_64 rng(7);
  const Profile W = testing::random_cone_profile(g, rng);
  const Profile P = project_to_cone(g, W.values());
  CHECK((P.values() == W.values()).all());
}

TEST_CASE("project_to_cone: symmetry forcing and negative clamp") {
  const Grid g(2, 1.5);  // 7 nodes
  Eigen::ArrayXd raw(7);
  raw << 0.0, 0.2, 0.6, 1.0, 0.4, 0.2, 0.0;
  const Profile P = project_to_cone(g, raw);
  // mirror pair (0.6, 0.4) -> 0.5 on both sides
  CHECK(P.values()[2] == doctest::Approx(0.5));
  CHECK(P.values()[4] == doctest::Approx(0.5));
  CHECK(P.values()[3] == doctest::Approx(1.0));

  // one interior negative node: clamped to zero, half profile rearranged;
  // oracle is the explicit sort of the 4-entry half vector
  Eigen::ArrayXd raw2(7);
  raw2 << 0.0, 0.1, -0.3, 0.8, 0.5, 0.1, 0.0;
  const Profile P2 = project_to_cone(g, raw2);
  // symmetrized half (center outward): 0.8, (0.5-0.3)/2=0.1, 0.1, 0.0
  // clamp keeps all, sorted descending: 0.8, 0.1, 0.1, 0.0
  CHECK(P2.values()[3] == doctest::Approx(0.8));
  CHECK(P2.values()[4] == doctest::Approx(0.1));
  CHECK(P2.values()[5] == doctest::Approx(0.1));
  CHECK(P2.values()[6] == doctest::Approx(0.0));
}

TEST_CASE("project_to_cone: nonexpansive toward cone elements (QP oracle)") {
  // The half-profile rearrangement is nonexpansive toward nonincreasing
  // targets in the uniform metric on the half profile (the rearrangement
  // inequality); reference points include the exact isotonic least-squares
  // projection (PAVA, the quadratic-program solution) and random cone points.
  const Grid g(2, 2.0);  // 9 nodes
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto half_of = [&](const Eigen::ArrayXd& v) {
    std::vector<double> half;
    for (long k = g.center(); k < g.n(); ++k) half.push_back(v[k]);
    return half;
  };
  auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::ArrayXd raw(9);
    for (int i = 0; i < 9; ++i) raw[i] = noise(rng);
    // symmetrized, clamped input: the rearrangement step proper
    Eigen::ArrayXd pre(9);
    for (long k = 0; k < 9; ++k)
      pre[k] = std::max(0.0, 0.5 * (raw[k] + raw[g.mirror(k)]));
    const Profile P = project_to_cone(g, pre);

    const std::vector<double> x = half_of(pre);
    const std::vector<double> px = half_of(P.values());
    std::vector<std::vector<double>> refs;
    refs.push_back(testing::pava_nonincreasing(x));
    refs.push_back(half_of(testing::random_cone_profile(g, rng).values()));
    for (const auto& z : refs) {
      CHECK(dist(px, z) <= dist(x, z) + 1e-12);
    }
  }
}

TEST_CASE("project_to_cone: preserves the half-profile multiset norm") {
  const Grid g(4, 4.0);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  Eigen::ArrayXd pre(g.n());
  for (long k = 0; k <= g.center(); ++k) {
    const double v = pos(rng);
    pre[k] = v;
    pre[g.mirror(k)] = v;
  }
  const Profile P = project_to_cone(g, pre);
  double before = 0, after = 0;
  for (long k = g.center(); k < g.n(); ++k) {
    before += pre[k] * pre[k];
    after += P.values()[k] * P.values()[k];
  }
  CHECK(after == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("kinetic_energy: indicator anchors carry the grid correction") {
  const Grid g(16, 60.0);
  const Profile W0 = make_w0(1.0, g);
  // ideal value nu^2/2 = 0.5 with a one-cell correction <= h nu^2 / 2
  CHECK(std::abs(kinetic_energy(W0) - 0.5) <= 0.5 * g.h());
  CHECK(kinetic_energy(W0) == doctest::Approx(0.5 + g.h() / 3.0));

  const Profile WL = make_wl(0.1, 4, g);
  CHECK(std::abs(kinetic_energy(WL) - 0.1) <= 0.1 * g.h() / (2 * 4));

  const Profile zero(g, Eigen::ArrayXd::Zero(g.n()));
  CHECK(kinetic_energy(zero) == 0.0);
}

TEST_CASE("normalize_to: scaling law and round trip") {
  const Grid g(8, 20.0);
  std::mt19937_64 rng(3);
  const Profile W = testing::random_cone_profile(g, rng);
  const Profile W04 = normalize_to(W, 0.4);
  const Profile W01 = normalize_to(W04, 0.1);
  // K scales as lambda^2, so the 0.4 -> 0.1 rescale is exactly 1/2
  CHECK(W01.values()[g.center()] ==
        doctest::Approx(0.5 * W04.values()[g.center()]).epsilon(1e-15));
  CHECK(kinetic_energy(W01) == doctest::Approx(0.1).epsilon(1e-14));

  const Profile same = normalize_to(W04, kinetic_energy(W04));
  CHECK(kinetic_energy(same) == doctest::Approx(0.4).epsilon(1e-14));

  const Profile gauss = make_gaussian_seed(0.2, 2.0, g);
  CHECK(kinetic_energy(gauss) == doctest::Approx(0.2).epsilon(1e-14));

  const Profile zero(g, Eigen::ArrayXd::Zero(g.n()));
  CHECK_THROWS_AS(normalize_to(zero, 0.1), DomainError);
}

TEST_CASE("make_w0 / make_wl: sampled values") {
  const Grid g(16, 10.0);
  const Profile W0 = make_w0(1.0, g);
  CHECK(W0.values()[g.center()] == 1.0);
  // jump node carries the full inside value
  CHECK(W0.values()[g.center() + 8] == 1.0);
  CHECK(W0.values()[g.center() + 9] == 0.0);

  const Profile WL = make_wl(0.09, 4, g);
  CHECK(WL.values()[g.center()] == doctest::Approx(0.15));

  CHECK_THROWS_AS(make_wl(0.1, 11, g), DomainError);  // domain too small
}

TEST_CASE("reconstruct_x: prefix-sum anchors") {
  const Grid g(16, 10.0);
  const Profile zero(g, Eigen::ArrayXd::Zero(g.n()));
  CHECK(reconstruct_x(zero).abs().maxCoeff() == 0.0);

  const Profile W0 = make_w0(1.0, g);
  const Eigen::ArrayXd X = reconstruct_x(W0);
  CHECK(X[0] == 0.0);
  // total integral = nu with the half-cell jump correction
  CHECK(std::abs(X[g.n() - 1] - 1.0) <= g.h() * 1.000001);

  std::mt19937_64 rng(11);
  const Profile W = testing::random_cone_profile(g, rng);
  const Eigen::ArrayXd Xw = reconstruct_x(W);
  for (long i = 0; i + 1 < g.n(); ++i) CHECK(Xw[i + 1] >= Xw[i]);
  // X(R) equals the trapezoid L1 mass exactly (telescoping)
  CHECK(Xw[g.n() - 1] ==
        doctest::Approx(nodal_integral(g, W.values())).epsilon(1e-14));
}

TEST_CASE("l2_distance: anchors and symmetry") {
  const Grid g(16, 10.0);
  const Profile W0 = make_w0(1.0, g);
  CHECK(l2_distance(W0, W0) == 0.0);
  const Profile zero(g, Eigen::ArrayXd::Zero(g.n()));
  // |W0|_2 = 1 with the sampling correction sqrt(1 + 2h/3)
  CHECK(l2_distance(W0, zero) == doctest::Approx(std::sqrt(1.0 + 2.0 * g.h() / 3.0)));
  std::mt19937_64 rng(5);
  const Profile A = testing::random_cone_profile(g, rng);
  const Profile B = testing::random_cone_profile(g, rng);
  CHECK(l2_distance(A, B) == l2_distance(B, A));

  const Grid g2(16, 12.0);
  const Profile C = make_w0(1.0, g2);
  CHECK_THROWS_AS(l2_distance(W0, C), DomainError);
}

TEST_CASE("profile: constructor rejects cone violations") {
  const Grid g(2, 1.0);
  Eigen::ArrayXd bad(5);
  bad << 0.0, 0.5, 1.0, 0.4, 0.0;  // asymmetric
  CHECK_THROWS_AS(Profile(g, bad), DomainError);
  bad << 0.5, 0.2, 1.0, 0.2, 0.5;  // not nonincreasing
  CHECK_THROWS_AS(Profile(g, bad), DomainError);
  bad << -0.1, 0.2, 1.0, 0.2, -0.1;
  CHECK_THROWS_AS(Profile(g, bad), DomainError);
}
