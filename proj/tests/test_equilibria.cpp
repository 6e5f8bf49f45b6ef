#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "chermnykh/equilibria.hpp"
#include "doctest.h"

using namespace chermnykh;

namespace {

// High-precision collinear roots for the classical problem, one row per mu:
// {mu, L1, L2, L3}
constexpr double classical_roots[][4] = {
    {3.00348e-6, 0.99002659452701408644, 1.010034115758330621356, -1.000001251449999998527},
    {9.537e-4, 0.9323697524160932962744, 1.068826326563329836893, -1.000397374952828902554},
    {0.01, 0.8480787129760951808784, 1.146765042123804486755, -1.004166611997499402605},
    {0.1, 0.6090351100232024638772, 1.259699832902331415024, -1.041608908571059966088},
};

}  // namespace

TEST_CASE("point names") {
  CHECK(std::string(point_name(PointIndex::L1)) == "L1");
  CHECK(std::string(point_name(PointIndex::L5)) == "L5");
}

TEST_CASE("series seeds at mu = 0.01") {
  CHECK(taylor_seed(PointIndex::L1, 0.01) ==
        doctest::Approx(0.8484283560416000969886).epsilon(1e-15));
  CHECK(taylor_seed(PointIndex::L2, 0.01) ==
        doctest::Approx(1.146447931738003670164).epsilon(1e-15));
  CHECK(taylor_seed(PointIndex::L3, 0.01) ==
        doctest::Approx(-1.004166611999702610597).epsilon(1e-15));
  CHECK_THROWS_AS(taylor_seed(PointIndex::L4, 0.01), param_error);
  CHECK_THROWS_AS(taylor_seed(PointIndex::L1, 0.0), param_error);
  CHECK_THROWS_AS(taylor_seed(PointIndex::L1, 0.5), param_error);
}

TEST_CASE("classical collinear points across mass ratios") {
  for (const auto& row : classical_roots) {
    auto p = make_params(row[0], 1.0, 0.0, 0.0, 0.01);
    for (int i = 0; i < 3; ++i) {
      auto idx = static_cast<PointIndex>(i);
      LagrangePoint pt = solve_collinear(p, idx);
      CAPTURE(row[0]);
      CAPTURE(i);
      CHECK(std::abs(pt.x - row[i + 1]) < 1e-10);
      CHECK(pt.y == 0.0);
      CHECK(pt.residual < 1e-12);
      CHECK_FALSE(pt.multiple_roots);
    }
  }
}

TEST_CASE("classical triangular points are exactly equilateral") {
  for (double mu : {3.00348e-6, 9.537e-4, 0.01, 0.1}) {
    auto p = make_params(mu, 1.0, 0.0, 0.0, 0.01);
    LagrangePoint l4 = solve_triangular(p, PointIndex::L4);
    CHECK(std::abs(l4.x - (0.5 - mu)) < 1e-12);
    CHECK(std::abs(l4.y - std::sqrt(3.0) / 2.0) < 1e-12);
    CHECK(l4.residual < 1e-12);
    LagrangePoint l5 = solve_triangular(p, PointIndex::L5);
    CHECK(std::abs(l5.x - l4.x) < 1e-12);
    CHECK(std::abs(l5.y + l4.y) < 1e-12);
  }
}

TEST_CASE("fully perturbed points match the high-precision solutions") {
  // q1=0.75, a2=0.05, mb=0.4, T=0.01
  auto pj = make_params(mu_sun_jupiter, 0.75, 0.05, 0.4, 0.01);
  auto pts_j = locate_all(pj);
  CHECK(std::abs(pts_j[0].x - 0.81125375696483670137) < 1e-10);
  CHECK(std::abs(pts_j[1].x - 1.0881357637215951564) < 1e-10);
  CHECK(std::abs(pts_j[2].x - -0.82569372196333807468) < 1e-10);
  CHECK(std::abs(pts_j[3].x - 0.40366531422331772697) < 1e-10);
  CHECK(std::abs(pts_j[3].y - 0.7196115222516750417) < 1e-10);

  auto pe = make_params(mu_sun_earth, 0.75, 0.05, 0.4, 0.01);
  auto pts_e = locate_all(pe);
  CHECK(std::abs(pts_e[0].x - 0.82546873463041931288) < 1e-10);
  CHECK(std::abs(pts_e[1].x - 1.0218862093166340022) < 1e-10);
  CHECK(std::abs(pts_e[2].x - -0.82552717070543573782) < 1e-10);
  CHECK(std::abs(pts_e[3].x - 0.40462278982465551004) < 1e-10);
  CHECK(std::abs(pts_e[3].y - 0.71956404006917686035) < 1e-10);

  for (const auto& pt : pts_e) {
    CHECK(pt.residual < 1e-12);
    CHECK_FALSE(pt.multiple_roots);
  }
  CHECK(std::abs(pts_e[4].x - pts_e[3].x) < 1e-12);
  CHECK(std::abs(pts_e[4].y + pts_e[3].y) < 1e-12);
}

TEST_CASE("inner point under belt and radiation variations") {
  // rows: {q1, a2, mb, L1 root} at Sun-Earth mu, T=0.01
  constexpr double cases[][4] = {
      {0.5, 0.0, 0.25, 0.7477671754247303406},
      {0.5, 0.0, 0.5, 0.72840887039292045579},
      {0.75, 0.25, 0.25, 0.79614401645020707458},
      {0.75, 0.5, 0.25, 0.75145535667403947447},
      {0.75, 0.0, 0.25, 0.85394703957066953977},
      {0.75, 0.0, 0.5, 0.82681049915277971632},
  };
  for (const auto& c : cases) {
    auto p = make_params(mu_sun_earth, c[0], c[1], c[2], 0.01);
    LagrangePoint pt = solve_collinear(p, PointIndex::L1);
    CAPTURE(c[0]);
    CAPTURE(c[1]);
    CAPTURE(c[2]);
    CHECK(std::abs(pt.x - c[3]) < 1e-10);
  }
}

TEST_CASE("locate_all returns the points in index order") {
  auto p = make_params(0.01, 0.9, 0.1, 0.2, 0.05);
  auto pts = locate_all(p);
  REQUIRE(pts.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(pts[i].index == static_cast<PointIndex>(i));
  CHECK(pts[0].x < 1.0);
  CHECK(pts[1].x > 1.0);
  CHECK(pts[2].x < 0.0);
  CHECK(pts[3].y > 0.0);
  CHECK(pts[4].y < 0.0);
}

TEST_CASE("near-equal masses empty the inner region") {
  auto p = make_params(0.4999999999999, 1.0, 0.0, 0.0, 0.01);
  CHECK_THROWS_AS(solve_collinear(p, PointIndex::L1), solver_error);
}

TEST_CASE("triangular solver rejects collinear indices and vice versa") {
  auto p = make_params(0.01, 1.0, 0.0, 0.0, 0.01);
  CHECK_THROWS_AS(solve_triangular(p, PointIndex::L1), param_error);
  CHECK_THROWS_AS(solve_collinear(p, PointIndex::L4), param_error);
}
