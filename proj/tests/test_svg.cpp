#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ncvx/ncvx.hpp"

using namespace ncvx;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

ConvexModel published_me() {
  return build_model(ModelVariant::Ellipsoid, fixtures::table2_spec(),
                     CorrelationMatrix(fixtures::from_upper3(fixtures::kCccMeTable2), CorrelationMethod::Ccc,
                                       ModelVariant::Ellipsoid));
}

}  // namespace

TEST(ConvexHull, DropsInteriorAndCollinearPoints) {
  const auto hull = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {1, 1}});
  ASSERT_EQ(hull.size(), 4u);
  for (std::size_t k = 0; k < hull.size(); ++k)
    EXPECT_GT(cross(hull[k], hull[(k + 1) % 4], hull[(k + 2) % 4]), 0.0);
}

TEST(EllipseOutline, UnitCircleForIndependentVariables) {
  const ConvexModel m = build_model(ModelVariant::Ellipsoid, standard_spec(3), CorrelationMatrix::identity(3));
  for (const Point2& p : ellipse_outline(m, 0, 2)) EXPECT_NEAR(std::hypot(p.x, p.y), 1.0, 1e-15);
}

TEST(EllipseOutline, LiesOnProjectedBoundary) {
  const ConvexModel m = published_me();
  const double r = 0.7623;
  for (const Point2& p : ellipse_outline(m, 0, 1)) {
    const double q = (p.x * p.x - 2 * r * p.x * p.y + p.y * p.y) / (1 - r * r);
    EXPECT_NEAR(q, 1.0, 1e-12);
  }
}

TEST(ProjectionSvg, EllipseWithOverlayMarksExcludedSamples) {
  const ConvexModel m = published_me();
  const std::string svg = projection_svg(m, 0, 1, fixtures::table2());
  EXPECT_NE(svg.find("viewBox=\"-1.1 -1.1 2.2 2.2\""), std::string::npos);
  EXPECT_NE(svg.find("ellipse (exact projection)"), std::string::npos);
  const AssessmentReport rep = fitness(m, fixtures::table2());
  EXPECT_EQ(count_of(svg, "fill:#d62728"), rep.excluded.size());
  EXPECT_EQ(count_of(svg, "<circle"), rep.enclosed);
  EXPECT_EQ(svg.find("display hull"), std::string::npos);
}

TEST(ProjectionSvg, ParallelepipedUsesLabeledDisplayHull) {
  const ConvexModel m = build_model(ModelVariant::MpII, standard_spec(3),
                                    CorrelationMatrix(fixtures::mp2_ccc_correlation_printed(), CorrelationMethod::Ccc,
                                                      ModelVariant::MpII));
  const std::string svg = projection_svg(m, 0, 2);
  EXPECT_NE(svg.find("display hull (visualization only)"), std::string::npos);
  EXPECT_THROW(ellipse_outline(m, 0, 2), Error);
  EXPECT_THROW(projection_svg(m, 0, 3), Error);
}

TEST(DisplayHull, EnclosesEveryProjectedVertex) {
  const ConvexModel m = build_model(ModelVariant::MpII, standard_spec(3),
                                    CorrelationMatrix(fixtures::mp2_ccc_correlation_printed(), CorrelationMethod::Ccc,
                                                      ModelVariant::MpII));
  const auto hull = display_hull(m, 0, 2);
  const Matrix v = parallelepiped_vertices(m);
  ASSERT_GE(hull.size(), 4u);
  for (std::size_t e = 0; e < hull.size(); ++e) {
    const Point2& a = hull[e];
    const Point2& b = hull[(e + 1) % hull.size()];
    for (std::size_t k = 0; k < v.rows(); ++k) EXPECT_GE(cross(a, b, {v(k, 0), v(k, 2)}), -1e-12);
  }
  // Extreme projected vertices in each probing direction belong to the hull.
  for (int t = 0; t < 360; ++t) {
    const double cx = std::cos(t * 0.0174533);
    const double cy = std::sin(t * 0.0174533);
    double best = -1e300, hull_best = -1e300;
    for (std::size_t k = 0; k < v.rows(); ++k) best = std::max(best, cx * v(k, 0) + cy * v(k, 2));
    for (const Point2& p : hull) hull_best = std::max(hull_best, cx * p.x + cy * p.y);
    EXPECT_NEAR(best, hull_best, 1e-12);
  }
  // Every hull corner stays inside the marginal square.
  for (const Point2& p : hull) {
    EXPECT_LE(std::abs(p.x), 1 + 1e-12);
    EXPECT_LE(std::abs(p.y), 1 + 1e-12);
  }
}

TEST(ProjectionSvg, NamesAreEscaped) {
  const MarginalSpec spec = make_marginal_spec({{"a<b", 0, 1}, {"c&d", 0, 1}});
  const ConvexModel m = build_model(ModelVariant::Ellipsoid, spec, CorrelationMatrix::identity(2));
  const std::string svg = projection_svg(m, 0, 1);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("c&amp;d"), std::string::npos);
  EXPECT_EQ(svg.find("a<b"), std::string::npos);
}
