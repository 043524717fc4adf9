#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ncvx/ncvx.hpp"

using namespace ncvx;

namespace {

Errc code_of_text(const std::string& text) {
  try {
    deserialize(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return Errc::InvalidArgument;
}

}  // namespace

TEST(ModelIo, RoundTripIsExact) {
  const CorrelationMatrix r = assemble_correlation_matrix({{0, 1, 0.7623}, {0, 2, -0.8831}, {1, 2, -0.6732}}, 3,
                                                          CorrelationMethod::Ccc, ModelVariant::Ellipsoid);
  const ConvexModel me = build_model(ModelVariant::Ellipsoid, fixtures::table2_spec(), r);
  const ConvexModel back = deserialize(serialize(me));
  EXPECT_EQ(back.variant(), ModelVariant::Ellipsoid);
  EXPECT_EQ(back.correlation().method(), CorrelationMethod::Ccc);
  EXPECT_EQ(back.correlation().matrix(), me.correlation().matrix());
  EXPECT_EQ(*back.covariance(), *me.covariance());
  EXPECT_EQ(back.characteristic(), me.characteristic());
  EXPECT_EQ(back.spec().names(), me.spec().names());
  EXPECT_EQ(serialize(back), serialize(me));
}

TEST(ModelIo, RoundTripEveryVariantOnBeamData) {
  const CorrelationMatrix r = scc_matrix(regularize(fixtures::cantilever_spec(), fixtures::cantilever()));
  for (ModelVariant v : kAllVariants) {
    const ConvexModel m = build_model(v, fixtures::cantilever_spec(), r);
    const ConvexModel back = deserialize(serialize(m));
    EXPECT_EQ(back.variant(), v);
    EXPECT_EQ(back.correlation().matrix(), m.correlation().matrix());
    if (m.shape()) {
      EXPECT_EQ(back.shape()->entries, m.shape()->entries) << variant_tag(v);
    }
    EXPECT_EQ(back.spec().lowers(), m.spec().lowers());
    EXPECT_EQ(back.spec().uppers(), m.spec().uppers());
  }
}

TEST(ModelIo, MissingKeysAndBadValues) {
  nlohmann::json j = model_to_json(build_model(ModelVariant::Ellipsoid, standard_spec(2), CorrelationMatrix::identity(2)));
  auto without = [&](const char* key) {
    nlohmann::json copy = j;
    copy.erase(key);
    return copy.dump();
  };
  EXPECT_EQ(code_of_text(without("variant")), Errc::ParseError);
  EXPECT_EQ(code_of_text(without("names")), Errc::ParseError);
  EXPECT_EQ(code_of_text(without("format_version")), Errc::ParseError);
  nlohmann::json bad = j;
  bad["format_version"] = 2;
  EXPECT_EQ(code_of_text(bad.dump()), Errc::ParseError);
  bad = j;
  bad["lower"] = {-1};
  EXPECT_EQ(code_of_text(bad.dump()), Errc::ParseError);
  bad = j;
  bad["correlation"] = {1, 0, 0, "x"};
  EXPECT_EQ(code_of_text(bad.dump()), Errc::ParseError);
  EXPECT_EQ(code_of_text("{ not json"), Errc::ParseError);
  EXPECT_EQ(code_of_text("[1, 2]"), Errc::ParseError);
  bad = j;
  bad["variant"] = "sphere";
  EXPECT_THROW(deserialize(bad.dump()), Error);
}

TEST(ModelIo, ScaledShapeFileLoadsAsMpII) {
  const ConvexModel m = deserialize(read_text_file(fixtures::data_path("ar_glasses_mp2.json")));
  EXPECT_EQ(m.variant(), ModelVariant::MpII);
  EXPECT_EQ(m.dimension(), 4u);
  EXPECT_EQ(m.spec().names(), (std::vector<std::string>{"Ta", "Va", "PA", "PB"}));
  ASSERT_TRUE(m.shape().has_value());
  for (std::size_t i = 0; i < 4; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < 4; ++j) sum += std::abs(m.shape()->entries(i, j));
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  // The derived correlation has a unit diagonal and is positive definite.
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(m.correlation()(i, i), 1.0, 1e-15);
  EXPECT_GT(min_eigenvalue(m.correlation().matrix()), 0.0);
  Vector mid(4);
  for (std::size_t i = 0; i < 4; ++i) mid[i] = m.spec().interval(i).midpoint();
  EXPECT_TRUE(m.contains(mid).inside);
}

TEST(ModelIo, ScaledShapeRowSumsAreChecked) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(fixtures::data_path("ar_glasses_mp2.json")));
  j["scaled_shape"][0] = j["scaled_shape"][0].get<double>() * 1.5;
  EXPECT_THROW(model_from_json(j), Error);
}

TEST(ModelIo, StandardFixturesLoad) {
  const ConvexModel me = deserialize(read_text_file(fixtures::data_path("standard2_me.json")));
  const ConvexModel mp = deserialize(read_text_file(fixtures::data_path("standard2_mp2.json")));
  EXPECT_EQ(me.variant(), ModelVariant::Ellipsoid);
  EXPECT_EQ(mp.variant(), ModelVariant::MpII);
  EXPECT_EQ(me.correlation().matrix(), Matrix::identity(2));
}

TEST(ModelIo, ReportJsonRoundTrip) {
  const ConvexModel m = build_model(ModelVariant::LowerTriangular, fixtures::table2_spec(),
                                    scc_matrix(regularize(fixtures::table2_spec(), fixtures::table2())));
  const AssessmentReport r = assess(m, fixtures::table2());
  const AssessmentReport back = report_from_json(nlohmann::json::parse(report_to_json(r).dump()));
  EXPECT_EQ(back.enclosed, r.enclosed);
  EXPECT_EQ(back.total, r.total);
  EXPECT_EQ(back.kappa, r.kappa);
  EXPECT_EQ(back.nu, r.nu);
  EXPECT_EQ(back.nu_bar, r.nu_bar);
  EXPECT_EQ(back.excluded, r.excluded);
  EXPECT_EQ(back.levels, r.levels);
  EXPECT_THROW(report_from_json(nlohmann::json::object()), Error);
}
