#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace kforge;
using namespace kforge_test;
using kforge::io::Json;

namespace {

void expect_same_dgla(const DgLa& a, const DgLa& b) {
  EXPECT_EQ(a.space(), b.space());
  EXPECT_EQ(a.differential(), b.differential());
  ASSERT_EQ(a.bracket_constants().size(), b.bracket_constants().size());
  for (std::size_t n = 0; n < a.bracket_constants().size(); ++n) {
    EXPECT_EQ(a.bracket_constants()[n].key(), b.bracket_constants()[n].key());
    EXPECT_EQ(a.bracket_constants()[n].c, b.bracket_constants()[n].c);
  }
}

std::string schema_message(const Json& j) {
  try {
    io::dgla_from_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, ScalarForms) {
  EXPECT_EQ(io::scalar_from_json(Json::parse(R"(["1/2","-3"])"), ""), Scalar(mpq_class(1, 2), mpq_class(-3)));
  EXPECT_EQ(io::scalar_from_json(Json::parse(R"("5/10")"), ""), Scalar::rational(1, 2));
  EXPECT_EQ(io::scalar_from_json(Json::parse("7"), ""), Scalar(7));
  EXPECT_THROW(io::scalar_from_json(Json::parse("0.5"), ""), InputError);
  EXPECT_EQ(io::to_json(Scalar::i()).dump(), R"(["0","1"])");
}

TEST(Io, DglaRoundTrip) {
  auto toy = build_toy3();
  std::vector<DgLa> cases = {toy.dgla, build_torus_constant_dgla(2, 2).dgla,
                             build_twisted_dolbeault(2, Scalar(mpq_class(1), mpq_class(1))).dgla, sl2_dual_numbers()};
  for (const auto& L : cases) {
    const Json j = io::to_json(L);
    auto doc = io::dgla_from_json(Json::parse(io::dump(j)));
    expect_same_dgla(L, doc.dgla);
    EXPECT_FALSE(doc.metric.has_value());
    EXPECT_EQ(io::dump(io::to_json(doc.dgla)), io::dump(j));
  }
  std::mt19937_64 rng(seed() + 70);
  auto m = random_metric(toy.dgla.space(), rng);
  auto doc = io::dgla_from_json(io::to_json(toy.dgla, m));
  ASSERT_TRUE(doc.metric.has_value());
  EXPECT_EQ(doc.metric->gram, m.gram);
  EXPECT_EQ(io::metric_from_json(io::metric_to_json(m), toy.dgla.space()).gram, m.gram);
}

TEST(Io, SchemaErrorsNameThePath) {
  Json j = io::to_json(build_toy3().dgla);
  Json bad = j;
  bad["dims"][1] = 3;
  EXPECT_NE(schema_message(bad).find("/basis"), std::string::npos);
  bad = j;
  bad["bracket"][0][5] = "x";
  EXPECT_NE(schema_message(bad).find("/bracket/0/5"), std::string::npos);
  bad = j;
  bad["differential"][0][0][0] = Json::array({"1"});
  EXPECT_NE(schema_message(bad).find("/differential/0"), std::string::npos);
  bad = j;
  bad["scalar"] = "float";
  EXPECT_NE(schema_message(bad).find("/scalar"), std::string::npos);
  bad = j;
  bad.erase("degrees");
  EXPECT_FALSE(schema_message(bad).empty());
}

TEST(Io, ActionRoundTrip) {
  auto toy = build_toy3();
  auto a = io::action_from_json(io::to_json(toy.action), toy.dgla.space());
  ASSERT_TRUE(std::holds_alternative<GroupAction>(a));
  EXPECT_EQ(std::get<GroupAction>(a).generators, toy.action.generators);
  EXPECT_EQ(std::get<GroupAction>(a).declared_orders, toy.action.declared_orders);

  auto t = build_torus_constant_dgla(2, 2);
  auto x = build_inner_derivation(2, 2, Matrix::diagonal({1, -1}));
  auto b = io::action_from_json(io::to_json(x), t.dgla.space());
  ASSERT_TRUE(std::holds_alternative<InfinitesimalAction>(b));
  EXPECT_EQ(std::get<InfinitesimalAction>(b).derivations, x.derivations);
  EXPECT_THROW(io::action_from_json(Json{{"kind", "continuous"}}, t.dgla.space()), InputError);
}

TEST(Io, SeriesAndFamilyRoundTrip) {
  std::mt19937_64 rng(seed() + 71);
  auto t = build_torus_constant_dgla(2, 2);
  for (int n = 0; n < 5; ++n) {
    auto s = random_series(t.dgla.space(), 1, {"t1", "t2"}, 3, rng);
    EXPECT_EQ(io::graded_series_from_json(Json::parse(io::dump(io::to_json(s))), t.dgla.space()), s);
  }
  for (const auto& [L, m] : {std::pair{build_toy3().dgla, MetricData::identity(build_toy3().dgla.space())},
                             std::pair{t.dgla, t.metric}}) {
    auto h = hodge_data(L, m);
    auto f = solve_kuranishi(L, h, 4);
    const std::string text = io::dump(io::to_json(f, h, verify_family(L, h, f)));
    auto back = io::family_from_json(Json::parse(text), L.space());
    EXPECT_EQ(back.parameters, f.parameters);
    EXPECT_EQ(back.order, f.order);
    EXPECT_EQ(back.alpha, f.alpha);
    EXPECT_EQ(back.linear_part, f.linear_part);
    EXPECT_EQ(back.obstruction, f.obstruction);
    EXPECT_EQ(back.generator_indices, f.generator_indices);
    EXPECT_EQ(back.ideal_generators, f.ideal_generators);
    EXPECT_EQ(io::dump(io::to_json(back, h, verify_family(L, h, back))), text);
  }
}

TEST(Io, DumpIsCompactForShortArrays) {
  const std::string text = io::dump(Json{{"m", io::to_json(Matrix::identity(2))}});
  EXPECT_EQ(text, "{\n  \"m\": [[[\"1\",\"0\"],[\"0\",\"0\"]],[[\"0\",\"0\"],[\"1\",\"0\"]]]\n}\n");
}
