#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levysheet/io.hpp"

using namespace levysheet;
using namespace levysheet::io;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, TripletRoundTrip) {
  const std::vector<json> inputs{
      json::parse(R"({"gamma":[0],"gaussian":[[1]]})"),
      json::parse(R"({"gamma":[0.5,-1],"gaussian":[[2,0.3],[0.3,1]],
                     "jumps":{"kind":"discrete","atoms":[{"x":[1,0],"mass":0.5},{"x":[0,-2],"mass":1.25}]}})"),
      json::parse(R"({"gamma":[0.1],"jumps":{"kind":"scaled","rate":2,"dist":{"name":"uniform","params":{"a":1.5}}}})"),
      json::parse(R"({"gamma":[0],"jumps":{"kind":"scaled","rate":1,"dist":{"name":"two_point","params":{"x":[1]}}}})"),
      json::parse(R"({"gamma":[0],"jumps":{"kind":"scaled","rate":3,"dist":{"name":"gaussian","params":{"sigma":0.4}}}})"),
      json::parse(R"({"gamma":[0],"jumps":{"kind":"scaled","rate":1,"dist":{"name":"point_mass","params":{"x":[0.7]}}}})")};
  for (const auto& j : inputs) {
    const auto t = triplet_from_json(j);
    const json once = to_json(t);
    const json twice = to_json(triplet_from_json(once));
    EXPECT_EQ(once, twice) << j.dump();
    for (double z : {0.3, -1.7}) {
      Vec v = Vec::Constant(t.dim(), z);
      EXPECT_EQ(eval_psi(t, v), eval_psi(triplet_from_json(once), v));
    }
  }
}

TEST(Io, DriftKeyGivesGammaZero) {
  const auto t = triplet_from_json(
      json::parse(R"({"drift":[0],"jumps":{"kind":"discrete","atoms":[{"x":[1],"mass":1}]}})"));
  EXPECT_EQ(t.drift()[0], 0.0);
  EXPECT_EQ(t.gamma()[0], 1.0);
  EXPECT_NEAR(eval_psi(t, M_PI).real(), -2.0, 1e-15);
}

TEST(Io, PathRoundTrip) {
  const std::vector<DecreasingPath> paths{DecreasingPath::horizontal(2.0, 0.5, 1.5, 0.0, 2.0),
                                          DecreasingPath::vertical(1.5, 3.0, 1.0, 0.0, 2.0),
                                          DecreasingPath::vthenh(1.0, 2.0, 1.5, 3.0, 4.0, 0.0, 2.0),
                                          DecreasingPath::linear(0.0, 1.0, 1.0, 1.0),
                                          DecreasingPath::exponential(0.1, 0.3, 1.0 / 3.0, -1.0, 1.5),
                                          DecreasingPath::sampled(DecreasingPath::exponential(1.0, 1.0, 0.7), 7)};
  for (const auto& p : paths) {
    const json once = to_json(p);
    const auto q = path_from_json(json::parse(once.dump()));
    EXPECT_EQ(once, to_json(q));
    for (double t : linspace(p.domain().lo, p.domain().hi, 9)) {
      EXPECT_EQ(p.eval(t).x, q.eval(t).x);
      EXPECT_EQ(p.eval(t).y, q.eval(t).y);
    }
  }
}

TEST(Io, ClassJson) {
  const auto j = to_json(classify(DecreasingPath::exponential(1.0, 1.0, 1.0)));
  EXPECT_EQ(j, json::parse(R"({"class":"exponential","phi":{"a":1,"b":1,"c":1}})"));
  std::vector<forms::Knot> knots;
  for (double t : linspace(0.1, 0.9, 64)) knots.push_back({t, t * t, 1.0 - t});
  EXPECT_TRUE(to_json(classify(DecreasingPath::tabulated(knots)))["phi"].is_null());
}

TEST(Io, FieldRoundTrip) {
  Engine rng(7);
  for (const jumpsim::Region r : {jumpsim::Region{jumpsim::region::Rectangle{2.0, 1.0}},
                                  jumpsim::Region{jumpsim::region::Triangle{2.0, 1.0}}}) {
    const auto f = jumpsim::simulate_cpp_sheet(10.0, JumpDistribution::gaussian(1.0, 2), r, rng);
    const json once = to_json(f);
    const auto g = field_from_json(json::parse(once.dump()));
    EXPECT_EQ(once, to_json(g));
    EXPECT_EQ(g.dim, 2);
    ASSERT_EQ(g.points.size(), f.points.size());
  }
}

TEST(Io, ErrorsNameTheField) {
  EXPECT_NE(message_of([] { triplet_from_json(json::parse(R"({"gaussian":[[1]]})")); }).find("triplet.gamma"),
            std::string::npos);
  EXPECT_NE(message_of([] { triplet_from_json(json::parse(R"({"gamma":["x"]})")); }).find("triplet.gamma[0]"),
            std::string::npos);
  EXPECT_NE(message_of([] { triplet_from_json(json::parse(R"({"gamma":[0],"gaussian":[[-1]]})")); }).find("triplet"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              triplet_from_json(json::parse(R"({"gamma":[0],"jumps":{"kind":"discrete","atoms":[{"x":[1]}]}})"));
            }).find("triplet.jumps.atoms[0].mass"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              triplet_from_json(
                  json::parse(R"({"gamma":[0],"jumps":{"kind":"scaled","rate":1,"dist":{"name":"cauchy","params":{}}}})"));
            }).find("triplet.jumps.dist.name"),
            std::string::npos);
  EXPECT_NE(message_of([] { path_from_json(json::parse(R"({"form":"linear","a":0,"b":1,"c":1,"t_lo":0,"t_hi":1})")); })
                .find("path.d"),
            std::string::npos);
  EXPECT_NE(message_of([] { path_from_json(json::parse(R"({"form":"spiral","t_lo":0,"t_hi":1})")); }).find("path.form"),
            std::string::npos);
  EXPECT_THROW(path_from_json(json::parse(R"({"form":"linear","a":0,"b":1,"c":1,"d":1,"t_lo":0,"t_hi":2})")),
               ParseError);
  EXPECT_THROW(field_from_json(json::parse(
                   R"({"region":{"shape":"rectangle","u_max":1,"v_max":1},"points":[{"u":2,"v":0.5,"j":[1]}]})")),
               ParseError);
}

TEST(Io, NumbersRoundTripExactly) {
  Engine rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) / 7.0;
    EXPECT_EQ(std::stod(fmt(x)), x);
    EXPECT_EQ(json::parse(json(x).dump()).get<double>(), x);
  }
}

TEST(Io, EventCsv) {
  jumpsim::EventPath p{{0.0, 1.0}, 1, {{0.3, scalar_vec(2.5)}, {0.6, scalar_vec(-2.5)}}};
  EXPECT_EQ(to_csv(p), "tau,dj1\n0.29999999999999999,2.5\n0.59999999999999998,-2.5\n");
}

TEST(Io, GridCsv) {
  SamplePathGrid g{{0.0, 0.5}, {scalar_vec(0.0), scalar_vec(1.0)}};
  EXPECT_EQ(to_csv(std::vector<SamplePathGrid>{g}), "t,v1\n0,0\n0.5,1\n");
  EXPECT_EQ(to_csv(std::vector<SamplePathGrid>{g, g}), "rep,t,v1\n0,0,0\n0,0.5,1\n1,0,0\n1,0.5,1\n");
}
