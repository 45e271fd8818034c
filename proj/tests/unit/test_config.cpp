#include "doctest.h"
#include "treewalk/config.hpp"
#include "treewalk/error.hpp"

using namespace treewalk;

namespace {

const char* kDriftUp = R"(# drift +1/2 over Q_2
[realization]
kind = padic
prime = 2
precision = 64

[law]
atom = affine(t = 0, a = 2) : 3/4
atom = affine(t = 1, a = 1/2) : 1/4

[experiment]
seed = 7
n_list = 15, 20
trajectories = 500

[cylinders]
cylinder = p:0: -> p:0:
cylinder = p:0: -> p:2:0;1.0
)";

ErrorCode code_of(const char* text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("cylinder events") {
  const auto o = origin(Realization::PAdic, 2);
  const auto s = default_homothety(Realization::PAdic, 2).element;
  const CylinderEvent f({o}, {o});
  CHECK(f.level() == 0);
  CHECK_FALSE(f.empty());
  CHECK(f.contains(identity_element(Realization::PAdic, 2)));
  CHECK_FALSE(f.contains(s));
  const CylinderEvent g({o}, {act_vertex(s, o)});
  CHECK(g.level() == 1);
  CHECK(g.contains(s));
  // b V(x -> y) = V(x -> b y)
  const auto t = padic_affine(from_rational(1, 2, 2), from_int(1, 2));
  CHECK(f.left_translate(t).contains(t));
  CHECK_FALSE(f.left_translate(t).contains(identity_element(Realization::PAdic, 2)));
  // Pairs demanding different shifts give the empty event.
  const CylinderEvent e({o, o}, {o, act_vertex(s, o)});
  CHECK(e.empty());
  CHECK_FALSE(e.contains(s));
  CHECK_THROWS_AS(CylinderEvent({o}, {}), Error);

  const auto parsed = parse_cylinder(g.to_string(), 2);
  CHECK(parsed.to_string() == g.to_string());
  CHECK(parse_cylinder("p:0: -> p:0: | p:1: -> p:1:", 2).sources().size() == 2);
}

TEST_CASE("config parsing and canonical text") {
  const ExperimentConfig c = parse_config(kDriftUp);
  CHECK(c.realization.kind == Realization::PAdic);
  CHECK(c.realization.budget.working_precision == 64);
  CHECK(c.atoms.size() == 2);
  CHECK(c.experiment.seed == 7);
  CHECK(c.experiment.n_list == std::vector<int>{15, 20});
  CHECK(c.cylinders.size() == 2);
  CHECK(to_string(c.law().drift()) == "1/2");

  const std::string text = to_config_text(c);
  const ExperimentConfig again = parse_config(text);
  CHECK(to_config_text(again) == text);
  CHECK(again.experiment.trajectories == 500);

  // The output directory is not part of the canonical text.
  ExperimentConfig moved = c;
  moved.experiment.out = "elsewhere";
  CHECK(to_config_text(moved) == text);
  ExperimentConfig reseeded = c;
  reseeded.experiment.seed = 8;
  CHECK(to_config_text(reseeded) != text);
}

TEST_CASE("config errors") {
  CHECK(code_of("[realization]\nkind = padic\nprime = 2\n[law]\n"
                "atom = affine(t = 0, a = 2) : 1/2\natom = affine(t = 1, a = 1/2) : 1/3\n") ==
        ErrorCode::WeightsNotNormalized);
  CHECK(code_of("[realization]\nkind = padic\nprime = 2\n[law]\n"
                "atom = affine(t = 1, a = 1) : 1/2\natom = affine(t = 3, a = 1) : 1/2\n") ==
        ErrorCode::NonExceptionalityFailed);
  CHECK(code_of("[realization]\nkind = padic\nprime = 2\n[law]\natom = affine(t = 0, a = 2) 1\n") ==
        ErrorCode::MalformedSyntax);
  CHECK(code_of("[nowhere]\n") == ErrorCode::MalformedSyntax);
  CHECK(code_of("[realization]\nkind = padic\nprime = 4\n") == ErrorCode::InvalidPrime);
  try {
    (void)parse_config("[realization]\nkind = padic\nprime = 2\n[law]\n"
                       "atom = affine(t = 1, a = 1) : 1/2\natom = affine(t = 3, a = 1) : 1/2\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("contained in Hor(T)") != std::string::npos);
  }
  // Without the law gate the same config loads.
  const auto c = parse_config("[realization]\nkind = padic\nprime = 2\n[law]\n"
                              "atom = affine(t = 1, a = 1) : 1/2\natom = affine(t = 3, a = 1) : 1/2\n",
                              false);
  CHECK_FALSE(c.law_unchecked().validation().passed);
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), Error);
}

TEST_CASE("lamplighter config") {
  const auto c = parse_config(R"([realization]
kind = lamplighter
q = 2
[law]
atom = lamp(shift = 1, lamps = []) : 1/2
atom = lamp(shift = -1, lamps = [0:1]) : 1/2
)");
  CHECK(c.realization.kind == Realization::Lamplighter);
  CHECK(c.law().drift_sign() == 0);
  CHECK(to_config_text(parse_config(to_config_text(c))) == to_config_text(c));
}
