#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace fcat;
using testing_support::load;
using testing_support::load_doc;

namespace {

const double phi = (1 + std::sqrt(5.0)) / 2;

// Multiplicity-free pentagon written out independently of the library's
// index bookkeeping: F^{fcd}_{e;gl} F^{abl}_{e;fk} = Σ_h F^{abc}_{g;fh} F^{ahd}_{e;gk} F^{bcd}_{k;hl}
double scalar_pentagon(const CategorySpec& s) {
  auto F = [&](int a, int b, int c, int d, int e, int f) -> Scalar {
    const FMatrix& m = s.F(a, b, c, d);
    int i = m.left_index(e, 0, 0), j = m.right_index(f, 0, 0);
    return (i < 0 || j < 0) ? Scalar(0) : m.value(i, j);
  };
  int r = s.rank();
  double worst = 0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          for (int e = 0; e < r; ++e)
            for (int f = 0; f < r; ++f)
              for (int g = 0; g < r; ++g)
                for (int k = 0; k < r; ++k)
                  for (int l = 0; l < r; ++l) {
                    if (!s.N(a, b, f) || !s.N(f, c, g) || !s.N(g, d, e) || !s.N(c, d, l) || !s.N(b, l, k) ||
                        !s.N(a, k, e))
                      continue;
                    Scalar lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k);
                    Scalar rhs = 0;
                    for (int h = 0; h < r; ++h) rhs += F(a, b, c, g, f, h) * F(a, h, d, e, g, k) * F(b, c, d, k, h, l);
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
  return worst;
}

nlohmann::json trivial_doc() {
  return nlohmann::json::parse(R"({
    "name": "trivial", "labels": ["1"], "unit": "1", "dual": {"1": "1"},
    "N": [["1","1","1",1]], "F": [["1","1","1","1","1","1",0,0,0,0,1.0,0.0]],
    "R": [["1","1","1",0,0,1.0,0.0]], "dims": {"1": [1.0, 0.0]}})");
}

}  // namespace

TEST_CASE("bundled categories load with expected dimensions") {
  auto fib = load("fibonacci");
  CHECK(fib->rank() == 2);
  CHECK(fib->d(fib->index("tau")).real() == doctest::Approx(1.6180339887).epsilon(1e-10));
  CHECK(global_dimension(*fib).real() == doctest::Approx(2 + phi).epsilon(1e-12));

  auto ising = load("ising");
  CHECK(global_dimension(*ising).real() == doctest::Approx(4.0));
  CHECK(global_dimension(*load("vec_z2")).real() == doctest::Approx(2.0));
  CHECK(global_dimension(*load("vec_z3")).real() == doctest::Approx(3.0));
}

TEST_CASE("trivial category") {
  auto s = CategorySpec::from_json(trivial_doc());
  CHECK(s->D2.real() == 1.0);
  CHECK(hom_dim(*s, {}, {}) == 1);
}

TEST_CASE("pentagon residuals") {
  for (const char* name : {"fibonacci", "ising", "vec_z2", "vec_z3"}) {
    auto s = load(name);
    auto rep = validate_pentagon(*s);
    CHECK(rep.max_residual < 1e-12);
    CHECK(scalar_pentagon(*s) < 1e-12);
  }
  CHECK(validate_pentagon(*load("vec_z2")).max_residual == 0.0);
}

TEST_CASE("pentagon failure is detected on a sign flip") {
  auto doc = load_doc("fibonacci");
  for (auto& e : doc["F"])
    if (e[0] == "tau" && e[1] == "tau" && e[2] == "tau" && e[3] == "tau" && e[4] == "tau" && e[5] == "tau")
      e[10] = -e[10].get<double>();
  try {
    CategorySpec::from_json(doc);
    FAIL("expected a pentagon failure");
  } catch (const ConsistencyError& err) {
    CHECK(err.kind() == "pentagon");
    CHECK(err.residual() > 1e-9);
  }
}

TEST_CASE("hexagon residuals") {
  for (const char* name : {"fibonacci", "ising", "vec_z2", "vec_z3"})
    CHECK(validate_hexagon(*load(name)).max_residual < 1e-12);
  CHECK(validate_hexagon(*load("vec_z2")).max_residual == 0.0);

  auto doc = load_doc("fibonacci");
  for (auto& e : doc["R"])
    if (e[0] == "tau" && e[1] == "tau" && e[2] == "tau") e[6] = -e[6].get<double>();
  CHECK_THROWS_AS(CategorySpec::from_json(doc), ConsistencyError);
  doc.erase("R");
  auto unbraided = CategorySpec::from_json(doc);
  CHECK_THROWS_AS(validate_hexagon(*unbraided), NotBraided);
}

TEST_CASE("conjugated R residual is large") {
  auto doc = load_doc("fibonacci");
  for (auto& e : doc["R"])
    if (e[0] == "tau" && e[1] == "tau" && e[2] == "tau") e[6] = -e[6].get<double>();
  auto s = CategorySpec::from_json_unchecked(doc);
  CHECK(validate_hexagon(*s).max_residual > 0.1);
}

TEST_CASE("hom_dim counts") {
  auto fib = load("fibonacci");
  int t = fib->index("tau");
  CHECK(hom_dim(*fib, make_word({t, t}), make_word({t})) == 1);
  CHECK(hom_dim(*fib, {}, {}) == 1);
  auto ising = load("ising");
  int sg = ising->index("sigma");
  CHECK(hom_dim(*ising, make_word({sg, sg}), make_word({sg, sg})) == 2);
  CHECK(hom_dim(*ising, make_word({sg, sg, sg}), make_word({sg})) == 2);

  for (const char* name : {"fibonacci", "ising", "vec_z3"}) {
    auto s = load(name);
    for (int a = 0; a < s->rank(); ++a)
      for (int b = 0; b < s->rank(); ++b) {
        for (int c = 0; c < s->rank(); ++c) CHECK(hom_dim(*s, make_word({a, b}), make_word({c})) == s->N(a, b, c));
        Word x = make_word({a, b}), y = make_word({b, a, s->dual[a]});
        CHECK(hom_dim(*s, x, y) == hom_dim(*s, y, x));
      }
  }
  CHECK_THROWS_AS(parse_word(*fib, "tau,phi"), UnknownLabel);
}

TEST_CASE("double decomposition sum") {
  for (const char* name : {"fibonacci", "ising", "vec_z2", "vec_z3"}) {
    auto s = load(name);
    for (int r = 0; r < s->rank(); ++r) CHECK(std::abs(double_decompose_residual(*s, r)) < 1e-8);
  }
  auto fib = load("fibonacci");
  Scalar lhs = double_decompose_residual(*fib, fib->unit) + fib->D2;
  CHECK(lhs.real() == doctest::Approx(3.6180339887).epsilon(1e-10));
}

TEST_CASE("schema and data errors") {
  auto doc = load_doc("fibonacci");
  auto bad = doc;
  bad.erase("name");
  CHECK_THROWS_AS(CategorySpec::from_json(bad), SchemaError);

  bad = doc;
  bad["F"].push_back({"tau", "tau", "1", "1", "1", "1", 0, 0, 0, 0, 1.0, 0.0});
  CHECK_THROWS_AS(CategorySpec::from_json(bad), SchemaError);

  bad = doc;
  bad.erase("dims");
  CHECK_THROWS_AS(CategorySpec::from_json(bad), MissingData);

  bad = doc;
  bad["dims"]["tau"] = {-1.0 / phi, 0.0};
  CHECK_THROWS_AS(CategorySpec::from_json(bad), ConsistencyError);

  bad = doc;
  bad["N"].erase(bad["N"].begin() + 1);
  CHECK_THROWS_AS(CategorySpec::from_json(bad), Error);

  bad = doc;
  bad["tol"] = -1.0;
  CHECK_THROWS_AS(CategorySpec::from_json(bad), SchemaError);
}

TEST_CASE("zig-zag coefficients match loop values") {
  for (const char* name : {"fibonacci", "ising", "vec_z2", "vec_z3"}) {
    auto s = load(name);
    for (int a = 0; a < s->rank(); ++a) {
      CHECK(std::abs(s->zigzag(a) - s->zigzag_dual(a)) < 1e-12);
      CHECK(std::abs(s->zigzag(a) * s->zigzag(s->dual[a]) * s->d(a) * s->d(a) - 1.0) < 1e-12);
    }
  }
}
