#include <random>

#include "doctest.h"
#include "fcat/tube.hpp"
#include "support.hpp"

using namespace fcat;
using testing_support::load;

namespace {

const char* kAll[] = {"fibonacci", "ising", "vec_z2", "vec_z3"};

Word random_word(const Calculus& c, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), lab(0, c.rank() - 1);
  Word w;
  for (int i = len(rng); i > 0; --i) w.emplace_back(lab(rng));
  return w;
}

// Σ_R Σ_k N_{R i}^k N_{j R}^k, straight from the fusion table
int tube_dim_oracle(const CategorySpec& s, int i, int j) {
  int n = 0;
  for (int r = 0; r < s.rank(); ++r)
    for (int k = 0; k < s.rank(); ++k) n += s.N(r, i, k) * s.N(j, r, k);
  return n;
}

}  // namespace

TEST_CASE("tube hom dimensions") {
  auto fib = load("fibonacci");
  int t = fib->index("tau");
  CHECK(tube_hom_dim(*fib, make_word({t}), make_word({t})) == 3);
  CHECK(tube_hom_dim(*fib, {}, {}) == 2);
  auto ising = load("ising");
  int s = ising->index("sigma");
  CHECK(tube_hom_dim(*ising, make_word({s}), make_word({s})) == 4);

  for (const char* name : kAll) {
    auto spec = load(name);
    for (int i = 0; i < spec->rank(); ++i)
      for (int j = 0; j < spec->rank(); ++j)
        CHECK(tube_hom_dim(*spec, make_word({i}), make_word({j})) == tube_dim_oracle(*spec, i, j));
  }
}

TEST_CASE("tube dimension splits over pairs of simples") {
  for (const char* name : {"fibonacci", "ising"}) {
    auto spec = load(name);
    for (int x = 0; x < spec->rank(); ++x)
      for (int y = 0; y < spec->rank(); ++y) {
        int sum = 0;
        for (int i = 0; i < spec->rank(); ++i)
          for (int j = 0; j < spec->rank(); ++j)
            sum += hom_dim(*spec, make_word({x}), make_word({i, j})) * hom_dim(*spec, make_word({i, j}), make_word({y}));
        CHECK(tube_hom_dim(*spec, make_word({x}), make_word({y})) == sum);
      }
  }
}

TEST_CASE("embedding") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(17);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      Word x = random_word(c, rng, 2), y = random_word(c, rng, 2), z = random_word(c, rng, 2);
      if (!hom_dim(c.spec(), x, y) || !hom_dim(c.spec(), y, z)) continue;
      auto f = random_morphism(c, x, y, rng), g = random_morphism(c, y, z, rng);
      auto lhs = embed(c, compose(g, f));
      auto rhs = tube_compose(c, embed(c, g), embed(c, f));
      worst = std::max(worst, distance(lhs, rhs));
      CHECK(max_abs(embed(c, f)) > 0);
    }
    CHECK(worst < 1e-10);
    Word w = random_word(c, rng, 3);
    CHECK(distance(embed(c, identity(c, w)), tube_identity(c, w)) == 0.0);
    CHECK(embed(c, zero(c, w, w)).components.empty());
  }
}

TEST_CASE("tube composition laws") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(0x7B);
    double unit = 0, assoc = 0;
    for (int i = 0; i < 20; ++i) {
      std::uniform_int_distribution<int> lab(0, c.rank() - 1);
      Word w = make_word({lab(rng)}), x = make_word({lab(rng)}), y = make_word({lab(rng)}), z = make_word({lab(rng)});
      auto f = random_tube_morphism(c, w, x, rng);
      auto g = random_tube_morphism(c, x, y, rng);
      auto h = random_tube_morphism(c, y, z, rng);
      unit = std::max(unit, distance(tube_compose(c, tube_identity(c, x), f), f));
      unit = std::max(unit, distance(tube_compose(c, f, tube_identity(c, w)), f));
      auto l = tube_compose(c, h, tube_compose(c, g, f));
      auto r = tube_compose(c, tube_compose(c, h, g), f);
      assoc = std::max(assoc, distance(l, r));
    }
    CHECK(unit < 1e-10);
    CHECK(assoc < 1e-9);
  }
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  std::mt19937_64 rng(4);
  Word tt = make_word({t});
  for (int i = 0; i < 20; ++i) {
    auto f = random_tube_morphism(fib, tt, tt, rng), g = random_tube_morphism(fib, tt, tt, rng),
         h = random_tube_morphism(fib, tt, tt, rng);
    CHECK(distance(tube_compose(fib, h, tube_compose(fib, g, f)), tube_compose(fib, tube_compose(fib, h, g), f)) < 1e-9);
  }
  auto f = random_tube_morphism(fib, tt, tt, rng);
  CHECK_THROWS_AS(tube_compose(fib, f, random_tube_morphism(fib, {}, {}, rng)), ShapeMismatch);
}

TEST_CASE("unit endomorphisms reproduce the fusion ring") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    const auto& s = c.spec();
    auto grade = [&](int r) {
      TubeMorphism m = tube_zero({}, {});
      Morphism f = zero(c, make_word({r}), make_word({r}));
      f.blocks[r](0, 0) = 1.0;
      m.components.emplace(r, f);
      return m;
    };
    for (int a = 0; a < s.rank(); ++a)
      for (int b = 0; b < s.rank(); ++b) {
        auto prod = tube_compose(c, grade(a), grade(b));
        for (int k = 0; k < s.rank(); ++k) {
          auto it = prod.components.find(k);
          Scalar v = it == prod.components.end() ? Scalar(0) : it->second.blocks[k](0, 0);
          CHECK(std::abs(v - double(s.N(a, b, k))) < 1e-9);
        }
      }
  }
}

TEST_CASE("lift") {
  Calculus c(load("ising"));
  std::mt19937_64 rng(8);
  int s = c.spec().index("sigma"), p = c.spec().index("psi");
  Word x = make_word({s}), y = make_word({s});

  auto f = random_morphism(c, x, y, rng);
  auto alpha = compose(unit_shift(c, y), tensor(c, identity(c, make_word({c.spec().unit})), f));
  CHECK(distance(lift(c, alpha, make_word({c.spec().unit})), embed(c, f)) < 1e-14);

  auto a2 = random_morphism(c, concat(make_word({p}), x), concat(y, make_word({p})), rng);
  auto l2 = lift(c, a2, make_word({p}));
  CHECK(l2.components.size() == 1);
  CHECK(distance(l2.components.at(p), a2) < 1e-14);

  CHECK_THROWS_AS(lift(c, a2, make_word({s})), ShapeMismatch);

  // pushing g: G1 -> G2 across the seam
  for (const char* name : kAll) {
    Calculus cc(load(name));
    std::mt19937_64 r2(55);
    double worst = 0;
    int done = 0;
    while (done < 20) {
      Word g1 = random_word(cc, r2, 2), g2 = random_word(cc, r2, 2), xx = random_word(cc, r2, 1),
           yy = random_word(cc, r2, 1);
      if (!hom_dim(cc.spec(), g1, g2) || !hom_dim(cc.spec(), concat(g2, xx), concat(yy, g1))) continue;
      auto g = random_morphism(cc, g1, g2, r2);
      auto al = random_morphism(cc, concat(g2, xx), concat(yy, g1), r2);
      auto lhs = lift(cc, compose(al, tensor(cc, g, identity(cc, xx))), g1);
      auto rhs = lift(cc, compose(tensor(cc, identity(cc, yy), g), al), g2);
      worst = std::max(worst, distance(lhs, rhs));
      ++done;
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("rotation morphisms") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(29);
    for (int i = 0; i < 5; ++i) {
      Word x = random_word(c, rng, 2);
      CHECK(distance(c_morphism(c, {}, x), tube_identity(c, x)) < 1e-12);
    }
    double law = 0, nat = 0;
    for (int i = 0; i < 10; ++i) {
      Word g = random_word(c, rng, 1), h = random_word(c, rng, 1), x = random_word(c, rng, 1);
      auto lhs = tube_compose(c, c_morphism(c, g, concat(h, x)), c_morphism(c, h, concat(x, g)));
      law = std::max(law, distance(lhs, c_morphism(c, concat(g, h), x)));

      Word g2 = random_word(c, rng, 1), y = random_word(c, rng, 1);
      if (!hom_dim(c.spec(), g, g2) || !hom_dim(c.spec(), x, y)) continue;
      auto fg = random_morphism(c, g, g2, rng), fx = random_morphism(c, x, y, rng);
      auto l = tube_compose(c, embed(c, tensor(c, fg, fx)), c_morphism(c, g, x));
      auto r = tube_compose(c, c_morphism(c, g2, y), embed(c, tensor(c, fx, fg)));
      nat = std::max(nat, distance(l, r));
    }
    CHECK(law < 1e-10);
    CHECK(nat < 1e-10);
  }

  Calculus fib(load("fibonacci"));
  Word t = make_word({fib.spec().index("tau")});
  auto lhs = tube_compose(fib, c_morphism(fib, t, concat(t, t)), c_morphism(fib, t, concat(t, t)));
  CHECK(distance(lhs, c_morphism(fib, concat(t, t), t)) < 1e-10);

  // left composition with c_{τ,τ} is injective on Hom_TC(ττ, ττ)
  Word tt = concat(t, t);
  const int n = tube_hom_dim(fib.spec(), tt, tt);
  Matrix act(n, n);
  auto cm = c_morphism(fib, t, t);
  for (int k = 0; k < n; ++k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    act.col(k) = flatten(fib, tube_compose(fib, cm, unflatten(fib, tt, tt, e)));
  }
  Eigen::FullPivLU<Matrix> lu(act);
  lu.setThreshold(1e-9);
  CHECK(lu.rank() == n);
}

TEST_CASE("flatten round trip") {
  Calculus c(load("ising"));
  std::mt19937_64 rng(6);
  int s = c.spec().index("sigma");
  Word x = make_word({s, s}), y = make_word({s, s});
  auto m = random_tube_morphism(c, x, y, rng);
  Vector v = flatten(c, m);
  CHECK(v.size() == tube_hom_dim(c.spec(), x, y));
  CHECK(distance(unflatten(c, x, y, v), m) == 0.0);
  CHECK_THROWS_AS(unflatten(c, x, y, Vector::Zero(v.size() + 1)), ShapeMismatch);
}

TEST_CASE("tube algebra") {
  const std::pair<const char*, int> dims[] = {{"fibonacci", 7}, {"ising", 12}, {"vec_z2", 4}, {"vec_z3", 9}};
  for (auto [name, d] : dims) {
    Calculus c(load(name));
    auto alg = tube_algebra(c);
    CHECK(alg.dim() == d);
    CHECK(alg.rank() == c.rank());
    std::mt19937_64 rng(12);
    std::normal_distribution<double> nd;
    auto rnd = [&] {
      Vector v(alg.dim());
      for (auto& x : v) x = Scalar(nd(rng), nd(rng));
      return v;
    };
    for (int i = 0; i < 20; ++i) {
      Vector a = rnd(), b = rnd(), e = rnd();
      Vector l = alg.multiply(alg.multiply(a, b), e), r = alg.multiply(a, alg.multiply(b, e));
      CHECK((l - r).norm() < 1e-9 * (1 + l.norm()));
      CHECK((alg.multiply(alg.unit, a) - a).norm() < 1e-10);
      CHECK((alg.multiply(a, alg.unit) - a).norm() < 1e-10);
      CHECK((alg.right_action(b) * a - alg.multiply(a, b)).norm() < 1e-10);
    }
  }
  Calculus z2(load("vec_z2"));
  auto alg = tube_algebra(z2);
  for (int a = 0; a < alg.dim(); ++a)
    for (int b = 0; b < alg.dim(); ++b)
      for (int k = 0; k < alg.dim(); ++k) CHECK(alg.structure[k](a, b) == alg.structure[k](b, a));
}
