#include <cmath>
#include <random>

#include "doctest.h"
#include "fcat/diagram.hpp"
#include "support.hpp"

using namespace fcat;
using testing_support::load;

namespace {

const double phi = (1 + std::sqrt(5.0)) / 2;
const char* kAll[] = {"fibonacci", "ising", "vec_z2", "vec_z3"};

Word random_word(const Calculus& c, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), lab(0, c.rank() - 1);
  Word w;
  for (int i = len(rng); i > 0; --i) w.emplace_back(lab(rng));
  return w;
}

// random word pair with a nonzero Hom space
std::pair<Word, Word> random_pair(const Calculus& c, std::mt19937_64& rng, int max_len) {
  for (;;) {
    Word a = random_word(c, rng, max_len), b = random_word(c, rng, max_len);
    if (hom_dim(c.spec(), a, b) > 0) return {a, b};
  }
}

}  // namespace

TEST_CASE("identity blocks") {
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  auto id = identity(fib, make_word({t}));
  CHECK(id.blocks[t].rows() == 1);
  CHECK(id.blocks[0].size() == 0);
  auto e = identity(fib, {});
  CHECK(e.blocks[0].rows() == 1);

  Calculus ising(load("ising"));
  int s = ising.spec().index("sigma"), p = ising.spec().index("psi");
  auto ss = identity(ising, make_word({s, s}));
  CHECK(ss.blocks[0].rows() == 1);
  CHECK(ss.blocks[p].rows() == 1);
  CHECK(ss.blocks[s].rows() == 0);
}

TEST_CASE("basis sizes match fusion counts and ordering is sorted") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
      Word w = random_word(c, rng, 4);
      auto counts = channel_counts(c.spec(), w);
      const auto& b = c.basis(w);
      for (int k = 0; k < c.rank(); ++k) {
        CHECK(b.size(k) == counts[k]);
        for (int j = 1; j < b.size(k); ++j) CHECK(b.trees[k][j - 1].edges <= b.trees[k][j].edges);
      }
    }
  }
}

TEST_CASE("composition matches per-channel products") {
  Calculus c(load("ising"));
  std::mt19937_64 rng(11);
  int s = c.spec().index("sigma");
  Word a = make_word({s, s, s});
  auto f = random_morphism(c, a, a, rng), g = random_morphism(c, a, a, rng);
  auto gf = compose(g, f);
  for (int k = 0; k < c.rank(); ++k) CHECK((gf.blocks[k] - g.blocks[k] * f.blocks[k]).norm() < 1e-14);
  CHECK(distance(compose(identity(c, a), f), f) == 0.0);
  CHECK_THROWS_AS(compose(f, random_morphism(c, a, make_word({s}), rng)), ShapeMismatch);
}

TEST_CASE("tensor is functorial and associative") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(0xC0FFEE);
    double worst = 0, worst_assoc = 0;
    for (int i = 0; i < 20; ++i) {
      auto [a, b] = random_pair(c, rng, 2);
      auto [x, y] = random_pair(c, rng, 2);
      Word bb = random_word(c, rng, 2), yy = random_word(c, rng, 2);
      if (!hom_dim(c.spec(), b, bb) || !hom_dim(c.spec(), y, yy)) continue;
      auto f1 = random_morphism(c, a, b, rng), f2 = random_morphism(c, b, bb, rng);
      auto g1 = random_morphism(c, x, y, rng), g2 = random_morphism(c, y, yy, rng);
      auto lhs = tensor(c, compose(f2, f1), compose(g2, g1));
      auto rhs = compose(tensor(c, f2, g2), tensor(c, f1, g1));
      worst = std::max(worst, distance(lhs, rhs));

      auto h = random_morphism(c, bb, bb, rng);
      auto l3 = tensor(c, tensor(c, f1, g1), h);
      auto r3 = tensor(c, f1, tensor(c, g1, h));
      worst_assoc = std::max(worst_assoc, distance(l3, r3));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_assoc < 1e-10);
    Word u = random_word(c, rng, 3), v = random_word(c, rng, 3);
    CHECK(distance(tensor(c, identity(c, u), identity(c, v)), identity(c, concat(u, v))) < 1e-12);
  }
}

TEST_CASE("tensor of channel projectors") {
  Calculus c(load("fibonacci"));
  int t = c.spec().index("tau");
  Word tt = make_word({t, t});
  Morphism p = zero(c, tt, tt);
  p.blocks[t](0, 0) = 1.0;
  Morphism pp = tensor(c, p, p);
  // projector onto (tau tau)_tau (tau tau)_tau: rank N_{tau tau}^k in channel k
  for (int k = 0; k < c.rank(); ++k) {
    Eigen::FullPivLU<Matrix> lu(pp.blocks[k]);
    lu.setThreshold(1e-9);
    CHECK(lu.rank() == c.spec().N(t, t, k));
    CHECK((pp.blocks[k] * pp.blocks[k] - pp.blocks[k]).norm() < 1e-12);
  }
  CHECK(std::abs(trace(c, pp) - phi * phi) < 1e-12);
}

TEST_CASE("f-moves") {
  Calculus c(load("fibonacci"));
  int t = c.spec().index("tau");
  std::mt19937_64 rng(3);

  SUBCASE("three strands: coefficients transform by the stored F") {
    Word ttt = make_word({t, t, t});
    auto m = random_morphism(c, make_word({t}), ttt, rng);
    auto r = f_move(c, m, 1);
    const FMatrix& f = c.spec().F(t, t, t, t);
    CHECK((r.blocks[t] - f.value.transpose() * m.blocks[t]).norm() < 1e-12);
    CHECK(distance(f_move_inverse(c, r), m) < 1e-12);
    CHECK_THROWS_AS(f_move(c, m, 2), BadPosition);
  }

  SUBCASE("pentagon cycle on four strands") {
    Word w = make_word({t, t, t, t});
    using B = Bracketing;
    B s0 = B::left_nested(4);  // ((ab)c)d
    for (int k = 0; k < c.rank(); ++k) {
      B s1, s2, s3, s4, s5;
      Matrix m1 = elementary_f_move(c, w, k, s0, {}, &s1);        // (ab)(cd)
      Matrix m2 = elementary_f_move(c, w, k, s1, {}, &s2);        // a(b(cd))
      Matrix m3 = elementary_f_move(c, w, k, s0, {0}, &s3);       // (a(bc))d
      Matrix m4 = elementary_f_move(c, w, k, s3, {}, &s4);        // a((bc)d)
      Matrix m5 = elementary_f_move(c, w, k, s4, {1}, &s5);       // a(b(cd))
      CHECK(s2 == s5);
      Matrix cycle = (m5 * m4 * m3).inverse() * m2 * m1;
      CHECK((cycle - Matrix::Identity(cycle.rows(), cycle.cols())).norm() < 1e-9);
      // each move agrees with the direct recoupling of both bracketings
      for (auto [from, to, mv] : {std::tuple{s0, s1, m1}, {s1, s2, m2}, {s0, s3, m3}, {s3, s4, m4}, {s4, s5, m5}}) {
        Matrix lhs = bracketing_to_canonical(c, w, k, to) * mv;
        CHECK((lhs - bracketing_to_canonical(c, w, k, from)).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("zig-zag and loop values") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    const auto& s = c.spec();
    for (int a = 0; a < c.rank(); ++a) {
      CHECK(std::abs(c.zigzag(a) - s.zigzag(a)) < 1e-12);
      Word wa = make_word({a}), wd = make_word({s.dual[a]});
      auto z1 = compose(tensor(c, identity(c, wa), cap(c, wa)), tensor(c, cup(c, wa), identity(c, wa)));
      auto z2 = compose(tensor(c, cap(c, wa), identity(c, wd)), tensor(c, identity(c, wd), cup(c, wa)));
      CHECK(distance(z1, identity(c, wa)) < 1e-12);
      CHECK(distance(z2, identity(c, wd)) < 1e-12);
      CHECK(std::abs(compose(cap_right(c, wa), cup(c, wa)).blocks[s.unit](0, 0) - s.d(a)) < 1e-12);
      CHECK(std::abs(compose(cap(c, wa), cup_left(c, wa)).blocks[s.unit](0, 0) - s.d(a)) < 1e-12);
      CHECK(cup(c, wa).blocks[s.unit](0, 0).real() > 0);
    }
  }
  Calculus ising(load("ising"));
  Word sg = make_word({ising.spec().index("sigma")});
  CHECK(std::abs(compose(cap_right(ising, sg), cup(ising, sg)).blocks[0](0, 0) - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("word duality maps satisfy zig-zag") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      Word w = random_word(c, rng, 3);
      Word wd = dual_word(c.spec(), w);
      auto z1 = compose(tensor(c, identity(c, w), cap(c, w)), tensor(c, cup(c, w), identity(c, w)));
      auto z2 = compose(tensor(c, cap_right(c, w), identity(c, w)), tensor(c, identity(c, w), cup_left(c, w)));
      CHECK(distance(z1, identity(c, w)) < 1e-10);
      CHECK(distance(z2, identity(c, w)) < 1e-10);
      (void)wd;
    }
  }
}

TEST_CASE("bends are invertible") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(21);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      auto [src, tgt] = random_pair(c, rng, 3);
      auto f = random_morphism(c, src, tgt, rng);
      std::uniform_int_distribution<std::size_t> cut_s(0, src.size()), cut_t(0, tgt.size());
      std::size_t ks = cut_s(rng), kt = cut_t(rng);
      worst = std::max(worst, distance(unbend_right(c, bend_right(c, f, ks), tgt.size()), f));
      worst = std::max(worst, distance(unbend_left(c, bend_left(c, f, ks), ks), f));
      worst = std::max(worst, distance(unbend_target_right(c, bend_target_right(c, f, kt), src.size()), f));
      worst = std::max(worst, distance(unbend_target_left(c, bend_target_left(c, f, kt), kt), f));
    }
    CHECK(worst < 1e-10);
  }
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  CHECK(hom_dim(fib.spec(), make_word({t, t}), make_word({t})) == hom_dim(fib.spec(), make_word({t}), make_word({t, t})));
}

TEST_CASE("braiding") {
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  auto b = braid(fib, t, t);
  CHECK(std::abs(b.blocks[0](0, 0) - std::polar(1.0, -4 * M_PI / 5)) < 1e-12);
  CHECK(std::abs(b.blocks[t](0, 0) - std::polar(1.0, 3 * M_PI / 5)) < 1e-12);

  Calculus z2(load("vec_z2"));
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      auto m = braid(z2, a, x);
      for (const auto& blk : m.blocks)
        if (blk.size()) CHECK(std::abs(blk(0, 0) - 1.0) < 1e-15);
    }

  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(99);
    double r2 = 0, nat = 0;
    for (int i = 0; i < 20; ++i) {
      Word a = random_word(c, rng, 2), bw = random_word(c, rng, 2);
      auto over = braid(c, a, bw);
      auto back = braid_inverse(c, bw, a);
      r2 = std::max(r2, distance(compose(back, over), identity(c, concat(a, bw))));
      // naturality in the first slot: σ_{A',B}(f⊗1) = (1⊗f)σ_{A,B}
      Word a2 = random_word(c, rng, 2);
      if (!hom_dim(c.spec(), a, a2)) continue;
      auto f = random_morphism(c, a, a2, rng);
      auto lhs = compose(braid(c, a2, bw), tensor(c, f, identity(c, bw)));
      auto rhs = compose(tensor(c, identity(c, bw), f), over);
      nat = std::max(nat, distance(lhs, rhs));
    }
    CHECK(r2 < 1e-10);
    CHECK(nat < 1e-10);
  }
}

TEST_CASE("balance: double braiding matches twists") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    const auto& s = c.spec();
    std::vector<Scalar> theta(c.rank());
    for (int a = 0; a < c.rank(); ++a) {
      Scalar sum = 0;
      for (int k = 0; k < c.rank(); ++k)
        if (s.N(a, a, k)) sum += s.d(k) * s.R(a, a, k)(0, 0);
      theta[a] = sum / s.d(a);
    }
    for (int a = 0; a < c.rank(); ++a)
      for (int b = 0; b < c.rank(); ++b) {
        auto dbl = compose(braid(c, b, a), braid(c, a, b));
        for (int k = 0; k < c.rank(); ++k)
          if (dbl.blocks[k].size())
            CHECK(std::abs(dbl.blocks[k](0, 0) - theta[k] / (theta[a] * theta[b])) < 1e-10);
      }
  }
}

TEST_CASE("traces and sphericality") {
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  CHECK(std::abs(trace(fib, identity(fib, make_word({t}))) - phi) < 1e-12);
  CHECK(std::abs(trace(fib, identity(fib, {})) - 1.0) < 1e-15);
  Calculus ising(load("ising"));
  int sg = ising.spec().index("sigma");
  CHECK(std::abs(trace(ising, identity(ising, make_word({sg, sg}))) - 2.0) < 1e-12);

  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(1234);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      Word w = random_word(c, rng, 3);
      auto f = random_morphism(c, w, w, rng);
      Scalar tr = trace(c, f);
      worst = std::max(worst, std::abs(left_closure(c, f) - tr));
      worst = std::max(worst, std::abs(right_closure(c, f) - tr));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("resolutions of words") {
  Calculus fib(load("fibonacci"));
  int t = fib.spec().index("tau");
  auto res = decompose_resolution(fib, make_word({t, t}));
  CHECK(res.size() == 2);
  Morphism sum = zero(fib, make_word({t, t}), make_word({t, t}));
  for (const auto& r : res) {
    sum += compose(r.b, r.b_dual);
    CHECK(distance(compose(r.b_dual, r.b), identity(fib, make_word({r.channel}))) < 1e-12);
  }
  CHECK(distance(sum, identity(fib, make_word({t, t}))) < 1e-12);

  auto single = decompose_resolution(fib, make_word({t}));
  CHECK(single.size() == 1);
  CHECK(distance(single[0].b, identity(fib, make_word({t}))) == 0.0);

  Calculus ising(load("ising"));
  int sg = ising.spec().index("sigma");
  int count_sigma = 0, other = 0;
  for (const auto& r : decompose_resolution(ising, make_word({sg, sg, sg}))) (r.channel == sg ? count_sigma : other)++;
  CHECK(count_sigma == 2);
  CHECK(other == 0);

  // an arbitrary (non-orthonormal) basis gets a matching dual family
  std::mt19937_64 rng(8);
  Word w = make_word({sg, sg, sg});
  std::vector<Morphism> basis;
  for (int i = 0; i < 2; ++i) basis.push_back(random_morphism(ising, make_word({sg}), w, rng));
  auto duals = dual_basis(ising, basis);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(compose(duals[i], basis[j]).blocks[sg](0, 0) - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("dual decomposition") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(31);
    for (int s = 0; s < c.rank(); ++s) {
      for (int a = 0; a < c.rank(); ++a) CHECK(dual_decompose_check(c, make_word({a}), s) < 1e-10);
      Word x = random_word(c, rng, 2);
      CHECK(dual_decompose_check(c, x, s) < 1e-10);
    }
  }
}

TEST_CASE("unit shift is natural") {
  Calculus c(load("ising"));
  std::mt19937_64 rng(2);
  int u = c.spec().unit;
  for (int i = 0; i < 10; ++i) {
    auto [a, b] = random_pair(c, rng, 3);
    auto f = random_morphism(c, a, b, rng);
    Word one = make_word({u});
    auto lhs = compose(unit_shift(c, b), tensor(c, identity(c, one), f));
    auto rhs = compose(tensor(c, f, identity(c, one)), unit_shift(c, a));
    CHECK(distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("sum letters behave like direct sums") {
  for (const char* name : kAll) {
    Calculus c(load(name));
    std::mt19937_64 rng(44);
    std::vector<int> mult(c.rank(), 0);
    mult[0] = 1;
    mult[c.rank() - 1] += 2;
    Word z{Letter::sum(mult)};
    for (int i = 0; i < c.rank(); ++i) CHECK(hom_dim(c.spec(), make_word({i}), z) == mult[i]);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      Word a = concat(random_word(c, rng, 1), z), b = concat(z, random_word(c, rng, 1));
      Word x = random_word(c, rng, 2);
      if (!hom_dim(c.spec(), a, b)) continue;
      auto f = random_morphism(c, a, b, rng), g = random_morphism(c, b, a, rng), h = random_morphism(c, x, x, rng);
      worst = std::max(worst, distance(tensor(c, compose(g, f), compose(h, h)), compose(tensor(c, g, h), tensor(c, f, h))));
      worst = std::max(worst, distance(tensor(c, tensor(c, f, h), g), tensor(c, f, tensor(c, h, g))));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("bends reject cuts past the end of a word") {
  Calculus fib(load("fibonacci"));
  auto f = identity(fib, make_word({1, 1}));
  CHECK_THROWS_AS(bend_right(fib, f, 3), BadPosition);
  CHECK_THROWS_AS(unbend_left(fib, f, 5), BadPosition);
}
