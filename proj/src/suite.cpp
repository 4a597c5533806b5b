#include "fcat/suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fcat/serialize.hpp"

namespace fcat {

namespace {

CheckEntry residual(std::string name, double v, double tol) { return {std::move(name), v, false, v < tol}; }

CheckEntry count(std::string name, long n, long expected) {
  return {std::move(name), static_cast<double>(n), true, n == expected};
}

Word letter(int k) { return make_word({k}); }

struct Sampler {
  const Calculus& c;
  std::mt19937_64 rng;

  int label() { return std::uniform_int_distribution<int>(0, c.rank() - 1)(rng); }
  Word word(int max_len) {
    Word w;
    for (int i = std::uniform_int_distribution<int>(0, max_len)(rng); i > 0; --i) w.emplace_back(label());
    return w;
  }
  Morphism morphism(const Word& x, const Word& y) { return random_morphism(c, x, y, rng); }
  // target with a nonzero Hom space from x
  Word reachable(const Word& x, int max_len) {
    for (;;) {
      Word y = word(max_len);
      if (hom_dim(c.spec(), x, y)) return y;
    }
  }
};

std::vector<Word> short_words(int rank) {
  std::vector<Word> out{{}};
  for (int a = 0; a < rank; ++a) out.push_back(letter(a));
  for (int a = 0; a < rank; ++a)
    for (int b = 0; b < rank; ++b) out.push_back(make_word({a, b}));
  return out;
}

}  // namespace

bool all_pass(const std::vector<CheckEntry>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& e) { return e.pass; });
}

std::vector<CheckEntry> fusion_checks(const CategorySpec& s) {
  const double tol = s.tol;
  const int rk = s.rank();
  std::vector<CheckEntry> out;
  out.push_back(residual("pentagon", validate_pentagon(s).max_residual, tol));
  if (s.braided()) out.push_back(residual("hexagon", validate_hexagon(s).max_residual, tol));

  double dims = 0;
  for (int a = 0; a < rk; ++a)
    for (int b = 0; b < rk; ++b) {
      Scalar sum = 0;
      for (int k = 0; k < rk; ++k) sum += double(s.N(a, b, k)) * s.d(k);
      dims = std::max(dims, std::abs(sum - s.d(a) * s.d(b)));
    }
  out.push_back(residual("dimension_consistency", dims, tol));

  long bad_duals = s.dual[s.unit] != s.unit;
  for (int a = 0; a < rk; ++a) bad_duals += s.dual[s.dual[a]] != a || s.N(a, s.dual[a], s.unit) != 1;
  out.push_back(count("dual_involution", bad_duals, 0));

  long asym = 0, fusion = 0;
  auto words = short_words(rk);
  for (const auto& x : words)
    for (const auto& y : words) asym += hom_dim(s, x, y) != hom_dim(s, y, x);
  for (int a = 0; a < rk; ++a)
    for (int b = 0; b < rk; ++b)
      for (int k = 0; k < rk; ++k) fusion += hom_dim(s, make_word({a, b}), letter(k)) != s.N(a, b, k);
  out.push_back(count("hom_dim_symmetry", asym, 0));
  out.push_back(count("fusion_hom_dims", fusion, 0));

  double dd = 0;
  for (int r = 0; r < rk; ++r) dd = std::max(dd, std::abs(double_decompose_residual(s, r)));
  out.push_back(residual("double_decompose", dd, tol));
  return out;
}

std::vector<CheckEntry> diagram_checks(const Calculus& c, int instances, std::uint64_t seed) {
  const auto& s = c.spec();
  const double tol = s.tol;
  Sampler g{c, std::mt19937_64(seed)};
  double assoc = 0, ident = 0, tassoc = 0, inter = 0, zig = 0, sph = 0, cyc = 0, dd = 0, ser = 0;
  for (int n = 0; n < instances; ++n) {
    Word w = g.word(2), x = g.reachable(w, 2), y = g.reachable(x, 2), z = g.reachable(y, 2);
    Morphism f = g.morphism(w, x), h1 = g.morphism(x, y), h2 = g.morphism(y, z);
    assoc = std::max(assoc, distance(compose(h2, compose(h1, f)), compose(compose(h2, h1), f)));
    ident = std::max({ident, distance(compose(identity(c, x), f), f), distance(compose(f, identity(c, w)), f)});

    Word a = g.word(1), b = g.reachable(a, 1);
    Morphism k1 = g.morphism(a, b), k2 = g.morphism(b, g.reachable(b, 1));
    tassoc = std::max(tassoc, distance(tensor(c, tensor(c, f, k1), h1), tensor(c, f, tensor(c, k1, h1))));
    inter = std::max(inter, distance(compose(tensor(c, h1, k2), tensor(c, f, k1)),
                                     tensor(c, compose(h1, f), compose(k2, k1))));

    Word v = g.word(2), vd = dual_word(s, v);
    Morphism left = compose(tensor(c, identity(c, v), cap(c, v)), tensor(c, cup(c, v), identity(c, v)));
    Morphism right = compose(tensor(c, identity(c, vd), cap_right(c, v)), tensor(c, cup_left(c, v), identity(c, vd)));
    zig = std::max({zig, distance(left, identity(c, v)), distance(right, identity(c, vd))});

    Morphism e = g.morphism(w, w);
    sph = std::max(sph, std::abs(left_closure(c, e) - right_closure(c, e)));
    Morphism back = g.morphism(x, w);
    cyc = std::max(cyc, std::abs(trace(c, compose(back, f)) - trace(c, compose(f, back))));

    Word r = g.word(2);
    if (!r.empty()) dd = std::max(dd, dual_decompose_check(c, r, g.label()));

    Morphism m = g.morphism(g.word(2), g.word(2));
    auto text = morphism_to_json(c, m).dump();
    ser = std::max(ser, distance(morphism_from_json(c, nlohmann::json::parse(text)), m));
  }
  double loops = 0;
  for (int a = 0; a < c.rank(); ++a)
    loops = std::max(loops, std::abs(compose(cap_right(c, letter(a)), cup(c, letter(a))).blocks[s.unit](0, 0) - s.d(a)));

  std::vector<CheckEntry> out{
      residual("composition_associativity", assoc, tol), residual("identity_law", ident, tol),
      residual("tensor_associativity", tassoc, tol),     residual("interchange", inter, tol),
      residual("zigzag", zig, tol),                      residual("loop_values", loops, tol),
      residual("sphericality", sph, tol),                residual("trace_cyclicity", cyc, tol),
      residual("dual_decompose", dd, tol),               residual("serialization_round_trip", ser, tol)};
  if (!s.braided()) return out;

  double r2 = 0, hex = 0, bal = 0;
  for (int n = 0; n < instances; ++n) {
    Word a = g.word(2), b = g.word(2), d = g.word(1);
    r2 = std::max(r2, distance(compose(braid_inverse(c, b, a), braid(c, a, b)), identity(c, concat(a, b))));
    Morphism whole = braid(c, a, concat(b, d));
    Morphism steps = compose(tensor(c, identity(c, b), braid(c, a, d)), tensor(c, braid(c, a, b), identity(c, d)));
    hex = std::max(hex, distance(whole, steps));
  }
  std::vector<Scalar> theta(c.rank());
  for (int a = 0; a < c.rank(); ++a) {
    Scalar sum = 0;
    for (int k = 0; k < c.rank(); ++k)
      if (s.N(a, a, k)) sum += s.d(k) * s.R(a, a, k).trace();
    theta[a] = sum / s.d(a);
  }
  for (int a = 0; a < c.rank(); ++a)
    for (int b = 0; b < c.rank(); ++b) {
      Morphism dbl = compose(braid(c, b, a), braid(c, a, b));
      for (int k = 0; k < c.rank(); ++k) {
        const Matrix& blk = dbl.blocks[k];
        if (blk.size() == 0) continue;
        const Scalar want = theta[k] / (theta[a] * theta[b]);
        bal = std::max(bal, (blk - want * Matrix::Identity(blk.rows(), blk.cols())).cwiseAbs().maxCoeff());
      }
    }
  out.push_back(residual("reidemeister_ii", r2, tol));
  out.push_back(residual("braid_hexagon_words", hex, tol));
  out.push_back(residual("balance", bal, tol));
  return out;
}

std::vector<CheckEntry> tube_checks(const Calculus& c, int instances, std::uint64_t seed) {
  const auto& s = c.spec();
  const double tol = s.tol;
  const int rk = c.rank();
  Sampler g{c, std::mt19937_64(seed + 1)};
  std::vector<CheckEntry> out;

  long dim_bad = 0;
  for (int x = 0; x < rk; ++x)
    for (int y = 0; y < rk; ++y) {
      long n = 0;
      for (int i = 0; i < rk; ++i)
        for (int j = 0; j < rk; ++j) n += hom_dim(s, letter(x), make_word({i, j})) * hom_dim(s, make_word({i, j}), letter(y));
      dim_bad += n != tube_hom_dim(s, letter(x), letter(y));
    }
  out.push_back(count("tube_dim_pairs", dim_bad, 0));

  double assoc = 0, unit = 0, func = 0;
  long unfaithful = 0;
  for (int n = 0; n < instances; ++n) {
    Word w = letter(g.label()), x = letter(g.label()), y = letter(g.label()), z = letter(g.label());
    auto f = random_tube_morphism(c, w, x, g.rng), h1 = random_tube_morphism(c, x, y, g.rng),
         h2 = random_tube_morphism(c, y, z, g.rng);
    assoc = std::max(assoc, distance(tube_compose(c, h2, tube_compose(c, h1, f)), tube_compose(c, tube_compose(c, h2, h1), f)));
    unit = std::max({unit, distance(tube_compose(c, tube_identity(c, x), f), f),
                     distance(tube_compose(c, f, tube_identity(c, w)), f)});

    Word a = g.word(2), b = g.reachable(a, 2), d = g.reachable(b, 2);
    Morphism p = g.morphism(a, b), q = g.morphism(b, d);
    func = std::max(func, distance(embed(c, compose(q, p)), tube_compose(c, embed(c, q), embed(c, p))));
    unfaithful += max_abs(p) > 0 && max_abs(embed(c, p)) == 0;
  }
  out.push_back(residual("tube_associativity", assoc, tol));
  out.push_back(residual("tube_unit", unit, tol));
  out.push_back(residual("embed_functoriality", func, tol));
  out.push_back(count("embed_faithful", unfaithful, 0));

  // End_TC(1): grade-r unit morphisms multiply like the fusion ring
  double ring = 0;
  long ring_bad = 0;
  auto grade = [&](int r) {
    TubeMorphism m = tube_zero({}, {});
    Morphism f = zero(c, letter(r), letter(r));
    f.blocks[r](0, 0) = 1.0;
    m.components.emplace(r, f);
    return m;
  };
  for (int a = 0; a < rk; ++a)
    for (int b = 0; b < rk; ++b) {
      auto prod = tube_compose(c, grade(a), grade(b));
      for (int k = 0; k < rk; ++k) {
        auto it = prod.components.find(k);
        const Scalar v = it == prod.components.end() ? Scalar(0) : it->second.blocks[k](0, 0);
        ring = std::max(ring, std::abs(v - double(s.N(a, b, k))));
        ring_bad += std::lround(v.real()) != s.N(a, b, k);
      }
    }
  out.push_back(residual("grothendieck_ring", ring, tol));
  out.push_back(count("grothendieck_integers", ring_bad, 0));

  auto alg = tube_algebra(c);
  long expected = 0;
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) expected += tube_hom_dim(s, letter(i), letter(j));
  out.push_back(count("tube_algebra_dim", alg.dim(), expected));
  double alg_assoc = 0, alg_unit = 0;
  std::normal_distribution<double> nd;
  auto rnd = [&] {
    Vector v(alg.dim());
    for (auto& e : v) e = Scalar(nd(g.rng), nd(g.rng));
    return v;
  };
  for (int n = 0; n < instances; ++n) {
    Vector a = rnd(), b = rnd(), d = rnd();
    alg_assoc = std::max(alg_assoc, (alg.multiply(alg.multiply(a, b), d) - alg.multiply(a, alg.multiply(b, d))).norm());
    alg_unit = std::max({alg_unit, (alg.multiply(alg.unit, a) - a).norm(), (alg.multiply(a, alg.unit) - a).norm()});
  }
  out.push_back(residual("tube_algebra_associativity", alg_assoc, tol));
  out.push_back(residual("tube_algebra_unit", alg_unit, tol));
  return out;
}

std::vector<CheckEntry> centre_checks(const Calculus& c, int instances, std::uint64_t seed) {
  const auto& s = c.spec();
  const double tol = s.tol;
  const int rk = c.rank();
  std::vector<CheckEntry> out;

  auto alg = tube_algebra(c);
  auto blocks = decompose_tube_algebra(c, alg, seed);
  long sq = 0, not_primitive = 0;
  double idem = 0, trip = 0;
  for (const auto& b : blocks) {
    long size = 0;
    for (int m : b.mults) size += m;
    sq += size * size;
    idem = std::max(idem, idempotency_residual(c, b.eps));
    not_primitive += hom_between_idempotents(c, b.eps, b.eps).size() != 1;
    trip = std::max(trip, half_braiding_from_idempotent(c, b).residual);
  }
  out.push_back(count("block_dimensions", sq, alg.dim()));
  out.push_back(residual("block_idempotency", idem, tol));
  out.push_back(count("block_primitive", not_primitive, 0));
  out.push_back(residual("half_braiding_round_trip", trip, 1e3 * tol));
  if (!s.braided()) return out;

  std::vector<CentreIdempotent> idems;
  std::vector<HalfBraiding> hbs;
  double eps_idem = 0, hb_res = 0;
  long mult_bad = 0;
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) {
      hbs.push_back(half_braiding_from_pair(c, letter(i), letter(j)));
      hb_res = std::max(hb_res, half_braiding_residual(c, hbs.back()));
      idems.push_back(eps_from_half_braiding(c, hbs.back()));
      eps_idem = std::max(eps_idem, idempotency_residual(c, idems.back().eps));
      for (int k = 0; k < rk; ++k) mult_bad += idems.back().mults[k] != hom_dim(s, letter(k), make_word({i, j}));
    }
  out.push_back(residual("half_braiding_naturality", hb_res, tol));
  out.push_back(residual("eps_idempotency", eps_idem, tol));
  out.push_back(count("eps_dimension_bookkeeping", mult_bad, 0));

  std::mt19937_64 rng(seed + 2);
  std::uniform_int_distribution<int> lab(0, rk - 1), pick(0, rk * rk - 1);
  double slide = 0, mirror = 0;
  for (int n = 0; n < instances; ++n) {
    const auto& hb = hbs[pick(rng)];
    Word y = letter(lab(rng));
    slide = std::max(slide, handle_slide_check(c, hb, random_tube_morphism(c, y, hb.object, rng)));
    mirror = std::max(mirror, handle_slide_check_mirror(c, hb, random_tube_morphism(c, hb.object, y, rng)));
  }
  out.push_back(residual("handle_slide", slide, tol));
  out.push_back(residual("handle_slide_mirror", mirror, tol));

  auto md = modular_data(c);
  out.push_back(residual("s_dual_strands", (md.S - s_matrix_dual(c)).cwiseAbs().maxCoeff(), tol));
  out.push_back(residual("t_dual_strands", (md.T - t_matrix_dual(c)).cwiseAbs().maxCoeff(), tol));

  if (md.singular) {
    // converse of the killing ring: some pair of distinct idempotents is linked
    long linked = 0;
    for (std::size_t a = 0; a < idems.size(); ++a)
      for (std::size_t b = 0; b < idems.size(); ++b)
        if (a != b && !hom_between_idempotents(c, idems[a].eps, idems[b].eps).empty()) ++linked;
    out.push_back({"non_modular_witness", static_cast<double>(linked), true, linked > 0});
    const bool complete = completeness_check(c, idems).complete;
    out.push_back({"completeness_fails", double(complete), true, !complete});
    return out;
  }

  const Matrix sid = md.S * md.S.adjoint() - s.D2 * Matrix::Identity(rk, rk);
  out.push_back(residual("s_unitarity", sid.cwiseAbs().maxCoeff(), tol));
  double ring = 0;
  for (int r = 0; r < rk; ++r) ring = std::max(ring, std::abs(killing_ring_eval(c, r) - (r == s.unit ? s.D2 : Scalar(0))));
  out.push_back(residual("killing_ring", ring, tol));
  auto sl = slice_checks(c, instances, seed + 3);
  out.push_back(residual("horizontal_slice", sl.horizontal, tol));
  out.push_back(residual("vertical_slice", sl.vertical, tol));

  long hom_bad = 0;
  for (int a = 0; a < rk * rk; ++a)
    for (int b = 0; b < rk * rk; ++b) {
      const long want = hom_dim(s, letter(a / rk), letter(b / rk)) * hom_dim(s, letter(a % rk), letter(b % rk));
      hom_bad += static_cast<long>(hom_between_idempotents(c, idems[a].eps, idems[b].eps).size()) != want;
    }
  out.push_back(count("hom_between_idempotents", hom_bad, 0));
  auto v = completeness_check(c, idems);
  out.push_back({"completeness", static_cast<double>(v.lhs), true, v.complete && v.lhs == v.rhs});
  return out;
}

std::vector<CheckEntry> identity_suite(const Calculus& c, int instances, std::uint64_t seed) {
  auto out = fusion_checks(c.spec());
  for (auto part : {diagram_checks(c, instances, seed), tube_checks(c, instances, seed), centre_checks(c, instances, seed)})
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace fcat
