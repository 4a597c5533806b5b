#include "fcat/centre.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace fcat {

namespace {

Word letter(int k) { return make_word({k}); }

double rank_cut(const Calculus& c) { return 1e3 * c.spec().tol; }

// orthonormal basis of the column space, deterministic column pivoting
Matrix image_basis(const Matrix& m, double cut) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(cut);
  const long r = qr.rank();
  Matrix q = qr.householderQ();
  return q.leftCols(r);
}

int numeric_rank(const Matrix& m, double cut) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > cut * std::max(1.0, sv(0))) ++r;
  return r;
}

// matrix of a linear map Hom_TC(x, y) -> Hom_TC(x2, y2)
Matrix operator_matrix(const Calculus& c, const Word& x, const Word& y,
                       const std::function<TubeMorphism(const TubeMorphism&)>& fn) {
  const int n = tube_hom_dim(c.spec(), x, y);
  Matrix out;
  for (int k = 0; k < n; ++k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    Vector col = flatten(c, fn(unflatten(c, x, y, e)));
    if (k == 0) out = Matrix::Zero(col.size(), n);
    out.col(k) = col;
  }
  return out;
}

// id_a ⊗ f ⊗ id_b
Morphism pad(const Calculus& c, const Word& a, const Morphism& f, const Word& b) {
  Morphism m = b.empty() ? f : tensor(c, f, identity(c, b));
  return a.empty() ? m : tensor(c, identity(c, a), m);
}

Scalar dim_of(const Calculus& c, int s) { return c.spec().d(s); }

void add_component(TubeMorphism& t, int grade, const Morphism& m) {
  auto it = t.components.find(grade);
  if (it == t.components.end())
    t.components.emplace(grade, m);
  else
    it->second += m;
}

void require_braided(const Calculus& c) {
  if (!c.spec().braided()) throw NotBraided();
}

// S strand circling W: (capR(S) ⊗ id)(id_S ⊗ σ_{W,S*})(id_S ⊗ σ_{S*,W})(cup(S) ⊗ id_W)
Morphism ring(const Calculus& c, int s, const Word& w) {
  const Word ws = letter(s), wd = dual_word(c.spec(), ws);
  Morphism m = tensor(c, cup(c, ws), identity(c, w));
  m = compose(tensor(c, identity(c, ws), braid(c, wd, w)), m);
  m = compose(tensor(c, identity(c, ws), braid(c, w, wd)), m);
  return compose(tensor(c, cap_right(c, ws), identity(c, w)), m);
}

// right partial trace over t of f ∈ Hom(X T, A T)
Morphism partial_trace_right(const Calculus& c, const Morphism& f, const Word& t) {
  const std::size_t n = t.size();
  const Word x = slice(f.source, 0, f.source.size() - n);
  const Word a = slice(f.target, 0, f.target.size() - n);
  const Word td = dual_word(c.spec(), t);
  Morphism m = tensor(c, identity(c, x), cup(c, t));
  m = compose(tensor(c, f, identity(c, td)), m);
  return compose(tensor(c, identity(c, a), cap_right(c, t)), m);
}

Vector sector(const TubeAlgebra& a, int x, const Vector& v) {
  const int rk = a.rank();
  Vector out = Vector::Zero(v.size());
  const int off = a.offset[x * rk + x], len = a.offset[x * rk + x + 1] - off;
  out.segment(off, len) = v.segment(off, len);
  return out;
}

// Lagrange projector onto the eigenvalue lam of b, relative to the unit u
Vector spectral_projector(const TubeAlgebra& a, const Vector& b, const Vector& u, const std::vector<Scalar>& roots,
                          std::size_t pick) {
  Vector p = u;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (j == pick) continue;
    p = a.multiply(p, b - roots[j] * u) / (roots[pick] - roots[j]);
  }
  return p;
}

// group nearly equal values; returns cluster representatives
std::vector<std::pair<Scalar, int>> cluster(const Vector& vals, double same) {
  std::vector<std::pair<Scalar, int>> out;
  for (long i = 0; i < vals.size(); ++i) {
    bool hit = false;
    for (auto& [v, n] : out)
      if (std::abs(vals(i) - v) < same) {
        ++n;
        hit = true;
        break;
      }
    if (!hit) out.push_back({vals(i), 1});
  }
  return out;
}

double min_gap(const std::vector<std::pair<Scalar, int>>& cl) {
  double g = INFINITY;
  for (std::size_t i = 0; i < cl.size(); ++i)
    for (std::size_t j = i + 1; j < cl.size(); ++j) g = std::min(g, std::abs(cl[i].first - cl[j].first));
  return g;
}

Vector random_vector(long n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (long i = 0; i < n; ++i) {
    double re = u(rng);
    double im = u(rng);
    v(i) = Scalar(re, im);
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------- half-braidings

Morphism half_braid_word(const Calculus& c, const HalfBraiding& hb, const Word& g) {
  const Word& x = hb.object;
  if (g.empty()) return identity(c, x);
  if (!g[0].is_simple()) throw ShapeMismatch("half_braid_word needs simple letters");
  const Word head = slice(g, 0, 1), rest = slice(g, 1, g.size());
  const Morphism& first = hb.tau.at(g[0].label());
  if (rest.empty()) return first;
  return compose(tensor(c, first, identity(c, rest)), tensor(c, identity(c, head), half_braid_word(c, hb, rest)));
}

double half_braiding_residual(const Calculus& c, const HalfBraiding& hb) {
  const Word& x = hb.object;
  const int rk = c.rank();
  if (static_cast<int>(hb.tau.size()) != rk) throw ShapeMismatch("half-braiding needs one map per simple");
  double worst = distance(hb.tau[c.spec().unit], unit_shift(c, x));
  for (int s = 0; s < rk; ++s) {
    const Morphism& t = hb.tau[s];
    if (t.source != concat(letter(s), x) || t.target != concat(x, letter(s)))
      throw ShapeMismatch("half-braiding component has the wrong shape");
    for (const auto& b : t.blocks) {
      if (b.rows() != b.cols()) return INFINITY;
      if (b.size() && numeric_rank(b, rank_cut(c)) < b.rows()) return INFINITY;
    }
  }
  const Morphism id_x = identity(c, x);
  for (int s = 0; s < rk; ++s)
    for (int t = 0; t < rk; ++t) {
      const Word st = make_word({s, t});
      Morphism lhs = half_braid_word(c, hb, st);
      Morphism rhs = zero(c, lhs.source, lhs.target);
      for (const auto& r : decompose_resolution(c, st))
        rhs += compose(tensor(c, id_x, r.b), compose(hb.tau[r.channel], tensor(c, r.b_dual, id_x)));
      worst = std::max(worst, distance(lhs, rhs));
    }
  return worst;
}

HalfBraiding half_braiding_from_pair(const Calculus& c, const Word& i, const Word& j) {
  require_braided(c);
  HalfBraiding hb{concat(i, j), {}};
  for (int s = 0; s < c.rank(); ++s) {
    const Word ws = letter(s);
    Morphism over = tensor(c, braid(c, ws, i), identity(c, j));
    Morphism under = tensor(c, identity(c, i), braid_inverse(c, ws, j));
    hb.tau.push_back(compose(under, over));
  }
  return hb;
}

// ---------------------------------------------------------------- idempotents

std::vector<int> multiplicities(const Calculus& c, const TubeMorphism& e) {
  std::vector<int> m;
  for (int i = 0; i < c.rank(); ++i) {
    Matrix op = operator_matrix(c, letter(i), e.source, [&](const TubeMorphism& h) { return tube_compose(c, e, h); });
    m.push_back(numeric_rank(op, rank_cut(c)));
  }
  return m;
}

double idempotency_residual(const Calculus& c, const TubeMorphism& e) {
  return distance(tube_compose(c, e, e), e);
}

CentreIdempotent eps_from_half_braiding(const Calculus& c, const HalfBraiding& hb) {
  const double res = half_braiding_residual(c, hb);
  if (!(res < c.spec().tol)) throw NotHalfBraiding(res);
  const Scalar d2 = c.spec().D2;
  TubeMorphism eps = tube_zero(hb.object, hb.object);
  for (int s = 0; s < c.rank(); ++s) eps.components.emplace(s, (dim_of(c, s) / d2) * hb.tau[s]);
  CentreIdempotent out;
  out.eps = std::move(eps);
  out.mults = multiplicities(c, out.eps);
  out.origin = Origin::half_braiding;
  return out;
}

CentreIdempotent eps_XY(const Calculus& c, const Word& i, const Word& j) {
  CentreIdempotent out = eps_from_half_braiding(c, half_braiding_from_pair(c, i, j));
  out.origin = Origin::braiding_pair;
  return out;
}

double handle_slide_check(const Calculus& c, const HalfBraiding& hb, const TubeMorphism& alpha) {
  const Word& x = hb.object;
  if (alpha.target != x) throw ShapeMismatch("handle_slide_check: alpha must end at the half-braided object");
  const Word& y = alpha.source;
  const Scalar d2 = c.spec().D2;
  TubeMorphism lhs = tube_compose(c, eps_from_half_braiding(c, hb).eps, alpha);
  TubeMorphism rhs = tube_zero(y, x);
  for (const auto& [g, a] : alpha.components) {
    const Word wg = letter(g), gd = dual_word(c.spec(), wg);
    for (int r = 0; r < c.rank(); ++r) {
      const Word wr = letter(r);
      Morphism m = pad(c, wr, cup_left(c, wg), y);
      m = compose(tensor(c, identity(c, concat(wr, gd)), a), m);
      m = compose(tensor(c, half_braid_word(c, hb, concat(wr, gd)), identity(c, wg)), m);
      m = compose(tensor(c, identity(c, concat(x, wr)), cap(c, wg)), m);
      add_component(rhs, r, (dim_of(c, r) / d2) * m);
    }
  }
  return distance(lhs, rhs);
}

double handle_slide_check_mirror(const Calculus& c, const HalfBraiding& hb, const TubeMorphism& beta) {
  const Word& x = hb.object;
  if (beta.source != x) throw ShapeMismatch("handle_slide_check_mirror: beta must start at the half-braided object");
  const Word& y = beta.target;
  const Scalar d2 = c.spec().D2;
  TubeMorphism lhs = tube_compose(c, beta, eps_from_half_braiding(c, hb).eps);
  TubeMorphism rhs = tube_zero(x, y);
  for (const auto& [g, b] : beta.components) {
    const Word wg = letter(g), gd = dual_word(c.spec(), wg);
    for (int r = 0; r < c.rank(); ++r) {
      const Word wr = letter(r);
      Morphism m = tensor(c, cup(c, wg), identity(c, concat(wr, x)));
      m = compose(tensor(c, identity(c, wg), half_braid_word(c, hb, concat(gd, wr))), m);
      m = compose(tensor(c, b, identity(c, concat(gd, wr))), m);
      m = compose(tensor(c, identity(c, y), tensor(c, cap_right(c, wg), identity(c, wr))), m);
      add_component(rhs, r, (dim_of(c, r) / d2) * m);
    }
  }
  return distance(lhs, rhs);
}

std::vector<TubeMorphism> hom_between_idempotents(const Calculus& c, const TubeMorphism& e1, const TubeMorphism& e2) {
  const Word& x1 = e1.source;
  const Word& x2 = e2.source;
  Matrix p = operator_matrix(c, x1, x2, [&](const TubeMorphism& h) {
    return tube_compose(c, e2, tube_compose(c, h, e1));
  });
  std::vector<TubeMorphism> out;
  if (p.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_cut(c) * std::max(1.0, sv(0))) out.push_back(unflatten(c, x1, x2, svd.matrixU().col(i)));
  return out;
}

CompletenessVerdict completeness_check(const Calculus& c, const std::vector<CentreIdempotent>& idems) {
  CompletenessVerdict v;
  const int rk = c.rank();
  v.primitive = true;
  v.orthogonal = true;
  for (const auto& e : idems) {
    v.max_idempotency = std::max(v.max_idempotency, idempotency_residual(c, e.eps));
    if (hom_between_idempotents(c, e.eps, e.eps).size() != 1) v.primitive = false;
  }
  for (std::size_t a = 0; a < idems.size(); ++a)
    for (std::size_t b = 0; b < idems.size(); ++b)
      if (a != b && !hom_between_idempotents(c, idems[a].eps, idems[b].eps).empty()) v.orthogonal = false;

  std::vector<std::vector<int>> in(idems.size()), out(idems.size());
  for (std::size_t a = 0; a < idems.size(); ++a) {
    const TubeMorphism& e = idems[a].eps;
    for (int i = 0; i < rk; ++i) {
      Matrix op_in = operator_matrix(c, letter(i), e.source, [&](const TubeMorphism& h) { return tube_compose(c, e, h); });
      Matrix op_out = operator_matrix(c, e.source, letter(i), [&](const TubeMorphism& h) { return tube_compose(c, h, e); });
      in[a].push_back(numeric_rank(op_in, rank_cut(c)));
      out[a].push_back(numeric_rank(op_out, rank_cut(c)));
    }
  }
  bool all_equal = true;
  for (int x = 0; x < rk; ++x)
    for (int y = 0; y < rk; ++y) {
      int l = 0;
      for (std::size_t a = 0; a < idems.size(); ++a) l += in[a][x] * out[a][y];
      const int r = tube_hom_dim(c.spec(), letter(x), letter(y));
      v.lhs += l;
      v.rhs += r;
      if (l != r) all_equal = false;
    }
  v.complete = all_equal && v.orthogonal && v.primitive && v.max_idempotency < c.spec().tol * 1e3;
  return v;
}

// ---------------------------------------------------------------- modular data

Matrix s_matrix(const Calculus& c) {
  require_braided(c);
  const int rk = c.rank();
  Matrix s(rk, rk);
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) {
      const Word wi = letter(i), wj = letter(j);
      s(i, j) = trace(c, compose(braid(c, wj, wi), braid(c, wi, wj)));
    }
  return s;
}

Matrix s_matrix_dual(const Calculus& c) {
  require_braided(c);
  const int rk = c.rank();
  Matrix s(rk, rk);
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) {
      const Word wi = letter(c.spec().dual[i]), wj = letter(c.spec().dual[j]);
      s(i, j) = trace(c, compose(braid(c, wj, wi), braid(c, wi, wj)));
    }
  return s;
}

Vector t_matrix(const Calculus& c) {
  require_braided(c);
  Vector t(c.rank());
  for (int i = 0; i < c.rank(); ++i) {
    const Word w = letter(i);
    Morphism kink = partial_trace_right(c, braid(c, w, w), w);
    t(i) = trace(c, kink) / dim_of(c, i);
  }
  return t;
}

Vector t_matrix_dual(const Calculus& c) {
  require_braided(c);
  Vector t(c.rank());
  for (int i = 0; i < c.rank(); ++i) {
    const Word w = letter(c.spec().dual[i]), wd = dual_word(c.spec(), w);
    // kink closed on the left
    Morphism m = tensor(c, cup_left(c, w), identity(c, w));
    m = compose(tensor(c, identity(c, wd), braid(c, w, w)), m);
    m = compose(tensor(c, cap(c, w), identity(c, w)), m);
    t(i) = trace(c, m) / dim_of(c, c.spec().dual[i]);
  }
  return t;
}

ModularData modular_data(const Calculus& c) {
  ModularData md;
  md.S = s_matrix(c);
  md.T = t_matrix(c);
  Eigen::JacobiSVD<Matrix> svd(md.S);
  md.min_singular_value = svd.singularValues().minCoeff();
  double tmin = md.T.cwiseAbs().minCoeff();
  md.singular = md.min_singular_value <= rank_cut(c) * std::max(1.0, svd.singularValues()(0)) || tmin <= rank_cut(c);
  return md;
}

bool is_modular(const Calculus& c) { return !modular_data(c).singular; }

Scalar killing_ring_eval(const Calculus& c, int r) {
  require_braided(c);
  Scalar sum = 0;
  for (int s = 0; s < c.rank(); ++s) sum += dim_of(c, s) * trace(c, ring(c, s, letter(r)));
  return sum;
}

SliceReport slice_checks(const Calculus& c, int instances, std::uint64_t seed) {
  require_braided(c);
  if (!is_modular(c)) throw NotModular();
  const auto& spec = c.spec();
  const int rk = c.rank();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lab(0, rk - 1);
  SliceReport rep;

  auto rhs_horizontal = [&](const Word& x, const Word& y) {
    Morphism out = zero(c, concat(x, y), concat(x, y));
    for (const auto& rb : decompose_resolution(c, x))
      for (const auto& rc : decompose_resolution(c, y)) {
        const int t = rb.channel;
        if (rc.channel != spec.dual[t]) continue;
        const Word wt = letter(t);
        Morphism m = tensor(c, rb.b_dual, rc.b_dual);
        m = compose(cap_right(c, wt), m);
        m = compose(cup(c, wt), m);
        m = compose(tensor(c, rb.b, rc.b), m);
        out += (spec.D2 / dim_of(c, t)) * m;
      }
    return out;
  };

  while (rep.instances < instances) {
    Word x = letter(lab(rng)), y = letter(lab(rng)), a = letter(lab(rng)), b = letter(lab(rng));
    if (!hom_dim(spec, concat(x, y), concat(a, b))) continue;
    Morphism alpha = random_morphism(c, concat(x, y), concat(a, b), rng);

    // horizontal slice around X Y, tested against alpha
    Morphism lhs = zero(c, concat(x, y), concat(x, y));
    for (int s = 0; s < rk; ++s) lhs += dim_of(c, s) * ring(c, s, concat(x, y));
    rep.horizontal = std::max(rep.horizontal, distance(compose(alpha, lhs), compose(alpha, rhs_horizontal(x, y))));

    // vertical slice through alpha
    Morphism vl = zero(c, concat(x, y), concat(a, b));
    for (int s = 0; s < rk; ++s) {
      const Word ws = letter(s), sd = dual_word(spec, ws);
      Morphism m = tensor(c, cup(c, ws), identity(c, concat(x, y)));
      m = compose(pad(c, ws, braid(c, sd, x), y), m);
      m = compose(tensor(c, identity(c, concat(ws, x)), braid_inverse(c, sd, y)), m);
      m = compose(pad(c, ws, alpha, sd), m);
      m = compose(tensor(c, identity(c, concat(ws, a)), braid(c, b, sd)), m);
      m = compose(pad(c, ws, braid_inverse(c, a, sd), b), m);
      m = compose(tensor(c, cap_right(c, ws), identity(c, concat(a, b))), m);
      vl += dim_of(c, s) * m;
    }
    Morphism vr = zero(c, concat(x, y), concat(a, b));
    for (const auto& rc : decompose_resolution(c, y))
      for (const auto& rb : decompose_resolution(c, b)) {
        if (rc.channel != rb.channel) continue;
        const Word wt = letter(rc.channel);
        Morphism inner = compose(tensor(c, identity(c, a), rb.b_dual), compose(alpha, tensor(c, identity(c, x), rc.b)));
        Morphism left = partial_trace_right(c, inner, wt);
        vr += (spec.D2 / dim_of(c, rc.channel)) * tensor(c, left, compose(rb.b, rc.b_dual));
      }
    rep.vertical = std::max(rep.vertical, distance(vl, vr));
    ++rep.instances;
  }
  return rep;
}

// ---------------------------------------------------------------- block decomposition

std::vector<CentreIdempotent> decompose_tube_algebra(const Calculus& c, const TubeAlgebra& a, std::uint64_t seed) {
  const int n = a.dim();
  const int rk = a.rank();
  const double cut = rank_cut(c);
  std::mt19937_64 rng(seed);

  // centre = common kernel of all commutators with basis elements
  Matrix comm = Matrix::Zero(static_cast<long>(n) * n, n);
  for (int k = 0; k < n; ++k)
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p) comm(k * n + q, p) = a.structure[k](p, q) - a.structure[k](q, p);
  Eigen::JacobiSVD<Matrix> svd(comm, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<long> null_cols;
  for (long i = 0; i < n; ++i)
    if (i >= sv.size() || sv(i) <= cut * scale) null_cols.push_back(i);
  Matrix centre(n, static_cast<long>(null_cols.size()));
  for (std::size_t i = 0; i < null_cols.size(); ++i) centre.col(static_cast<long>(i)) = svd.matrixV().col(null_cols[i]);
  const long m = centre.cols();
  if (m == 0) throw DecompositionFailed("tube algebra has trivial centre");

  Vector z = centre * random_vector(m, rng);
  Matrix act = centre.adjoint() * a.left_action(z) * centre;
  Eigen::ComplexEigenSolver<Matrix> es(act);
  Vector lam = es.eigenvalues();
  std::vector<Scalar> roots(lam.data(), lam.data() + lam.size());
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < cut) {
        std::ostringstream os;
        os << "central eigenvalues not separated (gap " << std::abs(roots[i] - roots[j]) << ")";
        throw DecompositionFailed(os.str());
      }

  std::vector<CentreIdempotent> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Vector e = spectral_projector(a, z, a.unit, roots, i);
    if ((a.multiply(e, e) - e).norm() > cut * std::max(1.0, e.norm()))
      throw DecompositionFailed("central projector is not idempotent");
    const int r = numeric_rank(a.left_action(e), cut);
    const int size = static_cast<int>(std::lround(std::sqrt(double(r))));
    if (size * size != r) throw DecompositionFailed("block dimension is not a square");

    // smallest corner of the block
    int best = -1, best_m = 0;
    for (int x = 0; x < rk; ++x) {
      Vector ex = sector(a, x, e);
      if (ex.norm() < cut) continue;
      const int dx = numeric_rank(a.left_action(ex) * a.right_action(ex), cut);
      const int mx = static_cast<int>(std::lround(std::sqrt(double(dx))));
      if (mx * mx != dx) throw DecompositionFailed("corner dimension is not a square");
      if (mx > 0 && (best < 0 || mx < best_m)) best = x, best_m = mx;
    }
    if (best < 0) throw DecompositionFailed("empty block");
    Vector p = sector(a, best, e);
    if (best_m > 1) {
      Matrix lr = a.left_action(p) * a.right_action(p);
      Matrix q = image_basis(lr, cut);
      Vector b = a.multiply(a.multiply(p, random_vector(n, rng)), p);
      Matrix cb = q.adjoint() * a.left_action(b) * q;
      Eigen::ComplexEigenSolver<Matrix> ces(cb);
      auto cl = cluster(ces.eigenvalues(), cut);
      if (static_cast<int>(cl.size()) != best_m || min_gap(cl) < cut)
        throw DecompositionFailed("corner eigenvalues not separated");
      std::vector<Scalar> mus;
      for (auto& [v, cnt] : cl) mus.push_back(v);
      p = spectral_projector(a, b, p, mus, 0);
    }
    if ((a.multiply(p, p) - p).norm() > 1e3 * cut * std::max(1.0, p.norm()))
      throw DecompositionFailed("refined projector is not idempotent");

    CentreIdempotent ci;
    ci.eps = from_algebra(c, a, best, best, p);
    ci.origin = Origin::block_decomposition;
    ci.mults = multiplicities(c, ci.eps);
    int total = 0;
    for (int v : ci.mults) total += v;
    if (total != size) throw DecompositionFailed("multiplicities disagree with the block size");
    Vector tw = to_algebra(c, a, best, best, c_morphism(c, letter(best), {}));
    Vector pt = a.multiply(p, tw);
    ci.twist = p.dot(pt) / p.dot(p);
    out.push_back(std::move(ci));
  }

  auto key = [](const CentreIdempotent& e) {
    int size = 0, first = 0;
    for (int v : e.mults) size += v;
    while (e.mults[first] == 0) ++first;
    double phase = std::arg(*e.twist);
    if (phase < -1e-6) phase += 2 * M_PI;
    return std::make_tuple(size, first, e.mults, std::round(phase * 1e6));
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& l, const auto& r) { return key(l) < key(r); });
  return out;
}

// ---------------------------------------------------------------- splitting

SplitHalfBraiding half_braiding_from_idempotent(const Calculus& c, const CentreIdempotent& ce) {
  const TubeMorphism& e = ce.eps;
  const Word& x = e.source;
  const int rk = c.rank();
  const double cut = rank_cut(c);
  const auto& spec = c.spec();

  std::vector<int> m = multiplicities(c, e);
  std::vector<Matrix> images(rk);  // orthonormal coordinates of e ∘ Hom_TC([i], X)
  int total = 0;
  for (int i = 0; i < rk; ++i) {
    Matrix op = operator_matrix(c, letter(i), x, [&](const TubeMorphism& h) { return tube_compose(c, e, h); });
    images[i] = image_basis(op, cut);
    if (images[i].cols() != m[i]) throw SplitFailed("ambiguous image rank");
    total += m[i];
  }
  if (total == 0) throw SplitFailed("idempotent is zero");

  const Word z{Letter::sum(m)};
  const ChannelBasis& bz = c.basis(z);
  auto inj = [&](int j, int r) {
    Morphism g = zero(c, letter(j), z);
    g.blocks[j](bz.index(j, FusionTree{{j}, {r}, {}, {}}), 0) = 1.0;
    return g;
  };
  auto copy_row = [&](int j, int r) { return bz.index(j, FusionTree{{j}, {r}, {}, {}}); };

  HalfBraiding hb{z, {}};
  double solve_residual = 0;
  for (int s = 0; s < rk; ++s) {
    const Word ws = letter(s);
    const Word g = dual_word(spec, ws);  // the lifted strand; its dual is s
    const Morphism shape = zero(c, concat(ws, z), concat(z, ws));
    std::vector<std::pair<int, std::pair<long, long>>> slots;
    for (int k = 0; k < rk; ++k)
      for (long col = 0; col < shape.blocks[k].cols(); ++col)
        for (long row = 0; row < shape.blocks[k].rows(); ++row) slots.push_back({k, {row, col}});
    const long nu = static_cast<long>(slots.size());

    std::vector<Vector> rows_a;
    std::vector<Scalar> rows_b;
    const Morphism capg = tensor(c, identity(c, z), cap(c, g));
    for (int j = 0; j < rk; ++j) {
      if (!m[j]) continue;
      for (int jp = 0; jp < rk; ++jp) {
        if (!m[jp]) continue;
        const Word src = concat(g, letter(jp)), tgt = concat(letter(j), g);
        const ChannelBasis& bs = c.basis(src);
        const ChannelBasis& bt = c.basis(tgt);
        for (int k = 0; k < rk; ++k)
          for (int uc = 0; uc < bs.size(k); ++uc)
            for (int ur = 0; ur < bt.size(k); ++ur) {
              Morphism u = zero(c, src, tgt);
              u.blocks[k](ur, uc) = 1.0;
              const TubeMorphism lu = lift(c, u, g);
              Morphism pre = tensor(c, cup_left(c, g), identity(c, letter(jp)));
              pre = compose(pad(c, ws, u, {}), pre);
              for (int r = 0; r < m[j]; ++r) {
                const Morphism a1 = compose(pad(c, ws, inj(j, r), g), pre);
                // target: coordinates of f_{j,r} ∘ lift(u) in the f_{j',·} basis
                TubeMorphism fj = unflatten(c, letter(j), x, images[j].col(r));
                Vector coords = images[jp].adjoint() * flatten(c, tube_compose(c, fj, lu));
                Matrix cols(m[jp], nu);
                for (long p = 0; p < nu; ++p) {
                  Morphism tb = shape;
                  tb.blocks[slots[p].first](slots[p].second.first, slots[p].second.second) = 1.0;
                  Morphism val = compose(capg, compose(tensor(c, tb, identity(c, g)), a1));
                  for (int rp = 0; rp < m[jp]; ++rp) cols(rp, p) = val.blocks[jp](copy_row(jp, rp), 0);
                }
                for (int rp = 0; rp < m[jp]; ++rp) {
                  rows_a.push_back(cols.row(rp).transpose());
                  rows_b.push_back(coords(rp));
                }
              }
            }
      }
    }
    Matrix am(static_cast<long>(rows_a.size()), nu);
    Vector bv(static_cast<long>(rows_b.size()));
    for (std::size_t i = 0; i < rows_a.size(); ++i) {
      am.row(static_cast<long>(i)) = rows_a[i].transpose();
      bv(static_cast<long>(i)) = rows_b[i];
    }
    Morphism tau = shape;
    if (nu > 0) {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(am);
      cod.setThreshold(cut);
      if (cod.rank() < nu) throw SplitFailed("half-braiding is not determined by the idempotent");
      Vector sol = cod.solve(bv);
      solve_residual = std::max(solve_residual, (am * sol - bv).cwiseAbs().maxCoeff());
      for (long p = 0; p < nu; ++p) tau.blocks[slots[p].first](slots[p].second.first, slots[p].second.second) = sol(p);
    }
    hb.tau.push_back(std::move(tau));
  }
  if (solve_residual > 1e3 * cut) throw SplitFailed("inconsistent half-braiding equations");

  // compare ε_τ on Z with e on X through ι: Z -> X and a fitted π: X -> Z
  SplitHalfBraiding out{hb, 0};
  const TubeMorphism eps = eps_from_half_braiding(c, hb).eps;
  TubeMorphism iota = tube_zero(z, x);
  for (int j = 0; j < rk; ++j)
    for (int r = 0; r < m[j]; ++r) {
      Morphism proj = zero(c, z, letter(j));
      proj.blocks[j](0, copy_row(j, r)) = 1.0;
      iota += tube_compose(c, unflatten(c, letter(j), x, images[j].col(r)), embed(c, proj));
    }
  iota = tube_compose(c, iota, eps);
  Matrix op = operator_matrix(c, x, z, [&](const TubeMorphism& p) { return tube_compose(c, iota, p); });
  Vector target = flatten(c, e);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(op);
  cod.setThreshold(cut);
  TubeMorphism pi = unflatten(c, x, z, cod.solve(target));
  pi = tube_compose(c, eps, tube_compose(c, pi, e));
  out.residual = std::max({distance(tube_compose(c, iota, pi), e), distance(tube_compose(c, pi, iota), eps),
                           idempotency_residual(c, eps)});
  return out;
}

}  // namespace fcat
