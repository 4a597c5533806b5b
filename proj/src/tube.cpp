#include "fcat/tube.hpp"

namespace fcat {

namespace {

void prune(const Calculus& c, TubeMorphism& m) {
  const double cut = 1e-3 * c.spec().tol;
  for (auto it = m.components.begin(); it != m.components.end();)
    it = max_abs(it->second) < cut ? m.components.erase(it) : std::next(it);
}

void require_same_shape(const TubeMorphism& a, const TubeMorphism& b) {
  if (a.source != b.source || a.target != b.target) throw ShapeMismatch("tube morphisms have different shapes");
}

void add_into(std::map<int, Morphism>& dst, int grade, const Morphism& m) {
  auto it = dst.find(grade);
  if (it == dst.end())
    dst.emplace(grade, m);
  else
    it->second += m;
}

Word letter(int k) { return make_word({k}); }

}  // namespace

TubeMorphism& TubeMorphism::operator+=(const TubeMorphism& o) {
  require_same_shape(*this, o);
  for (const auto& [r, m] : o.components) add_into(components, r, m);
  return *this;
}

TubeMorphism& TubeMorphism::operator-=(const TubeMorphism& o) {
  require_same_shape(*this, o);
  for (const auto& [r, m] : o.components) add_into(components, r, Scalar(-1) * m);
  return *this;
}

TubeMorphism& TubeMorphism::operator*=(Scalar s) {
  for (auto& [r, m] : components) m *= s;
  return *this;
}

TubeMorphism operator+(TubeMorphism a, const TubeMorphism& b) { return a += b; }
TubeMorphism operator-(TubeMorphism a, const TubeMorphism& b) { return a -= b; }
TubeMorphism operator*(Scalar s, TubeMorphism a) { return a *= s; }

double max_abs(const TubeMorphism& m) {
  double r = 0;
  for (const auto& [g, f] : m.components) r = std::max(r, max_abs(f));
  return r;
}

double distance(const TubeMorphism& a, const TubeMorphism& b) { return max_abs(a - b); }

int tube_hom_dim(const CategorySpec& spec, const Word& x, const Word& y) {
  int n = 0;
  for (int r = 0; r < spec.rank(); ++r) n += hom_dim(spec, concat(letter(r), x), concat(y, letter(r)));
  return n;
}

TubeMorphism tube_zero(const Word& x, const Word& y) { return TubeMorphism{x, y, {}}; }

TubeMorphism embed(const Calculus& c, const Morphism& f) {
  const Word u = letter(c.spec().unit);
  TubeMorphism m = tube_zero(f.source, f.target);
  m.components.emplace(c.spec().unit, compose(unit_shift(c, f.target), tensor(c, identity(c, u), f)));
  prune(c, m);
  return m;
}

TubeMorphism tube_identity(const Calculus& c, const Word& x) { return embed(c, identity(c, x)); }

TubeMorphism tube_compose(const Calculus& c, const TubeMorphism& g, const TubeMorphism& f) {
  if (g.source != f.target) throw ShapeMismatch("tube_compose: source of g differs from target of f");
  const Word& x = f.source;
  const Word& z = g.target;
  TubeMorphism out = tube_zero(x, z);
  for (const auto& [s, gs] : g.components) {
    const Word ws = letter(s);
    for (const auto& [r, fr] : f.components) {
      const Word wr = letter(r);
      const Word sr = concat(ws, wr);
      Morphism stacked = compose(tensor(c, gs, identity(c, wr)), tensor(c, identity(c, ws), fr));
      const Morphism id_x = identity(c, x), id_z = identity(c, z);
      for (const auto& res : decompose_resolution(c, sr)) {
        Morphism term = compose(tensor(c, id_z, res.b_dual), compose(stacked, tensor(c, res.b, id_x)));
        add_into(out.components, res.channel, term);
      }
    }
  }
  prune(c, out);
  return out;
}

TubeMorphism lift(const Calculus& c, const Morphism& alpha, const Word& g) {
  const std::size_t n = g.size();
  if (alpha.source.size() < n || alpha.target.size() < n || slice(alpha.source, 0, n) != g ||
      slice(alpha.target, alpha.target.size() - n, alpha.target.size()) != g)
    throw ShapeMismatch("lift: alpha is not of the form G X -> Y G");
  const Word x = slice(alpha.source, n, alpha.source.size());
  const Word y = slice(alpha.target, 0, alpha.target.size() - n);
  TubeMorphism out = tube_zero(x, y);
  const Morphism id_x = identity(c, x), id_y = identity(c, y);
  for (const auto& res : decompose_resolution(c, g))
    add_into(out.components, res.channel,
             compose(tensor(c, id_y, res.b_dual), compose(alpha, tensor(c, res.b, id_x))));
  prune(c, out);
  return out;
}

TubeMorphism c_morphism(const Calculus& c, const Word& g, const Word& x) {
  return lift(c, identity(c, concat(g, x, g)), g);
}

TubeMorphism random_tube_morphism(const Calculus& c, const Word& x, const Word& y, std::mt19937_64& rng) {
  TubeMorphism m = tube_zero(x, y);
  for (int r = 0; r < c.rank(); ++r) {
    const Word src = concat(letter(r), x), tgt = concat(y, letter(r));
    if (hom_dim(c.spec(), src, tgt) == 0) continue;
    m.components.emplace(r, random_morphism(c, src, tgt, rng));
  }
  return m;
}

Vector flatten(const Calculus& c, const TubeMorphism& m) {
  std::vector<Scalar> out;
  for (int r = 0; r < c.rank(); ++r) {
    const auto& bs = c.basis(concat(letter(r), m.source));
    const auto& bt = c.basis(concat(m.target, letter(r)));
    auto it = m.components.find(r);
    for (int k = 0; k < c.rank(); ++k)
      for (int j = 0; j < bs.size(k); ++j)
        for (int i = 0; i < bt.size(k); ++i)
          out.push_back(it == m.components.end() ? Scalar(0) : it->second.blocks[k](i, j));
  }
  return Eigen::Map<Vector>(out.data(), static_cast<long>(out.size()));
}

TubeMorphism unflatten(const Calculus& c, const Word& x, const Word& y, const Vector& v) {
  TubeMorphism m = tube_zero(x, y);
  long pos = 0;
  for (int r = 0; r < c.rank(); ++r) {
    const Word src = concat(letter(r), x), tgt = concat(y, letter(r));
    Morphism f = zero(c, src, tgt);
    bool any = false;
    for (int k = 0; k < c.rank(); ++k)
      for (long j = 0; j < f.blocks[k].cols(); ++j)
        for (long i = 0; i < f.blocks[k].rows(); ++i) {
          if (pos >= v.size()) throw ShapeMismatch("unflatten: coordinate vector too short");
          f.blocks[k](i, j) = v(pos++);
          any = true;
        }
    if (any) m.components.emplace(r, std::move(f));
  }
  if (pos != v.size()) throw ShapeMismatch("unflatten: coordinate vector too long");
  prune(c, m);
  return m;
}

int TubeAlgebra::rank() const {
  int r = 0;
  while (r * r + 1 < static_cast<int>(offset.size())) ++r;
  return r;
}

Vector TubeAlgebra::multiply(const Vector& a, const Vector& b) const { return left_action(a) * b; }

Matrix TubeAlgebra::left_action(const Vector& a) const {
  const int n = dim();
  Matrix l = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) l.row(k) = a.transpose() * structure[k];
  return l;
}

Matrix TubeAlgebra::right_action(const Vector& b) const {
  const int n = dim();
  Matrix r = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) r.row(k) = (structure[k] * b).transpose();
  return r;
}

TubeAlgebra tube_algebra(const Calculus& c) {
  const int rk = c.rank();
  TubeAlgebra alg;
  for (int i = 0; i < rk; ++i)
    for (int j = 0; j < rk; ++j) {
      alg.offset.push_back(alg.dim());
      for (int r = 0; r < rk; ++r) {
        const auto& bs = c.basis(make_word({r, i}));
        const auto& bt = c.basis(make_word({j, r}));
        for (int k = 0; k < rk; ++k)
          for (int col = 0; col < bs.size(k); ++col)
            for (int row = 0; row < bt.size(k); ++row) alg.basis.push_back({i, j, r, k, row, col});
      }
    }
  alg.offset.push_back(alg.dim());

  const int n = alg.dim();
  std::vector<TubeMorphism> elems;
  for (int a = 0; a < n; ++a) {
    const auto& e = alg.basis[a];
    Vector v = Vector::Zero(n);
    v(a) = 1.0;
    elems.push_back(from_algebra(c, alg, e.source, e.target, v));
  }
  alg.structure.assign(n, Matrix::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (alg.basis[b].target != alg.basis[a].source) continue;
      const int i = alg.basis[b].source, j = alg.basis[a].target;
      Vector prod = to_algebra(c, alg, i, j, tube_compose(c, elems[a], elems[b]));
      for (int k = 0; k < n; ++k)
        if (prod(k) != Scalar(0)) alg.structure[k](a, b) = prod(k);
    }
  alg.unit = Vector::Zero(n);
  for (int i = 0; i < rk; ++i) alg.unit += to_algebra(c, alg, i, i, tube_identity(c, make_word({i})));
  return alg;
}

Vector to_algebra(const Calculus& c, const TubeAlgebra& a, int i, int j, const TubeMorphism& m) {
  const int rk = c.rank();
  Vector v = Vector::Zero(a.dim());
  Vector local = flatten(c, m);
  const int off = a.offset[i * rk + j];
  if (local.size() != a.offset[i * rk + j + 1] - off) throw ShapeMismatch("to_algebra: wrong sector");
  v.segment(off, local.size()) = local;
  return v;
}

TubeMorphism from_algebra(const Calculus& c, const TubeAlgebra& a, int i, int j, const Vector& v) {
  const int rk = c.rank();
  const int off = a.offset[i * rk + j];
  return unflatten(c, make_word({i}), make_word({j}), v.segment(off, a.offset[i * rk + j + 1] - off));
}

}  // namespace fcat
