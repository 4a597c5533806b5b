#include "fcat/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fcat {

int FusionTree::prefix(int m, int unit) const {
  if (m == 0) return unit;
  if (m == 1) return leaves[0];
  return edges[m - 2];
}

namespace {

FusionTree extend(FusionTree t, int leaf, int copy, int k, int mu) {
  bool first = t.leaves.empty();
  t.leaves.push_back(leaf);
  t.copies.push_back(copy);
  if (!first) {
    t.edges.push_back(k);
    t.vertices.push_back(mu);
  }
  return t;
}

FusionTree truncate(FusionTree t) {
  t.leaves.pop_back();
  t.copies.pop_back();
  if (!t.edges.empty()) {
    t.edges.pop_back();
    t.vertices.pop_back();
  }
  return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_simple(const Word& w, const char* what) {
  if (!is_simple_word(w)) throw ShapeMismatch(std::string(what) + " needs simple letters");
}

}  // namespace

// ---------------------------------------------------------------- Bracketing

Bracketing Bracketing::leaf_at(int i) {
  Bracketing b;
  b.leaf = i;
  return b;
}

Bracketing Bracketing::node(Bracketing l, Bracketing r) {
  Bracketing b;
  b.left = std::make_shared<const Bracketing>(std::move(l));
  b.right = std::make_shared<const Bracketing>(std::move(r));
  return b;
}

Bracketing Bracketing::left_nested(int n) {
  Bracketing b = leaf_at(0);
  for (int i = 1; i < n; ++i) b = node(b, leaf_at(i));
  return b;
}

int Bracketing::first() const { return leaf >= 0 ? leaf : left->first(); }
int Bracketing::last() const { return leaf >= 0 ? leaf : right->last(); }

bool Bracketing::operator==(const Bracketing& o) const {
  if (leaf >= 0 || o.leaf >= 0) return leaf == o.leaf;
  return *left == *o.left && *right == *o.right;
}

// ---------------------------------------------------------------- Calculus

Calculus::Calculus(std::shared_ptr<const CategorySpec> spec) : spec_(std::move(spec)) {
  const int u = spec_->unit;
  for (int a = 0; a < rank(); ++a) {
    int ad = spec_->dual[a];
    Word wa = make_word({a});
    Morphism raw_cup = zero(*this, {}, make_word({a, ad}));
    raw_cup.blocks[u](0, 0) = 1.0;
    Morphism raw_cap = zero(*this, make_word({ad, a}), {});
    raw_cap.blocks[u](0, 0) = 1.0;
    Morphism z = compose(tensor(*this, identity(*this, wa), raw_cap), tensor(*this, raw_cup, identity(*this, wa)));
    zigzag_.push_back(z.blocks[a](0, 0));
  }
}

Scalar Calculus::zigzag(int a) const { return zigzag_.at(a); }

Scalar Calculus::pivot(int a) const { return spec_->d(a) * zigzag_.at(spec_->dual[a]); }

const ChannelBasis& Calculus::basis(const Word& w) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = bases_.find(w);
  if (it != bases_.end()) return *it->second;

  const CategorySpec& s = *spec_;
  for (const auto& x : w)
    if (x.is_simple() && (x.label() < 0 || x.label() >= s.rank())) throw UnknownLabel(std::to_string(x.label()));

  auto cb = std::make_unique<ChannelBasis>();
  cb->word = w;
  cb->trees.assign(s.rank(), {});
  cb->position.assign(s.rank(), {});

  std::vector<std::pair<FusionTree, int>> layer;  // tree, channel
  layer.push_back({FusionTree{}, s.unit});
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::pair<FusionTree, int>> next;
    for (const auto& [t, k] : layer)
      for (auto [l, r] : w[i].summands()) {
        if (i == 0) {
          next.push_back({extend(t, l, r, l, 0), l});
          continue;
        }
        for (int e = 0; e < s.rank(); ++e)
          for (int mu = 0; mu < s.N(k, l, e); ++mu) next.push_back({extend(t, l, r, e, mu), e});
      }
    layer = std::move(next);
  }
  for (auto& [t, k] : layer) cb->trees[k].push_back(t);
  for (int k = 0; k < s.rank(); ++k) {
    auto& v = cb->trees[k];
    std::sort(v.begin(), v.end(), [](const FusionTree& x, const FusionTree& y) {
      return std::tie(x.edges, x.vertices, x.leaves, x.copies) < std::tie(y.edges, y.vertices, y.leaves, y.copies);
    });
    for (std::size_t i = 0; i < v.size(); ++i) cb->position[k][v[i]] = static_cast<int>(i);
  }
  auto& slot = bases_[w];
  slot = std::move(cb);
  return *slot;
}

std::vector<ProductGroup> Calculus::product_groups(const Word& a, const Word& b, int k) const {
  const ChannelBasis& ba = basis(a);
  const ChannelBasis& bb = basis(b);
  std::vector<ProductGroup> out;
  int offset = 0;
  for (int x = 0; x < rank(); ++x) {
    if (!ba.size(x)) continue;
    for (int y = 0; y < rank(); ++y) {
      if (!bb.size(y)) continue;
      for (int mu = 0; mu < spec_->N(x, y, k); ++mu) {
        out.push_back({x, y, mu, offset, ba.size(x), bb.size(y)});
        offset += ba.size(x) * bb.size(y);
      }
    }
  }
  return out;
}

const Matrix& Calculus::recoupling(const Word& a, const Word& b, int k) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(a, b, k);
  auto it = recoupling_.find(key);
  if (it != recoupling_.end()) return *it->second;
  auto m = std::make_unique<Matrix>(build_recoupling(a, b, k));
  auto& slot = recoupling_[key];
  slot = std::move(m);
  return *slot;
}

const Matrix& Calculus::recoupling_inverse(const Word& a, const Word& b, int k) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_tuple(a, b, k);
  auto it = recoupling_inv_.find(key);
  if (it != recoupling_inv_.end()) return *it->second;
  const Matrix& u = recoupling(a, b, k);
  auto m = std::make_unique<Matrix>(u.size() ? Matrix(u.inverse()) : u);
  auto& slot = recoupling_inv_[key];
  slot = std::move(m);
  return *slot;
}

Matrix Calculus::build_recoupling(const Word& a, const Word& b, int k) const {
  const CategorySpec& s = *spec_;
  const Word ab = concat(a, b);
  const ChannelBasis& bab = basis(ab);
  const ChannelBasis& ba = basis(a);
  const ChannelBasis& bb = basis(b);
  const auto groups = product_groups(a, b, k);
  int cols = 0;
  for (const auto& g : groups) cols += g.na * g.nb;
  Matrix u = Matrix::Zero(bab.size(k), cols);
  if (u.rows() != u.cols()) throw Error("recoupling basis size mismatch");

  if (a.empty() || b.empty()) {
    for (const auto& g : groups)
      for (int i = 0; i < g.na * g.nb; ++i) {
        const FusionTree& t = a.empty() ? bb.trees[g.b][i] : ba.trees[g.a][i];
        u(bab.index(k, t), g.offset + i) = 1.0;
      }
    return u;
  }

  if (b.size() == 1) {
    for (const auto& g : groups)
      for (int ia = 0; ia < g.na; ++ia)
        for (int ib = 0; ib < g.nb; ++ib) {
          const FusionTree& tb = bb.trees[g.b][ib];
          FusionTree t = extend(ba.trees[g.a][ia], tb.leaves[0], tb.copies[0], k, g.mu);
          u(bab.index(k, t), g.offset + ia * g.nb + ib) = 1.0;
        }
    return u;
  }

  // peel the last letter of b: ((A B')_e l)_k
  const Word bp = slice(b, 0, b.size() - 1);
  const Word abp = concat(a, bp);
  const ChannelBasis& bbp = basis(bp);
  const ChannelBasis& babp = basis(abp);
  std::vector<std::vector<ProductGroup>> inner(rank());
  for (int e = 0; e < rank(); ++e) inner[e] = product_groups(a, bp, e);

  for (const auto& g : groups)
    for (int ia = 0; ia < g.na; ++ia)
      for (int ib = 0; ib < g.nb; ++ib) {
        const int col = g.offset + ia * g.nb + ib;
        const FusionTree& tb = bb.trees[g.b][ib];
        const int l = tb.leaves.back(), r = tb.copies.back(), nu = tb.vertices.back();
        const int bprime = tb.prefix(static_cast<int>(b.size()) - 1, s.unit);
        const int ibp = bbp.index(bprime, truncate(tb));
        const FMatrix& f = s.F(g.a, bprime, l, k);
        const int rr = f.right_index(g.b, nu, g.mu);
        for (std::size_t li = 0; li < f.left.size(); ++li) {
          const Scalar coef = f.inverse(rr, static_cast<long>(li));
          if (coef == Scalar(0)) continue;
          auto [e, al, be] = f.left[li];
          const ProductGroup* hit = nullptr;
          for (const auto& h : inner[e])
            if (h.a == g.a && h.b == bprime && h.mu == al) hit = &h;
          if (!hit) continue;
          const Matrix& u2 = recoupling(a, bp, e);
          const int col2 = hit->offset + ia * hit->nb + ibp;
          for (long row = 0; row < u2.rows(); ++row) {
            const Scalar v = u2(row, col2);
            if (v == Scalar(0)) continue;
            FusionTree t = extend(babp.trees[e][row], l, r, k, be);
            u(bab.index(k, t), col) += coef * v;
          }
        }
      }
  return u;
}

// ---------------------------------------------------------------- Morphism algebra

Morphism& Morphism::operator+=(const Morphism& o) {
  if (o.source != source || o.target != target) throw ShapeMismatch("adding morphisms of different type");
  for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k] += o.blocks[k];
  return *this;
}

Morphism& Morphism::operator-=(const Morphism& o) {
  if (o.source != source || o.target != target) throw ShapeMismatch("subtracting morphisms of different type");
  for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k] -= o.blocks[k];
  return *this;
}

Morphism& Morphism::operator*=(Scalar s) {
  for (auto& b : blocks) b *= s;
  return *this;
}

Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
Morphism operator*(Scalar s, Morphism a) { return a *= s; }

double max_abs(const Morphism& m) {
  double out = 0.0;
  for (const auto& b : m.blocks)
    if (b.size()) out = std::max(out, b.cwiseAbs().maxCoeff());
  return out;
}

double distance(const Morphism& a, const Morphism& b) { return max_abs(a - b); }

Morphism zero(const Calculus& c, const Word& source, const Word& target) {
  const ChannelBasis& bs = c.basis(source);
  const ChannelBasis& bt = c.basis(target);
  Morphism m{source, target, {}};
  for (int k = 0; k < c.rank(); ++k) m.blocks.push_back(Matrix::Zero(bt.size(k), bs.size(k)));
  return m;
}

Morphism identity(const Calculus& c, const Word& w) {
  Morphism m = zero(c, w, w);
  for (auto& b : m.blocks) b.setIdentity();
  return m;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  if (g.source != f.target) throw ShapeMismatch("compose: source of g differs from target of f");
  Morphism m{f.source, g.target, {}};
  m.blocks.reserve(f.blocks.size());
  for (std::size_t k = 0; k < f.blocks.size(); ++k) m.blocks.push_back(g.blocks[k] * f.blocks[k]);
  return m;
}

Morphism tensor(const Calculus& c, const Morphism& f, const Morphism& g) {
  Morphism m{concat(f.source, g.source), concat(f.target, g.target), {}};
  for (int k = 0; k < c.rank(); ++k) {
    const auto src = c.product_groups(f.source, g.source, k);
    const auto dst = c.product_groups(f.target, g.target, k);
    int ns = 0, nt = 0;
    for (const auto& x : src) ns += x.na * x.nb;
    for (const auto& x : dst) nt += x.na * x.nb;
    Matrix p = Matrix::Zero(nt, ns);
    for (const auto& s : src)
      for (const auto& t : dst)
        if (s.a == t.a && s.b == t.b && s.mu == t.mu)
          p.block(t.offset, s.offset, t.na * t.nb, s.na * s.nb) = kron(f.blocks[s.a], g.blocks[s.b]);
    if (nt == 0 || ns == 0) {
      m.blocks.push_back(Matrix::Zero(nt, ns));
      continue;
    }
    m.blocks.push_back(c.recoupling(f.target, g.target, k) * p * c.recoupling_inverse(f.source, g.source, k));
  }
  return m;
}

Morphism inverse(const Morphism& f) {
  Morphism m{f.target, f.source, {}};
  for (const auto& b : f.blocks) {
    if (b.rows() != b.cols()) throw ShapeMismatch("inverse of a non-square block");
    m.blocks.push_back(b.size() ? Matrix(b.inverse()) : b);
  }
  return m;
}

Morphism random_morphism(const Calculus& c, const Word& source, const Word& target, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Morphism m = zero(c, source, target);
  for (auto& b : m.blocks)
    for (long i = 0; i < b.rows(); ++i)
      for (long j = 0; j < b.cols(); ++j) {
        double re = u(rng);
        double im = u(rng);
        b(i, j) = Scalar(re, im);
      }
  return m;
}

// ---------------------------------------------------------------- bracketings and F-moves

namespace {

// node assignment: span (first,last) -> (label, multiplicity or copy)
using ShapeTree = std::map<std::pair<int, int>, std::pair<int, int>>;

void enumerate_shape(const Calculus& c, const Word& w, const Bracketing& shape, int k,
                     std::vector<ShapeTree>& out) {
  const CategorySpec& s = c.spec();
  if (shape.leaf >= 0) {
    for (auto [l, r] : w[shape.leaf].summands())
      if (l == k) out.push_back({{{shape.leaf, shape.leaf}, {l, r}}});
    return;
  }
  for (int a = 0; a < s.rank(); ++a)
    for (int b = 0; b < s.rank(); ++b)
      for (int mu = 0; mu < s.N(a, b, k); ++mu) {
        std::vector<ShapeTree> ls, rs;
        enumerate_shape(c, w, *shape.left, a, ls);
        enumerate_shape(c, w, *shape.right, b, rs);
        for (const auto& tl : ls)
          for (const auto& tr : rs) {
            ShapeTree t = tl;
            t.insert(tr.begin(), tr.end());
            t[{shape.first(), shape.last()}] = {k, mu};
            out.push_back(std::move(t));
          }
      }
}

Word subword(const Word& w, const Bracketing& shape) {
  return slice(w, static_cast<std::size_t>(shape.first()), static_cast<std::size_t>(shape.last()) + 1);
}

Bracketing shifted(const Bracketing& b, int by) {
  if (b.leaf >= 0) return Bracketing::leaf_at(b.leaf - by);
  return Bracketing::node(shifted(*b.left, by), shifted(*b.right, by));
}

Matrix to_canonical(const Calculus& c, const Word& w, int k, const Bracketing& shape) {
  // shape spans the whole of w, leaves numbered from 0
  if (shape.leaf >= 0) return Matrix::Identity(c.basis(w).size(k), c.basis(w).size(k));
  const Word wl = subword(w, *shape.left), wr = subword(w, *shape.right);
  const Bracketing sl = *shape.left;
  const Bracketing sr = shifted(*shape.right, shape.right->first());
  const auto groups = c.product_groups(wl, wr, k);
  int n = 0;
  for (const auto& g : groups) n += g.na * g.nb;
  std::vector<Matrix> lm(c.rank()), rm(c.rank());
  int cols = 0;
  std::vector<int> col_off;
  for (const auto& g : groups) {
    if (!lm[g.a].size()) lm[g.a] = to_canonical(c, wl, g.a, sl);
    if (!rm[g.b].size()) rm[g.b] = to_canonical(c, wr, g.b, sr);
    col_off.push_back(cols);
    cols += static_cast<int>(lm[g.a].cols() * rm[g.b].cols());
  }
  Matrix block = Matrix::Zero(n, cols);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    block.block(g.offset, col_off[i], g.na * g.nb, lm[g.a].cols() * rm[g.b].cols()) = kron(lm[g.a], rm[g.b]);
  }
  if (n == 0) return Matrix::Zero(0, cols);
  return c.recoupling(wl, wr, k) * block;
}

const Bracketing& at_path(const Bracketing& b, const std::vector<int>& path, std::size_t depth = 0) {
  if (depth == path.size()) return b;
  if (b.leaf >= 0) throw BadPosition("path runs past a leaf");
  return at_path(path[depth] ? *b.right : *b.left, path, depth + 1);
}

Bracketing replace_at(const Bracketing& b, const std::vector<int>& path, const Bracketing& with,
                      std::size_t depth = 0) {
  if (depth == path.size()) return with;
  if (path[depth]) return Bracketing::node(*b.left, replace_at(*b.right, path, with, depth + 1));
  return Bracketing::node(replace_at(*b.left, path, with, depth + 1), *b.right);
}

int root_label(const ShapeTree& t, const Bracketing& b) { return t.at({b.first(), b.last()}).first; }

}  // namespace

Matrix bracketing_to_canonical(const Calculus& c, const Word& w, int k, const Bracketing& shape) {
  if (w.empty()) return Matrix::Identity(c.basis(w).size(k), c.basis(w).size(k));
  return to_canonical(c, w, k, shape);
}

int bracketing_size(const Calculus& c, const Word& w, int k, const Bracketing& shape) {
  if (w.empty()) return c.basis(w).size(k);
  std::vector<ShapeTree> v;
  enumerate_shape(c, w, shape, k, v);
  return static_cast<int>(v.size());
}

Matrix elementary_f_move(const Calculus& c, const Word& w, int k, const Bracketing& shape,
                         const std::vector<int>& path, Bracketing* result) {
  const Bracketing& p = at_path(shape, path);
  if (p.leaf >= 0 || p.left->leaf >= 0) throw BadPosition("no ((X Y) Z) node at this position");
  const Bracketing& x = *p.left->left;
  const Bracketing& y = *p.left->right;
  const Bracketing& z = *p.right;
  Bracketing moved = replace_at(shape, path, Bracketing::node(x, Bracketing::node(y, z)));

  std::vector<ShapeTree> olds, news;
  enumerate_shape(c, w, shape, k, olds);
  enumerate_shape(c, w, moved, k, news);
  std::map<ShapeTree, int> where;
  for (std::size_t i = 0; i < news.size(); ++i) where[news[i]] = static_cast<int>(i);

  const CategorySpec& s = c.spec();
  const std::pair<int, int> ps{p.first(), p.last()}, qs{x.first(), y.last()}, qn{y.first(), z.last()};
  Matrix m = Matrix::Zero(static_cast<long>(news.size()), static_cast<long>(olds.size()));
  for (std::size_t j = 0; j < olds.size(); ++j) {
    const ShapeTree& t = olds[j];
    auto [d, be] = t.at(ps);
    auto [e, al] = t.at(qs);
    int xl = root_label(t, x), yl = root_label(t, y), zl = root_label(t, z);
    const FMatrix& f = s.F(xl, yl, zl, d);
    int li = f.left_index(e, al, be);
    for (std::size_t ri = 0; ri < f.right.size(); ++ri) {
      auto [g, ga, de] = f.right[ri];
      ShapeTree t2 = t;
      t2.erase(qs);
      t2[qn] = {g, ga};
      t2[ps] = {d, de};
      m(where.at(t2), static_cast<long>(j)) += f.value(li, static_cast<long>(ri));
    }
  }
  if (result) *result = moved;
  return m;
}

ReshapedMorphism f_move(const Calculus& c, const Morphism& m, int position) {
  const int n = static_cast<int>(m.target.size());
  if (position < 1 || position > n - 2) throw BadPosition("f_move position out of range");
  Bracketing shape = Bracketing::left_nested(n);
  std::vector<int> path(static_cast<std::size_t>(n - 2 - position), 0);
  ReshapedMorphism out{m.source, m.target, shape, {}};
  for (int k = 0; k < c.rank(); ++k) {
    Matrix perm = bracketing_to_canonical(c, m.target, k, shape);
    Matrix mv = elementary_f_move(c, m.target, k, shape, path, &out.target_shape);
    Matrix pinv = perm.size() ? Matrix(perm.inverse()) : perm;
    out.blocks.push_back(mv * pinv * m.blocks[k]);
  }
  return out;
}

Morphism f_move_inverse(const Calculus& c, const ReshapedMorphism& m) {
  Morphism out{m.source, m.target, {}};
  for (int k = 0; k < c.rank(); ++k)
    out.blocks.push_back(bracketing_to_canonical(c, m.target, k, m.target_shape) * m.blocks[k]);
  return out;
}

// ---------------------------------------------------------------- duality

namespace {

Morphism elementary_cup(const Calculus& c, int a, Scalar value) {
  Morphism m = zero(c, {}, make_word({a, c.spec().dual[a]}));
  m.blocks[c.spec().unit](0, 0) = value;
  return m;
}

Morphism elementary_cap(const Calculus& c, int a, Scalar value) {
  Morphism m = zero(c, make_word({c.spec().dual[a], a}), {});
  m.blocks[c.spec().unit](0, 0) = value;
  return m;
}

Morphism nest(const Calculus& c, const Word& outer_left, const Morphism& inner, const Word& outer_right) {
  return tensor(c, tensor(c, identity(c, outer_left), inner), identity(c, outer_right));
}

}  // namespace

Morphism cup(const Calculus& c, const Word& w) {
  require_simple(w, "cup");
  const CategorySpec& s = c.spec();
  Morphism acc = identity(c, {});
  // 1 -> w w*, built from the innermost pair outwards
  for (std::size_t i = w.size(); i-- > 0;) {
    int a = w[i].label();
    Word left = make_word({a}), right = make_word({s.dual[a]});
    Morphism outer = elementary_cup(c, a, 1.0);
    Morphism grow = nest(c, left, acc, right);
    acc = compose(grow, outer);
  }
  return acc;
}

Morphism cap(const Calculus& c, const Word& w) {
  require_simple(w, "cap");
  const CategorySpec& s = c.spec();
  Morphism acc = identity(c, {});
  // w* w -> 1
  for (std::size_t i = 0; i < w.size(); ++i) {
    int a = w[i].label();
    Morphism outer = elementary_cap(c, a, 1.0 / c.zigzag(a));
    acc = compose(outer, nest(c, make_word({s.dual[a]}), acc, make_word({a})));
  }
  return acc;
}

Morphism cap_right(const Calculus& c, const Word& w) {
  require_simple(w, "cap_right");
  const CategorySpec& s = c.spec();
  Morphism acc = identity(c, {});
  // w w* -> 1
  for (std::size_t i = w.size(); i-- > 0;) {
    int a = w[i].label();
    int ad = s.dual[a];
    Morphism outer = elementary_cap(c, ad, c.pivot(a) / c.zigzag(ad));
    acc = compose(outer, nest(c, make_word({a}), acc, make_word({ad})));
  }
  return acc;
}

Morphism cup_left(const Calculus& c, const Word& w) {
  require_simple(w, "cup_left");
  const CategorySpec& s = c.spec();
  Morphism acc = identity(c, {});
  // 1 -> w* w
  for (std::size_t i = 0; i < w.size(); ++i) {
    int a = w[i].label();
    int ad = s.dual[a];
    Morphism outer = elementary_cup(c, ad, 1.0 / c.pivot(a));
    acc = compose(nest(c, make_word({ad}), acc, make_word({a})), outer);
  }
  return acc;
}

Morphism bend_right(const Calculus& c, const Morphism& f, std::size_t keep) {
  const Word x = slice(f.source, 0, keep), y = slice(f.source, keep, f.source.size());
  const Word yd = dual_word(c.spec(), y);
  Morphism open = tensor(c, identity(c, x), cup(c, y));
  return compose(tensor(c, f, identity(c, yd)), open);
}

Morphism unbend_right(const Calculus& c, const Morphism& g, std::size_t keep) {
  const Word z = slice(g.target, 0, keep), yd = slice(g.target, keep, g.target.size());
  const Word y = dual_word(c.spec(), yd);
  return compose(tensor(c, identity(c, z), cap(c, y)), tensor(c, g, identity(c, y)));
}

Morphism bend_left(const Calculus& c, const Morphism& f, std::size_t move) {
  const Word x = slice(f.source, 0, move), y = slice(f.source, move, f.source.size());
  const Word xd = dual_word(c.spec(), x);
  return compose(tensor(c, identity(c, xd), f), tensor(c, cup_left(c, x), identity(c, y)));
}

Morphism unbend_left(const Calculus& c, const Morphism& g, std::size_t move) {
  const Word xd = slice(g.target, 0, move), z = slice(g.target, move, g.target.size());
  const Word x = dual_word(c.spec(), xd);
  return compose(tensor(c, cap_right(c, x), identity(c, z)), tensor(c, identity(c, x), g));
}

Morphism bend_target_right(const Calculus& c, const Morphism& f, std::size_t keep) {
  const Word y = slice(f.target, 0, keep), z = slice(f.target, keep, f.target.size());
  const Word zd = dual_word(c.spec(), z);
  return compose(tensor(c, identity(c, y), cap_right(c, z)), tensor(c, f, identity(c, zd)));
}

Morphism unbend_target_right(const Calculus& c, const Morphism& g, std::size_t keep) {
  const Word xs = slice(g.source, 0, keep), zd = slice(g.source, keep, g.source.size());
  const Word z = dual_word(c.spec(), zd);
  return compose(tensor(c, g, identity(c, z)), tensor(c, identity(c, xs), cup_left(c, z)));
}

Morphism bend_target_left(const Calculus& c, const Morphism& f, std::size_t move) {
  const Word y = slice(f.target, 0, move), z = slice(f.target, move, f.target.size());
  const Word yd = dual_word(c.spec(), y);
  return compose(tensor(c, cap(c, y), identity(c, z)), tensor(c, identity(c, yd), f));
}

Morphism unbend_target_left(const Calculus& c, const Morphism& g, std::size_t move) {
  const Word yd = slice(g.source, 0, move), x = slice(g.source, move, g.source.size());
  const Word y = dual_word(c.spec(), yd);
  return compose(tensor(c, identity(c, y), g), tensor(c, cup(c, y), identity(c, x)));
}

// ---------------------------------------------------------------- braiding

Morphism braid(const Calculus& c, int a, int b) {
  const CategorySpec& s = c.spec();
  if (!s.braided()) throw NotBraided();
  Morphism m = zero(c, make_word({a, b}), make_word({b, a}));
  for (int k = 0; k < c.rank(); ++k)
    if (m.blocks[k].size()) m.blocks[k] = s.R(a, b, k).transpose();
  return m;
}

namespace {

Morphism braid_words(const Calculus& c, const Word& a, const Word& b, bool inverse_crossing) {
  require_simple(a, "braid");
  require_simple(b, "braid");
  if (!c.spec().braided()) throw NotBraided();
  Word cur = concat(a, b);
  Morphism acc = identity(c, cur);
  for (std::size_t i = a.size(); i-- > 0;)
    for (std::size_t t = 0; t < b.size(); ++t) {
      std::size_t p = i + t;
      int x = cur[p].label(), y = cur[p + 1].label();
      Morphism e = inverse_crossing ? inverse(braid(c, y, x)) : braid(c, x, y);
      Morphism step = nest(c, slice(cur, 0, p), e, slice(cur, p + 2, cur.size()));
      acc = compose(step, acc);
      std::swap(cur[p], cur[p + 1]);
    }
  return acc;
}

}  // namespace

Morphism braid(const Calculus& c, const Word& a, const Word& b) { return braid_words(c, a, b, false); }

Morphism braid_inverse(const Calculus& c, const Word& a, const Word& b) { return braid_words(c, a, b, true); }

// ---------------------------------------------------------------- traces

Scalar trace(const Calculus& c, const Morphism& f) {
  if (f.source != f.target) throw ShapeMismatch("trace of a non-endomorphism");
  Scalar t = 0;
  for (int k = 0; k < c.rank(); ++k)
    if (f.blocks[k].size()) t += c.spec().d(k) * f.blocks[k].trace();
  return t;
}

Scalar right_closure(const Calculus& c, const Morphism& f) {
  if (f.source != f.target) throw ShapeMismatch("closure of a non-endomorphism");
  const Word ad = dual_word(c.spec(), f.source);
  Morphism closed = compose(cap_right(c, f.source), compose(tensor(c, f, identity(c, ad)), cup(c, f.source)));
  return closed.blocks[c.spec().unit](0, 0);
}

Scalar left_closure(const Calculus& c, const Morphism& f) {
  if (f.source != f.target) throw ShapeMismatch("closure of a non-endomorphism");
  const Word ad = dual_word(c.spec(), f.source);
  Morphism closed = compose(cap(c, f.source), compose(tensor(c, identity(c, ad), f), cup_left(c, f.source)));
  return closed.blocks[c.spec().unit](0, 0);
}

// ---------------------------------------------------------------- resolutions

std::vector<Resolution> decompose_resolution(const Calculus& c, const Word& a) {
  const ChannelBasis& ba = c.basis(a);
  std::vector<Resolution> out;
  for (int k = 0; k < c.rank(); ++k) {
    const Word r = make_word({k});
    std::vector<Morphism> family;
    for (int t = 0; t < ba.size(k); ++t) {
      Morphism b = zero(c, r, a);
      b.blocks[k](t, 0) = 1.0;
      family.push_back(std::move(b));
    }
    if (family.empty()) continue;
    auto duals = dual_basis(c, family);
    for (std::size_t i = 0; i < family.size(); ++i) out.push_back({k, family[i], duals[i]});
  }
  return out;
}

std::vector<Morphism> dual_basis(const Calculus& c, const std::vector<Morphism>& basis) {
  if (basis.empty()) return {};
  const Word& r = basis[0].source;
  if (r.size() != 1 || !r[0].is_simple()) throw ShapeMismatch("dual_basis expects maps out of a simple letter");
  const int k = r[0].label();
  const Word& a = basis[0].target;
  const long n = c.basis(a).size(k);
  if (static_cast<long>(basis.size()) != n) throw ShapeMismatch("dual_basis expects a full basis");
  Matrix g(n, n);
  for (long i = 0; i < n; ++i) g.col(i) = basis[static_cast<std::size_t>(i)].blocks[k].col(0);
  Eigen::JacobiSVD<Matrix> svd(g);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) == 0.0 || sv(0) / sv(n - 1) > 1e12) throw Error("pairing Gram matrix is ill-conditioned");
  Matrix gi = g.inverse();
  std::vector<Morphism> out;
  for (long i = 0; i < n; ++i) {
    Morphism d = zero(c, a, r);
    d.blocks[k].row(0) = gi.row(i);
    out.push_back(std::move(d));
  }
  return out;
}

double dual_decompose_check(const Calculus& c, const Word& x, int s) {
  const CategorySpec& sp = c.spec();
  const Word xd = dual_word(sp, x);
  const Word ws = make_word({s});
  Morphism lhs = zero(c, concat(x, ws), concat(x, ws));
  for (int t = 0; t < c.rank(); ++t) {
    const Word wt = make_word({t});
    for (const auto& res : decompose_resolution(c, concat(xd, wt))) {
      if (res.channel != s) continue;
      // res.b_dual : X* T -> S, res.b : S -> X* T
      Morphism top = compose(tensor(c, identity(c, x), res.b_dual), tensor(c, cup(c, x), identity(c, wt)));
      Morphism bottom = compose(tensor(c, cap_right(c, x), identity(c, wt)), tensor(c, identity(c, x), res.b));
      lhs += sp.d(t) * compose(top, bottom);
    }
  }
  return distance(lhs, sp.d(s) * identity(c, concat(x, ws)));
}

Morphism unit_shift(const Calculus& c, const Word& w) {
  const Word u = make_word({c.spec().unit});
  Morphism m{concat(u, w), concat(w, u), {}};
  for (int k = 0; k < c.rank(); ++k) {
    const Matrix& into = c.recoupling(w, u, k);
    m.blocks.push_back(into.size() ? Matrix(into * c.recoupling_inverse(u, w, k)) : Matrix::Zero(into.rows(), into.cols()));
  }
  return m;
}

}  // namespace fcat
