#pragma once

#include <map>
#include <random>
#include <vector>

#include "fcat/diagram.hpp"

namespace fcat {

// Element of Hom_TC(X, Y) = ⊕_R Hom(R X, Y R); absent grades are zero.
struct TubeMorphism {
  Word source;
  Word target;
  std::map<int, Morphism> components;

  TubeMorphism& operator+=(const TubeMorphism& o);
  TubeMorphism& operator-=(const TubeMorphism& o);
  TubeMorphism& operator*=(Scalar s);
};

TubeMorphism operator+(TubeMorphism a, const TubeMorphism& b);
TubeMorphism operator-(TubeMorphism a, const TubeMorphism& b);
TubeMorphism operator*(Scalar s, TubeMorphism a);

double max_abs(const TubeMorphism& m);
double distance(const TubeMorphism& a, const TubeMorphism& b);

int tube_hom_dim(const CategorySpec& spec, const Word& x, const Word& y);

TubeMorphism tube_zero(const Word& x, const Word& y);
TubeMorphism tube_identity(const Calculus& c, const Word& x);
TubeMorphism embed(const Calculus& c, const Morphism& f);
TubeMorphism tube_compose(const Calculus& c, const TubeMorphism& g, const TubeMorphism& f);
// alpha ∈ Hom(G X, Y G)
TubeMorphism lift(const Calculus& c, const Morphism& alpha, const Word& g);
// Hom_TC(X G, G X)
TubeMorphism c_morphism(const Calculus& c, const Word& g, const Word& x);
TubeMorphism random_tube_morphism(const Calculus& c, const Word& x, const Word& y, std::mt19937_64& rng);

// Coordinates in the order grade, channel, column-major block entries.
Vector flatten(const Calculus& c, const TubeMorphism& m);
TubeMorphism unflatten(const Calculus& c, const Word& x, const Word& y, const Vector& v);

struct TubeBasisElement {
  int source, target, grade, channel, row, col;
};

// End_TC(⊕_S S). structure[k](a, b) is the e_k coefficient of e_a ∘ e_b.
struct TubeAlgebra {
  std::vector<TubeBasisElement> basis;
  std::vector<Matrix> structure;
  std::vector<int> offset;  // first basis index of each (source, target) pair, row-major; size rank²+1
  Vector unit;

  int dim() const { return static_cast<int>(basis.size()); }
  int rank() const;
  Vector multiply(const Vector& a, const Vector& b) const;
  // left multiplication by a as a dim x dim matrix
  Matrix left_action(const Vector& a) const;
  Matrix right_action(const Vector& a) const;
};

TubeAlgebra tube_algebra(const Calculus& c);
// element of End_TC([i]) -> Hom_TC([i],[j]) sector coordinates and back
Vector to_algebra(const Calculus& c, const TubeAlgebra& a, int i, int j, const TubeMorphism& m);
TubeMorphism from_algebra(const Calculus& c, const TubeAlgebra& a, int i, int j, const Vector& v);

}  // namespace fcat
