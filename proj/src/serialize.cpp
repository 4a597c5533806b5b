#include "fcat/serialize.hpp"

namespace fcat {

using nlohmann::json;

json word_to_json(const CategorySpec& spec, const Word& w) {
  json out = json::array();
  for (const auto& l : w) {
    if (l.is_simple()) {
      out.push_back(spec.id(l.label()));
    } else {
      std::vector<int> m(spec.rank());
      for (int j = 0; j < spec.rank(); ++j) m[j] = l.multiplicity(j);
      out.push_back({{"sum", m}});
    }
  }
  return out;
}

Word word_from_json(const CategorySpec& spec, const json& j) {
  if (!j.is_array()) throw SchemaError("word must be an array");
  Word w;
  for (const auto& e : j) {
    if (e.is_string()) {
      w.emplace_back(spec.index(e.get<std::string>()));
    } else if (e.is_object() && e.contains("sum")) {
      auto m = e.at("sum").get<std::vector<int>>();
      if (static_cast<int>(m.size()) != spec.rank()) throw SchemaError("sum letter has wrong length");
      w.push_back(Letter::sum(m));
    } else {
      throw SchemaError("bad word entry " + e.dump());
    }
  }
  return w;
}

json morphism_to_json(const Calculus& c, const Morphism& m) {
  json blocks = json::array();
  for (int k = 0; k < static_cast<int>(m.blocks.size()); ++k) {
    const Matrix& b = m.blocks[k];
    if (b.size() == 0) continue;
    json data = json::array();
    for (long r = 0; r < b.rows(); ++r)
      for (long q = 0; q < b.cols(); ++q) data.push_back({b(r, q).real(), b(r, q).imag()});
    blocks.push_back({{"channel", c.spec().id(k)}, {"rows", b.rows()}, {"cols", b.cols()}, {"data", data}});
  }
  return {{"source", word_to_json(c.spec(), m.source)},
          {"target", word_to_json(c.spec(), m.target)},
          {"blocks", blocks}};
}

Morphism morphism_from_json(const Calculus& c, const json& j) {
  try {
    Morphism m = zero(c, word_from_json(c.spec(), j.at("source")), word_from_json(c.spec(), j.at("target")));
    for (const auto& b : j.at("blocks")) {
      const int k = c.spec().index(b.at("channel").get<std::string>());
      Matrix& blk = m.blocks[k];
      const long rows = b.at("rows").get<long>(), cols = b.at("cols").get<long>();
      const auto& data = b.at("data");
      if (rows != blk.rows() || cols != blk.cols() || static_cast<long>(data.size()) != rows * cols)
        throw SchemaError("block shape does not match channel " + c.spec().id(k));
      for (long r = 0; r < rows; ++r)
        for (long q = 0; q < cols; ++q) {
          const auto& e = data[r * cols + q];
          blk(r, q) = Scalar(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed morphism: ") + e.what());
  }
}

json tube_to_json(const Calculus& c, const TubeMorphism& m) {
  json comps = json::array();
  for (const auto& [r, f] : m.components) comps.push_back({{"grade", c.spec().id(r)}, {"morphism", morphism_to_json(c, f)}});
  return {{"source", word_to_json(c.spec(), m.source)},
          {"target", word_to_json(c.spec(), m.target)},
          {"components", comps}};
}

TubeMorphism tube_from_json(const Calculus& c, const json& j) {
  try {
    TubeMorphism m = tube_zero(word_from_json(c.spec(), j.at("source")), word_from_json(c.spec(), j.at("target")));
    for (const auto& e : j.at("components")) {
      const int r = c.spec().index(e.at("grade").get<std::string>());
      Morphism f = morphism_from_json(c, e.at("morphism"));
      if (f.source != concat(make_word({r}), m.source) || f.target != concat(m.target, make_word({r})))
        throw SchemaError("tube component has the wrong shape");
      m.components[r] = std::move(f);
    }
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed tube morphism: ") + e.what());
  }
}

}  // namespace fcat
