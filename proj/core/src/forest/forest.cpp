#include "arithdyn/forest/forest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>

#include "arithdyn/error.hpp"
#include "arithdyn/moddyn/orbit.hpp"

namespace arithdyn {

PreimageForestModP build_forest_modp(const TargetSystem& sys, std::uint64_t p, int depth) {
  if (depth < 0) throw MathError(Errc::kInvalidArgument, "depth must be nonnegative");
  if (p > kCensusMaxModulus) {
    throw MathError(Errc::kModulusTooLarge, "forests enumerate P^1(F_p); p = " + std::to_string(p) + " exceeds " +
                                                std::to_string(kCensusMaxModulus));
  }
  if (p <= static_cast<std::uint64_t>(sys.max_degree())) {
    throw MathError(Errc::kBadPrime, "p = " + std::to_string(p) + " does not exceed the map degree");
  }
  for (const auto& e : sys.entries()) {
    if (!good_reduction(e.map, p)) {
      throw MathError(Errc::kBadPrime, e.map.to_string() + " has bad reduction at p = " + std::to_string(p));
    }
  }
  PreimageForestModP forest{p, depth, {}};
  const std::size_t n = p + 1;
  for (std::size_t i = 0; i < sys.entries().size(); ++i) {
    const auto& e = sys.entries()[i];
    ReducedMap r = reduce_map(e.map, p);
    // Inverted functional graph in compressed rows: preimages of w are
    // pre[start[w] .. start[w + 1]), ascending.
    std::vector<std::uint32_t> image(n), start(n + 1, 0), pre(n);
    for (std::uint64_t z = 0; z < n; ++z) {
      image[z] = static_cast<std::uint32_t>(apply(r, ProjPointModP::from_index(z, p)).index(p));
      ++start[image[z] + 1];
    }
    for (std::size_t w = 0; w < n; ++w) start[w + 1] += start[w];
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::uint32_t z = 0; z < n; ++z) pre[fill[image[z]]++] = z;

    for (std::size_t j = 0; j < e.targets.size(); ++j) {
      PreimageTree tree{i, j, {}};
      tree.levels.push_back({ForestNode{reduce_point(e.targets[j], p), -1}});
      for (int k = 1; k <= depth; ++k) {
        std::vector<ForestNode> next;
        const auto& prev = tree.levels.back();
        for (std::size_t q = 0; q < prev.size(); ++q) {
          std::uint64_t w = prev[q].point.index(p);
          for (std::uint32_t s = start[w]; s < start[w + 1]; ++s) {
            next.push_back({ProjPointModP::from_index(pre[s], p), static_cast<std::int64_t>(q)});
          }
        }
        tree.levels.push_back(std::move(next));
      }
      forest.trees.push_back(std::move(tree));
    }
  }
  return forest;
}

std::vector<std::uint64_t> frobenius_fixed_count(const PreimageForestModP& forest, int level) {
  if (level < 0 || level > forest.depth) {
    throw MathError(Errc::kInvalidArgument, "level " + std::to_string(level) + " outside [0, " +
                                                std::to_string(forest.depth) + "]");
  }
  std::vector<std::uint64_t> out;
  for (const auto& t : forest.trees) out.push_back(t.levels[level].size());
  return out;
}

void write_forest_json(std::ostream& out, const TargetSystem& sys, const PreimageForestModP& forest) {
  using Json = nlohmann::ordered_json;
  Json trees = Json::array();
  for (const auto& t : forest.trees) {
    Json levels = Json::array();
    for (const auto& level : t.levels) {
      Json nodes = Json::array();
      for (const auto& node : level) {
        Json parent = node.parent < 0 ? Json(nullptr) : Json(node.parent);
        nodes.push_back(Json{{"value", node.point.to_string()}, {"parent_index", parent}});
      }
      levels.push_back(std::move(nodes));
    }
    trees.push_back(Json{{"map", sys.entries()[t.entry].map.to_string()},
                         {"target", sys.entries()[t.entry].targets[t.target].to_string()},
                         {"levels", std::move(levels)}});
  }
  Json j{{"p", forest.p}, {"depth", forest.depth}, {"trees", std::move(trees)}};
  out << j.dump(2) << '\n';
}

void write_forest_edges(std::ostream& out, const PreimageForestModP& forest) {
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    const auto& levels = forest.trees[t].levels;
    for (std::size_t k = 1; k < levels.size(); ++k) {
      for (const auto& node : levels[k]) {
        out << 't' << t + 1 << ':' << k << ':' << node.point.to_string() << ' ' << 't' << t + 1 << ':' << k - 1
            << ':' << levels[k - 1][node.parent].point.to_string() << '\n';
      }
    }
  }
}

Integer form_resultant(const BinaryForm& A, const BinaryForm& B) {
  const int m = A.degree, n = B.degree;
  const PolyZ& a = A.poly;
  const PolyZ& b = B.poly;
  if (a.is_zero() || b.is_zero()) return Integer(0);
  if (a.degree() == m) return pow_int(a.lead(), static_cast<unsigned long>(n - b.degree())) * resultant(a, b);
  if (b.degree() == n) {
    Integer r = pow_int(b.lead(), static_cast<unsigned long>(m - a.degree())) * resultant(a, b);
    return (static_cast<long>(m - a.degree()) * n) % 2 ? Integer(-r) : r;
  }
  return Integer(0);
}

namespace {

// Exact interpolation through (i, values[i]), i = 0..n, by divided differences.
PolyZ interpolate(const std::vector<Integer>& values) {
  const std::size_t n = values.size();
  std::vector<Rational> dd(values.begin(), values.end());
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(level));
    }
  }
  // Newton form to monomial basis: p = dd0 + (x - 0)(dd1 + (x - 1)(dd2 + ...)).
  std::vector<Rational> c{dd[n - 1]};
  for (std::size_t i = n - 1; i-- > 0;) {
    std::vector<Rational> next(c.size() + 1, Rational(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= c[j] * static_cast<long>(i);
    }
    next[0] += dd[i];
    c = std::move(next);
  }
  std::vector<Integer> out;
  for (auto& q : c) {
    if (q.get_den() != 1) throw MathError(Errc::kInvalidArgument, "interpolated form is not integral");
    out.push_back(q.get_num());
  }
  return PolyZ(std::move(out));
}

// U(a, b) = Res(V(Z), b F(Z) - a G(Z)) vanishes iff (a : b) = phi(z) for a
// zero z of V. U is again a form of degree n = deg V, recovered from its
// values at (i : 1), i = 0..n.
BinaryForm push_forward(const RationalMap& map, const BinaryForm& V) {
  std::vector<Integer> samples;
  for (int i = 0; i <= V.degree; ++i) {
    samples.push_back(form_resultant(V, BinaryForm{map.num() - map.den() * Integer(i), map.degree()}));
  }
  return {interpolate(samples).primitive_part(), V.degree};
}

BinaryForm primitive_wronskian(const RationalMap& map) {
  BinaryForm w = wronskian(map);
  w.poly = w.poly.primitive_part();
  return w;
}

}  // namespace

BinaryForm critical_image_form(const RationalMap& map, int k) {
  BinaryForm V = primitive_wronskian(map);
  for (int step = 0; step < k; ++step) V = push_forward(map, V);
  return V;
}

PostcriticalReport postcritical_check(const RationalMap& map, const ProjPoint& alpha, int bound) {
  if (bound < 0) throw MathError(Errc::kInvalidArgument, "bound must be nonnegative");
  long deg = 1;
  for (int k = 0; k < bound; ++k) {
    deg *= map.degree();
    if (deg > kPostcriticalDegreeCap) {
      throw MathError(Errc::kDegreeCapExceeded, "post-critical bound " + std::to_string(bound) + " for degree " +
                                                    std::to_string(map.degree()) + " exceeds d^B <= " +
                                                    std::to_string(kPostcriticalDegreeCap));
    }
  }
  PostcriticalReport rep;
  rep.bound = bound;
  BinaryForm V = primitive_wronskian(map);
  for (int k = 1; k <= bound; ++k) {
    V = push_forward(map, V);
    if (sgn(V.eval(alpha.x(), alpha.y())) == 0) {
      rep.clean = false;
      rep.step = k;
      return rep;
    }
  }
  return rep;
}

}  // namespace arithdyn
