#include "santa/oracles/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace santa::oracles {

using alloc::ChildId;
using alloc::GiftId;

namespace {

struct Builder {
  Instance inst;
  ChildId child() { return static_cast<ChildId>(inst.num_children++); }
  GiftId gift(const Rational& v) {
    inst.values.push_back(v);
    return static_cast<GiftId>(inst.values.size() - 1);
  }
  void edge(ChildId c, GiftId g) { inst.edges.push_back({c, g}); }
  Instance finish() {
    inst.canonicalize();
    return std::move(inst);
  }
};

void check_bits(const std::string& bits, std::size_t s) {
  if (bits.size() != s) throw std::invalid_argument("gen_scn: bit string length must be sqrt(n)");
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("gen_scn: bit strings use '0' and '1'");
  }
}

}  // namespace

Instance gen_scn(std::size_t n, const std::string& a, const std::string& b, ScnLayout* layout) {
  const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || s * s != n) throw std::invalid_argument("gen_scn: n must be a positive perfect square");
  check_bits(a, s);
  check_bits(b, s);

  Builder bld;
  // Paths: children c_1..c_s, gifts g_1..g_{s-1}.
  std::vector<std::vector<ChildId>> path_children(s);
  std::vector<std::vector<GiftId>> path_gifts(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) path_children[i].push_back(bld.child());
    for (std::size_t j = 0; j + 1 < s; ++j) {
      const GiftId g = bld.gift(1);
      path_gifts[i].push_back(g);
      bld.edge(path_children[i][j], g);
      bld.edge(path_children[i][j + 1], g);
    }
  }

  // Binary tree, built level by level from the leaves; even levels are children.
  std::size_t leaves = 1;
  while (leaves < s) leaves *= 2;
  std::vector<std::uint32_t> level_nodes;
  std::size_t levels = 0;
  std::vector<std::uint32_t> below;
  for (std::size_t width = leaves; width >= 1; width /= 2) {
    const bool children_level = levels % 2 == 0;
    std::vector<std::uint32_t> here;
    for (std::size_t k = 0; k < width; ++k) {
      if (children_level) {
        const ChildId c = bld.child();
        bld.edge(c, bld.gift(1));  // private gift
        here.push_back(c);
      } else {
        here.push_back(bld.gift(1));
      }
    }
    if (levels == 0) {
      for (std::size_t j = 0; j + 1 < s && j < width; ++j) {
        for (std::size_t i = 0; i < s; ++i) bld.edge(here[j], path_gifts[i][j]);
      }
    } else {
      for (std::size_t k = 0; k < below.size(); ++k) {
        const std::uint32_t parent = here[k / 2];
        if (children_level) bld.edge(parent, below[k]);
        else bld.edge(below[k], parent);
      }
    }
    below = std::move(here);
    ++levels;
    if (width == 1) break;
  }

  const ChildId alice = bld.child();
  const ChildId bob = bld.child();
  bld.edge(alice, bld.gift(1));
  bld.edge(bob, bld.gift(1));
  for (std::size_t i = 0; i < s; ++i) {
    const GiftId ga = bld.gift(a[i] == '1' ? 1 : 0);
    bld.edge(alice, ga);
    bld.edge(path_children[i].front(), ga);
    const GiftId gb = bld.gift(b[i] == '1' ? 1 : 0);
    bld.edge(bob, gb);
    bld.edge(path_children[i].back(), gb);
  }
  if (layout != nullptr) *layout = ScnLayout{s, leaves, levels, alice, bob};
  return bld.finish();
}

Instance gen_path(PathVariant variant, std::size_t n) {
  if (n == 0) throw std::invalid_argument("gen_path: n must be positive");
  Builder bld;
  std::vector<ChildId> kids;
  for (std::size_t j = 0; j < n; ++j) kids.push_back(bld.child());
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const GiftId g = bld.gift(1);
    bld.edge(kids[j], g);
    bld.edge(kids[j + 1], g);
  }
  if (variant == PathVariant::kI2) bld.edge(kids.front(), bld.gift(1));
  if (variant == PathVariant::kI3) bld.edge(kids.back(), bld.gift(1));
  return bld.finish();
}

InstanceDocument gen_sparsification_example(std::size_t k, std::int64_t T) {
  if (k < 2) throw std::invalid_argument("gen_sparsification_example: k must be at least 2");
  if (T < static_cast<std::int64_t>(k)) throw std::invalid_argument("gen_sparsification_example: T must be at least k");
  Builder bld;
  InstanceDocument doc;
  std::vector<ChildId> kids;
  for (std::size_t i = 0; i < k; ++i) kids.push_back(bld.child());
  const Rational kk(static_cast<long>(k));
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const GiftId big = bld.gift(Rational(static_cast<long>(T)));
    bld.edge(kids[i], big);
    bld.edge(kids[i + 1], big);
    // Child i+1 (1-based) puts (k - i - 1)/k on its right gift, child i+2 puts (i + 1)/k on its left.
    doc.fractional.push_back({kids[i], big, Rational(static_cast<long>(k - i - 1)) / kk});
    doc.fractional.push_back({kids[i + 1], big, Rational(static_cast<long>(i + 1)) / kk});
  }
  for (std::int64_t t = 0; t < T; ++t) {
    const GiftId small = bld.gift(1);
    for (ChildId c : kids) {
      bld.edge(c, small);
      doc.fractional.push_back({c, small, c == kids[static_cast<std::size_t>(t) % k] ? Rational(1) : Rational(0)});
    }
  }
  doc.instance = bld.finish();
  return doc;
}

Instance gen_random(const RandomSpec& spec) {
  if (spec.children == 0) throw std::invalid_argument("gen_random: need at least one child");
  if (spec.value_lo < 0 || spec.value_hi < spec.value_lo) throw std::invalid_argument("gen_random: bad value range");
  if (!(spec.density >= 0 && spec.density <= 1)) throw std::invalid_argument("gen_random: density outside [0, 1]");
  Rng rng(spec.seed);
  Builder bld;
  for (std::size_t c = 0; c < spec.children; ++c) bld.child();
  for (std::size_t g = 0; g < spec.gifts; ++g) {
    bld.gift(Rational(static_cast<long>(rng.between(spec.value_lo, spec.value_hi))));
  }
  for (std::size_t c = 0; c < spec.children; ++c) {
    for (std::size_t g = 0; g < spec.gifts; ++g) {
      if (rng.unit() < spec.density) bld.edge(static_cast<ChildId>(c), static_cast<GiftId>(g));
    }
  }
  return bld.finish();
}

Instance gen_mixed(const MixedSpec& spec) {
  if (spec.children < 2) throw std::invalid_argument("gen_mixed: need at least two children");
  if (spec.small_degree < 1 || spec.small_degree > spec.children) {
    throw std::invalid_argument("gen_mixed: small_degree outside [1, children]");
  }
  if (spec.big_value < 1) throw std::invalid_argument("gen_mixed: big_value below 1");
  Rng rng(spec.seed);
  Builder bld;
  for (std::size_t c = 0; c < spec.children; ++c) bld.child();
  auto draw = [&](GiftId g, std::size_t count) {
    std::vector<ChildId> picked;
    while (picked.size() < count) {
      const auto c = static_cast<ChildId>(rng.below(spec.children));
      if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
    }
    for (ChildId c : picked) bld.edge(c, g);
  };
  for (std::size_t b = 0; b < spec.big; ++b) draw(bld.gift(Rational(static_cast<long>(spec.big_value))), 2);
  for (std::size_t s = 0; s < spec.small; ++s) draw(bld.gift(Rational(1)), spec.small_degree);
  return bld.finish();
}

Instance restrict_to_support(const InstanceDocument& doc) {
  Instance out = doc.instance;
  out.edges.clear();
  for (const auto& f : doc.fractional) {
    if (f.weight > 0) out.edges.push_back({f.child, f.gift});
  }
  out.canonicalize();
  return out;
}

PathVariant parse_path_variant(const std::string& name) {
  if (name == "I1" || name == "i1") return PathVariant::kI1;
  if (name == "I2" || name == "i2") return PathVariant::kI2;
  if (name == "I3" || name == "i3") return PathVariant::kI3;
  throw std::invalid_argument("unknown path variant '" + name + "'");
}

}  // namespace santa::oracles
