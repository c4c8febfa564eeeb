#include "santa/alloc/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace santa::alloc {

void Instance::canonicalize() {
  for (const Rational& v : values) {
    if (v < 0) throw std::invalid_argument("instance: negative gift value");
  }
  for (const DesireEdge& e : edges) {
    if (e.child >= num_children || e.gift >= values.size()) {
      throw std::invalid_argument("instance: edge endpoint out of range");
    }
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("instance: duplicate edge");
  }
}

bool Instance::has_edge(ChildId c, GiftId g) const {
  return std::binary_search(edges.begin(), edges.end(), DesireEdge{c, g});
}

std::vector<std::vector<GiftId>> Instance::gifts_of_child() const {
  std::vector<std::vector<GiftId>> out(num_children);
  for (const DesireEdge& e : edges) out[e.child].push_back(e.gift);
  return out;
}

std::vector<std::vector<ChildId>> Instance::children_of_gift() const {
  std::vector<std::vector<ChildId>> out(values.size());
  for (const DesireEdge& e : edges) out[e.gift].push_back(e.child);
  return out;
}

std::vector<congest::Edge> Instance::network_edges() const {
  std::vector<congest::Edge> out;
  out.reserve(edges.size());
  for (const DesireEdge& e : edges) out.push_back({child_node(e.child), gift_node(e.gift)});
  return out;
}

std::vector<Rational> Instance::desired_value() const {
  std::vector<Rational> out(num_children, Rational(0));
  for (const DesireEdge& e : edges) out[e.child] += values[e.gift];
  return out;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

template <class T>
T read_field(std::istringstream& fields, std::size_t line, const char* name) {
  T value{};
  if (!(fields >> value)) fail(line, std::string("expected ") + name);
  return value;
}

Rational read_rational(std::istringstream& fields, std::size_t line, const char* name) {
  std::string token;
  if (!(fields >> token)) fail(line, std::string("expected ") + name);
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument&) {
    fail(line, std::string("bad ") + name + " '" + token + "'");
  }
}

void expect_end(std::istringstream& fields, std::size_t line) {
  std::string extra;
  if (fields >> extra) fail(line, "unexpected token '" + extra + "'");
}

std::string strip_comment(const std::string& raw) {
  const auto hash = raw.find('#');
  return hash == std::string::npos ? raw : raw.substr(0, hash);
}

}  // namespace

InstanceDocument read_instance(std::istream& in) {
  InstanceDocument doc;
  Instance& inst = doc.instance;
  bool have_header = false;
  std::vector<bool> declared;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(strip_comment(raw));
    std::string kind;
    if (!(fields >> kind)) continue;
    if (kind == "santa") {
      if (have_header) fail(line, "repeated header");
      const auto c = read_field<long long>(fields, line, "child count");
      const auto g = read_field<long long>(fields, line, "gift count");
      if (c < 1 || g < 0) fail(line, "need at least one child and a nonnegative gift count");
      expect_end(fields, line);
      inst.num_children = static_cast<std::size_t>(c);
      inst.values.assign(static_cast<std::size_t>(g), Rational(0));
      declared.assign(static_cast<std::size_t>(g), false);
      have_header = true;
      continue;
    }
    if (!have_header) fail(line, "expected header 'santa <children> <gifts>'");
    if (kind == "gift") {
      const auto id = read_field<long long>(fields, line, "gift id");
      if (id < 0 || static_cast<std::size_t>(id) >= inst.values.size()) fail(line, "gift id out of range");
      if (declared[static_cast<std::size_t>(id)]) fail(line, "gift declared twice");
      const Rational v = read_rational(fields, line, "gift value");
      if (v < 0) fail(line, "negative gift value");
      expect_end(fields, line);
      inst.values[static_cast<std::size_t>(id)] = v;
      declared[static_cast<std::size_t>(id)] = true;
    } else if (kind == "edge" || kind == "frac") {
      const auto c = read_field<long long>(fields, line, "child id");
      const auto g = read_field<long long>(fields, line, "gift id");
      if (c < 0 || static_cast<std::size_t>(c) >= inst.num_children) fail(line, "child id out of range");
      if (g < 0 || static_cast<std::size_t>(g) >= inst.values.size()) fail(line, "gift id out of range");
      if (kind == "edge") {
        expect_end(fields, line);
        inst.edges.push_back({static_cast<ChildId>(c), static_cast<GiftId>(g)});
      } else {
        const Rational w = read_rational(fields, line, "weight");
        if (w < 0 || w > 1) fail(line, "fractional weight outside [0, 1]");
        expect_end(fields, line);
        doc.fractional.push_back({static_cast<ChildId>(c), static_cast<GiftId>(g), w});
      }
    } else {
      fail(line, "unknown record '" + kind + "'");
    }
  }
  if (!have_header) throw std::runtime_error("line " + std::to_string(line) + ": missing header");
  for (std::size_t g = 0; g < declared.size(); ++g) {
    if (!declared[g]) throw std::runtime_error("gift " + std::to_string(g) + " has no value line");
  }
  try {
    inst.canonicalize();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  for (const FractionalEntry& f : doc.fractional) {
    if (!inst.has_edge(f.child, f.gift)) throw std::runtime_error("fractional weight on a non-desire edge");
  }
  return doc;
}

InstanceDocument read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst, std::span<const FractionalEntry> fractional) {
  out << "santa " << inst.num_children << ' ' << inst.num_gifts() << '\n';
  for (std::size_t g = 0; g < inst.num_gifts(); ++g) out << "gift " << g << ' ' << to_string(inst.values[g]) << '\n';
  for (const DesireEdge& e : inst.edges) out << "edge " << e.child << ' ' << e.gift << '\n';
  for (const FractionalEntry& f : fractional) {
    out << "frac " << f.child << ' ' << f.gift << ' ' << f.weight.get_num().get_str() << '/'
        << f.weight.get_den().get_str() << '\n';
  }
}

Assignment read_assignment(std::istream& in) {
  Assignment out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(strip_comment(raw));
    long long g = 0;
    if (!(fields >> g)) {
      std::string rest;
      std::istringstream again(strip_comment(raw));
      if (again >> rest) fail(line, "expected '<gift_id> <child_id>'");
      continue;
    }
    const auto c = read_field<long long>(fields, line, "child id");
    if (g < 0 || c < 0) fail(line, "negative id");
    expect_end(fields, line);
    out.push_back({static_cast<GiftId>(g), static_cast<ChildId>(c)});
  }
  return out;
}

Assignment read_assignment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_assignment(in);
}

void write_assignment(std::ostream& out, const Assignment& assignment) {
  for (const GiftAssignment& a : assignment) out << a.gift << ' ' << a.child << '\n';
}

}  // namespace santa::alloc
