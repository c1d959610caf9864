#pragma once

// Monoidal decompositions over an arbitrary prop.
//
// A decomposition is a binary tree whose leaves hold atomic morphisms and
// whose internal nodes are monoidal products or sequential compositions.
// Composition nodes record the arity of the object they cut through, so a
// certificate with a wrong cut is detectable instead of silently re-derived.
//
// The width of a decomposition is the largest weight among its nodes: atoms
// weigh what the prop says, cuts weigh their arity, tensors are free.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace mwd {

/// What a client prop supplies so that decompositions over it can be
/// evaluated, validated and priced. Object weights must be additive.
template <class P>
concept Prop = requires(const P& prop, const typename P::Morphism& f, std::size_t n) {
  typename P::Morphism;
  { prop.dom(f) } -> std::convertible_to<std::size_t>;
  { prop.cod(f) } -> std::convertible_to<std::size_t>;
  { prop.compose(f, f) } -> std::same_as<typename P::Morphism>;
  { prop.tensor(f, f) } -> std::same_as<typename P::Morphism>;
  { prop.equal(f, f) } -> std::same_as<bool>;
  { prop.is_atom(f) } -> std::same_as<bool>;
  { prop.atom_weight(f) } -> std::convertible_to<std::size_t>;
  { prop.object_weight(n) } -> std::convertible_to<std::size_t>;
};

/// Raised when a decomposition does not typecheck; carries the node path.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

template <class M>
class Decomposition {
 public:
  struct Leaf {
    M morphism;
  };
  struct Tensor {
    Decomposition left, right;
  };
  struct Compose {
    Decomposition left;
    std::size_t cut;
    Decomposition right;
  };
  using Node = std::variant<Leaf, Tensor, Compose>;

  static Decomposition leaf(M morphism) {
    return Decomposition(std::make_shared<const Node>(Leaf{std::move(morphism)}));
  }
  static Decomposition tensor(Decomposition left, Decomposition right) {
    return Decomposition(
        std::make_shared<const Node>(Tensor{std::move(left), std::move(right)}));
  }
  static Decomposition compose(Decomposition left, std::size_t cut, Decomposition right) {
    return Decomposition(
        std::make_shared<const Node>(Compose{std::move(left), cut, std::move(right)}));
  }

  const Node& node() const { return *node_; }
  bool is_leaf() const { return std::holds_alternative<Leaf>(*node_); }
  bool is_tensor() const { return std::holds_alternative<Tensor>(*node_); }
  bool is_compose() const { return std::holds_alternative<Compose>(*node_); }
  const Leaf& as_leaf() const { return std::get<Leaf>(*node_); }
  const Tensor& as_tensor() const { return std::get<Tensor>(*node_); }
  const Compose& as_compose() const { return std::get<Compose>(*node_); }

  std::size_t size() const {
    return std::visit(
        [](const auto& n) -> std::size_t {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Leaf>) {
            return 1;
          } else {
            return 1 + n.left.size() + n.right.size();
          }
        },
        *node_);
  }

 private:
  explicit Decomposition(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// wd(d): leaf → w(atom); tensor → max of children; compose over X → max(children, w(X)).
template <Prop P>
std::size_t width(const Decomposition<typename P::Morphism>& d, const P& prop) {
  using D = Decomposition<typename P::Morphism>;
  if (d.is_leaf()) return prop.atom_weight(d.as_leaf().morphism);
  if (d.is_tensor()) {
    const auto& t = d.as_tensor();
    return std::max(width(t.left, prop), width(t.right, prop));
  }
  const typename D::Compose& c = d.as_compose();
  return std::max({width(c.left, prop), static_cast<std::size_t>(prop.object_weight(c.cut)),
                   width(c.right, prop)});
}

/// One node of the labelled-tree view (S, μ) of a decomposition.
struct NodeLabel {
  enum class Kind { atom, tensor, cut } kind;
  std::size_t weight;
};

template <Prop P>
std::vector<NodeLabel> labelled_nodes(const Decomposition<typename P::Morphism>& d,
                                      const P& prop) {
  std::vector<NodeLabel> out;
  std::vector<const Decomposition<typename P::Morphism>*> stack{&d};
  while (!stack.empty()) {
    const auto* cur = stack.back();
    stack.pop_back();
    if (cur->is_leaf()) {
      out.push_back({NodeLabel::Kind::atom, prop.atom_weight(cur->as_leaf().morphism)});
    } else if (cur->is_tensor()) {
      out.push_back({NodeLabel::Kind::tensor, 0});
      stack.push_back(&cur->as_tensor().left);
      stack.push_back(&cur->as_tensor().right);
    } else {
      out.push_back({NodeLabel::Kind::cut, prop.object_weight(cur->as_compose().cut)});
      stack.push_back(&cur->as_compose().left);
      stack.push_back(&cur->as_compose().right);
    }
  }
  return out;
}

/// max over labelled nodes of w(μ(v)); agrees with width().
template <Prop P>
std::size_t max_node_width(const Decomposition<typename P::Morphism>& d, const P& prop) {
  std::size_t best = 0;
  for (const auto& label : labelled_nodes(d, prop)) best = std::max(best, label.weight);
  return best;
}

namespace detail {

template <Prop P>
typename P::Morphism evaluate_at(const Decomposition<typename P::Morphism>& d, const P& prop,
                                 const std::string& path) {
  if (d.is_leaf()) return d.as_leaf().morphism;
  if (d.is_tensor()) {
    const auto& t = d.as_tensor();
    return prop.tensor(evaluate_at(t.left, prop, path + ".left"),
                       evaluate_at(t.right, prop, path + ".right"));
  }
  const auto& c = d.as_compose();
  auto left = evaluate_at(c.left, prop, path + ".left");
  auto right = evaluate_at(c.right, prop, path + ".right");
  if (prop.cod(left) != c.cut || prop.dom(right) != c.cut) {
    std::ostringstream msg;
    msg << "composition over " << c.cut << " wires joins codomain " << prop.cod(left)
        << " to domain " << prop.dom(right);
    throw EvaluationError(path, msg.str());
  }
  return prop.compose(left, right);
}

template <Prop P>
void check_atoms(const Decomposition<typename P::Morphism>& d, const P& prop,
                 const std::string& path) {
  if (d.is_leaf()) {
    if (!prop.is_atom(d.as_leaf().morphism)) {
      throw EvaluationError(path, "leaf is not an atom of the prop");
    }
  } else if (d.is_tensor()) {
    check_atoms(d.as_tensor().left, prop, path + ".left");
    check_atoms(d.as_tensor().right, prop, path + ".right");
  } else {
    check_atoms(d.as_compose().left, prop, path + ".left");
    check_atoms(d.as_compose().right, prop, path + ".right");
  }
}

}  // namespace detail

/// Folds composition and tensor over the tree. Throws EvaluationError with
/// the offending node path ("root.left.right") on an arity mismatch.
template <Prop P>
typename P::Morphism evaluate(const Decomposition<typename P::Morphism>& d, const P& prop) {
  return detail::evaluate_at(d, prop, "root");
}

struct Validation {
  bool ok;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

/// Certificate check: every leaf is an atom and the tree evaluates to f.
template <Prop P>
Validation validate(const Decomposition<typename P::Morphism>& d,
                    const typename P::Morphism& f, const P& prop) {
  try {
    detail::check_atoms(d, prop, "root");
    auto value = evaluate(d, prop);
    if (prop.dom(value) != prop.dom(f) || prop.cod(value) != prop.cod(f)) {
      std::ostringstream msg;
      msg << "decomposition has type " << prop.dom(value) << " -> " << prop.cod(value)
          << " but the target has type " << prop.dom(f) << " -> " << prop.cod(f);
      return {false, msg.str()};
    }
    if (!prop.equal(value, f)) return {false, "decomposition evaluates to a different morphism"};
    return {true, {}};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

// JSON: {"leaf": payload} | {"tensor": [l, r]} | {"compose": {"cut": k, "left": l, "right": r}}

template <class M, class Encode>
nlohmann::json decomposition_to_json(const Decomposition<M>& d, const Encode& encode_leaf) {
  using D = Decomposition<M>;
  if (d.is_leaf()) return {{"leaf", encode_leaf(d.as_leaf().morphism)}};
  if (d.is_tensor()) {
    const typename D::Tensor& t = d.as_tensor();
    return {{"tensor", nlohmann::json::array({decomposition_to_json(t.left, encode_leaf),
                                              decomposition_to_json(t.right, encode_leaf)})}};
  }
  const typename D::Compose& c = d.as_compose();
  return {{"compose",
           {{"cut", c.cut},
            {"left", decomposition_to_json(c.left, encode_leaf)},
            {"right", decomposition_to_json(c.right, encode_leaf)}}}};
}

template <class M, class Decode>
Decomposition<M> decomposition_from_json(const nlohmann::json& j, const Decode& decode_leaf) {
  using D = Decomposition<M>;
  if (!j.is_object() || j.size() != 1) {
    throw std::invalid_argument("decomposition node must be an object with one key");
  }
  if (j.contains("leaf")) return D::leaf(decode_leaf(j.at("leaf")));
  if (j.contains("tensor")) {
    const auto& pair = j.at("tensor");
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("tensor node needs exactly two children");
    }
    return D::tensor(decomposition_from_json<M>(pair[0], decode_leaf),
                     decomposition_from_json<M>(pair[1], decode_leaf));
  }
  if (j.contains("compose")) {
    const auto& c = j.at("compose");
    return D::compose(decomposition_from_json<M>(c.at("left"), decode_leaf),
                      c.at("cut").get<std::size_t>(),
                      decomposition_from_json<M>(c.at("right"), decode_leaf));
  }
  throw std::invalid_argument("unknown decomposition node kind");
}

/// Graphviz rendering with node labels "⊗", ";k" or the atom name.
template <class M, class Name>
std::string decomposition_to_dot(const Decomposition<M>& d, const Name& atom_name) {
  std::ostringstream out;
  out << "digraph decomposition {\n  node [shape=box];\n";
  std::size_t next = 0;
  std::function<std::size_t(const Decomposition<M>&)> emit = [&](const Decomposition<M>& n) {
    const std::size_t id = next++;
    if (n.is_leaf()) {
      out << "  n" << id << " [label=\"" << atom_name(n.as_leaf().morphism) << "\"];\n";
      return id;
    }
    const Decomposition<M>* left;
    const Decomposition<M>* right;
    if (n.is_tensor()) {
      out << "  n" << id << " [label=\"⊗\", shape=circle];\n";
      left = &n.as_tensor().left;
      right = &n.as_tensor().right;
    } else {
      out << "  n" << id << " [label=\";" << n.as_compose().cut << "\", shape=circle];\n";
      left = &n.as_compose().left;
      right = &n.as_compose().right;
    }
    const std::size_t l = emit(*left);
    const std::size_t r = emit(*right);
    out << "  n" << id << " -> n" << l << ";\n  n" << id << " -> n" << r << ";\n";
    return id;
  };
  emit(d);
  out << "}\n";
  return out.str();
}

}  // namespace mwd
