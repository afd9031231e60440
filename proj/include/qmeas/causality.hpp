#pragma once

// Heisenberg-picture causal maps F -> U* F U over a finite rooted tree, and the
// bottom-up realization of a sequential causal observable as one root observable.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/kernel.hpp"
#include "qmeas/measurement.hpp"

namespace qmeas {

using NodeId = std::string;

/// Deterministic causal map from `target` back to `source`, generated by a unitary.
class CausalMap {
public:
    /// Throws ValidationError if the generator is not unitary within 1e-10.
    CausalMap(NodeId source, NodeId target, COp generator);

    static CausalMap identity(NodeId source, NodeId target, std::size_t dim);

    const NodeId& source() const noexcept { return source_; }
    const NodeId& target() const noexcept { return target_; }
    const COp& generator() const noexcept { return u_; }
    std::size_t dim() const noexcept { return u_.dim(); }

    /// U* F U
    COp apply(const COp& f) const;

private:
    NodeId source_;
    NodeId target_;
    COp u_;
};

/// Pull an observable at the map's target back to its source.
Povm pull_back(const CausalMap& m, const Povm& o);

/// m1: t1 -> t2 followed by m2: t2 -> t3 gives t1 -> t3, with
/// apply = m1.apply o m2.apply, i.e. generator m2.U * m1.U. Throws NodeMismatch.
CausalMap compose(const CausalMap& m1, const CausalMap& m2);

/// Finite rooted tree of nodes with a parent map and a causal map on every edge.
/// Nodes are added parent-first, so every node is reachable from the root.
class CausalTree {
public:
    CausalTree(NodeId root, std::size_t dim, std::optional<Povm> root_observable = std::nullopt);

    /// Adds `id` as a child of `edge.source()`; `edge.target()` must equal `id`.
    void add_node(const NodeId& id, const CausalMap& edge, std::optional<Povm> observable = std::nullopt);
    void set_observable(const NodeId& id, Povm observable);

    const NodeId& root() const noexcept { return root_; }
    std::size_t dim() const noexcept { return dim_; }
    bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }
    std::size_t size() const noexcept { return order_.size(); }

    /// Parent of a non-root node.
    const NodeId& parent(const NodeId& id) const;
    /// Children in declaration order.
    const std::vector<NodeId>& children(const NodeId& id) const;
    const std::optional<Povm>& observable(const NodeId& id) const;
    /// Edge map from parent(id) to id.
    const CausalMap& edge(const NodeId& id) const;

    /// True iff `a` is `b` or an ancestor of `b`.
    bool precedes(const NodeId& a, const NodeId& b) const;

    /// Map from ancestor `from` to descendant `to`, composed along the path. Throws NodeMismatch.
    CausalMap map(const NodeId& from, const NodeId& to) const;

    /// Pre-order (node, then children in declaration order); the tuple order of realized outcomes.
    std::vector<NodeId> preorder() const;

private:
    struct Node {
        std::optional<NodeId> parent;
        std::optional<CausalMap> edge;
        std::optional<Povm> observable;
        std::vector<NodeId> children;
    };

    const Node& node(const NodeId& id) const;
    Node& node(const NodeId& id);

    NodeId root_;
    std::size_t dim_;
    std::map<NodeId, Node> nodes_;
    std::vector<NodeId> order_;
};

/// Bottom-up realization: a leaf keeps its observable; an internal node s becomes
/// O_s x (pull-backs of its realized children, in declaration order), each product gated
/// by the commutativity condition. Throws NonCommuting naming the offending nodes and
/// ValidationError if some node has no observable.
Povm realize_sequential(const CausalTree& tree, double tol = kCommuteTol);

}  // namespace qmeas
