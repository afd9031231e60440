#include "qmeas/causality.hpp"

#include <algorithm>

#include "qmeas/errors.hpp"

namespace qmeas {

namespace {

constexpr double kUnitaryTol = 1e-10;

struct Factor {
    NodeId node;
    Povm observable;
};

Povm realize_at(const CausalTree& tree, const NodeId& s, double tol) {
    const auto& own = tree.observable(s);
    if (!own) throw ValidationError("realize_sequential: node '" + s + "' has no observable");

    std::vector<Factor> factors{{s, *own}};
    for (const auto& t : tree.children(s)) factors.push_back({t, pull_back(tree.edge(t), realize_at(tree, t, tol))});

    // Every pair must commute before the product is formed.
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (std::size_t j = i + 1; j < factors.size(); ++j)
            for (const auto& ea : factors[i].observable.effects())
                for (const auto& eb : factors[j].observable.effects()) {
                    const double c = commutator_norm(ea, eb);
                    if (c > tol) throw NonCommuting(factors[i].node, factors[j].node, c);
                }

    Povm acc = factors.front().observable;
    for (std::size_t i = 1; i < factors.size(); ++i) acc = product_observable(acc, factors[i].observable, tol);
    return acc;
}

}  // namespace

CausalMap::CausalMap(NodeId source, NodeId target, COp generator)
    : source_(std::move(source)), target_(std::move(target)), u_(std::move(generator)) {
    if (u_.dim() == 0) throw ValidationError("CausalMap: empty generator");
    const double r = unitarity_residual(u_);
    if (r > kUnitaryTol) throw ValidationError("CausalMap: generator is not unitary (residual " + std::to_string(r) + ")");
}

CausalMap CausalMap::identity(NodeId source, NodeId target, std::size_t dim) {
    return CausalMap(std::move(source), std::move(target), COp::identity(dim));
}

COp CausalMap::apply(const COp& f) const {
    if (f.dim() != dim()) throw DimensionMismatch(dim(), f.dim(), "CausalMap::apply");
    return u_.adjoint() * f * u_;
}

Povm pull_back(const CausalMap& m, const Povm& o) {
    if (o.dim() != m.dim()) throw DimensionMismatch(m.dim(), o.dim(), "pull_back");
    return conjugate_observable(o, m.generator());
}

CausalMap compose(const CausalMap& m1, const CausalMap& m2) {
    if (m1.target() != m2.source())
        throw NodeMismatch("compose: '" + m1.target() + "' does not match '" + m2.source() + "'");
    if (m1.dim() != m2.dim()) throw DimensionMismatch(m1.dim(), m2.dim(), "compose");
    return CausalMap(m1.source(), m2.target(), m2.generator() * m1.generator());
}

// --- CausalTree --------------------------------------------------------------

CausalTree::CausalTree(NodeId root, std::size_t dim, std::optional<Povm> root_observable)
    : root_(std::move(root)), dim_(dim) {
    if (dim_ == 0) throw ValidationError("CausalTree: zero dimension");
    if (root_observable && root_observable->dim() != dim_)
        throw DimensionMismatch(dim_, root_observable->dim(), "CausalTree root observable");
    nodes_.emplace(root_, Node{std::nullopt, std::nullopt, std::move(root_observable), {}});
    order_.push_back(root_);
}

void CausalTree::add_node(const NodeId& id, const CausalMap& edge, std::optional<Povm> observable) {
    if (contains(id)) throw ValidationError("CausalTree: duplicate node '" + id + "'");
    if (!contains(edge.source())) throw NodeMismatch("CausalTree: parent '" + edge.source() + "' does not exist");
    if (edge.target() != id) throw NodeMismatch("CausalTree: edge targets '" + edge.target() + "', not '" + id + "'");
    if (edge.dim() != dim_) throw DimensionMismatch(dim_, edge.dim(), "CausalTree edge");
    if (observable && observable->dim() != dim_) throw DimensionMismatch(dim_, observable->dim(), "CausalTree observable");

    node(edge.source()).children.push_back(id);
    nodes_.emplace(id, Node{edge.source(), edge, std::move(observable), {}});
    order_.push_back(id);
}

void CausalTree::set_observable(const NodeId& id, Povm observable) {
    if (observable.dim() != dim_) throw DimensionMismatch(dim_, observable.dim(), "CausalTree observable");
    node(id).observable = std::move(observable);
}

const CausalTree::Node& CausalTree::node(const NodeId& id) const {
    const auto it = nodes_.find(id);
    if (it == nodes_.end()) throw NodeMismatch("CausalTree: unknown node '" + id + "'");
    return it->second;
}

CausalTree::Node& CausalTree::node(const NodeId& id) {
    const auto it = nodes_.find(id);
    if (it == nodes_.end()) throw NodeMismatch("CausalTree: unknown node '" + id + "'");
    return it->second;
}

const NodeId& CausalTree::parent(const NodeId& id) const {
    const auto& n = node(id);
    if (!n.parent) throw NodeMismatch("CausalTree: the root has no parent");
    return *n.parent;
}

const std::vector<NodeId>& CausalTree::children(const NodeId& id) const { return node(id).children; }

const std::optional<Povm>& CausalTree::observable(const NodeId& id) const { return node(id).observable; }

const CausalMap& CausalTree::edge(const NodeId& id) const {
    const auto& n = node(id);
    if (!n.edge) throw NodeMismatch("CausalTree: the root has no incoming edge");
    return *n.edge;
}

bool CausalTree::precedes(const NodeId& a, const NodeId& b) const {
    (void)node(a);
    std::optional<NodeId> cur = b;
    while (cur) {
        if (*cur == a) return true;
        cur = node(*cur).parent;
    }
    return false;
}

CausalMap CausalTree::map(const NodeId& from, const NodeId& to) const {
    if (!precedes(from, to)) throw NodeMismatch("CausalTree: '" + from + "' does not precede '" + to + "'");
    std::vector<NodeId> path;
    for (NodeId cur = to; cur != from; cur = parent(cur)) path.push_back(cur);
    std::reverse(path.begin(), path.end());

    CausalMap acc = CausalMap::identity(from, from, dim_);
    for (const auto& id : path) acc = compose(acc, edge(id));
    return acc;
}

std::vector<NodeId> CausalTree::preorder() const {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        const auto& kids = children(cur);
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
        out.push_back(std::move(cur));
    }
    return out;
}

Povm realize_sequential(const CausalTree& tree, double tol) { return realize_at(tree, tree.root(), tol); }

}  // namespace qmeas
