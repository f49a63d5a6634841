#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "depposet.hpp"

namespace qbtw {

using NodeId = std::uint32_t;

// Unchecked decomposition data as read from a file or assembled by hand.
struct RawDecomposition {
	std::map<NodeId, VarSet> bags;
	std::vector<std::pair<NodeId, NodeId>> edges; // (parent, child)
	std::optional<NodeId> root;
	std::vector<NodeId> trunk; // leaf to root
};

class decomposition_error : public validation_error {
public:
	using validation_error::validation_error;
};

// Rooted tree decomposition with a designated leaf-to-root trunk path.
// Construction checks only the tree/trunk shape; niceness and the
// QBF-specific properties are checked by the validate_* functions.
class TrunkTreeDecomposition {
public:
	struct Node {
		NodeId id = 0;
		std::optional<NodeId> parent;
		std::vector<NodeId> children; // ascending id
		VarSet bag;

		bool operator==(const Node &) const = default;
	};

	static TrunkTreeDecomposition from_raw(const RawDecomposition &raw) {
		TrunkTreeDecomposition td;
		for (const auto &[id, bag] : raw.bags) {
			if (id == 0)
				throw decomposition_error("node ids start at 1");
			td.nodes_[id] = Node{id, std::nullopt, {}, bag};
		}
		for (auto [p, c] : raw.edges) {
			if (!td.nodes_.count(p) || !td.nodes_.count(c))
				throw decomposition_error("edge " + std::to_string(p) + " -> " + std::to_string(c) + " names an unknown node");
			if (p == c)
				throw decomposition_error("cycle: self-loop at node " + std::to_string(p));
			Node &child = td.nodes_[c];
			if (child.parent)
				throw decomposition_error("node " + std::to_string(c) + " has more than one parent");
			child.parent = p;
			td.nodes_[p].children.push_back(c);
		}
		for (auto &[_, n] : td.nodes_)
			std::sort(n.children.begin(), n.children.end());

		if (!raw.root)
			throw decomposition_error("missing root");
		if (!td.nodes_.count(*raw.root))
			throw decomposition_error("root " + std::to_string(*raw.root) + " is not a node");
		td.root_ = *raw.root;
		if (td.nodes_[td.root_].parent)
			throw decomposition_error("root " + std::to_string(td.root_) + " has a parent");
		for (const auto &[id, n] : td.nodes_)
			if (!n.parent && id != td.root_)
				throw decomposition_error("multiple roots: node " + std::to_string(id) + " has no parent");

		// every non-root node has one parent, so unreachable nodes lie on a cycle
		std::size_t reached = 0;
		std::vector<NodeId> stack{td.root_};
		while (!stack.empty()) {
			NodeId t = stack.back();
			stack.pop_back();
			++reached;
			for (NodeId c : td.nodes_[t].children)
				stack.push_back(c);
			if (reached > td.nodes_.size())
				break;
		}
		if (reached != td.nodes_.size())
			throw decomposition_error("cycle: not all nodes are reachable from the root");

		if (raw.trunk.empty())
			throw decomposition_error("trunk is empty");
		for (NodeId t : raw.trunk)
			if (!td.nodes_.count(t))
				throw decomposition_error("trunk names unknown node " + std::to_string(t));
		if (!td.nodes_[raw.trunk.front()].children.empty())
			throw decomposition_error("trunk does not start at a leaf");
		if (raw.trunk.back() != td.root_)
			throw decomposition_error("trunk does not end at the root");
		for (std::size_t i = 1; i < raw.trunk.size(); ++i)
			if (td.nodes_[raw.trunk[i - 1]].parent != raw.trunk[i])
				throw decomposition_error("trunk is not a path: " + std::to_string(raw.trunk[i]) + " is not the parent of " +
				                          std::to_string(raw.trunk[i - 1]));
		td.trunk_ = raw.trunk;
		return td;
	}

	// Path decomposition; bags[0] is the leaf and bags.back() the root. Trunk = whole path.
	static TrunkTreeDecomposition path(const std::vector<VarSet> &bags) {
		RawDecomposition raw;
		for (std::size_t i = 0; i < bags.size(); ++i) {
			NodeId id = static_cast<NodeId>(i + 1);
			raw.bags[id] = bags[i];
			raw.trunk.push_back(id);
			if (i > 0)
				raw.edges.emplace_back(id, id - 1);
		}
		if (!bags.empty())
			raw.root = static_cast<NodeId>(bags.size());
		return from_raw(raw);
	}

	RawDecomposition to_raw() const {
		RawDecomposition raw;
		for (const auto &[id, n] : nodes_) {
			raw.bags[id] = n.bag;
			for (NodeId c : n.children)
				raw.edges.emplace_back(id, c);
		}
		raw.root = root_;
		raw.trunk = trunk_;
		return raw;
	}

	const std::map<NodeId, Node> &nodes() const { return nodes_; }
	std::size_t size() const { return nodes_.size(); }
	NodeId root() const { return root_; }
	const std::vector<NodeId> &trunk() const { return trunk_; }

	const Node &node(NodeId t) const {
		auto it = nodes_.find(t);
		if (it == nodes_.end())
			throw precondition_error("unknown node " + std::to_string(t));
		return it->second;
	}

	const VarSet &bag(NodeId t) const { return node(t).bag; }

	bool on_trunk(NodeId t) const { return std::find(trunk_.begin(), trunk_.end(), t) != trunk_.end(); }

	std::optional<NodeId> trunk_child(NodeId t) const {
		for (std::size_t i = 1; i < trunk_.size(); ++i)
			if (trunk_[i] == t)
				return trunk_[i - 1];
		return std::nullopt;
	}

	// True iff `anc` lies strictly above `t`.
	bool is_strict_ancestor(NodeId anc, NodeId t) const {
		for (auto p = node(t).parent; p; p = node(*p).parent)
			if (*p == anc)
				return true;
		return false;
	}

	VarSet variables() const {
		VarSet out;
		for (const auto &[_, n] : nodes_)
			out.insert(n.bag.begin(), n.bag.end());
		return out;
	}

	bool operator==(const TrunkTreeDecomposition &) const = default;

private:
	std::map<NodeId, Node> nodes_;
	NodeId root_ = 0;
	std::vector<NodeId> trunk_;
};

struct Violation {
	enum class Rule { T1, T2, T3, T4, P1P2, TRUNK };
	Rule rule;
	std::optional<NodeId> node;
	std::optional<Variable> variable;
	std::string message;
};

inline const char *to_string(Violation::Rule r) {
	switch (r) {
	case Violation::Rule::T1: return "T1";
	case Violation::Rule::T2: return "T2";
	case Violation::Rule::T3: return "T3";
	case Violation::Rule::T4: return "T4";
	case Violation::Rule::P1P2: return "P1P2";
	case Violation::Rule::TRUNK: return "TRUNK";
	}
	return "?";
}

// Which of the two alignment properties a variable satisfies.
struct Alignment {
	Variable variable;
	bool p1 = false;
	bool p2 = false;
};

struct ValidationReport {
	std::vector<Violation> violations;
	std::vector<Alignment> alignment; // filled by validate_trunk_aligned

	bool ok() const { return violations.empty(); }

	bool has(Violation::Rule r) const {
		return std::any_of(violations.begin(), violations.end(), [r](const Violation &v) { return v.rule == r; });
	}

	std::string to_string() const {
		std::string s;
		for (const auto &v : violations) {
			s += qbtw::to_string(v.rule);
			if (v.node)
				s += " node " + std::to_string(*v.node);
			if (v.variable)
				s += " variable " + qbtw::to_string(*v.variable);
			s += ": " + v.message + "\n";
		}
		return s;
	}
};

namespace detail {

inline std::string bag_string(const VarSet &bag) {
	std::string s = "{";
	for (Variable v : bag) {
		if (s.size() > 1)
			s += ",";
		s += to_string(v);
	}
	return s + "}";
}

// Nodes whose bag contains v but whose parent's does not.
inline std::vector<NodeId> top_nodes(const TrunkTreeDecomposition &td, Variable v) {
	std::vector<NodeId> out;
	for (const auto &[id, n] : td.nodes())
		if (n.bag.count(v) && (!n.parent || !td.bag(*n.parent).count(v)))
			out.push_back(id);
	return out;
}

} // namespace detail

// Highest node whose bag contains v.
inline NodeId forget_node(const TrunkTreeDecomposition &td, Variable v) {
	auto tops = detail::top_nodes(td, v);
	if (tops.empty())
		throw precondition_error("variable " + to_string(v) + " occurs in no bag");
	if (tops.size() > 1)
		throw precondition_error("bags containing variable " + to_string(v) + " are not connected");
	return tops.front();
}

// forget_node for every variable occurring in a bag, in one pass.
inline std::map<Variable, NodeId> forget_nodes(const TrunkTreeDecomposition &td) {
	std::map<Variable, NodeId> out;
	for (const auto &[id, n] : td.nodes())
		for (Variable v : n.bag)
			if (!n.parent || !td.bag(*n.parent).count(v))
				if (!out.emplace(v, id).second)
					throw precondition_error("bags containing variable " + to_string(v) + " are not connected");
	return out;
}

inline VarSet subtree_vars(const TrunkTreeDecomposition &td, NodeId t) {
	VarSet out;
	std::vector<NodeId> stack{t};
	while (!stack.empty()) {
		const auto &n = td.node(stack.back());
		stack.pop_back();
		out.insert(n.bag.begin(), n.bag.end());
		stack.insert(stack.end(), n.children.begin(), n.children.end());
	}
	return out;
}

inline long width(const TrunkTreeDecomposition &td) {
	std::size_t largest = 0;
	for (const auto &[_, n] : td.nodes())
		largest = std::max(largest, n.bag.size());
	return static_cast<long>(largest) - 1;
}

inline ValidationReport validate_nice(const TrunkTreeDecomposition &td, const QbfInstance &q) {
	using R = Violation::Rule;
	ValidationReport r;
	auto add = [&r](R rule, std::optional<NodeId> t, std::optional<Variable> v, std::string msg) {
		r.violations.push_back({rule, t, v, std::move(msg)});
	};

	// T1, including coverage of isolated variables
	const VarSet vars = q.prefix.variable_set();
	const VarSet covered = td.variables();
	for (Variable v : vars)
		if (!covered.count(v))
			add(R::T1, std::nullopt, v, "variable occurs in no bag");
	for (Variable v : covered)
		if (!vars.count(v))
			add(R::T1, std::nullopt, v, "bag variable is not a variable of the instance");
	const Graph g = primal_graph(q);
	for (auto [u, v] : g.edges()) {
		bool found = false;
		for (const auto &[_, n] : td.nodes())
			if (n.bag.count(u) && n.bag.count(v)) {
				found = true;
				break;
			}
		if (!found)
			add(R::T1, std::nullopt, u, "edge {" + to_string(u) + "," + to_string(v) + "} is in no bag");
	}

	// T2
	for (Variable v : covered)
		if (detail::top_nodes(td, v).size() > 1)
			add(R::T2, std::nullopt, v, "nodes containing the variable do not form a subtree");

	// T3, T4
	for (const auto &[id, n] : td.nodes()) {
		const bool leaf = n.children.empty();
		if ((leaf || id == td.root()) && !n.bag.empty())
			add(R::T3, id, std::nullopt, std::string(leaf ? "leaf" : "root") + " bag " + detail::bag_string(n.bag) + " is not empty");
		if (leaf)
			continue;
		if (n.children.size() == 1) {
			const VarSet &cb = td.bag(n.children.front());
			std::vector<Variable> added, dropped;
			std::set_difference(n.bag.begin(), n.bag.end(), cb.begin(), cb.end(), std::back_inserter(added));
			std::set_difference(cb.begin(), cb.end(), n.bag.begin(), n.bag.end(), std::back_inserter(dropped));
			if (added.size() + dropped.size() != 1)
				add(R::T4, id, std::nullopt,
				    "bag " + detail::bag_string(n.bag) + " is neither an introduce nor a forget of child bag " + detail::bag_string(cb));
		} else if (n.children.size() == 2) {
			for (NodeId c : n.children)
				if (td.bag(c) != n.bag)
					add(R::T4, id, std::nullopt, "join bag differs from child " + std::to_string(c));
		} else {
			add(R::T4, id, std::nullopt, std::to_string(n.children.size()) + " children");
		}
	}

	// trunk shape (already enforced on construction, re-checked here)
	const auto &trunk = td.trunk();
	if (trunk.empty() || !td.node(trunk.front()).children.empty() || trunk.back() != td.root())
		add(R::TRUNK, std::nullopt, std::nullopt, "trunk is not a leaf-to-root path");
	for (std::size_t i = 1; i < trunk.size(); ++i)
		if (td.node(trunk[i - 1]).parent != trunk[i])
			add(R::TRUNK, trunk[i], std::nullopt, "trunk is not a path");
	return r;
}

// P1 uses strict dependence: dependents other than u itself.
inline ValidationReport validate_trunk_aligned(const TrunkTreeDecomposition &td, const QbfInstance &q, const DependencyPoset &d) {
	ValidationReport r;
	for (Variable u : q.prefix.variables()) {
		auto tops = detail::top_nodes(td, u);
		if (tops.size() != 1) {
			r.violations.push_back({Violation::Rule::P1P2, std::nullopt, u, "variable has no unique forget node"});
			continue;
		}
		const NodeId f = tops.front();
		const VarSet &fbag = td.bag(f);
		Alignment a{u, true, false};
		for (Variable v : d.strict_dependents(u))
			if (fbag.count(v)) {
				a.p1 = false;
				break;
			}
		if (td.on_trunk(f)) {
			const VarSet below = subtree_vars(td, f);
			const VarSet &deps = d.dep(u);
			a.p2 = std::includes(below.begin(), below.end(), deps.begin(), deps.end());
		}
		r.alignment.push_back(a);
		if (!a.p1 && !a.p2)
			r.violations.push_back({Violation::Rule::P1P2, f, u,
			                        "a dependent of the variable is in its forget bag " + detail::bag_string(fbag) +
			                            (td.on_trunk(f) ? " and not all of its dependencies occur below it"
			                                            : " and the forget node is off the trunk")});
	}
	return r;
}

namespace detail {

// Post-order over the tree; at trunk nodes the trunk child is visited last,
// other children by ascending id.
inline std::vector<NodeId> trunk_last_postorder(const TrunkTreeDecomposition &td) {
	std::vector<NodeId> order;
	order.reserve(td.size());
	struct Frame {
		NodeId node;
		std::vector<NodeId> kids;
		std::size_t next = 0;
	};
	auto kids_of = [&td](NodeId t) {
		std::vector<NodeId> kids = td.node(t).children;
		if (auto tc = td.trunk_child(t)) {
			kids.erase(std::remove(kids.begin(), kids.end(), *tc), kids.end());
			kids.push_back(*tc);
		}
		return kids;
	};
	std::vector<Frame> stack;
	stack.push_back({td.root(), kids_of(td.root())});
	while (!stack.empty()) {
		Frame &f = stack.back();
		if (f.next < f.kids.size()) {
			NodeId c = f.kids[f.next++];
			stack.push_back({c, kids_of(c)});
		} else {
			order.push_back(f.node);
			stack.pop_back();
		}
	}
	return order;
}

} // namespace detail

// Variables ordered by the position of their forget node in a fixed linear
// extension of the tree order (see detail::trunk_last_postorder).
inline std::vector<Variable> elimination_ordering(const TrunkTreeDecomposition &td) {
	const auto forget = forget_nodes(td);
	std::map<NodeId, Variable> by_node;
	for (const auto &[v, t] : forget)
		if (!by_node.emplace(t, v).second)
			throw precondition_error("variables " + to_string(by_node.at(t)) + " and " + to_string(v) +
			                         " share forget node " + std::to_string(t));
	std::vector<Variable> order;
	order.reserve(forget.size());
	for (NodeId t : detail::trunk_last_postorder(td))
		if (auto it = by_node.find(t); it != by_node.end())
			order.push_back(it->second);
	return order;
}

// Turns a rough rooted decomposition (T1/T2 assumed, trunk a leaf-to-root
// path) into a nice one by inserting introduce/forget chains and binary joins.
// The result still has to pass validate_trunk_aligned.
inline TrunkTreeDecomposition normalize(const RawDecomposition &rough) {
	const TrunkTreeDecomposition in = TrunkTreeDecomposition::from_raw(rough);
	for (Variable v : in.variables())
		if (detail::top_nodes(in, v).size() > 1)
			throw decomposition_error("T2 violated for variable " + to_string(v));

	RawDecomposition out;
	NodeId next_id = 1;
	auto make = [&](const VarSet &bag, std::vector<NodeId> children) {
		NodeId id = next_id++;
		out.bags[id] = bag;
		for (NodeId c : children)
			out.edges.emplace_back(id, c);
		return id;
	};
	// chain of single-variable steps from the bag of `top` to `target`
	auto transition = [&](NodeId top, const VarSet &target) {
		VarSet cur = out.bags[top];
		std::vector<Variable> drop, add;
		std::set_difference(cur.begin(), cur.end(), target.begin(), target.end(), std::back_inserter(drop));
		std::set_difference(target.begin(), target.end(), cur.begin(), cur.end(), std::back_inserter(add));
		for (Variable v : drop) {
			cur.erase(v);
			top = make(cur, {top});
		}
		for (Variable v : add) {
			cur.insert(v);
			top = make(cur, {top});
		}
		return top;
	};

	std::map<NodeId, NodeId> leaf_of;
	std::function<NodeId(NodeId)> build = [&](NodeId t) -> NodeId {
		const auto &n = in.node(t);
		if (n.children.empty()) {
			NodeId leaf = make({}, {});
			leaf_of[t] = leaf;
			return transition(leaf, n.bag);
		}
		std::vector<NodeId> kids = n.children;
		if (auto tc = in.trunk_child(t)) {
			kids.erase(std::remove(kids.begin(), kids.end(), *tc), kids.end());
			kids.push_back(*tc);
		}
		std::vector<NodeId> tops;
		for (NodeId c : kids)
			tops.push_back(transition(build(c), n.bag));
		NodeId acc = tops.front();
		for (std::size_t i = 1; i < tops.size(); ++i)
			acc = make(n.bag, {acc, tops[i]});
		return acc;
	};

	NodeId top = transition(build(in.root()), {});
	out.root = top;

	std::map<NodeId, NodeId> parent;
	for (auto [p, c] : out.edges)
		parent[c] = p;
	for (NodeId t = leaf_of.at(in.trunk().front());; t = parent.at(t)) {
		out.trunk.push_back(t);
		if (t == top)
			break;
	}
	return TrunkTreeDecomposition::from_raw(out);
}

// Minimum width over all elimination orderings that are linear extensions of
// the reverse of d (every variable goes after all of its strict dependents).
// Exact search over eliminated-variable subsets.
inline long min_dependency_elimination_width(const QbfInstance &q, const DependencyPoset &d, std::size_t limit = 12) {
	const std::vector<Variable> vars = q.prefix.variables();
	const std::size_t n = vars.size();
	if (n > limit)
		throw budget_error("instance has " + std::to_string(n) + " variables, limit is " + std::to_string(limit));
	if (n > 30)
		throw budget_error("exact elimination-width search supports at most 30 variables");
	if (n == 0)
		return 0;

	std::map<Variable, std::size_t> index;
	for (std::size_t i = 0; i < n; ++i)
		index[vars[i]] = i;
	const Graph g = primal_graph(q);
	std::vector<std::uint32_t> adj(n, 0), must_follow(n, 0);
	for (std::size_t i = 0; i < n; ++i) {
		for (Variable w : g.neighbors(vars[i]))
			adj[i] |= 1u << index.at(w);
		for (Variable w : d.strict_dependents(vars[i]))
			if (index.count(w))
				must_follow[i] |= 1u << index.at(w);
	}

	// Degree of v once the set S is eliminated: vertices outside S reachable
	// from v through S.
	auto degree = [&](std::uint32_t S, std::size_t v) {
		std::uint32_t seen = 1u << v, frontier = 1u << v, reach = 0;
		while (frontier) {
			std::uint32_t nxt = 0;
			for (std::size_t i = 0; i < n; ++i)
				if (frontier & (1u << i))
					nxt |= adj[i];
			nxt &= ~seen;
			seen |= nxt;
			reach |= nxt & ~S;
			frontier = nxt & S;
		}
		return static_cast<long>(std::popcount(reach));
	};

	const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
	constexpr long unknown = std::numeric_limits<long>::min();
	std::vector<long> memo(std::size_t{1} << n, unknown);
	std::function<long(std::uint32_t)> best = [&](std::uint32_t S) -> long {
		if (S == full)
			return 0;
		long &slot = memo[S];
		if (slot != unknown)
			return slot;
		long result = std::numeric_limits<long>::max();
		for (std::size_t v = 0; v < n; ++v) {
			if ((S & (1u << v)) || (must_follow[v] & ~S))
				continue;
			long w = degree(S, v);
			if (w >= result)
				continue;
			result = std::min(result, std::max(w, best(S | (1u << v))));
		}
		slot = result;
		return result;
	};
	const long w = best(0);
	if (w == std::numeric_limits<long>::max())
		throw precondition_error("dependency relation admits no elimination ordering (cyclic)");
	return w;
}

} // namespace qbtw
