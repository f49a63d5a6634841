#pragma once

#include <algorithm>
#include <vector>

#include "core.hpp"
#include "decomposition.hpp"

namespace qbtw {

namespace detail {

inline void require_parity_n(long n) {
	if (n < 2)
		throw precondition_error("QParity needs n >= 2, got " + std::to_string(n));
}

} // namespace detail

// x_i -> i, u -> n+1, z_i -> n+1+i
inline QbfInstance qparity(long n) {
	detail::require_parity_n(n);
	const auto N = static_cast<std::uint32_t>(n);
	auto x = [](std::uint32_t i) { return static_cast<int>(i); };
	const int u = static_cast<int>(N + 1);
	auto z = [N](std::uint32_t i) { return static_cast<int>(N + 1 + i); };

	std::vector<Clause> cs;
	auto eq = [&cs](int a, int b) {
		cs.push_back(Clause::from_dimacs({a, -b}));
		cs.push_back(Clause::from_dimacs({-a, b}));
	};
	eq(x(1), z(1));
	eq(u, z(N));
	for (std::uint32_t i = 1; i < N; ++i) {
		const int a = z(i + 1), b = x(i + 1), c = z(i);
		cs.push_back(Clause::from_dimacs({-a, b, c}));
		cs.push_back(Clause::from_dimacs({a, -b, c}));
		cs.push_back(Clause::from_dimacs({a, b, -c}));
		cs.push_back(Clause::from_dimacs({-a, -b, -c}));
	}

	Block xs{Quantifier::exists, {}}, us{Quantifier::forall, {Variable(N + 1)}}, zs{Quantifier::exists, {}};
	for (std::uint32_t i = 1; i <= N; ++i)
		xs.variables.emplace_back(i);
	for (std::uint32_t i = N; i >= 1; --i)
		zs.variables.emplace_back(N + 1 + i);
	return QbfInstance(Prefix({xs, us, zs}), Matrix(std::move(cs)));
}

// Width-2 path decomposition, trunk = whole path.
inline TrunkTreeDecomposition qparity_td(long n) {
	detail::require_parity_n(n);
	const auto N = static_cast<std::uint32_t>(n);
	auto x = [](std::uint32_t i) { return Variable(i); };
	const Variable u(N + 1);
	auto z = [N](std::uint32_t i) { return Variable(N + 1 + i); };

	std::vector<VarSet> bags{{}, {x(1)}, {x(1), z(1)}, {z(1)}};
	for (std::uint32_t i = 2; i <= N; ++i) {
		bags.push_back({z(i - 1), x(i)});
		bags.push_back({z(i - 1), x(i), z(i)});
		bags.push_back({x(i), z(i)});
		if (i < N)
			bags.push_back({z(i)});
	}
	bags.push_back({x(N), z(N), u});
	bags.push_back({z(N), u});
	bags.push_back({u});
	bags.push_back({});
	return TrunkTreeDecomposition::path(bags);
}

// Introduce everything in prefix order, then forget in reverse prefix order
// (descending id inside a block).
inline TrunkTreeDecomposition single_bag_td(const QbfInstance &q) {
	const std::vector<Variable> vars = q.prefix.variables();
	if (vars.empty())
		throw precondition_error("single_bag_td: instance has no variables");
	std::vector<VarSet> bags{{}};
	VarSet cur;
	for (Variable v : vars) {
		cur.insert(v);
		bags.push_back(cur);
	}
	const auto &blocks = q.prefix.blocks();
	for (auto b = blocks.rbegin(); b != blocks.rend(); ++b) {
		std::vector<Variable> vs = b->variables;
		std::sort(vs.rbegin(), vs.rend());
		for (Variable v : vs) {
			cur.erase(v);
			bags.push_back(cur);
		}
	}
	return TrunkTreeDecomposition::path(bags);
}

} // namespace qbtw
