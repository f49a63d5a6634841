#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "depposet.hpp"

namespace qbtw {

struct OracleBudget {
	std::size_t max_variables = 24;
};

namespace detail {

inline void check_budget(const QbfInstance &q, const OracleBudget &b) {
	if (b.max_variables == 0)
		throw precondition_error("oracle budget must be positive");
	if (q.prefix.size() > b.max_variables)
		throw budget_error("oracle budget exceeded: " + std::to_string(q.prefix.size()) + " variables, limit " +
		                   std::to_string(b.max_variables));
}

inline bool game_value(const Matrix &m, const std::vector<Variable> &order, const Prefix &p, std::size_t i) {
	if (m.empty())
		return true;
	if (m.has_empty_clause())
		return false;
	if (i == order.size())
		return ground_truth(m);
	const Variable v = order[i];
	if (!m.mentions(v))
		return game_value(m, order, p, i + 1);
	const bool exists = p.is_existential(v);
	for (bool val : {false, true}) {
		const bool r = game_value(restrict(m, Assignment{{v, val}}), order, p, i + 1);
		if (exists && r)
			return true;
		if (!exists && !r)
			return false;
	}
	return !exists;
}

} // namespace detail

// Game-tree evaluation: existential -> OR, universal -> AND, left to right.
inline bool evaluate(const QbfInstance &q, const OracleBudget &b = {}) {
	detail::check_budget(q, b);
	return detail::game_value(q.matrix, q.prefix.variables(), q.prefix, 0);
}

inline bool equisatisfiable(const QbfInstance &a, const QbfInstance &b, const OracleBudget &budget = {}) {
	detail::check_budget(a, budget);
	detail::check_budget(b, budget);
	return evaluate(a, budget) == evaluate(b, budget);
}

// Every reordering of the prefix that is a linear extension of d has the truth value of q.
inline bool verify_poset_property2(const QbfInstance &q, const DependencyPoset &d, const OracleBudget &b = {}) {
	constexpr std::size_t guard = 7;
	detail::check_budget(q, b);
	const std::vector<Variable> vars = q.prefix.variables();
	if (vars.size() > guard)
		throw budget_error("linear extension enumeration limited to " + std::to_string(guard) + " variables");
	const bool expected = evaluate(q, b);

	std::vector<Variable> order;
	std::vector<bool> used(vars.size(), false);
	std::function<bool()> rec = [&]() -> bool {
		if (order.size() == vars.size()) {
			std::vector<Block> blocks;
			for (Variable v : order)
				blocks.push_back(Block{q.prefix.quantifier(v), {v}});
			return evaluate(QbfInstance(Prefix(std::move(blocks)), q.matrix), b) == expected;
		}
		for (std::size_t i = 0; i < vars.size(); ++i) {
			if (used[i])
				continue;
			bool ready = true;
			for (std::size_t j = 0; j < vars.size() && ready; ++j)
				if (!used[j] && j != i && d.leq(vars[j], vars[i]))
					ready = false;
			if (!ready)
				continue;
			used[i] = true;
			order.push_back(vars[i]);
			const bool ok = rec();
			order.pop_back();
			used[i] = false;
			if (!ok)
				return false;
		}
		return true;
	};
	return rec();
}

// Seeded random prenex CNF: `alternations` contiguous blocks over 1..n_vars,
// clauses of clause_width distinct variables with random signs.
inline QbfInstance random_instance(std::uint64_t seed, std::size_t n_vars, std::size_t n_clauses, std::size_t clause_width,
                                   std::size_t alternations) {
	if (n_vars == 0 || clause_width == 0 || alternations == 0)
		throw precondition_error("random_instance: parameters must be positive");
	if (clause_width > n_vars)
		throw precondition_error("random_instance: clause width exceeds variable count");
	std::mt19937_64 rng(seed);
	// plain modulo keeps the stream identical across standard libraries
	auto draw = [&rng](std::uint64_t k) { return rng() % k; };

	const std::size_t nblocks = std::min(alternations, n_vars);
	std::vector<std::size_t> cuts;
	std::vector<std::size_t> pool;
	for (std::size_t i = 1; i < n_vars; ++i)
		pool.push_back(i);
	for (std::size_t k = 0; k + 1 < nblocks; ++k) {
		const std::size_t j = draw(pool.size());
		cuts.push_back(pool[j]);
		pool.erase(pool.begin() + static_cast<long>(j));
	}
	std::sort(cuts.begin(), cuts.end());
	cuts.push_back(n_vars);

	Quantifier q = draw(2) ? Quantifier::forall : Quantifier::exists;
	std::vector<Block> blocks;
	std::size_t start = 0;
	for (std::size_t end : cuts) {
		Block b{q, {}};
		for (std::size_t v = start; v < end; ++v)
			b.variables.emplace_back(static_cast<std::uint32_t>(v + 1));
		blocks.push_back(std::move(b));
		start = end;
		q = q == Quantifier::exists ? Quantifier::forall : Quantifier::exists;
	}

	std::vector<Clause> clauses;
	for (std::size_t c = 0; c < n_clauses; ++c) {
		std::vector<std::uint32_t> vs;
		for (std::uint32_t v = 1; v <= n_vars; ++v)
			vs.push_back(v);
		std::vector<Literal> lits;
		for (std::size_t k = 0; k < clause_width; ++k) {
			const std::size_t j = draw(vs.size());
			lits.emplace_back(Variable(vs[j]), draw(2) != 0);
			vs.erase(vs.begin() + static_cast<long>(j));
		}
		clauses.emplace_back(std::move(lits));
	}
	return QbfInstance(Prefix(std::move(blocks)), Matrix(std::move(clauses)));
}

} // namespace qbtw
