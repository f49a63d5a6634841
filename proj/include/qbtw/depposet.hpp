#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace qbtw {

// Reflexive dependence relation stored as predecessor sets: dep(v) = { w | w <= v }.
class DependencyPoset {
public:
	DependencyPoset() = default;

	// Takes the relation verbatim; no closure, no checks. Use validate_poset().
	static DependencyPoset from_relation(VarSet universe, std::map<Variable, VarSet> dep) {
		DependencyPoset d;
		d.universe_ = std::move(universe);
		for (Variable v : d.universe_)
			d.dep_[v];
		for (auto &[v, preds] : dep) {
			if (!d.universe_.count(v))
				throw precondition_error("variable " + to_string(v) + " outside poset universe");
			d.dep_[v] = std::move(preds);
		}
		return d;
	}

	// u <= v iff u == v or u sits in a strictly earlier block.
	static DependencyPoset trivial(const Prefix &p) {
		DependencyPoset d;
		VarSet earlier;
		for (const Block &b : p.blocks()) {
			for (Variable v : b.variables) {
				VarSet s = earlier;
				s.insert(v);
				d.dep_.emplace(v, std::move(s));
				d.universe_.insert(v);
			}
			earlier.insert(b.variables.begin(), b.variables.end());
		}
		return d;
	}

	// Reflexive-transitive closure of generator pairs (u, v) meaning u <= v.
	static DependencyPoset from_pairs(VarSet universe, const std::vector<std::pair<Variable, Variable>> &pairs) {
		std::map<Variable, VarSet> direct;
		for (Variable v : universe)
			direct[v].insert(v);
		for (auto [u, v] : pairs) {
			if (!universe.count(u) || !universe.count(v))
				throw precondition_error("dependency pair (" + to_string(u) + ", " + to_string(v) + ") outside universe");
			direct[v].insert(u);
		}
		// fixpoint closure; universes are small
		bool changed = true;
		while (changed) {
			changed = false;
			for (auto &[v, preds] : direct) {
				VarSet add;
				for (Variable u : preds)
					for (Variable w : direct[u])
						if (!preds.count(w))
							add.insert(w);
				if (!add.empty()) {
					preds.insert(add.begin(), add.end());
					changed = true;
				}
			}
		}
		return from_relation(std::move(universe), std::move(direct));
	}

	const VarSet &universe() const { return universe_; }
	bool contains(Variable v) const { return universe_.count(v) != 0; }

	const VarSet &dep(Variable v) const {
		auto it = dep_.find(v);
		if (it == dep_.end())
			throw precondition_error("unknown variable " + to_string(v) + " in dependency poset");
		return it->second;
	}

	VarSet dep_strict(Variable v) const {
		VarSet s = dep(v);
		s.erase(v);
		return s;
	}

	bool leq(Variable u, Variable v) const { return dep(v).count(u) != 0; }

	// { w | v <= w }
	VarSet dependents(Variable v) const {
		VarSet out;
		for (const auto &[w, preds] : dep_)
			if (preds.count(v))
				out.insert(w);
		return out;
	}

	VarSet strict_dependents(Variable v) const {
		VarSet out = dependents(v);
		out.erase(v);
		return out;
	}

	// All pairs (u, v) with u <= v and u != v, sorted.
	std::vector<std::pair<Variable, Variable>> strict_pairs() const {
		std::vector<std::pair<Variable, Variable>> out;
		for (const auto &[v, preds] : dep_)
			for (Variable u : preds)
				if (u != v)
					out.emplace_back(u, v);
		std::sort(out.begin(), out.end());
		return out;
	}

	bool operator==(const DependencyPoset &) const = default;

private:
	VarSet universe_;
	std::map<Variable, VarSet> dep_;
};

struct PosetViolation {
	enum class Kind { universe, reflexivity, antisymmetry, transitivity, prefix_consistency };
	Kind kind;
	Variable u;
	Variable v;
	std::string message;
};

inline const char *to_string(PosetViolation::Kind k) {
	switch (k) {
	case PosetViolation::Kind::universe: return "universe";
	case PosetViolation::Kind::reflexivity: return "reflexivity";
	case PosetViolation::Kind::antisymmetry: return "antisymmetry";
	case PosetViolation::Kind::transitivity: return "transitivity";
	case PosetViolation::Kind::prefix_consistency: return "prefix-consistency";
	}
	return "?";
}

struct PosetReport {
	std::vector<PosetViolation> violations;

	bool ok() const { return violations.empty(); }

	std::string to_string() const {
		std::string s;
		for (const auto &v : violations)
			s += std::string(qbtw::to_string(v.kind)) + ": " + v.message + "\n";
		return s;
	}
};

inline PosetReport validate_poset(const DependencyPoset &d, const Prefix &p) {
	using K = PosetViolation::Kind;
	PosetReport r;
	auto add = [&r](K k, Variable u, Variable v, std::string msg) { r.violations.push_back({k, u, v, std::move(msg)}); };
	auto pair_str = [](Variable u, Variable v) { return to_string(u) + " <= " + to_string(v); };

	const VarSet prefix_vars = p.variable_set();
	for (Variable v : prefix_vars)
		if (!d.contains(v))
			add(K::universe, v, v, "prefix variable " + to_string(v) + " missing from poset");
	for (Variable v : d.universe())
		if (!prefix_vars.count(v))
			add(K::universe, v, v, "poset variable " + to_string(v) + " not in prefix");

	std::map<Variable, std::size_t> position;
	{
		std::size_t i = 0;
		for (Variable v : p.variables())
			position[v] = i++;
	}

	for (Variable v : d.universe()) {
		const VarSet &preds = d.dep(v);
		if (!preds.count(v))
			add(K::reflexivity, v, v, "missing " + pair_str(v, v));
		for (Variable u : preds) {
			if (u == v)
				continue;
			if (!d.contains(u)) {
				add(K::universe, u, v, "relation mentions unknown variable " + to_string(u));
				continue;
			}
			if (u < v && d.leq(v, u))
				add(K::antisymmetry, u, v, pair_str(u, v) + " and " + pair_str(v, u));
			for (Variable w : d.dep(u))
				if (!preds.count(w))
					add(K::transitivity, w, v, pair_str(w, u) + " and " + pair_str(u, v) + " but not " + pair_str(w, v));
			auto pu = position.find(u), pv = position.find(v);
			if (pu != position.end() && pv != position.end() && pu->second >= pv->second)
				add(K::prefix_consistency, u, v, pair_str(u, v) + " but " + to_string(u) + " is not quantified left of " + to_string(v));
		}
	}
	return r;
}

} // namespace qbtw
