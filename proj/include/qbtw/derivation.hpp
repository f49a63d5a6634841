#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "decomposition.hpp"
#include "depposet.hpp"

namespace qbtw {

namespace detail {

template <typename T>
void make_canonical(std::vector<T> &v) {
	std::sort(v.begin(), v.end());
	v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Saturating arithmetic for strategy counting.
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
	if (a != 0 && b > UINT64_MAX / a)
		return UINT64_MAX;
	return a * b;
}

inline std::uint64_t sat_pow2(std::uint64_t e) { return e >= 64 ? UINT64_MAX : (std::uint64_t{1} << e); }

} // namespace detail

// Set of matrices sharing one prefix.
class MatrixSet {
public:
	MatrixSet() = default;
	explicit MatrixSet(std::vector<Matrix> ms) : ms_(std::move(ms)) { detail::make_canonical(ms_); }

	const std::vector<Matrix> &matrices() const { return ms_; }
	std::size_t size() const { return ms_.size(); }
	bool empty() const { return ms_.empty(); }
	bool contains(const Matrix &m) const { return std::binary_search(ms_.begin(), ms_.end(), m); }

	bool operator==(const MatrixSet &) const = default;
	auto operator<=>(const MatrixSet &o) const { return ms_ <=> o.ms_; }

private:
	std::vector<Matrix> ms_;
};

class Family {
public:
	Family() = default;
	explicit Family(std::vector<MatrixSet> sets) : sets_(std::move(sets)) { detail::make_canonical(sets_); }

	const std::vector<MatrixSet> &sets() const { return sets_; }
	std::size_t size() const { return sets_.size(); }
	bool empty() const { return sets_.empty(); }
	bool contains(const MatrixSet &s) const { return std::binary_search(sets_.begin(), sets_.end(), s); }

	std::size_t max_set_size() const {
		std::size_t m = 0;
		for (const auto &s : sets_)
			m = std::max(m, s.size());
		return m;
	}

	bool operator==(const Family &) const = default;

private:
	std::vector<MatrixSet> sets_;
};

enum class Rule { R1, R2, R3, R4 };

inline const char *to_string(Rule r) {
	switch (r) {
	case Rule::R1: return "R1";
	case Rule::R2: return "R2";
	case Rule::R3: return "R3";
	case Rule::R4: return "R4";
	}
	return "?";
}

struct EngineLimits {
	std::uint64_t max_family_size = std::uint64_t{1} << 16;
	std::uint64_t max_set_size = std::uint64_t{1} << 14;
	std::uint64_t max_strategies = std::uint64_t{1} << 20;

	void check() const {
		if (max_family_size == 0 || max_set_size == 0 || max_strategies == 0)
			throw precondition_error("engine limits must be positive");
	}
};

struct TraceEvent {
	std::size_t step = 0;
	Variable variable;
	Rule rule = Rule::R1;
	std::size_t family_before = 0;
	std::size_t family_after = 0;
	std::size_t max_set = 0;
	std::chrono::microseconds elapsed{0};

	bool operator==(const TraceEvent &) const = default;
};

struct DerivationState {
	Prefix prefix;
	Family family;
	std::size_t step_index = 0;
};

// Resolution over x: clauses mentioning x are replaced by all non-tautological resolvents.
inline Matrix resolve(const Matrix &m, Variable x) {
	std::vector<Clause> keep, pos, neg;
	for (const Clause &c : m.clauses()) {
		if (c.is_tautological())
			throw precondition_error("resolve: tautological clause " + c.encode());
		if (c.contains(Literal(x, true)))
			pos.push_back(c.without(x));
		else if (c.contains(Literal(x, false)))
			neg.push_back(c.without(x));
		else
			keep.push_back(c);
	}
	for (const Clause &a : pos)
		for (const Clause &b : neg) {
			std::vector<Literal> lits(a.literals().begin(), a.literals().end());
			lits.insert(lits.end(), b.literals().begin(), b.literals().end());
			Clause r(std::move(lits));
			if (!r.is_tautological())
				keep.push_back(std::move(r));
		}
	return Matrix(std::move(keep));
}

// Universal reduction: drops every literal of u.
inline Matrix reduce(const Matrix &m, Variable u) {
	std::vector<Clause> out;
	out.reserve(m.size());
	for (const Clause &c : m.clauses()) {
		if (c.is_tautological())
			throw precondition_error("reduce: tautological clause " + c.encode());
		out.push_back(c.without(u));
	}
	return Matrix(std::move(out));
}

// Strategy extension of `pi` up to v under prefix p.
//
// B enumerates assignments to the universal variables of dep(v) still in p, A the
// partial existential strategies on the existential ones (tau_x sees only
// B restricted to dep(x)). Each output set collects, for one choice of strategy
// per matrix, all restrictions psi|(beta, tau). Since the output set for a
// tuple is the union of per-matrix sets, those are deduplicated per matrix
// before the product is formed; the resulting family is the same.
inline Family strategy_extension(const MatrixSet &pi, Variable v, const Prefix &p, const DependencyPoset &d,
                                 const EngineLimits &lim = {}) {
	if (!p.contains(v))
		throw precondition_error("strategy extension up to " + to_string(v) + ": variable not in prefix");

	std::vector<Variable> universals, existentials;
	const VarSet &dep_v = d.dep(v);
	for (Variable w : dep_v)
		if (p.is_universal(w))
			universals.push_back(w); // ascending id
	for (Variable w : p.variables())
		if (dep_v.count(w) && p.is_existential(w))
			existentials.push_back(w); // prefix order

	struct Column {
		Variable var;
		std::vector<std::size_t> inputs; // positions in `universals`, ascending id
	};
	std::vector<Column> columns;
	std::uint64_t strategies = 1;
	for (Variable x : existentials) {
		Column col{x, {}};
		for (Variable w : d.dep(x)) {
			if (!p.contains(w))
				continue;
			if (!dep_v.count(w))
				throw internal_error("dep(" + to_string(x) + ") not contained in dep(" + to_string(v) + ")");
			if (p.is_universal(w))
				col.inputs.push_back(static_cast<std::size_t>(
				    std::find(universals.begin(), universals.end(), w) - universals.begin()));
		}
		strategies = detail::sat_mul(strategies, detail::sat_pow2(detail::sat_pow2(col.inputs.size())));
		columns.push_back(std::move(col));
	}
	const std::uint64_t plays = detail::sat_pow2(universals.size());
	if (detail::sat_mul(strategies, plays) > lim.max_strategies)
		throw resource_limit_error(limit_kind::strategies, "strategy extension up to " + to_string(v) + " needs " +
		                                                       (strategies == UINT64_MAX ? std::string("> 2^64") : std::to_string(strategies)) +
		                                                       " strategies x " + std::to_string(plays) + " universal plays");

	for (const Matrix &m : pi.matrices())
		if (m.has_tautology())
			throw precondition_error("strategy extension: tautological clause in input matrix");

	const std::size_t nu = universals.size();
	auto bit_of = [nu](std::uint64_t beta, std::size_t pos) { return ((beta >> (nu - 1 - pos)) & 1u) != 0; };

	// per matrix: every set pi^tau_psi, deduplicated
	std::vector<std::vector<MatrixSet>> options;
	options.reserve(pi.size());
	for (const Matrix &psi : pi.matrices()) {
		std::vector<MatrixSet> opts;
		std::vector<std::uint64_t> tables(columns.size(), 0); // tau_x as truth table bits
		for (std::uint64_t s = 0; s < strategies; ++s) {
			std::vector<Matrix> restricted;
			restricted.reserve(plays);
			for (std::uint64_t beta = 0; beta < plays; ++beta) {
				Assignment a;
				for (std::size_t i = 0; i < nu; ++i)
					a.set(universals[i], bit_of(beta, i));
				for (std::size_t c = 0; c < columns.size(); ++c) {
					std::uint64_t entry = 0;
					for (std::size_t pos : columns[c].inputs)
						entry = (entry << 1) | (bit_of(beta, pos) ? 1u : 0u);
					a.set(columns[c].var, ((tables[c] >> entry) & 1u) != 0);
				}
				restricted.push_back(restrict(psi, a));
			}
			opts.emplace_back(std::move(restricted));
			// binary-counter step over the tables, first existential most significant
			for (std::size_t c = columns.size(); c-- > 0;) {
				const std::uint64_t size = detail::sat_pow2(detail::sat_pow2(columns[c].inputs.size()));
				if (++tables[c] < size)
					break;
				tables[c] = 0;
			}
		}
		detail::make_canonical(opts);
		options.push_back(std::move(opts));
	}

	std::uint64_t combos = 1;
	for (const auto &o : options)
		combos = detail::sat_mul(combos, o.size());
	if (combos > lim.max_strategies)
		throw resource_limit_error(limit_kind::strategies, "strategy extension up to " + to_string(v) + " combines " +
		                                                       (combos == UINT64_MAX ? std::string("> 2^64") : std::to_string(combos)) +
		                                                       " strategy tuples");

	std::vector<MatrixSet> out;
	out.reserve(combos);
	std::vector<std::size_t> pick(options.size(), 0);
	for (std::uint64_t k = 0; k < combos; ++k) {
		std::vector<Matrix> merged;
		for (std::size_t j = 0; j < options.size(); ++j) {
			const auto &ms = options[j][pick[j]].matrices();
			merged.insert(merged.end(), ms.begin(), ms.end());
		}
		out.emplace_back(std::move(merged));
		for (std::size_t j = options.size(); j-- > 0;) {
			if (++pick[j] < options[j].size())
				break;
			pick[j] = 0;
		}
	}
	return Family(std::move(out));
}

// Every matrix psi of every set: N(v) in the primal graph of psi lies inside the forget bag of v.
inline bool check_neighborhood_invariant(const DerivationState &s, Variable v, const TrunkTreeDecomposition &td) {
	const VarSet &bag = td.bag(forget_node(td, v));
	for (const auto &pi : s.family.sets())
		for (const auto &psi : pi.matrices())
			for (Variable w : neighbors_in(psi, v))
				if (!bag.count(w))
					return false;
	return true;
}

// The still-quantified part of dep(v) has not been forgotten yet.
inline bool check_r4_assertion(const Prefix &p, Variable v, const DependencyPoset &d, const TrunkTreeDecomposition &td) {
	const VarSet &bag = td.bag(forget_node(td, v));
	for (Variable w : d.dep(v))
		if (p.contains(w) && !bag.count(w))
			return false;
	return true;
}

inline bool family_has_tautology(const Family &f) {
	for (const auto &pi : f.sets())
		for (const auto &psi : pi.matrices())
			if (psi.has_tautology())
				return true;
	return false;
}

inline bool family_mentions(const Family &f, Variable v) {
	for (const auto &pi : f.sets())
		for (const auto &psi : pi.matrices())
			if (psi.mentions(v))
				return true;
	return false;
}

struct StepResult {
	DerivationState state;
	TraceEvent event;
};

namespace detail {

inline Family map_matrices(const Family &f, const std::function<Matrix(const Matrix &)> &fn) {
	std::vector<MatrixSet> sets;
	sets.reserve(f.size());
	for (const auto &pi : f.sets()) {
		std::vector<Matrix> ms;
		ms.reserve(pi.size());
		for (const auto &psi : pi.matrices())
			ms.push_back(fn(psi));
		sets.emplace_back(std::move(ms));
	}
	return Family(std::move(sets));
}

} // namespace detail

// Which rule eliminates v from state s.
inline Rule select_rule(const Prefix &p, Variable v, const TrunkTreeDecomposition &td, const DependencyPoset &d) {
	if (!p.contains(v))
		return Rule::R1;
	const VarSet &bag = td.bag(forget_node(td, v));
	for (Variable w : d.strict_dependents(v))
		if (p.contains(w) && bag.count(w))
			return Rule::R4;
	return p.is_existential(v) ? Rule::R2 : Rule::R3;
}

inline StepResult derivation_step(const DerivationState &s, Variable v, const TrunkTreeDecomposition &td,
                                  const DependencyPoset &d, const EngineLimits &lim, bool checks = false) {
	const auto start = std::chrono::steady_clock::now();
	StepResult r;
	r.event.step = s.step_index + 1;
	r.event.variable = v;
	r.event.family_before = s.family.size();
	r.event.rule = select_rule(s.prefix, v, td, d);
	r.state.step_index = s.step_index + 1;

	switch (r.event.rule) {
	case Rule::R1:
		r.state.prefix = s.prefix;
		r.state.family = s.family;
		break;
	case Rule::R2:
		r.state.prefix = s.prefix.without(v);
		r.state.family = detail::map_matrices(s.family, [v](const Matrix &m) { return resolve(m, v); });
		break;
	case Rule::R3:
		r.state.prefix = s.prefix.without(v);
		r.state.family = detail::map_matrices(s.family, [v](const Matrix &m) { return reduce(m, v); });
		break;
	case Rule::R4: {
		if (checks && !check_r4_assertion(s.prefix, v, d, td))
			throw internal_error("step " + std::to_string(r.event.step) + ": quantified dependency of " + to_string(v) +
			                     " already forgotten before strategy extension");
		std::vector<MatrixSet> sets;
		for (const auto &pi : s.family.sets()) {
			Family ext = strategy_extension(pi, v, s.prefix, d, lim);
			sets.insert(sets.end(), ext.sets().begin(), ext.sets().end());
			// compact early so a runaway family fails before exhausting memory
			if (sets.size() > 4 * lim.max_family_size + 1024) {
				detail::make_canonical(sets);
				if (sets.size() > lim.max_family_size)
					throw resource_limit_error(limit_kind::family_size, "while extending up to " + to_string(v));
			}
		}
		r.state.family = Family(std::move(sets));
		VarSet removed;
		for (Variable w : d.dep(v))
			if (s.prefix.contains(w))
				removed.insert(w);
		r.state.prefix = s.prefix.without(removed);
		break;
	}
	}

	r.event.family_after = r.state.family.size();
	r.event.max_set = r.state.family.max_set_size();
	if (r.event.family_after > lim.max_family_size)
		throw resource_limit_error(limit_kind::family_size, std::to_string(r.event.family_after) + " sets after step " +
		                                                        std::to_string(r.event.step));
	if (r.event.max_set > lim.max_set_size)
		throw resource_limit_error(limit_kind::set_size, std::to_string(r.event.max_set) + " matrices in one set after step " +
		                                                     std::to_string(r.event.step));
	r.event.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
	return r;
}

struct DerivationOptions {
	EngineLimits limits;
	bool checks = false; // per-step invariant assertions
	// Called with the initial state (event == nullptr) and after every step.
	std::function<void(const DerivationState &, const TraceEvent *)> observer;
};

struct DerivationResult {
	bool verdict = false;
	std::vector<Variable> ordering;
	std::vector<TraceEvent> trace;
	Family final_family;
};

// Decides q along the elimination ordering of td. Throws validation_error if td
// is not a trunk-aligned nice decomposition of q with respect to d.
inline DerivationResult run_derivation(const QbfInstance &input, const TrunkTreeDecomposition &td, const DependencyPoset &d,
                                       const DerivationOptions &opt = {}) {
	opt.limits.check();
	const QbfInstance q(input.prefix, remove_tautologies(input.matrix));

	if (auto pr = validate_poset(d, q.prefix); !pr.ok())
		throw validation_error("invalid dependency poset:\n" + pr.to_string());
	if (auto nr = validate_nice(td, q); !nr.ok())
		throw validation_error("not a nice tree decomposition:\n" + nr.to_string());
	if (auto ar = validate_trunk_aligned(td, q, d); !ar.ok())
		throw validation_error("not trunk-aligned:\n" + ar.to_string());

	DerivationResult res;
	res.ordering = elimination_ordering(td);

	DerivationState state{q.prefix, Family({MatrixSet({q.matrix})}), 0};
	if (opt.observer)
		opt.observer(state, nullptr);

	for (std::size_t i = 0; i < res.ordering.size(); ++i) {
		const Variable v = res.ordering[i];
		if (opt.checks && !check_neighborhood_invariant(state, v, td))
			throw internal_error("step " + std::to_string(i + 1) + ": neighbourhood of " + to_string(v) +
			                     " escapes its forget bag");
		StepResult r = derivation_step(state, v, td, d, opt.limits, opt.checks);
		if (opt.checks) {
			if (family_has_tautology(r.state.family))
				throw internal_error("step " + std::to_string(i + 1) + ": tautological clause in family");
			for (std::size_t j = 0; j <= i; ++j)
				if (family_mentions(r.state.family, res.ordering[j]))
					throw internal_error("step " + std::to_string(i + 1) + ": eliminated variable " +
					                     to_string(res.ordering[j]) + " still occurs");
		}
		state = std::move(r.state);
		res.trace.push_back(r.event);
		if (opt.observer)
			opt.observer(state, &res.trace.back());
	}

	for (const auto &pi : state.family.sets()) {
		bool all_true = true;
		for (const auto &psi : pi.matrices()) {
			bool t;
			try {
				t = ground_truth(psi);
			} catch (const precondition_error &e) {
				throw internal_error(std::string("final matrix is not variable-free: ") + e.what());
			}
			if (!t) {
				all_true = false;
				break;
			}
		}
		if (all_true)
			res.verdict = true;
	}
	res.final_family = std::move(state.family);
	return res;
}

} // namespace qbtw
