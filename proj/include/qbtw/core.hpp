#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qbtw {

// 1-based variable index, numbered as in QDIMACS.
struct Variable {
	std::uint32_t id = 0;

	constexpr Variable() = default;
	constexpr explicit Variable(std::uint32_t i) : id(i) {}

	constexpr auto operator<=>(const Variable &) const = default;
};

using VarSet = std::set<Variable>;

inline std::string to_string(Variable v) { return std::to_string(v.id); }

class Literal {
public:
	constexpr Literal() = default;
	constexpr Literal(Variable v, bool positive) : code_(2 * v.id + (positive ? 1u : 0u)) {}

	static Literal from_dimacs(int lit) {
		if (lit == 0)
			throw precondition_error("literal 0 is not a variable");
		return Literal(Variable(static_cast<std::uint32_t>(std::abs(lit))), lit > 0);
	}

	constexpr Variable var() const { return Variable(code_ / 2); }
	constexpr bool positive() const { return (code_ & 1u) != 0; }
	constexpr std::uint32_t code() const { return code_; }
	constexpr Literal operator~() const { return Literal(var(), !positive()); }

	int to_dimacs() const {
		const int id = static_cast<int>(var().id);
		return positive() ? id : -id;
	}

	// Ordered by (variable id, polarity), negative before positive.
	constexpr auto operator<=>(const Literal &) const = default;

private:
	std::uint32_t code_ = 0;
};

// A set of literals kept sorted by (variable, polarity).
class Clause {
public:
	Clause() = default;

	explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
		std::sort(lits_.begin(), lits_.end());
		lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
	}

	static Clause from_dimacs(std::initializer_list<int> lits) {
		std::vector<Literal> v;
		v.reserve(lits.size());
		for (int l : lits)
			v.push_back(Literal::from_dimacs(l));
		return Clause(std::move(v));
	}

	std::span<const Literal> literals() const { return lits_; }
	std::size_t size() const { return lits_.size(); }
	bool empty() const { return lits_.empty(); }

	bool contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }
	bool mentions(Variable v) const { return contains(Literal(v, false)) || contains(Literal(v, true)); }

	bool is_tautological() const {
		// complementary literals are adjacent in the canonical order
		for (std::size_t i = 1; i < lits_.size(); ++i)
			if (lits_[i - 1].var() == lits_[i].var())
				return true;
		return false;
	}

	VarSet variables() const {
		VarSet out;
		for (Literal l : lits_)
			out.insert(l.var());
		return out;
	}

	Clause without(Variable v) const {
		Clause out;
		out.lits_.reserve(lits_.size());
		for (Literal l : lits_)
			if (l.var() != v)
				out.lits_.push_back(l);
		return out;
	}

	// DIMACS-style encoding, e.g. "-1 2 0".
	std::string encode() const {
		std::string s;
		for (Literal l : lits_) {
			s += std::to_string(l.to_dimacs());
			s += ' ';
		}
		s += '0';
		return s;
	}

	bool operator==(const Clause &) const = default;
	auto operator<=>(const Clause &) const = default;

private:
	std::vector<Literal> lits_;
};

inline bool is_tautological(const Clause &c) { return c.is_tautological(); }

// A CNF as a set of clauses in canonical order, with a precomputed content hash.
class Matrix {
public:
	Matrix() : hash_(compute_hash(clauses_)) {}

	explicit Matrix(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
		std::sort(clauses_.begin(), clauses_.end());
		clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
		hash_ = compute_hash(clauses_);
	}

	static Matrix from_dimacs(std::initializer_list<std::initializer_list<int>> clauses) {
		std::vector<Clause> v;
		for (auto c : clauses)
			v.push_back(Clause::from_dimacs(c));
		return Matrix(std::move(v));
	}

	std::span<const Clause> clauses() const { return clauses_; }
	std::size_t size() const { return clauses_.size(); }
	bool empty() const { return clauses_.empty(); }
	std::size_t hash() const { return hash_; }

	bool contains(const Clause &c) const { return std::binary_search(clauses_.begin(), clauses_.end(), c); }

	bool has_empty_clause() const {
		// the empty clause sorts first
		return !clauses_.empty() && clauses_.front().empty();
	}

	bool has_tautology() const {
		return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause &c) { return c.is_tautological(); });
	}

	bool mentions(Variable v) const {
		return std::any_of(clauses_.begin(), clauses_.end(), [v](const Clause &c) { return c.mentions(v); });
	}

	VarSet variables() const {
		VarSet out;
		for (const Clause &c : clauses_)
			for (Literal l : c.literals())
				out.insert(l.var());
		return out;
	}

	std::string encode() const {
		std::string s;
		for (const Clause &c : clauses_) {
			if (!s.empty())
				s += ' ';
			s += c.encode();
		}
		return s;
	}

	friend bool operator==(const Matrix &a, const Matrix &b) {
		return a.hash_ == b.hash_ && a.clauses_ == b.clauses_;
	}
	friend auto operator<=>(const Matrix &a, const Matrix &b) { return a.clauses_ <=> b.clauses_; }

private:
	static std::size_t compute_hash(const std::vector<Clause> &clauses) {
		std::uint64_t h = 1469598103934665603ull;
		auto mix = [&h](std::uint64_t x) {
			h ^= x;
			h *= 1099511628211ull;
		};
		for (const Clause &c : clauses) {
			for (Literal l : c.literals())
				mix(l.code());
			mix(0xffffffffull);
		}
		return static_cast<std::size_t>(h);
	}

	std::vector<Clause> clauses_;
	std::size_t hash_ = 0;
};

enum class Quantifier { exists, forall };

inline char to_char(Quantifier q) { return q == Quantifier::exists ? 'e' : 'a'; }

struct Block {
	Quantifier quantifier = Quantifier::exists;
	std::vector<Variable> variables;

	bool operator==(const Block &) const = default;
};

// Quantifier prefix with strictly alternating, pairwise disjoint blocks.
// In-block variable order is kept as given.
class Prefix {
public:
	Prefix() = default;

	explicit Prefix(std::vector<Block> blocks) {
		for (Block &b : blocks) {
			if (b.variables.empty())
				continue;
			if (!blocks_.empty() && blocks_.back().quantifier == b.quantifier)
				blocks_.back().variables.insert(blocks_.back().variables.end(), b.variables.begin(), b.variables.end());
			else
				blocks_.push_back(std::move(b));
		}
		for (std::size_t i = 0; i < blocks_.size(); ++i) {
			for (Variable v : blocks_[i].variables) {
				if (v.id == 0)
					throw precondition_error("variable ids start at 1");
				if (!block_of_.emplace(v, i).second)
					throw precondition_error("variable " + qbtw::to_string(v) + " quantified twice");
			}
		}
	}

	const std::vector<Block> &blocks() const { return blocks_; }
	std::size_t size() const { return block_of_.size(); }
	bool empty() const { return block_of_.empty(); }
	bool contains(Variable v) const { return block_of_.count(v) != 0; }

	std::size_t block_index(Variable v) const {
		auto it = block_of_.find(v);
		if (it == block_of_.end())
			throw precondition_error("variable " + qbtw::to_string(v) + " not in prefix");
		return it->second;
	}

	Quantifier quantifier(Variable v) const { return blocks_[block_index(v)].quantifier; }
	bool is_existential(Variable v) const { return contains(v) && quantifier(v) == Quantifier::exists; }
	bool is_universal(Variable v) const { return contains(v) && quantifier(v) == Quantifier::forall; }

	// All variables in prefix order.
	std::vector<Variable> variables() const {
		std::vector<Variable> out;
		for (const Block &b : blocks_)
			out.insert(out.end(), b.variables.begin(), b.variables.end());
		return out;
	}

	VarSet variable_set() const {
		VarSet out;
		for (const auto &[v, _] : block_of_)
			out.insert(v);
		return out;
	}

	std::vector<Variable> of_kind(Quantifier q) const {
		std::vector<Variable> out;
		for (const Block &b : blocks_)
			if (b.quantifier == q)
				out.insert(out.end(), b.variables.begin(), b.variables.end());
		return out;
	}

	Prefix without(const VarSet &removed) const {
		std::vector<Block> blocks;
		for (const Block &b : blocks_) {
			Block nb{b.quantifier, {}};
			for (Variable v : b.variables)
				if (!removed.count(v))
					nb.variables.push_back(v);
			blocks.push_back(std::move(nb));
		}
		return Prefix(std::move(blocks));
	}

	Prefix without(Variable v) const { return without(VarSet{v}); }

	std::string to_string() const {
		std::string s;
		for (const Block &b : blocks_) {
			s += b.quantifier == Quantifier::exists ? "E" : "A";
			for (Variable v : b.variables)
				s += " " + qbtw::to_string(v);
			s += "; ";
		}
		return s;
	}

	bool operator==(const Prefix &o) const { return blocks_ == o.blocks_; }

private:
	std::vector<Block> blocks_;
	std::map<Variable, std::size_t> block_of_;
};

struct QbfInstance {
	Prefix prefix;
	Matrix matrix;

	QbfInstance() = default;

	QbfInstance(Prefix p, Matrix m) : prefix(std::move(p)), matrix(std::move(m)) {
		for (Variable v : matrix.variables())
			if (!prefix.contains(v))
				throw precondition_error("matrix variable " + to_string(v) + " is not quantified");
	}

	bool operator==(const QbfInstance &) const = default;
};

// Partial map from variables to {0,1}.
class Assignment {
public:
	Assignment() = default;
	Assignment(std::initializer_list<std::pair<const Variable, bool>> init) : values_(init) {}

	void set(Variable v, bool value) { values_[v] = value; }

	std::optional<bool> value(Variable v) const {
		auto it = values_.find(v);
		if (it == values_.end())
			return std::nullopt;
		return it->second;
	}

	bool contains(Variable v) const { return values_.count(v) != 0; }
	std::size_t size() const { return values_.size(); }

	VarSet domain() const {
		VarSet out;
		for (const auto &[v, _] : values_)
			out.insert(v);
		return out;
	}

	Assignment restricted_to(const VarSet &vars) const {
		Assignment out;
		for (const auto &[v, b] : values_)
			if (vars.count(v))
				out.values_.emplace(v, b);
		return out;
	}

	// Union of assignments; values of `other` win on overlap.
	Assignment merged(const Assignment &other) const {
		Assignment out = *this;
		for (const auto &[v, b] : other.values_)
			out.values_[v] = b;
		return out;
	}

	const std::map<Variable, bool> &values() const { return values_; }

	bool operator==(const Assignment &) const = default;

private:
	std::map<Variable, bool> values_;
};

inline Matrix remove_tautologies(const Matrix &m) {
	std::vector<Clause> kept;
	for (const Clause &c : m.clauses())
		if (!c.is_tautological())
			kept.push_back(c);
	return Matrix(std::move(kept));
}

// Applies `a`: satisfied clauses vanish, falsified literals are dropped.
inline Matrix restrict(const Matrix &m, const Assignment &a) {
	std::vector<Clause> out;
	out.reserve(m.size());
	for (const Clause &c : m.clauses()) {
		bool satisfied = false;
		std::vector<Literal> rest;
		for (Literal l : c.literals()) {
			auto val = a.value(l.var());
			if (!val) {
				rest.push_back(l);
			} else if (*val == l.positive()) {
				satisfied = true;
				break;
			}
		}
		if (!satisfied)
			out.emplace_back(std::move(rest));
	}
	return Matrix(std::move(out));
}

// Truth of a variable-free matrix.
inline bool ground_truth(const Matrix &m) {
	for (const Clause &c : m.clauses())
		if (!c.empty())
			throw precondition_error("ground_truth on a matrix with variables: " + c.encode());
	return m.empty();
}

class Graph {
public:
	void add_vertex(Variable v) { adj_[v]; }

	void add_edge(Variable u, Variable v) {
		if (u == v)
			return;
		adj_[u].insert(v);
		adj_[v].insert(u);
	}

	bool has_vertex(Variable v) const { return adj_.count(v) != 0; }

	bool has_edge(Variable u, Variable v) const {
		auto it = adj_.find(u);
		return it != adj_.end() && it->second.count(v) != 0;
	}

	const VarSet &neighbors(Variable v) const {
		static const VarSet none;
		auto it = adj_.find(v);
		return it == adj_.end() ? none : it->second;
	}

	VarSet vertices() const {
		VarSet out;
		for (const auto &[v, _] : adj_)
			out.insert(v);
		return out;
	}

	std::size_t vertex_count() const { return adj_.size(); }

	std::size_t edge_count() const {
		std::size_t twice = 0;
		for (const auto &[_, n] : adj_)
			twice += n.size();
		return twice / 2;
	}

	std::vector<std::pair<Variable, Variable>> edges() const {
		std::vector<std::pair<Variable, Variable>> out;
		for (const auto &[u, n] : adj_)
			for (Variable v : n)
				if (u < v)
					out.emplace_back(u, v);
		return out;
	}

	bool operator==(const Graph &) const = default;

private:
	std::map<Variable, VarSet> adj_;
};

inline Graph primal_graph(const Matrix &m) {
	Graph g;
	for (const Clause &c : m.clauses()) {
		auto lits = c.literals();
		for (std::size_t i = 0; i < lits.size(); ++i) {
			g.add_vertex(lits[i].var());
			for (std::size_t j = i + 1; j < lits.size(); ++j)
				g.add_edge(lits[i].var(), lits[j].var());
		}
	}
	return g;
}

inline Graph primal_graph(const QbfInstance &q) {
	Graph g = primal_graph(q.matrix);
	for (Variable v : q.prefix.variables())
		g.add_vertex(v);
	return g;
}

// Open neighbourhood of v in the primal graph of m.
inline VarSet neighbors_in(const Matrix &m, Variable v) {
	VarSet out;
	for (const Clause &c : m.clauses())
		if (c.mentions(v))
			for (Literal l : c.literals())
				if (l.var() != v)
					out.insert(l.var());
	return out;
}

} // namespace qbtw

template <>
struct std::hash<qbtw::Matrix> {
	std::size_t operator()(const qbtw::Matrix &m) const noexcept { return m.hash(); }
};
