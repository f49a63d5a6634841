#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "decomposition.hpp"
#include "depposet.hpp"
#include "derivation.hpp"

namespace qbtw {

namespace detail {

struct Line {
	std::size_t number;
	std::vector<std::string_view> tokens;
};

// Non-empty lines split on blanks; `c` lines dropped.
inline std::vector<Line> tokenize(std::string_view text) {
	std::vector<Line> out;
	std::size_t number = 0;
	while (!text.empty()) {
		++number;
		std::size_t eol = text.find('\n');
		std::string_view line = text.substr(0, eol);
		text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
		Line l{number, {}};
		std::size_t i = 0;
		while (i < line.size()) {
			while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
				++i;
			std::size_t j = i;
			while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
				++j;
			if (j > i)
				l.tokens.push_back(line.substr(i, j - i));
			i = j;
		}
		if (l.tokens.empty() || l.tokens[0] == "c")
			continue;
		out.push_back(std::move(l));
	}
	return out;
}

inline long long to_int(const Line &l, std::string_view tok) {
	long long v = 0;
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (ec != std::errc{} || ptr != tok.data() + tok.size())
		throw parse_error(l.number, "expected an integer, got '" + std::string(tok) + "'");
	return v;
}

inline std::uint32_t to_var(const Line &l, std::string_view tok, long long max_var) {
	const long long v = to_int(l, tok);
	if (v < 1 || v > max_var)
		throw parse_error(l.number, "variable " + std::string(tok) + " out of range 1.." + std::to_string(max_var));
	return static_cast<std::uint32_t>(v);
}

inline std::uint32_t to_count(const Line &l, std::string_view tok, const char *what) {
	const long long v = to_int(l, tok);
	if (v < 0 || v > INT32_MAX)
		throw parse_error(l.number, std::string("bad ") + what + " '" + std::string(tok) + "'");
	return static_cast<std::uint32_t>(v);
}

inline std::uint32_t max_id(const VarSet &vs) { return vs.empty() ? 0 : vs.rbegin()->id; }

} // namespace detail

inline QbfInstance parse_qdimacs(std::string_view text) {
	const auto lines = detail::tokenize(text);
	if (lines.empty())
		throw parse_error(1, "missing header 'p cnf <nvars> <nclauses>'");
	const auto &h = lines.front();
	if (h.tokens.size() != 4 || h.tokens[0] != "p" || h.tokens[1] != "cnf")
		throw parse_error(h.number, "malformed header, expected 'p cnf <nvars> <nclauses>'");
	const long long nvars = detail::to_count(h, h.tokens[2], "variable count");
	const std::uint32_t nclauses = detail::to_count(h, h.tokens[3], "clause count");

	std::vector<Block> blocks;
	VarSet bound;
	std::vector<Clause> clauses;
	std::size_t clause_lines = 0;
	std::size_t last = h.number;
	for (std::size_t k = 1; k < lines.size(); ++k) {
		const detail::Line &l = lines[k];
		last = l.number;
		if (l.tokens.back() != "0")
			throw parse_error(l.number, "missing terminating 0");
		const auto head = l.tokens[0];
		if (head == "e" || head == "a") {
			if (clause_lines > 0)
				throw parse_error(l.number, "quantifier line after clauses");
			Block b{head == "e" ? Quantifier::exists : Quantifier::forall, {}};
			for (std::size_t i = 1; i + 1 < l.tokens.size(); ++i) {
				const Variable v(detail::to_var(l, l.tokens[i], nvars));
				if (!bound.insert(v).second)
					throw parse_error(l.number, "variable " + to_string(v) + " quantified twice");
				b.variables.push_back(v);
			}
			blocks.push_back(std::move(b));
			continue;
		}
		if (head == "p")
			throw parse_error(l.number, "duplicate header");
		++clause_lines;
		if (clause_lines > nclauses)
			throw parse_error(l.number, "more clauses than declared (" + std::to_string(nclauses) + ")");
		std::vector<Literal> lits;
		for (std::size_t i = 0; i + 1 < l.tokens.size(); ++i) {
			const long long lit = detail::to_int(l, l.tokens[i]);
			if (lit == 0)
				throw parse_error(l.number, "0 inside clause");
			detail::to_var(l, l.tokens[i][0] == '-' ? l.tokens[i].substr(1) : l.tokens[i], nvars);
			lits.push_back(Literal::from_dimacs(static_cast<int>(lit)));
		}
		clauses.emplace_back(std::move(lits));
	}
	if (clause_lines != nclauses)
		throw parse_error(last, "expected " + std::to_string(nclauses) + " clauses, found " + std::to_string(clause_lines));

	Matrix m(std::move(clauses));
	Block free{Quantifier::exists, {}};
	for (Variable v : m.variables())
		if (!bound.count(v))
			free.variables.push_back(v);
	if (!free.variables.empty())
		blocks.insert(blocks.begin(), std::move(free));
	return QbfInstance(Prefix(std::move(blocks)), std::move(m));
}

inline std::string write_qdimacs(const QbfInstance &q) {
	std::ostringstream os;
	std::uint32_t n = detail::max_id(q.prefix.variable_set());
	n = std::max(n, detail::max_id(q.matrix.variables()));
	os << "p cnf " << n << ' ' << q.matrix.size() << '\n';
	for (const Block &b : q.prefix.blocks()) {
		os << to_char(b.quantifier);
		for (Variable v : b.variables)
			os << ' ' << v.id;
		os << " 0\n";
	}
	for (const Clause &c : q.matrix.clauses())
		os << c.encode() << '\n';
	return os.str();
}

inline TrunkTreeDecomposition parse_btd(std::string_view text) {
	const auto lines = detail::tokenize(text);
	if (lines.empty())
		throw parse_error(1, "missing header 's btd <num_nodes> <max_bag_size> <num_vars>'");
	const auto &h = lines.front();
	if (h.tokens.size() != 5 || h.tokens[0] != "s" || h.tokens[1] != "btd")
		throw parse_error(h.number, "malformed header, expected 's btd <num_nodes> <max_bag_size> <num_vars>'");
	const std::uint32_t num_nodes = detail::to_count(h, h.tokens[2], "node count");
	const std::uint32_t max_bag = detail::to_count(h, h.tokens[3], "bag size");
	const long long num_vars = detail::to_count(h, h.tokens[4], "variable count");

	RawDecomposition raw;
	std::size_t root_line = 0, trunk_line = 0, largest = 0, last = h.number;
	bool any_bag = false;
	for (std::size_t k = 1; k < lines.size(); ++k) {
		const detail::Line &l = lines[k];
		last = l.number;
		const auto head = l.tokens[0];
		auto node = [&](std::string_view tok) {
			const long long id = detail::to_int(l, tok);
			if (id < 1 || id > num_nodes)
				throw parse_error(l.number, "node id " + std::string(tok) + " out of range 1.." + std::to_string(num_nodes));
			return static_cast<NodeId>(id);
		};
		if (head == "b") {
			if (l.tokens.size() < 2)
				throw parse_error(l.number, "bag line without node id");
			const NodeId id = node(l.tokens[1]);
			if (raw.bags.count(id))
				throw parse_error(l.number, "duplicate node " + std::to_string(id));
			VarSet bag;
			for (std::size_t i = 2; i < l.tokens.size(); ++i)
				if (!bag.insert(Variable(detail::to_var(l, l.tokens[i], num_vars))).second)
					throw parse_error(l.number, "variable " + std::string(l.tokens[i]) + " repeated in bag");
			largest = std::max(largest, bag.size());
			any_bag = true;
			if (bag.size() > max_bag)
				throw parse_error(l.number, "header mismatch: bag of size " + std::to_string(bag.size()) +
				                                " exceeds declared maximum " + std::to_string(max_bag));
			raw.bags[id] = std::move(bag);
		} else if (head == "e") {
			if (l.tokens.size() != 3)
				throw parse_error(l.number, "edge line needs 'e <parent> <child>'");
			raw.edges.emplace_back(node(l.tokens[1]), node(l.tokens[2]));
		} else if (head == "r") {
			if (l.tokens.size() != 2)
				throw parse_error(l.number, "root line needs 'r <node>'");
			if (root_line)
				throw parse_error(l.number, "multiple roots (first on line " + std::to_string(root_line) + ")");
			raw.root = node(l.tokens[1]);
			root_line = l.number;
		} else if (head == "t") {
			if (trunk_line)
				throw parse_error(l.number, "duplicate trunk line");
			if (l.tokens.size() < 2)
				throw parse_error(l.number, "empty trunk");
			for (std::size_t i = 1; i < l.tokens.size(); ++i)
				raw.trunk.push_back(node(l.tokens[i]));
			trunk_line = l.number;
		} else {
			throw parse_error(l.number, "unknown line type '" + std::string(head) + "'");
		}
	}
	if (raw.bags.size() != num_nodes)
		throw parse_error(last, "header mismatch: declared " + std::to_string(num_nodes) + " nodes, found " +
		                            std::to_string(raw.bags.size()));
	if (any_bag && largest != max_bag)
		throw parse_error(h.number, "header mismatch: declared max bag size " + std::to_string(max_bag) + ", largest bag has " +
		                                std::to_string(largest));
	if (!root_line)
		throw parse_error(last, "missing root line 'r <node>'");
	if (!trunk_line)
		throw parse_error(last, "missing trunk line 't <leaf> ... <root>'");
	try {
		return TrunkTreeDecomposition::from_raw(raw);
	} catch (const decomposition_error &e) {
		const std::string msg = e.what();
		throw parse_error(msg.find("trunk") != std::string::npos ? trunk_line : root_line, msg);
	}
}

inline std::string write_btd(const TrunkTreeDecomposition &td) {
	const RawDecomposition raw = td.to_raw();
	std::size_t largest = 0;
	std::uint32_t nv = 0;
	for (const auto &[id, bag] : raw.bags) {
		largest = std::max(largest, bag.size());
		nv = std::max(nv, detail::max_id(bag));
	}
	std::ostringstream os;
	os << "s btd " << raw.bags.size() << ' ' << largest << ' ' << nv << '\n';
	for (const auto &[id, bag] : raw.bags) {
		os << "b " << id;
		for (Variable v : bag)
			os << ' ' << v.id;
		os << '\n';
	}
	auto edges = raw.edges;
	std::sort(edges.begin(), edges.end());
	for (auto [p, c] : edges)
		os << "e " << p << ' ' << c << '\n';
	if (raw.root)
		os << "r " << *raw.root << '\n';
	os << 't';
	for (NodeId t : raw.trunk)
		os << ' ' << t;
	os << '\n';
	return os.str();
}

// Generator pairs `d u v` (u <= v), closed reflexively and transitively over the
// prefix variables. Axioms are checked separately by validate_poset.
inline DependencyPoset parse_poset(std::string_view text, const Prefix &p) {
	const auto lines = detail::tokenize(text);
	if (lines.empty())
		throw parse_error(1, "missing header 'p dep <nvars>'");
	const auto &h = lines.front();
	if (h.tokens.size() != 3 || h.tokens[0] != "p" || h.tokens[1] != "dep")
		throw parse_error(h.number, "malformed header, expected 'p dep <nvars>'");
	const long long nvars = detail::to_count(h, h.tokens[2], "variable count");
	std::vector<std::pair<Variable, Variable>> pairs;
	for (std::size_t k = 1; k < lines.size(); ++k) {
		const detail::Line &l = lines[k];
		if (l.tokens[0] != "d" || l.tokens.size() != 3)
			throw parse_error(l.number, "expected 'd <u> <v>'");
		const Variable u(detail::to_var(l, l.tokens[1], nvars)), v(detail::to_var(l, l.tokens[2], nvars));
		for (Variable w : {u, v})
			if (!p.contains(w))
				throw parse_error(l.number, "variable " + to_string(w) + " is not quantified in the instance");
		pairs.emplace_back(u, v);
	}
	return DependencyPoset::from_pairs(p.variable_set(), pairs);
}

inline std::string write_poset(const DependencyPoset &d) {
	std::ostringstream os;
	os << "p dep " << detail::max_id(d.universe()) << '\n';
	for (auto [u, v] : d.strict_pairs())
		os << "d " << u.id << ' ' << v.id << '\n';
	return os.str();
}

inline nlohmann::ordered_json to_json(const TraceEvent &e) {
	nlohmann::ordered_json j;
	j["step"] = e.step;
	j["variable"] = e.variable.id;
	j["rule"] = to_string(e.rule);
	j["family_before"] = e.family_before;
	j["family_after"] = e.family_after;
	j["max_set"] = e.max_set;
	j["micros"] = e.elapsed.count();
	return j;
}

inline void write_trace(const std::vector<TraceEvent> &events, std::ostream &sink) {
	for (const auto &e : events)
		sink << to_json(e).dump() << '\n';
}

inline std::vector<TraceEvent> read_trace(std::string_view text) {
	std::vector<TraceEvent> out;
	std::size_t number = 0;
	std::istringstream is{std::string(text)};
	std::string line;
	while (std::getline(is, line)) {
		++number;
		if (line.empty())
			continue;
		try {
			const auto j = nlohmann::json::parse(line);
			TraceEvent e;
			e.step = j.at("step").get<std::size_t>();
			e.variable = Variable(j.at("variable").get<std::uint32_t>());
			const auto rule = j.at("rule").get<std::string>();
			if (rule == "R1")
				e.rule = Rule::R1;
			else if (rule == "R2")
				e.rule = Rule::R2;
			else if (rule == "R3")
				e.rule = Rule::R3;
			else if (rule == "R4")
				e.rule = Rule::R4;
			else
				throw parse_error(number, "unknown rule '" + rule + "'");
			e.family_before = j.at("family_before").get<std::size_t>();
			e.family_after = j.at("family_after").get<std::size_t>();
			e.max_set = j.at("max_set").get<std::size_t>();
			e.elapsed = std::chrono::microseconds(j.at("micros").get<long long>());
			out.push_back(e);
		} catch (const nlohmann::json::exception &ex) {
			throw parse_error(number, ex.what());
		}
	}
	return out;
}

} // namespace qbtw
