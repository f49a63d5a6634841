// qbtw command-line front end: solve, validate, oracle, gen.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <qbtw/qbtw.hpp>

namespace {

constexpr int exit_true = 10;
constexpr int exit_false = 20;
constexpr int exit_error = 1;

std::string read_file(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw qbtw::error("cannot read " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
	std::ofstream out(path, std::ios::binary);
	if (!out || !(out << text))
		throw qbtw::error("cannot write " + path);
}

template <typename T, typename Parse>
T load(const std::string &path, Parse parse) {
	try {
		return parse(read_file(path));
	} catch (const qbtw::parse_error &e) {
		throw qbtw::error(path + ":" + std::to_string(e.line()) + ": " + e.what());
	}
}

struct Inputs {
	std::string qdimacs, td, poset;
	bool trivial = false;
};

void add_inputs(CLI::App *cmd, Inputs &in) {
	cmd->add_option("qdimacs", in.qdimacs, "instance in QDIMACS format")->required();
	cmd->add_option("--td", in.td, "trunk tree decomposition (.btd)")->required();
	auto *triv = cmd->add_flag("--trivial-poset", in.trivial, "use the prefix order as dependency poset");
	auto *file = cmd->add_option("--poset", in.poset, "dependency poset file");
	triv->excludes(file);
	file->excludes(triv);
}

struct Loaded {
	qbtw::QbfInstance q;
	qbtw::TrunkTreeDecomposition td;
	qbtw::DependencyPoset d;
};

Loaded load_inputs(const Inputs &in) {
	if (!in.trivial && in.poset.empty())
		throw qbtw::error("one of --trivial-poset or --poset <file> is required");
	auto q = load<qbtw::QbfInstance>(in.qdimacs, [](const std::string &s) { return qbtw::parse_qdimacs(s); });
	auto td = load<qbtw::TrunkTreeDecomposition>(in.td, [](const std::string &s) { return qbtw::parse_btd(s); });
	auto d = in.trivial ? qbtw::DependencyPoset::trivial(q.prefix)
	                    : load<qbtw::DependencyPoset>(in.poset, [&q](const std::string &s) { return qbtw::parse_poset(s, q.prefix); });
	return {std::move(q), std::move(td), std::move(d)};
}

int verdict_line(bool v) {
	std::cout << (v ? "s cnf 1" : "s cnf 0") << std::endl;
	return v ? exit_true : exit_false;
}

int cmd_solve(const Inputs &in, const std::string &trace_path, bool checks, bool stats, const qbtw::EngineLimits &lim) {
	const Loaded l = load_inputs(in);
	qbtw::DerivationOptions opt;
	opt.limits = lim;
	opt.checks = checks;
	const auto t0 = std::chrono::steady_clock::now();
	const auto res = qbtw::run_derivation(l.q, l.td, l.d, opt);
	const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
	if (!trace_path.empty()) {
		std::ofstream out(trace_path, std::ios::binary);
		if (!out)
			throw qbtw::error("cannot write " + trace_path);
		qbtw::write_trace(res.trace, out);
	}
	const int code = verdict_line(res.verdict);
	if (stats) {
		std::size_t peak = 0, peak_set = 0, rules[4] = {0, 0, 0, 0};
		for (const auto &e : res.trace) {
			peak = std::max(peak, e.family_after);
			peak_set = std::max(peak_set, e.max_set);
			++rules[static_cast<int>(e.rule)];
		}
		std::cout << "c width " << qbtw::width(l.td) << "\n"
		          << "c steps " << res.trace.size() << "\n"
		          << "c rules R1=" << rules[0] << " R2=" << rules[1] << " R3=" << rules[2] << " R4=" << rules[3] << "\n"
		          << "c peak_family " << peak << "\n"
		          << "c peak_set " << peak_set << "\n"
		          << "c time_ms " << ms << std::endl;
	}
	return code;
}

int cmd_validate(const Inputs &in) {
	const Loaded l = load_inputs(in);
	const qbtw::QbfInstance q(l.q.prefix, qbtw::remove_tautologies(l.q.matrix));
	bool ok = true;
	if (auto r = qbtw::validate_poset(l.d, q.prefix); !r.ok()) {
		std::cerr << "invalid dependency poset:\n" << r.to_string();
		ok = false;
	}
	if (auto r = qbtw::validate_nice(l.td, q); !r.ok()) {
		std::cerr << "not a nice tree decomposition:\n" << r.to_string();
		ok = false;
	}
	if (ok) {
		if (auto r = qbtw::validate_trunk_aligned(l.td, q, l.d); !r.ok()) {
			std::cerr << "not trunk-aligned:\n" << r.to_string();
			ok = false;
		}
	}
	if (ok)
		std::cout << "c valid, width " << qbtw::width(l.td) << std::endl;
	return ok ? 0 : exit_error;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"QBF decision via trunk-aligned tree decompositions"};
	app.require_subcommand(1);

	Inputs solve_in, validate_in;
	std::string trace_path;
	bool checks = false, stats = false;
	qbtw::EngineLimits lim;
	auto *solve = app.add_subcommand("solve", "decide an instance along a trunk-aligned decomposition");
	add_inputs(solve, solve_in);
	solve->add_option("--trace", trace_path, "write one JSON record per derivation step");
	solve->add_flag("--checks", checks, "assert per-step invariants (slower)");
	solve->add_flag("--stats", stats, "print statistics as comment lines");
	solve->add_option("--max-family-size", lim.max_family_size)->check(CLI::PositiveNumber);
	solve->add_option("--max-set-size", lim.max_set_size)->check(CLI::PositiveNumber);
	solve->add_option("--max-strategies", lim.max_strategies)->check(CLI::PositiveNumber);

	auto *validate = app.add_subcommand("validate", "check niceness and trunk alignment");
	add_inputs(validate, validate_in);

	std::string oracle_path;
	std::size_t budget = qbtw::OracleBudget{}.max_variables;
	auto *oracle = app.add_subcommand("oracle", "brute-force game-tree evaluation");
	oracle->add_option("qdimacs", oracle_path)->required();
	oracle->add_option("--budget", budget, "maximum number of variables")->check(CLI::PositiveNumber);

	auto *gen = app.add_subcommand("gen", "write generated instances");
	gen->require_subcommand(1);
	long parity_n = 0;
	std::string parity_out;
	auto *gen_parity = gen->add_subcommand("qparity", "QParity_n with its width-2 decomposition");
	gen_parity->add_option("n", parity_n)->required();
	gen_parity->add_option("prefix", parity_out, "writes <prefix>.qdimacs and <prefix>.btd")->required();
	std::string sb_in, sb_out;
	auto *gen_single = gen->add_subcommand("single-bag", "single-bag path decomposition of an instance");
	gen_single->add_option("qdimacs", sb_in)->required();
	gen_single->add_option("prefix", sb_out, "writes <prefix>.btd")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : exit_error;
	}

	try {
		if (*solve)
			return cmd_solve(solve_in, trace_path, checks, stats, lim);
		if (*validate)
			return cmd_validate(validate_in);
		if (*oracle) {
			auto q = load<qbtw::QbfInstance>(oracle_path, [](const std::string &s) { return qbtw::parse_qdimacs(s); });
			return verdict_line(qbtw::evaluate(q, qbtw::OracleBudget{budget}));
		}
		if (*gen_parity) {
			write_file(parity_out + ".qdimacs", qbtw::write_qdimacs(qbtw::qparity(parity_n)));
			write_file(parity_out + ".btd", qbtw::write_btd(qbtw::qparity_td(parity_n)));
			return 0;
		}
		if (*gen_single) {
			auto q = load<qbtw::QbfInstance>(sb_in, [](const std::string &s) { return qbtw::parse_qdimacs(s); });
			write_file(sb_out + ".btd", qbtw::write_btd(qbtw::single_bag_td(q)));
			return 0;
		}
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << std::endl;
		return exit_error;
	}
	return exit_error;
}
