// Prints the derivation sequence of QParity_n (default n = 2) state by state.
#include <cstdlib>
#include <iostream>

#include <qbtw/qbtw.hpp>

int main(int argc, char **argv) {
	const long n = argc > 1 ? std::strtol(argv[1], nullptr, 10) : 2;
	const auto q = qbtw::qparity(n);
	const auto td = qbtw::qparity_td(n);
	const auto d = qbtw::DependencyPoset::trivial(q.prefix);

	qbtw::DerivationOptions opt;
	opt.checks = true;
	opt.observer = [](const qbtw::DerivationState &s, const qbtw::TraceEvent *e) {
		std::cout << "F(" << s.step_index << ")";
		if (e)
			std::cout << "  " << qbtw::to_string(e->rule) << " on " << e->variable.id;
		std::cout << "  prefix: " << s.prefix.to_string() << "\n";
		for (const auto &pi : s.family.sets()) {
			std::cout << "  {";
			for (const auto &psi : pi.matrices())
				std::cout << " [" << psi.encode() << "]";
			std::cout << " }\n";
		}
	};
	const auto res = qbtw::run_derivation(q, td, d, opt);
	std::cout << "QParity_" << n << " is " << (res.verdict ? "true" : "false") << "\n";
}
