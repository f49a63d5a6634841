#include <gtest/gtest.h>

#include <qbtw/generators.hpp>
#include <qbtw/oracle.hpp>

#include "oracles.hpp"

using namespace qbtw;

namespace {
Variable V(std::uint32_t i) { return Variable(i); }
const QbfInstance exists_unit(Prefix({{Quantifier::exists, {Variable(1)}}}), Matrix::from_dimacs({{1}}));
const QbfInstance forall_unit(Prefix({{Quantifier::forall, {Variable(1)}}}), Matrix::from_dimacs({{1}}));
} // namespace

TEST(Evaluate, Examples) {
	EXPECT_FALSE(evaluate(qparity(2)));
	EXPECT_TRUE(evaluate(exists_unit));
	EXPECT_FALSE(evaluate(forall_unit));
	EXPECT_TRUE(evaluate(QbfInstance{}));
}

TEST(Evaluate, Budget) {
	const auto q = random_instance(1, 30, 10, 3, 2);
	EXPECT_THROW(evaluate(q), budget_error);
	EXPECT_THROW(evaluate(exists_unit, OracleBudget{0}), precondition_error);
}

TEST(Equisatisfiable, Examples) {
	EXPECT_TRUE(equisatisfiable(qparity(3), qparity(3)));
	EXPECT_FALSE(equisatisfiable(exists_unit, forall_unit));
}

TEST(Evaluate, AgreesWithStrategyEnumeration) {
	for (std::uint64_t seed = 0; seed < 300; ++seed) {
		const std::size_t n = 1 + seed % 5;
		const auto q = random_instance(seed, n, seed % 9, 1 + seed % std::min<std::size_t>(n, 3), 1 + seed % 4);
		EXPECT_EQ(evaluate(q), oracle_ref::strategy_truth(q)) << "seed " << seed;
	}
}

TEST(Evaluate, MonotoneUnderClauseDeletion) {
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const auto q = random_instance(seed, 7, 8, 3, 3);
		if (!evaluate(q))
			continue;
		auto cs = std::vector<Clause>(q.matrix.clauses().begin(), q.matrix.clauses().end());
		for (std::size_t i = 0; i < cs.size(); ++i) {
			auto fewer = cs;
			fewer.erase(fewer.begin() + static_cast<long>(i));
			EXPECT_TRUE(evaluate(QbfInstance(q.prefix, Matrix(fewer))));
		}
	}
}

TEST(Evaluate, ExistentialPrefixIsSat) {
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const auto q = random_instance(seed, 8, 5 + seed % 30, 3, 1);
		const auto vars = q.prefix.variables();
		const QbfInstance e(Prefix({{Quantifier::exists, vars}}), q.matrix);
		EXPECT_EQ(evaluate(e), oracle_ref::brute_sat(q.matrix, vars)) << "seed " << seed;
	}
}

TEST(PosetProperty2, TrivialPosetHolds) {
	for (std::uint64_t seed = 0; seed < 20; ++seed) {
		const auto q = random_instance(seed, 6, 6, 2, 3);
		EXPECT_TRUE(verify_poset_property2(q, DependencyPoset::trivial(q.prefix)));
	}
}

TEST(PosetProperty2, DroppedDependencyDetected) {
	// A u E x : eq(u, x). Without u <= x, x may be played first.
	const QbfInstance q(Prefix({{Quantifier::forall, {V(1)}}, {Quantifier::exists, {V(2)}}}),
	                    Matrix::from_dimacs({{1, -2}, {-1, 2}}));
	EXPECT_FALSE(verify_poset_property2(q, DependencyPoset::from_pairs(q.prefix.variable_set(), {})));
	EXPECT_TRUE(verify_poset_property2(q, DependencyPoset::trivial(q.prefix)));
}

TEST(PosetProperty2, VariableFreeAndGuard) {
	EXPECT_TRUE(verify_poset_property2(QbfInstance{}, DependencyPoset{}));
	const auto q = qparity(4);
	EXPECT_THROW(verify_poset_property2(q, DependencyPoset::trivial(q.prefix)), budget_error);
}

TEST(RandomInstance, Deterministic) {
	EXPECT_EQ(random_instance(42, 9, 12, 3, 4), random_instance(42, 9, 12, 3, 4));
	EXPECT_NE(random_instance(42, 9, 12, 3, 4), random_instance(43, 9, 12, 3, 4));
}

TEST(RandomInstance, Shape) {
	for (std::uint64_t seed = 0; seed < 100; ++seed) {
		const auto q = random_instance(seed, 8, 10, 3, 4);
		EXPECT_EQ(q.prefix.size(), 8u);
		EXPECT_LE(q.prefix.blocks().size(), 4u);
		EXPECT_FALSE(q.matrix.has_tautology());
		for (const auto &c : q.matrix.clauses())
			EXPECT_EQ(c.size(), 3u);
	}
	EXPECT_TRUE(evaluate(random_instance(5, 6, 0, 2, 3)));
	EXPECT_THROW(random_instance(1, 2, 1, 3, 1), precondition_error);
}

TEST(RandomInstance, DistinctUnitClauses) {
	std::size_t checked = 0;
	for (std::uint64_t seed = 0; seed < 400; ++seed) {
		const auto q = random_instance(seed, 4, 4, 1, 2);
		if (q.matrix.variables().size() != 4 || q.matrix.size() != 4)
			continue;
		++checked;
		bool universal_unit = false;
		for (const auto &c : q.matrix.clauses())
			universal_unit |= q.prefix.is_universal(c.literals()[0].var());
		EXPECT_EQ(evaluate(q), !universal_unit) << "seed " << seed;
	}
	EXPECT_GT(checked, 0u);
}
