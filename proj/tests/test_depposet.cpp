#include <gtest/gtest.h>

#include <qbtw/depposet.hpp>
#include <qbtw/generators.hpp>
#include <qbtw/oracle.hpp>

using namespace qbtw;

namespace {
Variable V(std::uint32_t i) { return Variable(i); }
} // namespace

TEST(TrivialPoset, QParity2) {
	// x1=1 x2=2 u=3 z1=4 z2=5
	const auto d = DependencyPoset::trivial(qparity(2).prefix);
	EXPECT_EQ(d.dep(V(4)), (VarSet{V(1), V(2), V(3), V(4)}));
	EXPECT_EQ(d.dep(V(3)), (VarSet{V(1), V(2), V(3)}));
	EXPECT_EQ(d.dep(V(1)), (VarSet{V(1)}));
	EXPECT_THROW(d.dep(V(9)), precondition_error);
}

TEST(TrivialPoset, SingleBlock) {
	const Prefix p({{Quantifier::exists, {V(1), V(2)}}});
	const auto d = DependencyPoset::trivial(p);
	EXPECT_EQ(d.dep(V(1)), VarSet{V(1)});
	EXPECT_EQ(d.dep(V(2)), VarSet{V(2)});
}

TEST(TrivialPoset, DefinitionByEnumeration) {
	for (std::uint64_t seed = 0; seed < 50; ++seed) {
		const auto q = random_instance(seed, 7, 3, 2, 4);
		const auto d = DependencyPoset::trivial(q.prefix);
		EXPECT_TRUE(validate_poset(d, q.prefix).ok());
		for (Variable v : q.prefix.variables())
			for (Variable w : q.prefix.variables())
				EXPECT_EQ(d.leq(w, v), w == v || q.prefix.block_index(w) < q.prefix.block_index(v));
	}
}

TEST(UserPoset, ClosureOfOnePair) {
	const auto p = qparity(2).prefix;
	const auto d = DependencyPoset::from_pairs(p.variable_set(), {{V(1), V(3)}});
	EXPECT_EQ(d.dep(V(3)), (VarSet{V(1), V(3)}));
	EXPECT_TRUE(validate_poset(d, p).ok());
}

TEST(UserPoset, ClosureIsTransitiveAndIdempotent) {
	const auto p = qparity(3).prefix;
	const auto d = DependencyPoset::from_pairs(p.variable_set(), {{V(1), V(4)}, {V(4), V(6)}});
	EXPECT_TRUE(d.leq(V(1), V(6)));
	const auto again = DependencyPoset::from_pairs(p.variable_set(), d.strict_pairs());
	EXPECT_EQ(again, d);
}

TEST(ValidatePoset, ReportsPrefixInconsistency) {
	const auto p = qparity(2).prefix;
	const auto d = DependencyPoset::from_pairs(p.variable_set(), {{V(3), V(1)}});
	const auto r = validate_poset(d, p);
	ASSERT_FALSE(r.ok());
	EXPECT_EQ(r.violations[0].kind, PosetViolation::Kind::prefix_consistency);
	EXPECT_EQ(r.violations[0].u, V(3));
}

TEST(ValidatePoset, ReportsMissingReflexivity) {
	const Prefix p({{Quantifier::exists, {V(1)}}});
	const auto d = DependencyPoset::from_relation({V(1)}, {{V(1), {}}});
	const auto r = validate_poset(d, p);
	ASSERT_FALSE(r.ok());
	EXPECT_EQ(r.violations[0].kind, PosetViolation::Kind::reflexivity);
}

TEST(ValidatePoset, ReportsTransitivityAndAntisymmetry) {
	const Prefix p({{Quantifier::exists, {V(1)}}, {Quantifier::forall, {V(2)}}, {Quantifier::exists, {V(3)}}});
	const auto d = DependencyPoset::from_relation({V(1), V(2), V(3)},
	                                              {{V(1), {V(1), V(2)}}, {V(2), {V(1), V(2)}}, {V(3), {V(2), V(3)}}});
	const auto r = validate_poset(d, p);
	auto has = [&r](PosetViolation::Kind k) {
		return std::any_of(r.violations.begin(), r.violations.end(), [k](const auto &v) { return v.kind == k; });
	};
	EXPECT_TRUE(has(PosetViolation::Kind::antisymmetry));
	EXPECT_TRUE(has(PosetViolation::Kind::transitivity));
}
