#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbtw {

class error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Violated precondition of a library call (bad argument, unknown variable, ...).
class precondition_error : public error {
public:
	using error::error;
};

class parse_error : public error {
public:
	parse_error(std::size_t line, const std::string &message)
		: error("line " + std::to_string(line) + ": " + message), line_(line) {}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

class validation_error : public error {
public:
	using error::error;
};

enum class limit_kind { family_size, set_size, strategies };

inline const char *to_string(limit_kind k) {
	switch (k) {
	case limit_kind::family_size: return "max_family_size";
	case limit_kind::set_size: return "max_set_size";
	case limit_kind::strategies: return "max_strategies";
	}
	return "?";
}

class resource_limit_error : public error {
public:
	resource_limit_error(limit_kind kind, const std::string &message)
		: error(std::string("resource limit ") + to_string(kind) + " exceeded: " + message), kind_(kind) {}

	limit_kind kind() const noexcept { return kind_; }

private:
	limit_kind kind_;
};

class budget_error : public error {
public:
	using error::error;
};

// A runtime invariant check of the derivation engine failed.
class internal_error : public error {
public:
	using error::error;
};

} // namespace qbtw
