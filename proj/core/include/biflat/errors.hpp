#pragma once

#include <stdexcept>
#include <string>

namespace biflat {

struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct FieldMismatchError : Error {
	using Error::Error;
};
struct DivisionByZeroError : Error {
	using Error::Error;
};
struct ConfigError : Error {
	using Error::Error;
};
struct ParseError : Error {
	int line, column;
	ParseError(const std::string &msg, int l, int c)
	    : Error(msg + " (line " + std::to_string(l) + ", column " +
	            std::to_string(c) + ")"),
	      line(l), column(c)
	{}
};
struct ValidationError : Error {
	using Error::Error;
};
struct UnknownGroupError : Error {
	using Error::Error;
};
struct VariableMismatchError : Error {
	using Error::Error;
};
struct SingularMatrixError : Error {
	using Error::Error;
};
struct DivisibilityError : Error {
	using Error::Error;
};
struct NotInvariantError : Error {
	using Error::Error;
};
struct AlgebraicDependenceError : Error {
	using Error::Error;
};
struct FactorizationMismatchError : Error {
	using Error::Error;
};
struct IsotropicCovectorError : Error {
	using Error::Error;
};
struct InvalidFamilyError : Error {
	using Error::Error;
};
struct NoWeightsError : Error {
	using Error::Error;
};
struct IntegrabilityError : Error {
	using Error::Error;
};
struct NotAPencilError : Error {
	using Error::Error;
};
struct InternalError : Error {
	using Error::Error;
};

} // namespace biflat
