#pragma once

#include <biflat/multipoly.hpp>

#include <map>
#include <string>

namespace biflat {

// Context the expression language evaluates against. Identifiers resolve to
// variables, named field constants (generators and defines), or named
// polynomials (earlier invariants), in that order.
struct ExprContext {
	VarsPtr vars;
	FieldPtr field;
	std::map<std::string, NfElem> consts;
	std::map<std::string, MultiPoly> named_polys;

	// resolves sqrt(k): the square-free part d must have a generator named
	// sqrt<d> registered in consts
	NfElem sqrt_integer(long k, int line, int col) const;
};

// grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := pow (('*'|'/') pow)*        division only by constants
//   pow    := atom ['^' uint]
//   atom   := uint | ident | 'I' | 'sqrt' '(' uint ')' | '(' expr ')'
MultiPoly parse_expression(const std::string &text, const ExprContext &ctx,
                           int line_offset = 1);

// expression that must evaluate to a scalar
NfElem parse_constant(const std::string &text, const ExprContext &ctx,
                      int line_offset = 1);

// Deterministic rendering: terms descending graded-lex, no whitespace.
// parse(render(p)) == p whenever every generator is named either sqrt<d> or
// is registered in the context.
std::string render_expression(const MultiPoly &p);
std::string render_constant(const NfElem &c, const FieldPtr &field);

} // namespace biflat
