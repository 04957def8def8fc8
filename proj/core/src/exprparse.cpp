#include <biflat/exprparse.hpp>

#include <cctype>
#include <sstream>

namespace biflat {

NfElem ExprContext::sqrt_integer(long k, int line, int col) const
{
	if (k <= 0)
		throw ParseError("sqrt argument must be positive", line, col);
	long s = 1, d = k;
	for (long f = 2; f * f <= d;)
		if (d % (f * f) == 0) {
			d /= f * f;
			s *= f;
		} else
			f++;
	NfElem root{Rat(s)};
	if (d == 1)
		return root;
	auto it = consts.find("sqrt" + std::to_string(d));
	if (it == consts.end())
		throw ParseError("sqrt(" + std::to_string(d) +
		                     ") has no declared generator",
		                 line, col);
	return root * it->second;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen,
	             RParen, End };

struct Lexer {
	const std::string &s;
	std::size_t pos = 0;
	int line, col = 1;

	Tok kind = Tok::End;
	std::string ident;
	mpz_class number;
	int tline = 1, tcol = 1;

	explicit Lexer(const std::string &text, int line0) : s(text), line(line0)
	{
		next();
	}

	[[noreturn]] void fail(const std::string &msg) const
	{
		throw ParseError(msg, tline, tcol);
	}

	void next()
	{
		while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) {
			pos++;
			col++;
		}
		tline = line;
		tcol = col;
		if (pos >= s.size()) {
			kind = Tok::End;
			return;
		}
		char c = s[pos];
		auto one = [&](Tok t) {
			kind = t;
			pos++;
			col++;
		};
		switch (c) {
		case '+': return one(Tok::Plus);
		case '-': return one(Tok::Minus);
		case '*': return one(Tok::Star);
		case '/': return one(Tok::Slash);
		case '^': return one(Tok::Caret);
		case '(': return one(Tok::LParen);
		case ')': return one(Tok::RParen);
		default: break;
		}
		if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t start = pos;
			while (pos < s.size() &&
			       std::isdigit(static_cast<unsigned char>(s[pos]))) {
				pos++;
				col++;
			}
			number = mpz_class(s.substr(start, pos - start));
			kind = Tok::Number;
			return;
		}
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t start = pos;
			while (pos < s.size() &&
			       (std::isalnum(static_cast<unsigned char>(s[pos])) ||
			        s[pos] == '_')) {
				pos++;
				col++;
			}
			ident = s.substr(start, pos - start);
			kind = Tok::Ident;
			return;
		}
		throw ParseError(std::string("unexpected character '") + c + "'",
		                 line, col);
	}
};

struct Parser {
	Lexer lex;
	const ExprContext &ctx;

	Parser(const std::string &text, const ExprContext &c, int line0)
	    : lex(text, line0), ctx(c)
	{}

	MultiPoly parse()
	{
		MultiPoly e = expr();
		if (lex.kind != Tok::End)
			lex.fail("trailing input");
		return e;
	}

	MultiPoly expr()
	{
		bool neg = false;
		while (lex.kind == Tok::Plus || lex.kind == Tok::Minus) {
			neg ^= (lex.kind == Tok::Minus);
			lex.next();
		}
		MultiPoly acc = term();
		if (neg)
			acc = -acc;
		while (lex.kind == Tok::Plus || lex.kind == Tok::Minus) {
			bool minus = lex.kind == Tok::Minus;
			lex.next();
			MultiPoly t = term();
			acc = minus ? acc - t : acc + t;
		}
		return acc;
	}

	MultiPoly term()
	{
		MultiPoly acc = power();
		while (lex.kind == Tok::Star || lex.kind == Tok::Slash) {
			bool div = lex.kind == Tok::Slash;
			int l = lex.tline, c = lex.tcol;
			lex.next();
			MultiPoly rhs = power();
			if (div) {
				if (!rhs.is_constant())
					throw ParseError("division by a non-constant expression",
					                 l, c);
				NfElem v = rhs.constant_value();
				if (v.is_zero())
					throw ParseError("division by zero", l, c);
				acc = inverse(v) * acc;
			} else
				acc = acc * rhs;
		}
		return acc;
	}

	MultiPoly power()
	{
		MultiPoly base = atom();
		if (lex.kind != Tok::Caret)
			return base;
		lex.next();
		if (lex.kind != Tok::Number)
			lex.fail("exponent must be a nonnegative integer literal");
		if (!lex.number.fits_uint_p())
			lex.fail("exponent too large");
		unsigned e = unsigned(lex.number.get_ui());
		lex.next();
		return base.pow(e);
	}

	MultiPoly constant(NfElem v) { return MultiPoly(ctx.vars, std::move(v)); }

	MultiPoly atom()
	{
		switch (lex.kind) {
		case Tok::Number: {
			Rat q(lex.number);
			lex.next();
			return constant(NfElem(std::move(q)));
		}
		case Tok::LParen: {
			lex.next();
			MultiPoly e = expr();
			if (lex.kind != Tok::RParen)
				lex.fail("expected ')'");
			lex.next();
			return e;
		}
		case Tok::Ident: {
			std::string name = lex.ident;
			int l = lex.tline, c = lex.tcol;
			lex.next();
			if (name == "sqrt") {
				if (lex.kind != Tok::LParen)
					throw ParseError("expected '(' after sqrt", l, c);
				lex.next();
				if (lex.kind != Tok::Number)
					throw ParseError("sqrt takes a positive integer", l, c);
				if (!lex.number.fits_slong_p())
					throw ParseError("sqrt argument too large", l, c);
				long k = lex.number.get_si();
				lex.next();
				if (lex.kind != Tok::RParen)
					lex.fail("expected ')'");
				lex.next();
				return constant(ctx.sqrt_integer(k, l, c));
			}
			if (ctx.vars)
				if (auto idx = ctx.vars->index(name))
					return MultiPoly::variable(ctx.vars, *idx);
			if (auto it = ctx.consts.find(name); it != ctx.consts.end())
				return constant(it->second);
			if (auto it = ctx.named_polys.find(name);
			    it != ctx.named_polys.end())
				return it->second;
			throw ParseError("undeclared identifier '" + name + "'", l, c);
		}
		default:
			lex.fail("expected an expression");
		}
	}
};

} // namespace

MultiPoly parse_expression(const std::string &text, const ExprContext &ctx,
                           int line_offset)
{
	return Parser(text, ctx, line_offset).parse();
}

NfElem parse_constant(const std::string &text, const ExprContext &ctx,
                      int line_offset)
{
	MultiPoly p = parse_expression(text, ctx, line_offset);
	if (!p.is_constant())
		throw ParseError("expected a constant expression", line_offset, 1);
	return p.constant_value();
}

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string gen_token(const FieldPtr &field, int k)
{
	const std::string &name = field->gen(k).name;
	if (name.size() > 4 && name.rfind("sqrt", 0) == 0) {
		bool digits = true;
		for (std::size_t i = 4; i < name.size(); i++)
			digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
		if (digits)
			return "sqrt(" + name.substr(4) + ")";
	}
	return name;
}

// one scalar addend q * prod gen^e, optionally carrying the variable monomial
void render_addend(std::ostringstream &os, const FieldPtr &field, GenPack p,
                   const Rat &q, bool lead_with_sign, const std::string &tail)
{
	std::ostringstream gens;
	for (int k = 0; k < (field ? field->size() : 0); k++)
		if (int e = gen_exp(p, k)) {
			gens << gen_token(field, k);
			if (e > 1)
				gens << "^" << e;
			gens << "*";
		}
	std::string g = gens.str();
	if (!g.empty())
		g.pop_back();
	bool has_symbol = !g.empty() || !tail.empty();

	Rat a = abs(q);
	if (sgn(q) < 0)
		os << "-";
	else if (lead_with_sign)
		os << "+";
	if (!(has_symbol && a == 1)) {
		os << a.get_str();
		if (has_symbol)
			os << "*";
	}
	os << g;
	if (!g.empty() && !tail.empty())
		os << "*";
	os << tail;
}

void render_coefficient(std::ostringstream &os, const NfElem &c,
                        bool lead_with_sign, const std::string &monomial)
{
	const auto &coords = c.coords();
	if (coords.empty()) {
		os << (lead_with_sign ? "+0" : "0");
		return;
	}
	if (coords.size() == 1 || monomial.empty()) {
		bool first = true;
		for (const auto &[p, q] : coords) {
			render_addend(os, c.field(), p, q, lead_with_sign || !first,
			              monomial);
			first = false;
		}
		return;
	}
	// several addends multiplying a monomial: parenthesize the scalar
	if (lead_with_sign)
		os << "+";
	os << "(";
	bool first = true;
	for (const auto &[p, q] : coords) {
		render_addend(os, c.field(), p, q, !first, "");
		first = false;
	}
	os << ")*" << monomial;
}

} // namespace

std::string render_constant(const NfElem &c, const FieldPtr &)
{
	std::ostringstream os;
	render_coefficient(os, c, false, "");
	return os.str();
}

std::string render_expression(const MultiPoly &p)
{
	if (p.is_zero())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (const auto &[m, c] : p.terms()) {
		std::ostringstream mono;
		for (int i = 0; i < kMaxVars; i++)
			if (m.e[i]) {
				mono << p.vars()->names[i];
				if (m.e[i] > 1)
					mono << "^" << m.e[i];
				mono << "*";
			}
		std::string ms = mono.str();
		if (!ms.empty())
			ms.pop_back();
		render_coefficient(os, c, !first, ms);
		first = false;
	}
	return os.str();
}

} // namespace biflat
