#pragma once

#include <biflat/ratfun.hpp>

namespace biflat {

// First-order jet: exact value plus gradient with respect to the chart
// coordinates, both rational functions of the remaining parameters. Taking a
// derivative consumes the gradient; the result can no longer be
// differentiated (has_grad() == false).
template <class S> struct Jet {
	S v;
	std::vector<S> g;

	Jet() = default;
	explicit Jet(S value) : v(std::move(value)) {}
	Jet(S value, std::vector<S> grad) : v(std::move(value)), g(std::move(grad))
	{}

	bool has_grad() const { return !g.empty(); }

	friend Jet operator+(const Jet &a, const Jet &b)
	{
		Jet r(a.v + b.v);
		if (a.has_grad() && b.has_grad()) {
			r.g.reserve(a.g.size());
			for (std::size_t i = 0; i < a.g.size(); i++)
				r.g.push_back(a.g[i] + b.g[i]);
		}
		return r;
	}
	friend Jet operator-(const Jet &a, const Jet &b)
	{
		Jet r(a.v - b.v);
		if (a.has_grad() && b.has_grad()) {
			r.g.reserve(a.g.size());
			for (std::size_t i = 0; i < a.g.size(); i++)
				r.g.push_back(a.g[i] - b.g[i]);
		}
		return r;
	}
	friend Jet operator*(const Jet &a, const Jet &b)
	{
		Jet r(a.v * b.v);
		if (a.has_grad() && b.has_grad()) {
			r.g.reserve(a.g.size());
			for (std::size_t i = 0; i < a.g.size(); i++)
				r.g.push_back(a.g[i] * b.v + a.v * b.g[i]);
		}
		return r;
	}
	Jet operator-() const
	{
		Jet r(-v);
		r.g.reserve(g.size());
		for (const auto &x : g)
			r.g.push_back(-x);
		return r;
	}
	Jet &operator+=(const Jet &b) { return *this = *this + b; }
	Jet &operator-=(const Jet &b) { return *this = *this - b; }
	Jet &operator*=(const Jet &b) { return *this = *this * b; }
};

// scalar hooks shared by the symbolic and the jet backend
inline RatFun scalar_inv(const RatFun &x) { return x.reciprocal(); }
inline bool is_scalar_zero(const RatFun &x) { return x.is_zero(); }

template <class S> Jet<S> scalar_inv(const Jet<S> &a)
{
	S iv = scalar_inv(a.v);
	Jet<S> r(iv);
	if (a.has_grad()) {
		S m = -(iv * iv);
		r.g.reserve(a.g.size());
		for (const auto &x : a.g)
			r.g.push_back(m * x);
	}
	return r;
}
template <class S> bool is_scalar_zero(const Jet<S> &a)
{
	return is_scalar_zero(a.v);
}

template <class S> Jet<S> deriv(const Jet<S> &a, int k)
{
	if (!a.has_grad())
		throw InternalError("jet gradient already consumed");
	return Jet<S>(a.g.at(k));
}

} // namespace biflat
