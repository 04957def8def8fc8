#pragma once

#include <biflat/multipoly.hpp>

namespace biflat {

// Rational function num / prod(factors^k). Factors are monic non-constant
// polynomials; the denominators arising here are products of det J and the
// linear mirror forms, so keeping them factored makes cancellation cheap.
class RatFun {
public:
	struct Factor {
		MultiPoly poly; // monic
		int power = 1;
	};

	RatFun() = default;
	RatFun(MultiPoly num) : num_(std::move(num)) {}
	RatFun(VarsPtr vars, NfElem c) : num_(std::move(vars), std::move(c)) {}
	RatFun(MultiPoly num, std::vector<Factor> den);

	static RatFun over(MultiPoly num, MultiPoly den); // den nonzero

	bool is_zero() const { return num_.is_zero(); }
	bool is_polynomial() const { return den_.empty(); }
	const MultiPoly &num() const { return num_; }
	const std::vector<Factor> &den() const { return den_; }
	MultiPoly den_expanded() const;
	// throws unless the reduced form is a polynomial
	const MultiPoly &as_poly() const;

	friend RatFun operator+(const RatFun &a, const RatFun &b);
	friend RatFun operator-(const RatFun &a, const RatFun &b);
	friend RatFun operator*(const RatFun &a, const RatFun &b);
	friend RatFun operator/(const RatFun &a, const RatFun &b);
	RatFun operator-() const;
	RatFun &operator+=(const RatFun &b) { return *this = *this + b; }
	RatFun &operator-=(const RatFun &b) { return *this = *this - b; }
	RatFun &operator*=(const RatFun &b) { return *this = *this * b; }
	friend RatFun operator*(const NfElem &c, const RatFun &a);
	friend bool operator==(const RatFun &a, const RatFun &b); // exact equality

	RatFun reciprocal() const;
	RatFun derivative(int var) const;
	NfElem evaluate(std::span<const NfElem> point) const;
	// bind the main variables; result is a rational function of the parameters
	RatFun eval_main(std::span<const NfElem> main_point) const;

	std::string repr() const;

private:
	MultiPoly num_;
	std::vector<Factor> den_;

	void reduce();
	void push_factor(MultiPoly f, int power);
};

// deriv() hooks shared by the symbolic scalar and the jet scalar
inline RatFun deriv(const RatFun &a, int var) { return a.derivative(var); }
inline MultiPoly deriv(const MultiPoly &a, int var) { return a.derivative(var); }

// ---------------------------------------------------------------------------

template <class T> class Mat {
public:
	Mat() = default;
	Mat(int rows, int cols) : r_(rows), c_(cols), a_(rows * cols) {}
	static Mat identity(int n, const T &one)
	{
		Mat m(n, n);
		for (int i = 0; i < n; i++)
			m(i, i) = one;
		return m;
	}
	int rows() const { return r_; }
	int cols() const { return c_; }
	T &operator()(int i, int j) { return a_[i * c_ + j]; }
	const T &operator()(int i, int j) const { return a_[i * c_ + j]; }
	friend Mat operator*(const Mat &x, const Mat &y)
	{
		Mat m(x.r_, y.c_);
		for (int i = 0; i < x.r_; i++)
			for (int j = 0; j < y.c_; j++) {
				T acc = x(i, 0) * y(0, j);
				for (int k = 1; k < x.c_; k++)
					acc += x(i, k) * y(k, j);
				m(i, j) = acc;
			}
		return m;
	}
	friend Mat operator+(const Mat &x, const Mat &y)
	{
		Mat m(x.r_, x.c_);
		for (int i = 0; i < int(m.a_.size()); i++)
			m.a_[i] = x.a_[i] + y.a_[i];
		return m;
	}
	friend Mat operator-(const Mat &x, const Mat &y)
	{
		Mat m(x.r_, x.c_);
		for (int i = 0; i < int(m.a_.size()); i++)
			m.a_[i] = x.a_[i] - y.a_[i];
		return m;
	}
	bool operator==(const Mat &y) const
	{
		return r_ == y.r_ && c_ == y.c_ && a_ == y.a_;
	}

private:
	int r_ = 0, c_ = 0;
	std::vector<T> a_;
};

using PolyMat = Mat<RatFun>;

// fraction-free determinant of a polynomial matrix
MultiPoly determinant_bareiss(const Mat<MultiPoly> &m);

// cofactor expansion determinant (n <= 5 in practice)
template <class T> T determinant(const Mat<T> &m);

// adjugate via cofactors: m * adjugate(m) = det * Id
template <class T> Mat<T> adjugate(const Mat<T> &m);

RatFun determinant(const PolyMat &m);
PolyMat inverse(const PolyMat &m); // throws SingularMatrixError

// Jacobian matrix J(i,j) = d u_i / d p_j as polynomials
Mat<MultiPoly> jacobian(std::span<const MultiPoly> u, int n_vars);

// ---------------------------------------------------------------------------
// exact dense linear algebra over a field scalar

enum class SolveKind { Unique, Family, Infeasible };

template <class F> struct LinearSolution {
	SolveKind kind = SolveKind::Infeasible;
	std::vector<F> particular;       // one solution (valid unless infeasible)
	std::vector<std::vector<F>> kernel; // basis of the homogeneous solutions
};

// Solve A x = b with exact field arithmetic (F = NfElem or RatFun over the
// parameter ring).
template <class F>
LinearSolution<F> solve_linear(Mat<F> a, std::vector<F> b);

// basis of the null space of A
template <class F> std::vector<std::vector<F>> null_space(Mat<F> a);

} // namespace biflat
