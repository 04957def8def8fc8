#include <biflat/ratfun.hpp>

#include <algorithm>
#include <sstream>

namespace biflat {

RatFun::RatFun(MultiPoly num, std::vector<Factor> den) : num_(std::move(num))
{
	for (auto &f : den)
		push_factor(std::move(f.poly), f.power);
	reduce();
}

RatFun RatFun::over(MultiPoly num, MultiPoly den)
{
	if (den.is_zero())
		throw DivisionByZeroError("zero denominator");
	RatFun r(std::move(num));
	r.push_factor(std::move(den), 1);
	r.reduce();
	return r;
}

void RatFun::push_factor(MultiPoly f, int power)
{
	if (power == 0 || num_.is_zero())
		return;
	if (f.is_zero())
		throw DivisionByZeroError("zero denominator factor");
	if (f.is_constant()) {
		num_ = inverse(f.constant_value()).pow(power) * num_;
		return;
	}
	NfElem lead = f.make_monic();
	if (!lead.is_one())
		num_ = inverse(lead).pow(power) * num_;
	for (auto &g : den_)
		if (g.poly == f) {
			g.power += power;
			return;
		}
	den_.push_back(Factor{std::move(f), power});
	std::sort(den_.begin(), den_.end(), [](const Factor &a, const Factor &b) {
		if (a.poly.total_degree() != b.poly.total_degree())
			return a.poly.total_degree() < b.poly.total_degree();
		return a.poly.hash() < b.poly.hash();
	});
}

void RatFun::reduce()
{
	if (num_.is_zero()) {
		den_.clear();
		return;
	}
	for (auto &f : den_)
		while (f.power > 0 && num_.total_degree() >= f.poly.total_degree()) {
			auto q = exact_divide(num_, f.poly);
			if (!q)
				break;
			num_ = std::move(*q);
			f.power--;
		}
	den_.erase(std::remove_if(den_.begin(), den_.end(),
	                          [](const Factor &f) { return f.power == 0; }),
	           den_.end());
}

MultiPoly RatFun::den_expanded() const
{
	MultiPoly d(num_.vars(), NfElem(Rat(1)));
	for (const auto &f : den_)
		d *= f.poly.pow(unsigned(f.power));
	return d;
}

const MultiPoly &RatFun::as_poly() const
{
	if (!den_.empty())
		throw DivisibilityError("rational function is not polynomial: " + repr());
	return num_;
}

RatFun operator+(const RatFun &a, const RatFun &b)
{
	if (a.is_zero())
		return b;
	if (b.is_zero())
		return a;
	// union of denominators
	RatFun r;
	std::vector<RatFun::Factor> uni = a.den_;
	for (const auto &g : b.den_) {
		bool found = false;
		for (auto &f : uni)
			if (f.poly == g.poly) {
				f.power = std::max(f.power, g.power);
				found = true;
				break;
			}
		if (!found)
			uni.push_back(g);
	}
	auto missing = [&uni](const std::vector<RatFun::Factor> &own,
	                      const VarsPtr &vars) {
		MultiPoly m(vars, NfElem(Rat(1)));
		for (const auto &f : uni) {
			int have = 0;
			for (const auto &g : own)
				if (g.poly == f.poly)
					have = g.power;
			if (f.power > have)
				m *= f.poly.pow(unsigned(f.power - have));
		}
		return m;
	};
	VarsPtr vars = join_vars(a.num_, b.num_);
	MultiPoly num = a.num_ * missing(a.den_, vars) + b.num_ * missing(b.den_, vars);
	r.num_ = std::move(num);
	r.den_ = std::move(uni);
	r.reduce();
	return r;
}

RatFun RatFun::operator-() const
{
	RatFun r = *this;
	r.num_ = -r.num_;
	return r;
}

RatFun operator-(const RatFun &a, const RatFun &b) { return a + (-b); }

RatFun operator*(const RatFun &a, const RatFun &b)
{
	RatFun r;
	r.num_ = a.num_ * b.num_;
	if (r.num_.is_zero())
		return r;
	r.den_ = a.den_;
	for (const auto &f : b.den_) {
		bool found = false;
		for (auto &g : r.den_)
			if (g.poly == f.poly) {
				g.power += f.power;
				found = true;
				break;
			}
		if (!found)
			r.den_.push_back(f);
	}
	r.reduce();
	return r;
}

RatFun operator*(const NfElem &c, const RatFun &a)
{
	RatFun r = a;
	r.num_ = c * r.num_;
	if (r.num_.is_zero())
		r.den_.clear();
	return r;
}

RatFun RatFun::reciprocal() const
{
	if (num_.is_zero())
		throw DivisionByZeroError("reciprocal of zero");
	RatFun r;
	r.num_ = den_expanded();
	MultiPoly d = num_;
	NfElem lead = d.make_monic();
	r.num_ = inverse(lead) * r.num_;
	if (!d.is_constant())
		r.den_.push_back(Factor{std::move(d), 1});
	r.reduce();
	return r;
}

RatFun operator/(const RatFun &a, const RatFun &b) { return a * b.reciprocal(); }

bool operator==(const RatFun &a, const RatFun &b)
{
	if (a.is_zero() || b.is_zero())
		return a.is_zero() && b.is_zero();
	return a.num() * b.den_expanded() == b.num() * a.den_expanded();
}

RatFun RatFun::derivative(int var) const
{
	if (num_.is_zero())
		return RatFun();
	// d(N / prod f^k) = [N' prod f - N sum k f' prod_{j!=i} f_j] / prod f^{k+1}
	MultiPoly prod(num_.vars(), NfElem(Rat(1)));
	for (const auto &f : den_)
		prod *= f.poly;
	MultiPoly acc = num_.derivative(var) * prod;
	for (int i = 0; i < int(den_.size()); i++) {
		MultiPoly rest(num_.vars(), NfElem(Rat(den_[i].power)));
		for (int j = 0; j < int(den_.size()); j++)
			if (j != i)
				rest *= den_[j].poly;
		acc -= num_ * den_[i].poly.derivative(var) * rest;
	}
	RatFun r;
	r.num_ = std::move(acc);
	r.den_ = den_;
	for (auto &f : r.den_)
		f.power++;
	r.reduce();
	return r;
}

NfElem RatFun::evaluate(std::span<const NfElem> point) const
{
	NfElem v = num_.evaluate(point);
	for (const auto &f : den_) {
		NfElem d = f.poly.evaluate(point);
		if (d.is_zero())
			throw DivisionByZeroError("evaluation at a pole");
		v *= inverse(d).pow(unsigned(f.power));
	}
	return v;
}

RatFun RatFun::eval_main(std::span<const NfElem> main_point) const
{
	RatFun r(num_.eval_main(main_point));
	for (const auto &f : den_) {
		MultiPoly d = f.poly.eval_main(main_point);
		if (d.is_zero())
			throw DivisionByZeroError("evaluation at a pole");
		r.push_factor(std::move(d), f.power);
	}
	r.reduce();
	return r;
}

std::string RatFun::repr() const
{
	std::ostringstream os;
	os << "(" << num_.repr() << ")";
	for (const auto &f : den_)
		os << " / (" << f.poly.repr() << ")^" << f.power;
	return os.str();
}

// ---------------------------------------------------------------------------

MultiPoly determinant_bareiss(const Mat<MultiPoly> &m0)
{
	if (m0.rows() != m0.cols())
		throw VariableMismatchError("determinant of non-square matrix");
	int n = m0.rows();
	if (n == 0)
		return MultiPoly(nullptr, NfElem(Rat(1)));
	Mat<MultiPoly> m = m0;
	VarsPtr vars;
	for (int i = 0; i < n && !vars; i++)
		for (int j = 0; j < n && !vars; j++)
			vars = m(i, j).vars();
	MultiPoly prev(vars, NfElem(Rat(1)));
	int sign = 1;
	for (int k = 0; k < n - 1; k++) {
		if (m(k, k).is_zero()) {
			int swap = -1;
			for (int i = k + 1; i < n && swap < 0; i++)
				if (!m(i, k).is_zero())
					swap = i;
			if (swap < 0)
				return MultiPoly(vars, NfElem());
			for (int j = 0; j < n; j++)
				std::swap(m(k, j), m(swap, j));
			sign = -sign;
		}
		for (int i = k + 1; i < n; i++)
			for (int j = k + 1; j < n; j++) {
				MultiPoly t = m(k, k) * m(i, j) - m(i, k) * m(k, j);
				auto q = exact_divide(t, prev);
				if (!q)
					throw InternalError("Bareiss division failed");
				m(i, j) = std::move(*q);
			}
		prev = m(k, k);
	}
	MultiPoly det = m(n - 1, n - 1);
	return sign < 0 ? -det : det;
}

template <class T> T determinant(const Mat<T> &m)
{
	int n = m.rows();
	if (n == 1)
		return m(0, 0);
	if (n == 2)
		return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
	T acc{};
	for (int j = 0; j < n; j++) {
		Mat<T> sub(n - 1, n - 1);
		for (int i = 1; i < n; i++) {
			int cc = 0;
			for (int c = 0; c < n; c++)
				if (c != j)
					sub(i - 1, cc++) = m(i, c);
		}
		T term = m(0, j) * determinant(sub);
		acc = (j % 2) ? acc - term : acc + term;
	}
	return acc;
}

template <class T> Mat<T> adjugate(const Mat<T> &m)
{
	int n = m.rows();
	Mat<T> adj(n, n);
	if (n == 1)
		throw InternalError("adjugate of 1x1 requires an explicit unit");
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++) {
			Mat<T> sub(n - 1, n - 1);
			for (int r = 0, rr = 0; r < n; r++) {
				if (r == i)
					continue;
				for (int c = 0, cc = 0; c < n; c++) {
					if (c == j)
						continue;
					sub(rr, cc++) = m(r, c);
				}
				rr++;
			}
			T d = determinant(sub);
			if ((i + j) % 2)
				d = d - d - d;
			adj(j, i) = d;
		}
	return adj;
}

RatFun determinant(const PolyMat &m) { return determinant<RatFun>(m); }

PolyMat inverse(const PolyMat &m)
{
	RatFun det = determinant(m);
	if (det.is_zero())
		throw SingularMatrixError("matrix is singular");
	RatFun det_inv = det.reciprocal();
	int n = m.rows();
	if (n == 1) {
		PolyMat r(1, 1);
		r(0, 0) = m(0, 0).reciprocal();
		return r;
	}
	PolyMat adj = adjugate(m);
	PolyMat r(n, n);
	for (int i = 0; i < n; i++)
		for (int j = 0; j < n; j++)
			r(i, j) = adj(i, j) * det_inv;
	return r;
}

Mat<MultiPoly> jacobian(std::span<const MultiPoly> u, int n_vars)
{
	if (int(u.size()) != n_vars)
		throw VariableMismatchError("jacobian needs as many functions as "
		                            "variables");
	Mat<MultiPoly> j(n_vars, n_vars);
	for (int i = 0; i < n_vars; i++)
		for (int k = 0; k < n_vars; k++)
			j(i, k) = u[i].derivative(k);
	return j;
}

// ---------------------------------------------------------------------------

namespace {
inline NfElem field_inv(const NfElem &x) { return inverse(x); }
inline RatFun field_inv(const RatFun &x) { return x.reciprocal(); }
inline bool scalar_zero(const NfElem &x) { return x.is_zero(); }
inline bool scalar_zero(const RatFun &x) { return x.is_zero(); }
template <class F> F scalar_one();
template <> NfElem scalar_one<NfElem>() { return NfElem(Rat(1)); }
template <> RatFun scalar_one<RatFun>()
{
	return RatFun(MultiPoly(nullptr, NfElem(Rat(1))));
}
} // namespace

template <class F>
LinearSolution<F> solve_linear(Mat<F> a, std::vector<F> b)
{
	int rows = a.rows(), cols = a.cols();
	std::vector<int> pivot_col;
	int rank = 0;
	for (int col = 0; col < cols && rank < rows; col++) {
		int piv = -1;
		for (int i = rank; i < rows && piv < 0; i++)
			if (!scalar_zero(a(i, col)))
				piv = i;
		if (piv < 0)
			continue;
		if (piv != rank) {
			for (int j = 0; j < cols; j++)
				std::swap(a(rank, j), a(piv, j));
			std::swap(b[rank], b[piv]);
		}
		F inv = field_inv(a(rank, col));
		for (int j = col; j < cols; j++)
			a(rank, j) = a(rank, j) * inv;
		b[rank] = b[rank] * inv;
		for (int i = 0; i < rows; i++) {
			if (i == rank || scalar_zero(a(i, col)))
				continue;
			F f = a(i, col);
			for (int j = col; j < cols; j++)
				a(i, j) = a(i, j) - f * a(rank, j);
			b[i] = b[i] - f * b[rank];
		}
		pivot_col.push_back(col);
		rank++;
	}
	LinearSolution<F> sol;
	for (int i = rank; i < rows; i++)
		if (!scalar_zero(b[i])) {
			sol.kind = SolveKind::Infeasible;
			return sol;
		}
	sol.particular.assign(cols, F{});
	for (int r = 0; r < rank; r++)
		sol.particular[pivot_col[r]] = b[r];
	std::vector<bool> is_pivot(cols, false);
	for (int c : pivot_col)
		is_pivot[c] = true;
	for (int c = 0; c < cols; c++) {
		if (is_pivot[c])
			continue;
		std::vector<F> k(cols, F{});
		k[c] = scalar_one<F>();
		for (int r = 0; r < rank; r++)
			k[pivot_col[r]] = F{} - a(r, c);
		sol.kernel.push_back(std::move(k));
	}
	sol.kind = sol.kernel.empty() ? SolveKind::Unique : SolveKind::Family;
	return sol;
}

template LinearSolution<NfElem> solve_linear(Mat<NfElem>, std::vector<NfElem>);
template LinearSolution<RatFun> solve_linear(Mat<RatFun>, std::vector<RatFun>);

template <class F> std::vector<std::vector<F>> null_space(Mat<F> a)
{
	std::vector<F> zero(a.rows(), F{});
	auto sol = solve_linear(std::move(a), std::move(zero));
	return sol.kernel;
}

template std::vector<std::vector<NfElem>> null_space(Mat<NfElem>);
template std::vector<std::vector<RatFun>> null_space(Mat<RatFun>);

template MultiPoly determinant(const Mat<MultiPoly> &);
template NfElem determinant(const Mat<NfElem> &);
template Mat<RatFun> adjugate(const Mat<RatFun> &);
template Mat<MultiPoly> adjugate(const Mat<MultiPoly> &);
template Mat<NfElem> adjugate(const Mat<NfElem> &);

} // namespace biflat
