#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chernum/random.hpp"

namespace chernum {

// Homogeneous coordinates z_0..z_r of a point of P^r. Never the zero vector.
using Point = Eigen::VectorXcd;

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents);

  static Monomial one(int num_vars) { return Monomial(std::vector<int>(num_vars, 0)); }
  static Monomial variable(int num_vars, int index);

  int num_vars() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exps_[i]; }
  const std::vector<int>& exponents() const { return exps_; }

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

// Graded lexicographic order, largest first: higher degree, then larger exponent of z_0, ...
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// All monomials of exactly `degree` in `num_vars` variables, in graded-lex order.
std::vector<Monomial> monomials_of_degree(int num_vars, int degree);

// Sparse homogeneous polynomial with complex coefficients. Every stored term has
// total degree equal to degree(); exact zeros are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Complex, GradedLexLess>;

  Polynomial() = default;
  Polynomial(int num_vars, int degree);

  static Polynomial variable(int num_vars, int index);
  static Polynomial constant(int num_vars, Complex value);

  // Accumulates c * m. Throws InputError on a degree or variable-count mismatch.
  void add_term(const Monomial& m, Complex c);

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Complex evaluate(const Point& x) const;
  // Sum of |c_a| |x^a|; the natural scale for residuals of this polynomial at x.
  double evaluate_abs(const Point& x) const;
  double coefficient_norm() const;

  // d/dz_var. The result has degree() - 1 (a zero polynomial of degree 0 stays degree 0).
  Polynomial derivative(int var) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(Complex scalar) const;
  Polynomial operator-() const { return *this * Complex(-1.0); }

 private:
  int num_vars_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(int num_vars, std::vector<std::string> var_names = {});
  PolySystem(int num_vars, std::vector<Polynomial> polys, std::vector<std::string> var_names = {});

  void push_back(Polynomial p);

  int num_vars() const { return num_vars_; }
  std::size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }
  const Polynomial& operator[](std::size_t i) const { return polys_[i]; }
  const std::vector<Polynomial>& polys() const { return polys_; }
  auto begin() const { return polys_.begin(); }
  auto end() const { return polys_.end(); }

  const std::vector<std::string>& var_names() const { return var_names_; }
  std::vector<int> degrees() const;
  int max_degree() const;

  Eigen::VectorXcd evaluate(const Point& x) const;
  // k x (r+1) matrix of partials, from symbolic derivatives of the sparse terms.
  Eigen::MatrixXcd jacobian(const Point& x) const;

  // max_i |f_i(x)| / max(sum_a |c_a x^a|, 1e-8 ||c||) at x scaled to unit norm. Scale-free
  // vanishing test.
  double relative_residual(const Point& x) const;

 private:
  int num_vars_ = 0;
  std::vector<Polynomial> polys_;
  std::vector<std::string> var_names_;
};

Complex evaluate(const Polynomial& p, const Point& x);
Eigen::MatrixXcd jacobian(const PolySystem& sys, const Point& x);

// Dense random form of the given degree with coefficients on the unit circle.
Polynomial random_form(int num_vars, int degree, Rng& rng);

// sum_j q_j F_j with q_j dense random forms of degree target_degree - deg F_j.
// Generators of degree above target_degree are skipped; if none remain, InputError.
Polynomial random_ideal_element(const PolySystem& gens, int target_degree, Rng& rng);

// Canonical text format:
//   vars: z0 z1 ... zr
//   (<re>,<im>)*z0^a0*...*zr^ar + ...     (one polynomial per line, '#' comments)
PolySystem parse_system(std::string_view text);
std::string serialize_system(const PolySystem& sys);

std::vector<std::string> default_var_names(int num_vars);

}  // namespace chernum
