#include "chernum/polysys.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "chernum/errors.hpp"

namespace chernum {

Monomial::Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw InputError("negative exponent in monomial");
    degree_ += e;
  }
}

Monomial Monomial::variable(int num_vars, int index) {
  std::vector<int> e(num_vars, 0);
  e.at(index) = 1;
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.num_vars() != num_vars()) throw InputError("monomial variable count mismatch");
  std::vector<int> e(exps_);
  for (int i = 0; i < num_vars(); ++i) e[i] += other.exps_[i];
  return Monomial(std::move(e));
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  return a.exponents() > b.exponents();
}

namespace {

void enumerate_degree(int var, int remaining, std::vector<int>& cur, std::vector<Monomial>& out) {
  const int n = static_cast<int>(cur.size());
  if (var == n - 1) {
    cur[var] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[var] = e;
    enumerate_degree(var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

// x_j^e for all j and 0 <= e <= max_degree.
std::vector<std::vector<Complex>> power_table(const Point& x, int max_degree) {
  std::vector<std::vector<Complex>> pw(x.size(), std::vector<Complex>(max_degree + 1));
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    pw[j][0] = 1.0;
    for (int e = 1; e <= max_degree; ++e) pw[j][e] = pw[j][e - 1] * x[j];
  }
  return pw;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int num_vars, int degree) {
  std::vector<Monomial> out;
  if (num_vars <= 0 || degree < 0) return out;
  std::vector<int> cur(num_vars, 0);
  enumerate_degree(0, degree, cur, out);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(int num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
  if (num_vars <= 0) throw InputError("polynomial needs at least one variable");
  if (degree < 0) throw InputError("negative polynomial degree");
}

Polynomial Polynomial::variable(int num_vars, int index) {
  Polynomial p(num_vars, 1);
  p.add_term(Monomial::variable(num_vars, index), 1.0);
  return p;
}

Polynomial Polynomial::constant(int num_vars, Complex value) {
  Polynomial p(num_vars, 0);
  p.add_term(Monomial::one(num_vars), value);
  return p;
}

void Polynomial::add_term(const Monomial& m, Complex c) {
  if (m.num_vars() != num_vars_) throw InputError("term has wrong number of variables");
  if (m.degree() != degree_) {
    throw InputError("term of degree " + std::to_string(m.degree()) +
                     " in homogeneous polynomial of degree " + std::to_string(degree_));
  }
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Complex Polynomial::evaluate(const Point& x) const {
  if (x.size() != num_vars_) throw InputError("point dimension does not match polynomial");
  const auto pw = power_table(x, degree_);
  Complex sum = 0.0;
  for (const auto& [m, c] : terms_) {
    Complex v = c;
    for (int j = 0; j < num_vars_; ++j) v *= pw[j][m[j]];
    sum += v;
  }
  return sum;
}

double Polynomial::evaluate_abs(const Point& x) const {
  if (x.size() != num_vars_) throw InputError("point dimension does not match polynomial");
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = std::abs(c);
    for (int j = 0; j < num_vars_; ++j) v *= std::pow(std::abs(x[j]), m[j]);
    sum += v;
  }
  return sum;
}

double Polynomial::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw InputError("derivative variable out of range");
  Polynomial d(num_vars_, std::max(0, degree_ - 1));
  if (degree_ == 0) return d;
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    std::vector<int> e = m.exponents();
    const int k = e[var]--;
    d.add_term(Monomial(std::move(e)), c * static_cast<double>(k));
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw InputError("variable count mismatch in sum");
  if (other.is_zero()) return *this;
  if (is_zero()) return other;
  if (other.degree_ != degree_) throw InputError("sum of forms of different degrees");
  Polynomial out(*this);
  for (const auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + (-other); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw InputError("variable count mismatch in product");
  Polynomial out(num_vars_, degree_ + other.degree_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial Polynomial::operator*(Complex scalar) const {
  Polynomial out(num_vars_, degree_);
  if (scalar == Complex(0.0)) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, c * scalar);
  return out;
}

Complex evaluate(const Polynomial& p, const Point& x) { return p.evaluate(x); }

// ---------------------------------------------------------------------------
// PolySystem

std::vector<std::string> default_var_names(int num_vars) {
  std::vector<std::string> names;
  for (int i = 0; i < num_vars; ++i) names.push_back("z" + std::to_string(i));
  return names;
}

PolySystem::PolySystem(int num_vars, std::vector<std::string> var_names)
    : num_vars_(num_vars), var_names_(std::move(var_names)) {
  if (num_vars <= 0) throw InputError("system needs at least one variable");
  if (var_names_.empty()) var_names_ = default_var_names(num_vars);
  if (static_cast<int>(var_names_.size()) != num_vars) throw InputError("variable name count mismatch");
}

PolySystem::PolySystem(int num_vars, std::vector<Polynomial> polys, std::vector<std::string> var_names)
    : PolySystem(num_vars, std::move(var_names)) {
  for (auto& p : polys) push_back(std::move(p));
}

void PolySystem::push_back(Polynomial p) {
  if (p.num_vars() != num_vars_) throw InputError("polynomial variable count differs from system");
  polys_.push_back(std::move(p));
}

std::vector<int> PolySystem::degrees() const {
  std::vector<int> d;
  d.reserve(polys_.size());
  for (const auto& p : polys_) d.push_back(p.degree());
  return d;
}

int PolySystem::max_degree() const {
  int d = 0;
  for (const auto& p : polys_) d = std::max(d, p.degree());
  return d;
}

Eigen::VectorXcd PolySystem::evaluate(const Point& x) const {
  if (x.size() != num_vars_) throw InputError("point dimension does not match system");
  Eigen::VectorXcd v(polys_.size());
  for (std::size_t i = 0; i < polys_.size(); ++i) v[i] = polys_[i].evaluate(x);
  return v;
}

Eigen::MatrixXcd PolySystem::jacobian(const Point& x) const {
  if (x.size() != num_vars_) throw InputError("point dimension does not match system");
  Eigen::MatrixXcd jac(polys_.size(), num_vars_);
  for (std::size_t i = 0; i < polys_.size(); ++i)
    for (int j = 0; j < num_vars_; ++j) jac(i, j) = polys_[i].derivative(j).evaluate(x);
  return jac;
}

double PolySystem::relative_residual(const Point& x) const {
  const Point u = x / x.norm();
  double worst = 0.0;
  for (const auto& p : polys_) {
    // The floor keeps forms whose every term is tiny at u (e.g. z2 near z2 = 0) from
    // reading as relative residual 1.
    const double scale = std::max(p.evaluate_abs(u), 1e-8 * p.coefficient_norm());
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(p.evaluate(u)) / scale);
  }
  return worst;
}

Eigen::MatrixXcd jacobian(const PolySystem& sys, const Point& x) { return sys.jacobian(x); }

// ---------------------------------------------------------------------------
// Randomness

Polynomial random_form(int num_vars, int degree, Rng& rng) {
  Polynomial p(num_vars, degree);
  for (const auto& m : monomials_of_degree(num_vars, degree)) p.add_term(m, unit_circle(rng));
  return p;
}

Polynomial random_ideal_element(const PolySystem& gens, int target_degree, Rng& rng) {
  if (gens.empty()) throw InputError("random ideal element needs at least one generator");
  Polynomial sum(gens.num_vars(), target_degree);
  bool any = false;
  for (const auto& f : gens) {
    if (f.degree() > target_degree) continue;
    sum = sum + random_form(gens.num_vars(), target_degree - f.degree(), rng) * f;
    any = true;
  }
  if (!any) {
    throw InputError("no generator of degree <= " + std::to_string(target_degree) +
                     "; cannot build an ideal element of that degree");
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, const std::vector<std::string>& names, int line_no)
      : s_(line), names_(names), line_no_(line_no) {}

  Polynomial parse() {
    struct Term {
      Monomial m;
      Complex c;
      std::string text;
    };
    std::vector<Term> terms;
    skip_ws();
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1.0 : 1.0;
    while (true) {
      skip_ws();
      const std::size_t start = pos_;
      auto [m, c] = parse_term();
      terms.push_back({std::move(m), c * sign, std::string(s_.substr(start, pos_ - start))});
      skip_ws();
      if (at_end()) break;
      const char op = get();
      if (op != '+' && op != '-') fail("expected '+' or '-' between terms");
      sign = (op == '-') ? -1.0 : 1.0;
    }
    const int degree = terms.front().m.degree();
    Polynomial p(static_cast<int>(names_.size()), degree);
    for (const auto& t : terms) {
      if (t.m.degree() != degree) {
        fail("non-homogeneous polynomial: term '" + trim(t.text) + "' has degree " +
             std::to_string(t.m.degree()) + ", expected " + std::to_string(degree));
      }
      p.add_term(t.m, t.c);
    }
    if (p.is_zero()) fail("zero polynomial among generators");
    return p;
  }

 private:
  std::pair<Monomial, Complex> parse_term() {
    std::vector<int> exps(names_.size(), 0);
    Complex coef = 1.0;
    while (true) {
      skip_ws();
      const char c = peek();
      if (c == '(') {
        coef *= parse_complex();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coef *= parse_number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::string name = parse_ident();
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) fail("unknown variable '" + name + "'");
        int e = 1;
        skip_ws();
        if (peek() == '^') {
          get();
          skip_ws();
          e = parse_int();
        }
        exps[it - names_.begin()] += e;
      } else {
        fail(at_end() ? "unexpected end of line" : std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (peek() != '*') break;
      get();
    }
    return {Monomial(std::move(exps)), coef};
  }

  Complex parse_complex() {
    get();  // '('
    skip_ws();
    const double re = parse_signed_number();
    skip_ws();
    if (get() != ',') fail("expected ',' in complex coefficient");
    skip_ws();
    const double im = parse_signed_number();
    skip_ws();
    if (get() != ')') fail("expected ')' after complex coefficient");
    return {re, im};
  }

  double parse_signed_number() {
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') sign = (get() == '-') ? -1.0 : 1.0;
    return sign * parse_number();
  }

  double parse_number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  int parse_int() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    int v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first || v < 0) fail("malformed exponent");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  std::string parse_ident() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  static std::string trim(std::string t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    return t;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return at_end() ? '\0' : s_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("line " + std::to_string(line_no_) + ", column " + std::to_string(pos_ + 1) + ": " +
                     what);
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  int line_no_;
  std::size_t pos_ = 0;
};

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PolySystem parse_system(std::string_view text) {
  std::vector<std::string> names;
  std::vector<Polynomial> polys;
  bool have_vars = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (!have_vars) {
      if (!line.starts_with("vars:")) {
        throw InputError("line " + std::to_string(line_no) + ": expected 'vars:' header");
      }
      std::istringstream in{std::string(line.substr(5))};
      for (std::string name; in >> name;) {
        if (std::find(names.begin(), names.end(), name) != names.end())
          throw InputError("duplicate variable name '" + name + "'");
        names.push_back(name);
      }
      if (names.empty()) throw InputError("'vars:' header lists no variables");
      have_vars = true;
      continue;
    }
    polys.push_back(LineParser(line, names, line_no).parse());
  }
  if (!have_vars) throw InputError("empty system file");
  if (polys.empty()) throw InputError("system file contains no polynomials");
  const int n = static_cast<int>(names.size());
  return PolySystem(n, std::move(polys), std::move(names));
}

std::string serialize_system(const PolySystem& sys) {
  std::string out = "vars:";
  for (const auto& name : sys.var_names()) out += " " + name;
  out += "\n";
  for (const auto& p : sys) {
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
      if (!first) out += " + ";
      first = false;
      out += "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
      for (int j = 0; j < m.num_vars(); ++j) {
        if (m[j] == 0) continue;
        out += "*" + sys.var_names()[j];
        if (m[j] > 1) out += "^" + std::to_string(m[j]);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace chernum
