#include "chernum/eval.hpp"

#include <algorithm>
#include <map>

#include "chernum/errors.hpp"

namespace chernum {

MonomialTable::MonomialTable(int num_vars, int max_degree)
    : num_vars_(num_vars), max_degree_(max_degree) {
  if (num_vars <= 0 || max_degree < 0) throw InputError("invalid monomial table shape");
  std::map<std::vector<int>, int> index;
  for (int d = 0; d <= max_degree; ++d) {
    degree_offset_.push_back(static_cast<int>(exps_.size()));
    for (const auto& m : monomials_of_degree(num_vars, d)) {
      const auto& e = m.exponents();
      int parent = -1;
      int var = -1;
      if (d > 0) {
        var = static_cast<int>(std::find_if(e.begin(), e.end(), [](int v) { return v > 0; }) - e.begin());
        auto pe = e;
        --pe[var];
        parent = index.at(pe);
      }
      index.emplace(e, static_cast<int>(exps_.size()));
      exps_.push_back(e);
      parent_.push_back(parent);
      var_.push_back(var);
    }
  }
  degree_offset_.push_back(static_cast<int>(exps_.size()));
}

int MonomialTable::index_of(const Monomial& m) const {
  if (m.num_vars() != num_vars_ || m.degree() > max_degree_) throw InputError("monomial outside table");
  const int lo = degree_offset_[m.degree()];
  const int hi = degree_offset_[m.degree() + 1];
  // Within a degree block entries are in graded-lex order (descending exponent vectors).
  auto first = exps_.begin() + lo;
  auto last = exps_.begin() + hi;
  auto it = std::lower_bound(first, last, m.exponents(),
                             [](const std::vector<int>& a, const std::vector<int>& b) { return a > b; });
  if (it == last || *it != m.exponents()) throw InputError("monomial lookup failed");
  return static_cast<int>(it - exps_.begin());
}

void MonomialTable::evaluate(const Point& x, std::span<Complex> out) const {
  out[0] = 1.0;
  const std::size_t n = parent_.size();
  for (std::size_t i = 1; i < n; ++i) out[i] = out[parent_[i]] * x[var_[i]];
}

CompiledSystem::CompiledSystem(const PolySystem& sys)
    : CompiledSystem(sys, std::make_shared<MonomialTable>(sys.num_vars(), sys.max_degree())) {}

CompiledSystem::CompiledSystem(const PolySystem& sys, std::shared_ptr<const MonomialTable> table)
    : num_vars_(sys.num_vars()), rows_(static_cast<int>(sys.size())), table_(std::move(table)) {
  if (table_->num_vars() != num_vars_ || table_->max_degree() < sys.max_degree())
    throw InputError("monomial table does not cover the system");
  for (int i = 0; i < rows_; ++i) {
    for (const auto& [m, c] : sys[i].terms()) {
      value_ops_.push_back({i, table_->index_of(m), c});
      for (int j = 0; j < num_vars_; ++j) {
        if (m[j] == 0) continue;
        auto e = m.exponents();
        const int k = e[j]--;
        jac_ops_.push_back({i, j, table_->index_of(Monomial(std::move(e))), c * static_cast<double>(k)});
      }
    }
  }
}

void CompiledSystem::values(std::span<const Complex> mono, Eigen::VectorXcd& f) const {
  f.setZero(rows_);
  for (const auto& op : value_ops_) f[op.row] += op.coef * mono[op.mono];
}

void CompiledSystem::jacobian(std::span<const Complex> mono, Eigen::MatrixXcd& jac) const {
  jac.setZero(rows_, num_vars_);
  for (const auto& op : jac_ops_) jac(op.row, op.col) += op.coef * mono[op.mono];
}

Eigen::VectorXcd CompiledSystem::evaluate(const Point& x) const {
  std::vector<Complex> mono(table_->size());
  table_->evaluate(x, mono);
  Eigen::VectorXcd f;
  values(mono, f);
  return f;
}

Eigen::MatrixXcd CompiledSystem::jacobian(const Point& x) const {
  std::vector<Complex> mono(table_->size());
  table_->evaluate(x, mono);
  Eigen::MatrixXcd jac;
  jacobian(mono, jac);
  return jac;
}

}  // namespace chernum
