#pragma once

#include <memory>
#include <span>
#include <vector>

#include "chernum/polysys.hpp"

namespace chernum {

// Every monomial of degree <= max_degree in num_vars variables, each reachable from a parent
// by one multiplication. Evaluating the table costs one complex multiply per entry.
class MonomialTable {
 public:
  MonomialTable(int num_vars, int max_degree);

  int num_vars() const { return num_vars_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return parent_.size(); }

  // Position of m in the table; m must have degree <= max_degree().
  int index_of(const Monomial& m) const;

  void evaluate(const Point& x, std::span<Complex> out) const;

 private:
  int num_vars_;
  int max_degree_;
  std::vector<int> parent_;
  std::vector<int> var_;
  std::vector<int> degree_offset_;  // first index of each degree block
  std::vector<std::vector<int>> exps_;
};

// Flattened evaluation plan for a polynomial system: values and symbolic Jacobian entries as
// coefficient * monomial-table-entry products. Used by the tracker's inner loop.
class CompiledSystem {
 public:
  CompiledSystem(const PolySystem& sys, std::shared_ptr<const MonomialTable> table);
  explicit CompiledSystem(const PolySystem& sys);

  int num_vars() const { return num_vars_; }
  int size() const { return rows_; }
  const MonomialTable& table() const { return *table_; }

  // Evaluate from precomputed monomial values (table().evaluate(x, mono)).
  void values(std::span<const Complex> mono, Eigen::VectorXcd& f) const;
  void jacobian(std::span<const Complex> mono, Eigen::MatrixXcd& jac) const;

  // Convenience wrappers that evaluate the table themselves.
  Eigen::VectorXcd evaluate(const Point& x) const;
  Eigen::MatrixXcd jacobian(const Point& x) const;

 private:
  struct ValueOp {
    int row;
    int mono;
    Complex coef;
  };
  struct JacOp {
    int row;
    int col;
    int mono;
    Complex coef;
  };

  int num_vars_;
  int rows_;
  std::shared_ptr<const MonomialTable> table_;
  std::vector<ValueOp> value_ops_;
  std::vector<JacOp> jac_ops_;
};

}  // namespace chernum
