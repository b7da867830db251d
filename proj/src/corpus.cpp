#include "chernum/corpus.hpp"

#include <fstream>
#include <sstream>

#include "chernum/errors.hpp"

namespace chernum::corpus {

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

Polynomial random_linear_form(int n, Rng& rng) { return random_form(n, 1, rng); }

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Laplace expansion along the first row over the selected columns.
Polynomial determinant(const PolyMatrix& m, std::vector<int> rows, std::vector<int> cols) {
  const int n = m[0][0].num_vars();
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  const int top = rows.front();
  std::vector<int> rest(rows.begin() + 1, rows.end());
  Polynomial sum(n, static_cast<int>(rows.size()) * m[0][0].degree());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<int> minor_cols;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != k) minor_cols.push_back(cols[j]);
    Polynomial term = m[top][cols[k]] * determinant(m, rest, minor_cols);
    sum = (k % 2 == 0) ? sum + term : sum - term;
  }
  return sum;
}

PolyMatrix random_linear_matrix(int rows, int cols, int n, Rng& rng) {
  PolyMatrix m(rows);
  for (auto& row : m)
    for (int j = 0; j < cols; ++j) row.push_back(random_linear_form(n, rng));
  return m;
}

// Full rank of the numeric matrix at `samples` random points.
bool full_rank_at_samples(const PolyMatrix& m, int samples, Rng& rng) {
  const int n = m[0][0].num_vars();
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  for (int s = 0; s < samples; ++s) {
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = unit_circle(rng);
    Eigen::MatrixXcd a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = m[i][j].evaluate(x);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    if (sv[std::min(rows, cols) - 1] <= 1e-8 * sv[0]) return false;
  }
  return true;
}

std::vector<int> iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Maximal minors (deleting one column at a time) of a random rows x (rows+1) matrix.
std::vector<Polynomial> maximal_minors(int rows, int n, Rng& rng) {
  for (;;) {
    const PolyMatrix m = random_linear_matrix(rows, rows + 1, n, rng);
    if (!full_rank_at_samples(m, 20, rng)) continue;
    std::vector<Polynomial> minors;
    for (int drop = 0; drop <= rows; ++drop) {
      std::vector<int> cols;
      for (int j = 0; j <= rows; ++j)
        if (j != drop) cols.push_back(j);
      minors.push_back(determinant(m, iota(rows), cols));
    }
    return minors;
  }
}

}  // namespace

const std::vector<ExampleSpec>& inventory() {
  static const std::vector<ExampleSpec> specs = {
      {"twisted_cubic", 3, 1, std::vector<std::int64_t>{3, 2}, 0},
      {"determinantal_threefold", 5, 3, std::vector<std::int64_t>{10, 0, 45, -46}, 20090611},
      {"segre_section", 7, 3, std::vector<std::int64_t>{4, 10, 10, 6}, 20090612},
      {"conic", 3, 1, std::vector<std::int64_t>{2, 2}, 0},
      {"minors_curve", 4, 1, std::nullopt, 20090613},
  };
  return specs;
}

const ExampleSpec& spec(std::string_view name) {
  for (const auto& s : inventory())
    if (s.name == name) return s;
  throw InputError("unknown example '" + std::string(name) + "'");
}

PolySystem twisted_cubic() {
  const int n = 4;
  const auto w = var(n, 0), x = var(n, 1), y = var(n, 2), z = var(n, 3);
  return PolySystem(n, {x * x - w * y, y * y - x * z, w * z - x * y}, {"w", "x", "y", "z"});
}

PolySystem determinantal_threefold(Rng& rng) { return PolySystem(6, maximal_minors(4, 6, rng)); }

PolySystem segre_section(Rng& rng) {
  const int n = 8;
  PolySystem sys(n);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) sys.push_back(var(n, i) * var(n, 4 + j) - var(n, j) * var(n, 4 + i));
  sys.push_back(random_linear_form(n, rng));
  return sys;
}

NegativeCase conic_negative_case() {
  const int n = 4;
  const auto z0 = var(n, 0), z1 = var(n, 1), z2 = var(n, 2), z3 = var(n, 3);
  const Polynomial plane = z0 + z1 * Complex(2.0) - z2 + z3 * Complex(3.0);
  const Polynomial quadric = z0 * z1 - z2 * z2 + z3 * z3 + z1 * z3;
  return {PolySystem(n, {plane, quadric}), {3, 1, 1}};
}

NegativeCase minors_curve_negative_case(Rng& rng) {
  const int n = 5;
  PolySystem sys(n);
  sys.push_back(random_form(n, 3, rng));
  const PolyMatrix m = [&] {
    for (;;) {
      auto a = random_linear_matrix(2, 3, n, rng);
      if (full_rank_at_samples(a, 20, rng)) return a;
    }
  }();
  for (int drop = 2; drop >= 0; --drop) {
    std::vector<int> cols;
    for (int j = 0; j < 3; ++j)
      if (j != drop) cols.push_back(j);
    sys.push_back(determinant(m, {0, 1}, cols));
  }
  return {sys, {4, 2, 2, 2}};
}

PolySystem build(std::string_view name, std::uint64_t seed) {
  Rng rng(seed);
  if (name == "twisted_cubic") return twisted_cubic();
  if (name == "determinantal_threefold") return determinantal_threefold(rng);
  if (name == "segre_section") return segre_section(rng);
  if (name == "conic") return conic_negative_case().ideal;
  if (name == "minors_curve") return minors_curve_negative_case(rng).ideal;
  throw InputError("unknown example '" + std::string(name) + "'");
}

PolySystem build(std::string_view name) { return build(name, spec(name).seed); }

PolySystem load_ideal(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::map<int, int> degree_histogram(const PolySystem& sys) {
  std::map<int, int> h;
  for (int d : sys.degrees()) ++h[d];
  return h;
}

}  // namespace chernum::corpus
