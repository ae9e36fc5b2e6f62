#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "veccomp/errors.hpp"
#include "veccomp/rng.hpp"
#include "veccomp/types.hpp"

namespace veccomp {

// Tabulation of a finite-alphabet vector function f : prod_k {0..Q_k-1} -> R^L.
//
// Row order is lexicographic with node 1 most significant (node K varies
// fastest).  Encoders and decoders rely on this fixed order, so it is part of
// the type's contract.
template <typename Scalar = double>
struct FunctionTable {
  int K = 0;
  std::vector<int> Q;         // per-node alphabet sizes (uniform case: all equal)
  int L = 0;
  IntMatrix inputs;           // M x K; row i is the i-th input tuple
  RealMatrix<Scalar> values;  // M x L; values(i, l) = l-th output on row i

  int rows() const { return int(values.rows()); }

  bool uniform_q() const {
    for (int q : Q)
      if (q != Q.front()) return false;
    return !Q.empty();
  }

  // Offset of node k's value block inside a stacked length-sum(Q) vector.
  int block_offset(int k) const {
    int off = 0;
    for (int j = 0; j < k; ++j) off += Q[size_t(j)];
    return off;
  }

  int block_length() const { return block_offset(K); }
};

// Enumerates all input tuples in table row order and calls visit(row, tuple).
template <typename Visit>
void for_each_input(const std::vector<int>& q_list, Visit&& visit) {
  const int k = int(q_list.size());
  std::vector<int> tuple(size_t(k), 0);
  std::int64_t row = 0;
  for (;;) {
    visit(row, tuple);
    ++row;
    int pos = k - 1;
    while (pos >= 0 && ++tuple[size_t(pos)] == q_list[size_t(pos)]) {
      tuple[size_t(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

// Tabulates f over the full input domain.  f maps a std::vector<int> input
// tuple to a std::vector<Scalar> of length L.
template <typename Scalar = double, typename F>
FunctionTable<Scalar> tabulate_function(F&& f, int K, std::vector<int> q_list, int L,
                                        std::int64_t max_rows = 1000000) {
  if (K < 1) throw std::invalid_argument("tabulate_function: K must be >= 1");
  if (L < 1) throw std::invalid_argument("tabulate_function: L must be >= 1");
  if (int(q_list.size()) == 1 && K > 1) q_list.assign(size_t(K), q_list.front());
  if (int(q_list.size()) != K)
    throw std::invalid_argument("tabulate_function: need one alphabet size per node");
  std::int64_t m = 1;
  for (int q : q_list) {
    if (q < 2) throw std::invalid_argument("tabulate_function: every Q_k must be >= 2");
    m *= q;
    if (m > max_rows)
      throw std::length_error("tabulate_function: domain size " + std::to_string(m) +
                              "+ exceeds the row cap " + std::to_string(max_rows));
  }

  FunctionTable<Scalar> table;
  table.K = K;
  table.Q = q_list;
  table.L = L;
  table.inputs.resize(Eigen::Index(m), K);
  table.values.resize(Eigen::Index(m), L);
  for_each_input(q_list, [&](std::int64_t row, const std::vector<int>& tuple) {
    const std::vector<Scalar> out = f(tuple);
    if (int(out.size()) != L)
      throw std::invalid_argument("tabulate_function: callable returned " +
                                  std::to_string(out.size()) + " outputs, expected " +
                                  std::to_string(L));
    for (int k = 0; k < K; ++k) table.inputs(Eigen::Index(row), k) = tuple[size_t(k)];
    for (int l = 0; l < L; ++l) {
      if (!std::isfinite(double(out[size_t(l)])))
        throw std::domain_error("tabulate_function: non-finite output at row " +
                                std::to_string(row));
      table.values(Eigen::Index(row), l) = out[size_t(l)];
    }
  });
  return table;
}

// Named small functions used across tests and the design CLI.
// Supported names: sum, product, max, sum-of-squares.
template <typename Scalar = double>
FunctionTable<Scalar> tabulate_named(const std::string& name, int K, int Q) {
  auto reduce = [&name](const std::vector<int>& s) -> std::vector<Scalar> {
    if (name == "sum") {
      Scalar acc = 0;
      for (int v : s) acc += Scalar(v);
      return {acc};
    }
    if (name == "product") {
      Scalar acc = 1;
      for (int v : s) acc *= Scalar(v);
      return {acc};
    }
    if (name == "max") {
      Scalar acc = Scalar(s.front());
      for (int v : s) acc = std::max(acc, Scalar(v));
      return {acc};
    }
    if (name == "sum-of-squares") {
      Scalar acc = 0;
      for (int v : s) acc += Scalar(v) * Scalar(v);
      return {acc};
    }
    throw std::invalid_argument("tabulate_named: unknown function '" + name + "'");
  };
  return tabulate_function<Scalar>(reduce, K, {Q}, 1);
}

// Random integer-valued table (values uniform in {0..value_range-1}); used for
// the "random tabulated" design exercises.
template <typename Scalar = double>
FunctionTable<Scalar> tabulate_random(int K, int Q, int L, RngStream& rng,
                                      int value_range = 5) {
  auto f = [&](const std::vector<int>&) {
    std::vector<Scalar> out(static_cast<size_t>(L));
    for (auto& v : out) v = Scalar(rng.uniform_int(value_range));
    return out;
  };
  return tabulate_function<Scalar>(f, K, {Q}, L);
}

// Unordered index pairs whose l-th outputs differ, with separation weights
// gamma = |f_i - f_j|^2.  Pairs are stored with i < j in lexicographic order.
template <typename Scalar = double>
struct OmegaSet {
  int ell = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<Scalar> gammas;  // parallel to pairs, all > 0

  size_t size() const { return pairs.size(); }
};

template <typename Scalar = double>
OmegaSet<Scalar> build_omega(const FunctionTable<Scalar>& table, int ell) {
  if (ell < 0 || ell >= table.L)
    throw std::invalid_argument("build_omega: output index out of range");
  OmegaSet<Scalar> omega;
  omega.ell = ell;
  const int m = table.rows();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Scalar diff = table.values(i, ell) - table.values(j, ell);
      if (diff != Scalar(0)) {
        omega.pairs.emplace_back(i, j);
        omega.gammas.push_back(diff * diff);
      }
    }
  }
  return omega;
}

// Binary selector of a table row: one 1 inside each node's value block.
template <typename Scalar = double>
RealVector<Scalar> selector_vector(const FunctionTable<Scalar>& table, int row) {
  if (row < 0 || row >= table.rows())
    throw std::invalid_argument("selector_vector: row index out of range");
  RealVector<Scalar> a = RealVector<Scalar>::Zero(table.block_length());
  for (int k = 0; k < table.K; ++k)
    a[table.block_offset(k) + table.inputs(row, k)] = Scalar(1);
  return a;
}

// Difference vectors a_i - a_j for every pair in omega.  Entries are in
// {-1, 0, +1}, each vector sums to 0, and each node block holds at most two
// nonzeros.
template <typename Scalar = double>
std::vector<RealVector<Scalar>> alpha_vectors(const FunctionTable<Scalar>& table, int ell,
                                              const OmegaSet<Scalar>& omega) {
  if (omega.ell != ell)
    throw std::invalid_argument("alpha_vectors: omega was built for a different output");
  std::vector<RealVector<Scalar>> alphas;
  alphas.reserve(omega.pairs.size());
  for (const auto& [i, j] : omega.pairs)
    alphas.push_back(selector_vector(table, i) - selector_vector(table, j));
  return alphas;
}

// Plain-text serialization: header "K Q_1..Q_K L", then one row per input as
// "s_1 ... s_K | f_1 ... f_L" in canonical row order.  '#' starts a comment.
void write_function_table(std::ostream& os, const FunctionTable<double>& table);
FunctionTable<double> read_function_table(std::istream& is);
FunctionTable<double> read_function_table_file(const std::string& path);
void write_function_table_file(const std::string& path, const FunctionTable<double>& table);

}  // namespace veccomp
