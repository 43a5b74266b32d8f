#pragma once

// Exact integer linear algebra: integer kernel lattices and the minimal
// sup-norm solution functional used to build the generators.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specker/bigint.hpp"

namespace specker {

class IntVector {
public:
    IntVector() = default;
    explicit IntVector(std::size_t n) : entries_(n) {}
    explicit IntVector(std::vector<BigInt> entries) : entries_(std::move(entries)) {}
    IntVector(std::initializer_list<long> xs);

    std::size_t size() const { return entries_.size(); }
    const BigInt& operator[](std::size_t i) const { return entries_[i]; }
    BigInt& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<BigInt>& entries() const { return entries_; }

    BigInt sup_norm() const;
    bool is_zero() const;

    friend bool operator==(const IntVector& a, const IntVector& b) { return a.entries_ == b.entries_; }
    // Lexicographic order on the entry tuple.
    friend std::strong_ordering operator<=>(const IntVector& a, const IntVector& b);

    std::string str() const;

private:
    std::vector<BigInt> entries_;
};

IntVector operator+(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a);
IntVector operator*(const BigInt& s, const IntVector& v);

// (norm, lexicographic) order used for tie-breaking minimal solutions.
bool norm_lex_less(const IntVector& a, const IntVector& b);

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const BigInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    BigInt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const std::vector<BigInt>& entries() const { return entries_; }

    IntVector operator*(const IntVector& v) const;
    bool is_zero() const;
    // Largest absolute value of an entry.
    BigInt max_abs() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

    std::string str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<BigInt> entries_;
};

struct KernelBasis {
    IntMatrix matrix;
    std::vector<IntVector> basis;

    std::size_t rank() const { return basis.size(); }
    // Basis vector of smallest sup norm (first one on ties).
    const IntVector& shortest() const;
};

class NoNonzeroKernel : public std::domain_error {
public:
    NoNonzeroKernel() : std::domain_error("matrix has no nonzero integer kernel vector") {}
};

// Lattice basis of {v in Z^cols : A v = 0}, computed by unimodular column
// reduction, so the basis generates the full kernel lattice.
KernelBasis kernel_basis(const IntMatrix& a);

// Nonzero v with A v = 0 and ||v|| >= max(threshold, 1) of minimal sup norm;
// ties go to the lexicographically smallest entry tuple.
IntVector min_solution(const IntMatrix& a, const BigInt& threshold);
IntVector min_solution(const KernelBasis& kb, const BigInt& threshold);

// Exhaustive search over ||v|| <= box in (norm, lex) order.
std::optional<IntVector> brute_min_solution(const IntMatrix& a, const BigInt& threshold,
                                            const BigInt& box);

// One exhaustive pass answering several thresholds at once; result[i] is what
// brute_min_solution(a, thresholds[i], box) returns.  Requires small entries
// (machine-word fast path); throws std::out_of_range otherwise.
std::vector<std::optional<IntVector>> brute_min_solutions(const IntMatrix& a,
                                                          std::span<const long> thresholds,
                                                          long box);

// Smallest box that provably contains a feasible point: the least multiple of
// the shortest kernel-basis vector's norm that reaches max(threshold, 1).
BigInt feasibility_box(const KernelBasis& kb, const BigInt& threshold);

}  // namespace specker
