#pragma once

// Lazily evaluated functions N -> Z closed under running maximum of absolute
// values, pointwise max of absolute values, threshold-min, sum and negation.
//
// Every expression carries a static shape: on each piece of its
// segmentation (the merged breakpoints of its step-function leaves) it is
// constant, nondecreasing, nonincreasing, or of unknown shape.  Running
// maxima and threshold-mins use the shape to avoid scanning: the maximum of
// |g| over a monotone stretch sits at an endpoint, and on a constant or
// nonincreasing stretch g(j) - c(j+1) is strictly decreasing.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specker/bigint.hpp"
#include "specker/eval_result.hpp"
#include "specker/scales.hpp"
#include "specker/step_function.hpp"

namespace specker {

enum class Op { Seed, Hat, MaxPair, ThresholdMin, Sum, Neg };
enum class Kind { Const, Inc, Dec, Mixed };
enum class Sign { NonNeg, NonPos, Any };

struct Shape {
    Kind kind = Kind::Mixed;
    Sign sign = Sign::Any;
    friend bool operator==(const Shape&, const Shape&) = default;
};

struct EvalContext {
    // Threshold-min searches stop here; nullopt means unbounded.
    std::optional<BigInt> horizon;
    // Points scanned by threshold-min on stretches of unknown monotonicity.
    std::size_t tmin_budget = 256;
};

class FuncExpr {
public:
    struct Node;

    FuncExpr() = default;

    // Nondecreasing rule, evaluable anywhere.
    static FuncExpr rule(std::string name, std::function<BigInt(const BigInt&)> fn,
                         Shape shape = {Kind::Inc, Sign::NonNeg});
    // Table indexed by n; BeyondHorizon outside the table.
    static FuncExpr table(std::string name, Scale values, Shape shape = {Kind::Inc, Sign::NonNeg});
    // Scalar step function; BeyondHorizon at or past its horizon.
    static FuncExpr step(std::string name, StepFunction f);
    static FuncExpr points(std::string name, const std::vector<long>& values);

    Op op() const;
    const std::string& name() const;  // seeds only
    const BigInt& threshold() const;  // threshold-min only
    const FuncExpr& left() const;
    const FuncExpr& right() const;

    const Shape& shape() const;
    std::size_t size() const;
    std::size_t depth() const;
    const std::vector<BigInt>& breaks() const;
    bool valid() const { return node_ != nullptr; }
    bool same(const FuncExpr& o) const { return node_ == o.node_; }

    std::string str() const;

private:
    explicit FuncExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    friend FuncExpr hat(const FuncExpr&);
    friend FuncExpr max_pair(const FuncExpr&, const FuncExpr&);
    friend FuncExpr threshold_min(const FuncExpr&, const BigInt&);
    friend FuncExpr sum(const FuncExpr&, const FuncExpr&);
    friend FuncExpr neg(const FuncExpr&);
    friend EvalResult evaluate(const FuncExpr&, const BigInt&, const EvalContext&);

    std::shared_ptr<const Node> node_;
};

FuncExpr hat(const FuncExpr& g);
FuncExpr max_pair(const FuncExpr& f, const FuncExpr& g);
FuncExpr threshold_min(const FuncExpr& g, const BigInt& c);
FuncExpr sum(const FuncExpr& f, const FuncExpr& g);
FuncExpr neg(const FuncExpr& g);

EvalResult evaluate(const FuncExpr& e, const BigInt& n, const EvalContext& ctx = {});

struct FragmentConfig {
    std::size_t depth = 3;
    std::size_t count = 64;
    std::vector<long> tmin_thresholds = {1, 2};
};

// Breadth-first enumeration by tree size of expressions over `seeds`, up to
// the configured depth and count.  Expressions of unknown shape and trivial
// rewrites (double negation, hat of hat or of a negation, x + (-x),
// max(|x|,|x|)) are skipped.
std::vector<FuncExpr> closure_fragment(const std::vector<FuncExpr>& seeds, const FragmentConfig& cfg);

// The N -> N view consumed by the diagonal: n -> hat(e)(n).
SeedFn diagonal_view(const FuncExpr& e, const EvalContext& ctx);

}  // namespace specker
