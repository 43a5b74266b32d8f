#include "specker/funalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace specker {

struct RuleSource {
    std::function<BigInt(const BigInt&)> fn;
};
struct TableSource {
    Scale values;
};
struct StepSource {
    StepFunction f;
};

struct FuncExpr::Node {
    Op op = Op::Seed;
    std::string name;
    std::variant<std::monostate, RuleSource, TableSource, StepSource> source;
    FuncExpr a, b;
    BigInt c;
    Shape shape;
    std::vector<BigInt> breaks{BigInt(0)};
    std::size_t size = 1;
    std::size_t depth = 0;
};

namespace {

Kind abs_kind(const Shape& s) {
    switch (s.kind) {
    case Kind::Const: return Kind::Const;
    case Kind::Inc:
        if (s.sign == Sign::NonNeg) return Kind::Inc;
        if (s.sign == Sign::NonPos) return Kind::Dec;
        return Kind::Mixed;
    case Kind::Dec:
        if (s.sign == Sign::NonNeg) return Kind::Dec;
        if (s.sign == Sign::NonPos) return Kind::Inc;
        return Kind::Mixed;
    default: return Kind::Mixed;
    }
}

Kind join_kind(Kind x, Kind y) {
    if (x == Kind::Const) return y;
    if (y == Kind::Const) return x;
    if (x == y) return x;
    return Kind::Mixed;
}

Sign sum_sign(Sign x, Sign y) { return x == y ? x : Sign::Any; }

Sign flip(Sign s) {
    if (s == Sign::NonNeg) return Sign::NonPos;
    if (s == Sign::NonPos) return Sign::NonNeg;
    return Sign::Any;
}

Kind flip(Kind k) {
    if (k == Kind::Inc) return Kind::Dec;
    if (k == Kind::Dec) return Kind::Inc;
    return k;
}

BigInt babs(const BigInt& x) { return abs(x); }

// Piece index of n within a sorted break list starting at 0.
std::size_t segment_of(const std::vector<BigInt>& breaks, const BigInt& n) {
    auto it = std::upper_bound(breaks.begin(), breaks.end(), n);
    return static_cast<std::size_t>(it - breaks.begin()) - 1;
}

}  // namespace

FuncExpr FuncExpr::rule(std::string name, std::function<BigInt(const BigInt&)> fn, Shape shape) {
    auto n = std::make_shared<Node>();
    n->name = std::move(name);
    n->source = RuleSource{std::move(fn)};
    n->shape = shape;
    return FuncExpr(std::move(n));
}

FuncExpr FuncExpr::table(std::string name, Scale values, Shape shape) {
    auto n = std::make_shared<Node>();
    n->name = std::move(name);
    n->source = TableSource{std::move(values)};
    n->shape = shape;
    return FuncExpr(std::move(n));
}

FuncExpr FuncExpr::step(std::string name, StepFunction f) {
    if (f.dim() != 1) throw std::invalid_argument("step seed must be scalar");
    auto n = std::make_shared<Node>();
    n->name = std::move(name);
    bool nonneg = true, nonpos = true;
    for (const auto& v : f.values()) {
        if (v[0] < 0) nonneg = false;
        if (v[0] > 0) nonpos = false;
    }
    n->shape = {Kind::Const, nonneg ? Sign::NonNeg : nonpos ? Sign::NonPos : Sign::Any};
    n->breaks = f.breaks();
    n->source = StepSource{std::move(f)};
    return FuncExpr(std::move(n));
}

FuncExpr FuncExpr::points(std::string name, const std::vector<long>& values) {
    std::vector<IntVector> vs;
    vs.reserve(values.size());
    for (long v : values) vs.push_back(IntVector{v});
    return step(std::move(name), StepFunction::from_points(vs).simplified());
}

Op FuncExpr::op() const { return node_->op; }
const std::string& FuncExpr::name() const { return node_->name; }
const BigInt& FuncExpr::threshold() const { return node_->c; }
const FuncExpr& FuncExpr::left() const { return node_->a; }
const FuncExpr& FuncExpr::right() const { return node_->b; }
const Shape& FuncExpr::shape() const { return node_->shape; }
std::size_t FuncExpr::size() const { return node_->size; }
std::size_t FuncExpr::depth() const { return node_->depth; }
const std::vector<BigInt>& FuncExpr::breaks() const { return node_->breaks; }

std::string FuncExpr::str() const {
    const Node& n = *node_;
    switch (n.op) {
    case Op::Seed: return n.name;
    case Op::Hat: return "hat(" + n.a.str() + ")";
    case Op::MaxPair: return "max(" + n.a.str() + "," + n.b.str() + ")";
    case Op::ThresholdMin: return "tmin" + to_dec(n.c) + "(" + n.a.str() + ")";
    case Op::Sum: return "(" + n.a.str() + "+" + n.b.str() + ")";
    case Op::Neg: return "-" + n.a.str();
    }
    return "?";
}

FuncExpr hat(const FuncExpr& g) {
    auto n = std::make_shared<FuncExpr::Node>();
    n->op = Op::Hat;
    n->a = g;
    if (g.shape().kind == Kind::Const) {
        // Constant pieces stay constant under the running maximum.
        n->shape = {Kind::Const, Sign::NonNeg};
        n->breaks = g.breaks();
    } else {
        n->shape = {Kind::Inc, Sign::NonNeg};
    }
    n->size = g.size() + 1;
    n->depth = g.depth() + 1;
    return FuncExpr(std::move(n));
}

FuncExpr max_pair(const FuncExpr& f, const FuncExpr& g) {
    auto n = std::make_shared<FuncExpr::Node>();
    n->op = Op::MaxPair;
    n->a = f;
    n->b = g;
    n->shape = {join_kind(abs_kind(f.shape()), abs_kind(g.shape())), Sign::NonNeg};
    n->breaks = merge_breaks(f.breaks(), g.breaks());
    n->size = f.size() + g.size() + 1;
    n->depth = std::max(f.depth(), g.depth()) + 1;
    return FuncExpr(std::move(n));
}

FuncExpr threshold_min(const FuncExpr& g, const BigInt& c) {
    if (c < 1) throw std::invalid_argument("threshold constant must be positive");
    auto n = std::make_shared<FuncExpr::Node>();
    n->op = Op::ThresholdMin;
    n->a = g;
    n->c = c;
    n->shape = {Kind::Inc, Sign::NonNeg};
    n->size = g.size() + 1;
    n->depth = g.depth() + 1;
    return FuncExpr(std::move(n));
}

FuncExpr sum(const FuncExpr& f, const FuncExpr& g) {
    auto n = std::make_shared<FuncExpr::Node>();
    n->op = Op::Sum;
    n->a = f;
    n->b = g;
    n->shape = {join_kind(f.shape().kind, g.shape().kind), sum_sign(f.shape().sign, g.shape().sign)};
    n->breaks = merge_breaks(f.breaks(), g.breaks());
    n->size = f.size() + g.size() + 1;
    n->depth = std::max(f.depth(), g.depth()) + 1;
    return FuncExpr(std::move(n));
}

FuncExpr neg(const FuncExpr& g) {
    auto n = std::make_shared<FuncExpr::Node>();
    n->op = Op::Neg;
    n->a = g;
    n->shape = {flip(g.shape().kind), flip(g.shape().sign)};
    n->breaks = g.breaks();
    n->size = g.size() + 1;
    n->depth = g.depth() + 1;
    return FuncExpr(std::move(n));
}

namespace {

EvalResult eval_seed(const FuncExpr::Node& n, const BigInt& x) {
    if (auto* r = std::get_if<RuleSource>(&n.source)) return EvalResult::of(r->fn(x));
    if (auto* t = std::get_if<TableSource>(&n.source)) return t->values.at(x);
    const auto& f = std::get<StepSource>(n.source).f;
    if (x >= f.horizon()) return EvalResult::unknown(UnknownReason::BeyondHorizon);
    return EvalResult::of(f.at(x)[0]);
}

// max |g| over [lo, hi], g having shape s there.
EvalResult max_abs_on(const FuncExpr& g, Kind k, Sign s, const BigInt& lo, const BigInt& hi,
                      const EvalContext& ctx) {
    if (k == Kind::Const) {
        auto v = evaluate(g, lo, ctx);
        if (!v.known()) return v;
        return EvalResult::of(babs(*v));
    }
    bool hi_only = (k == Kind::Inc && s == Sign::NonNeg) || (k == Kind::Dec && s == Sign::NonPos);
    bool lo_only = (k == Kind::Dec && s == Sign::NonNeg) || (k == Kind::Inc && s == Sign::NonPos);
    if (hi_only || lo_only) {
        auto v = evaluate(g, hi_only ? hi : lo, ctx);
        if (!v.known()) return v;
        return EvalResult::of(babs(*v));
    }
    if (k == Kind::Inc || k == Kind::Dec) {
        auto a = evaluate(g, lo, ctx);
        if (!a.known()) return a;
        auto b = evaluate(g, hi, ctx);
        if (!b.known()) return b;
        return EvalResult::of(big_max(babs(*a), babs(*b)));
    }
    if (hi - lo >= BigInt(static_cast<unsigned long>(ctx.tmin_budget)))
        return EvalResult::unknown(UnknownReason::BudgetExhausted);
    BigInt best = 0;
    for (BigInt x = lo; x <= hi; ++x) {
        auto v = evaluate(g, x, ctx);
        if (!v.known()) return v;
        best = big_max(best, babs(*v));
    }
    return EvalResult::of(best);
}

EvalResult eval_hat(const FuncExpr& g, const BigInt& x, const EvalContext& ctx) {
    const auto& br = g.breaks();
    const Shape& s = g.shape();
    // Globally monotone children collapse to a single stretch.
    BigInt best = 0;
    for (std::size_t i = 0; i < br.size() && br[i] <= x; ++i) {
        BigInt hi = x;
        if (i + 1 < br.size() && br[i + 1] - 1 < hi) hi = br[i + 1] - 1;
        auto v = max_abs_on(g, s.kind, s.sign, br[i], hi, ctx);
        if (!v.known()) return v;
        best = big_max(best, *v);
    }
    return EvalResult::of(best);
}

EvalResult eval_tmin(const FuncExpr& g, const BigInt& c, const BigInt& x, const EvalContext& ctx) {
    const auto& br = g.breaks();
    const Shape& s = g.shape();
    std::size_t budget = ctx.tmin_budget;
    for (std::size_t i = segment_of(br, x); i < br.size(); ++i) {
        BigInt a = big_max(br[i], x);
        if (ctx.horizon && a >= *ctx.horizon) break;
        std::optional<BigInt> b;  // exclusive end of the stretch
        if (i + 1 < br.size()) b = br[i + 1];
        if (ctx.horizon && (!b || *b > *ctx.horizon)) b = *ctx.horizon;

        if (s.kind == Kind::Const) {
            auto v = evaluate(g, a, ctx);
            if (!v.known()) return v;
            // least j >= a with c(j+1) > V
            BigInt j = floor_div(*v, c);
            if (j < a) j = a;
            if (!b || j < *b) return EvalResult::of(j);
            continue;
        }
        if (s.kind == Kind::Dec) {
            auto below = [&](const BigInt& j, bool& ok) {
                auto v = evaluate(g, j, ctx);
                ok = v.known();
                if (!ok) return false;
                return *v < c * (j + 1);
            };
            bool ok = true;
            if (below(a, ok)) return EvalResult::of(a);
            if (!ok) return evaluate(g, a, ctx);
            BigInt lo = a, hi;  // below(lo) false, below(hi) true
            if (b) {
                BigInt last = *b - 1;
                if (!below(last, ok)) {
                    if (!ok) return evaluate(g, last, ctx);
                    continue;
                }
                hi = last;
            } else {
                BigInt stepw = 1;
                for (int rounds = 0;; ++rounds) {
                    if (rounds >= 256) return EvalResult::unknown(UnknownReason::BudgetExhausted);
                    BigInt probe = a + stepw;
                    if (below(probe, ok)) {
                        hi = probe;
                        break;
                    }
                    if (!ok) return evaluate(g, probe, ctx);
                    lo = probe;
                    stepw *= 2;
                }
            }
            while (hi - lo > 1) {
                BigInt mid = floor_div(lo + hi, 2);
                if (below(mid, ok))
                    hi = mid;
                else if (!ok)
                    return evaluate(g, mid, ctx);
                else
                    lo = mid;
            }
            return EvalResult::of(hi);
        }
        for (BigInt j = a; !b || j < *b; ++j) {
            if (budget == 0) return EvalResult::unknown(UnknownReason::BudgetExhausted);
            --budget;
            auto v = evaluate(g, j, ctx);
            if (!v.known()) return v;
            if (*v < c * (j + 1)) return EvalResult::of(j);
        }
    }
    return EvalResult::unknown(ctx.horizon ? UnknownReason::NoWitness : UnknownReason::BudgetExhausted);
}

}  // namespace

EvalResult evaluate(const FuncExpr& e, const BigInt& x, const EvalContext& ctx) {
    if (x < 0) throw std::invalid_argument("evaluate: negative argument");
    const auto& n = *e.node_;
    switch (n.op) {
    case Op::Seed: return eval_seed(n, x);
    case Op::Hat: return eval_hat(n.a, x, ctx);
    case Op::ThresholdMin: return eval_tmin(n.a, n.c, x, ctx);
    case Op::Neg: {
        auto v = evaluate(n.a, x, ctx);
        if (!v.known()) return v;
        return EvalResult::of(-*v);
    }
    case Op::Sum:
    case Op::MaxPair: {
        auto u = evaluate(n.a, x, ctx);
        if (!u.known()) return u;
        auto v = evaluate(n.b, x, ctx);
        if (!v.known()) return v;
        if (n.op == Op::Sum) return EvalResult::of(*u + *v);
        return EvalResult::of(big_max(babs(*u), babs(*v)));
    }
    }
    throw std::logic_error("evaluate: bad node");
}

namespace {

bool is_neg_of(const FuncExpr& x, const FuncExpr& y) { return x.op() == Op::Neg && x.left().same(y); }

bool redundant(const FuncExpr& e) {
    switch (e.op()) {
    case Op::Neg: return e.left().op() == Op::Neg;
    case Op::Hat: return e.left().op() == Op::Hat || e.left().op() == Op::Neg;
    case Op::MaxPair: return e.left().same(e.right());
    case Op::Sum: return is_neg_of(e.left(), e.right()) || is_neg_of(e.right(), e.left());
    default: return false;
    }
}

}  // namespace

std::vector<FuncExpr> closure_fragment(const std::vector<FuncExpr>& seeds, const FragmentConfig& cfg) {
    std::vector<FuncExpr> out;
    std::vector<std::vector<FuncExpr>> by_size(2);
    auto push = [&](const FuncExpr& e) {
        if (out.size() >= cfg.count) return false;
        if (e.depth() > cfg.depth || e.shape().kind == Kind::Mixed || redundant(e)) return true;
        out.push_back(e);
        if (by_size.size() <= e.size()) by_size.resize(e.size() + 1);
        by_size[e.size()].push_back(e);
        return true;
    };
    for (const auto& s : seeds)
        if (!push(s)) return out;

    std::size_t max_size = (std::size_t{1} << (cfg.depth + 1)) - 1;
    for (std::size_t size = 2; size <= max_size && out.size() < cfg.count; ++size) {
        if (by_size.size() <= size) by_size.resize(size + 1);
        for (std::size_t ls = 1; ls + 1 < size; ++ls) {
            std::size_t rs = size - 1 - ls;
            if (rs < ls) break;
            auto left = by_size[ls];
            auto right = by_size[rs];
            for (std::size_t i = 0; i < left.size(); ++i)
                for (std::size_t j = (ls == rs ? i : 0); j < right.size(); ++j)
                    if (!push(sum(left[i], right[j]))) return out;
            for (std::size_t i = 0; i < left.size(); ++i)
                for (std::size_t j = (ls == rs ? i : 0); j < right.size(); ++j)
                    if (!push(max_pair(left[i], right[j]))) return out;
        }
        auto prev = by_size[size - 1];
        for (const auto& e : prev) {
            if (!push(hat(e)) || !push(neg(e))) return out;
            for (long c : cfg.tmin_thresholds)
                if (!push(threshold_min(e, BigInt(c)))) return out;
        }
    }
    return out;
}

SeedFn diagonal_view(const FuncExpr& e, const EvalContext& ctx) {
    FuncExpr h = e.op() == Op::Hat ? e : hat(e);
    return [h, ctx](const BigInt& x) { return evaluate(h, x, ctx); };
}

}  // namespace specker
