#include "specker/step_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace specker {

StepFunction::StepFunction(std::size_t dim, std::vector<BigInt> breaks, std::vector<IntVector> values,
                           BigInt horizon)
    : dim_(dim), breaks_(std::move(breaks)), values_(std::move(values)), horizon_(std::move(horizon)) {
    if (breaks_.empty() || breaks_.front() != 0)
        throw std::invalid_argument("StepFunction: first breakpoint must be 0");
    if (breaks_.size() != values_.size())
        throw std::invalid_argument("StepFunction: one value per piece required");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i - 1] < breaks_[i])) throw std::invalid_argument("StepFunction: breakpoints must increase");
    if (!(breaks_.back() < horizon_)) throw std::invalid_argument("StepFunction: breakpoint at or past horizon");
    for (const auto& v : values_)
        if (v.size() != dim_) throw std::invalid_argument("StepFunction: value dimension mismatch");
}

StepFunction StepFunction::zero(std::size_t dim, const BigInt& horizon) {
    IntVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = 0;
    return constant(v, horizon);
}

StepFunction StepFunction::constant(const IntVector& v, const BigInt& horizon) {
    return StepFunction(v.size(), {BigInt(0)}, {v}, horizon);
}

StepFunction StepFunction::from_points(const std::vector<IntVector>& values) {
    if (values.empty()) throw std::invalid_argument("StepFunction::from_points: empty table");
    std::vector<BigInt> breaks;
    for (std::size_t i = 0; i < values.size(); ++i) breaks.emplace_back(static_cast<unsigned long>(i));
    return StepFunction(values.front().size(), std::move(breaks), values,
                        BigInt(static_cast<unsigned long>(values.size())));
}

std::size_t StepFunction::piece_of(const BigInt& p) const {
    if (p < 0 || p >= horizon_) throw std::out_of_range("StepFunction: point " + to_dec(p) + " outside horizon");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), p);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

StepFunction StepFunction::coordinate(std::size_t i) const { return coordinates(i, 1); }

StepFunction StepFunction::coordinates(std::size_t first, std::size_t count) const {
    if (first + count > dim_) throw std::out_of_range("StepFunction: coordinate out of range");
    std::vector<IntVector> vals;
    for (const auto& v : values_) {
        IntVector w(count);
        for (std::size_t j = 0; j < count; ++j) w[j] = v[first + j];
        vals.push_back(std::move(w));
    }
    return StepFunction(count, breaks_, std::move(vals), horizon_);
}

StepFunction StepFunction::apply(const IntMatrix& b) const {
    if (b.cols() != dim_) throw std::invalid_argument("StepFunction::apply: shape mismatch");
    std::vector<IntVector> vals;
    for (const auto& v : values_) vals.push_back(b * v);
    return StepFunction(b.rows(), breaks_, std::move(vals), horizon_);
}

std::vector<BigInt> merge_breaks(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    std::vector<BigInt> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StepFunction StepFunction::operator+(const StepFunction& o) const {
    if (dim_ != o.dim_ || horizon_ != o.horizon_)
        throw std::invalid_argument("StepFunction::operator+: dimension or horizon mismatch");
    std::vector<BigInt> breaks = merge_breaks(breaks_, o.breaks_);
    std::vector<IntVector> vals;
    std::size_t i = 0, j = 0;
    for (const auto& p : breaks) {
        while (i + 1 < breaks_.size() && breaks_[i + 1] <= p) ++i;
        while (j + 1 < o.breaks_.size() && o.breaks_[j + 1] <= p) ++j;
        vals.push_back(values_[i] + o.values_[j]);
    }
    return StepFunction(dim_, std::move(breaks), std::move(vals), horizon_);
}

StepFunction StepFunction::concat(const StepFunction& o) const {
    if (horizon_ != o.horizon_) throw std::invalid_argument("StepFunction::concat: horizon mismatch");
    std::vector<BigInt> breaks = merge_breaks(breaks_, o.breaks_);
    std::vector<IntVector> vals;
    std::size_t i = 0, j = 0;
    for (const auto& p : breaks) {
        while (i + 1 < breaks_.size() && breaks_[i + 1] <= p) ++i;
        while (j + 1 < o.breaks_.size() && o.breaks_[j + 1] <= p) ++j;
        std::vector<BigInt> e = values_[i].entries();
        e.insert(e.end(), o.values_[j].entries().begin(), o.values_[j].entries().end());
        vals.emplace_back(std::move(e));
    }
    return StepFunction(dim_ + o.dim_, std::move(breaks), std::move(vals), horizon_);
}

StepFunction StepFunction::hat() const {
    std::vector<IntVector> vals;
    IntVector run(dim_);
    for (std::size_t c = 0; c < dim_; ++c) run[c] = 0;
    for (const auto& v : values_) {
        for (std::size_t c = 0; c < dim_; ++c)
            if (abs(v[c]) > run[c]) run[c] = abs(v[c]);
        vals.push_back(run);
    }
    return StepFunction(dim_, breaks_, std::move(vals), horizon_);
}

StepFunction StepFunction::sup_norm() const {
    std::vector<IntVector> vals;
    for (const auto& v : values_) vals.push_back(IntVector(std::vector<BigInt>{v.sup_norm()}));
    return StepFunction(1, breaks_, std::move(vals), horizon_);
}

StepFunction StepFunction::simplified() const {
    std::vector<BigInt> breaks{breaks_.front()};
    std::vector<IntVector> vals{values_.front()};
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
        if (values_[i] == vals.back()) continue;
        breaks.push_back(breaks_[i]);
        vals.push_back(values_[i]);
    }
    return StepFunction(dim_, std::move(breaks), std::move(vals), horizon_);
}

void IntervalSet::add(const BigInt& lo, const BigInt& hi) {
    if (!(lo < hi)) return;
    Interval in{lo, hi};
    std::vector<Interval> out;
    bool placed = false;
    for (auto& p : parts_) {
        if (p.hi < in.lo) {
            out.push_back(p);
        } else if (in.hi < p.lo) {
            if (!placed) {
                out.push_back(in);
                placed = true;
            }
            out.push_back(p);
        } else {
            in.lo = big_min(in.lo, p.lo);
            in.hi = big_max(in.hi, p.hi);
        }
    }
    if (!placed) out.push_back(in);
    parts_ = std::move(out);
}

bool IntervalSet::contains(const BigInt& x) const {
    for (const auto& p : parts_)
        if (p.lo <= x && x < p.hi) return true;
    return false;
}

BigInt IntervalSet::count() const {
    BigInt n = 0;
    for (const auto& p : parts_) n += p.hi - p.lo;
    return n;
}

BigInt IntervalSet::count_at_least(const BigInt& x) const {
    BigInt n = 0;
    for (const auto& p : parts_)
        if (p.hi > x) n += p.hi - big_max(p.lo, x);
    return n;
}

std::optional<BigInt> IntervalSet::first_in(const BigInt& lo, const BigInt& hi) const {
    for (const auto& p : parts_) {
        BigInt a = big_max(p.lo, lo);
        BigInt b = big_min(p.hi, hi);
        if (a < b) return a;
    }
    return std::nullopt;
}

std::vector<BigInt> IntervalSet::first_elements(const BigInt& from, std::size_t n) const {
    std::vector<BigInt> out;
    for (const auto& p : parts_) {
        for (BigInt x = big_max(p.lo, from); x < p.hi && out.size() < n; ++x) out.push_back(x);
        if (out.size() >= n) break;
    }
    return out;
}

}  // namespace specker
