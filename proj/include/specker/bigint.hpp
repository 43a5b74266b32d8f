#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace specker {

using BigInt = mpz_class;

inline std::string to_dec(const BigInt& x) { return x.get_str(10); }

inline BigInt from_dec(std::string_view s) {
    BigInt r;
    if (s.empty() || r.set_str(std::string(s), 10) != 0)
        throw std::invalid_argument("not a decimal integer: '" + std::string(s) + "'");
    return r;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt big_max(const BigInt& a, const BigInt& b) { return a < b ? b : a; }
inline BigInt big_min(const BigInt& a, const BigInt& b) { return b < a ? b : a; }

// Number of bits of |x|; 0 for x == 0.
inline std::size_t bit_length(const BigInt& x) {
    return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

}  // namespace specker
