#include "numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "error.hpp"
#include "rng.hpp"

namespace qrl {

double SplitMix64::next_gaussian() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    Rational r;
    try {
        if (slash == std::string::npos) {
            // Accept plain decimals with short expansions, e.g. "0.2" -> 1/5.
            if (text.find('.') == std::string::npos) {
                r.num = std::stoll(text);
                r.den = 1;
            } else {
                std::string head = text.substr(0, text.find('.'));
                std::string frac = text.substr(text.find('.') + 1);
                if (frac.size() > 9) throw_parse("rational: decimal expansion too long: " + text);
                std::int64_t den = 1;
                for (size_t i = 0; i < frac.size(); ++i) den *= 10;
                r.num = std::stoll(head.empty() ? "0" : head) * den + std::stoll(frac);
                r.den = den;
            }
        } else {
            r.num = std::stoll(text.substr(0, slash));
            r.den = std::stoll(text.substr(slash + 1));
        }
    } catch (const std::exception&) {
        throw_parse("rational: cannot parse '" + text + "'");
    }
    if (r.den <= 0) throw_parse("rational: nonpositive denominator in '" + text + "'");
    return r;
}

namespace {

// Minimal big unsigned: base 2^32 limbs, little-endian. Only what the
// power comparison needs.
struct BigU {
    std::vector<std::uint32_t> limb;

    static BigU from_u64(std::uint64_t v) {
        BigU b;
        b.limb = {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v >> 32)};
        b.trim();
        return b;
    }
    void trim() {
        while (!limb.empty() && limb.back() == 0) limb.pop_back();
    }
    void mul_u64(std::uint64_t m) {
        std::uint64_t lo = m & 0xffffffffULL, hi = m >> 32;
        BigU a = *this, b = *this;
        a.mul_small(static_cast<std::uint32_t>(lo));
        if (hi) {
            b.mul_small(static_cast<std::uint32_t>(hi));
            b.shift_limbs(1);
            a.add(b);
        }
        *this = a;
    }
    void mul_small(std::uint32_t m) {
        std::uint64_t carry = 0;
        for (auto& l : limb) {
            std::uint64_t cur = static_cast<std::uint64_t>(l) * m + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limb.push_back(static_cast<std::uint32_t>(carry));
        trim();
    }
    void shift_limbs(int k) { limb.insert(limb.begin(), static_cast<size_t>(k), 0u); }
    void add(const BigU& o) {
        limb.resize(std::max(limb.size(), o.limb.size()), 0u);
        std::uint64_t carry = 0;
        for (size_t i = 0; i < limb.size(); ++i) {
            std::uint64_t cur = carry + limb[i] + (i < o.limb.size() ? o.limb[i] : 0u);
            limb[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limb.push_back(static_cast<std::uint32_t>(carry));
    }
    static BigU pow2(std::int64_t e) {
        BigU b;
        b.limb.assign(static_cast<size_t>(e / 32) + 1, 0u);
        b.limb.back() = 1u << (e % 32);
        return b;
    }
    static BigU pow_u64(std::uint64_t base, std::int64_t e) {
        BigU r = from_u64(1);
        for (std::int64_t i = 0; i < e; ++i) r.mul_u64(base);
        return r;
    }
    // -1, 0, 1
    int cmp(const BigU& o) const {
        if (limb.size() != o.limb.size()) return limb.size() < o.limb.size() ? -1 : 1;
        for (size_t i = limb.size(); i-- > 0;) {
            if (limb[i] != o.limb[i]) return limb[i] < o.limb[i] ? -1 : 1;
        }
        return 0;
    }
};

}  // namespace

std::int64_t ceil_pow2_rational(std::int64_t a, std::int64_t b) {
    if (b <= 0) throw_domain("ceil_pow2_rational: denominator must be positive");
    if (a < 0) return 1;  // 2^(a/b) <= 1
    if (a % b == 0) return static_cast<std::int64_t>(1) << (a / b);
    std::int64_t q = a / b;
    if (q >= 62) throw_capacity("ceil_pow2_rational: result exceeds 2^62");
    // Answer lies in (2^q, 2^(q+1)]; binary search k against k^b >= 2^a.
    std::int64_t lo = (static_cast<std::int64_t>(1) << q) + 1;
    std::int64_t hi = static_cast<std::int64_t>(1) << (q + 1);
    BigU target = BigU::pow2(a);
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (BigU::pow_u64(static_cast<std::uint64_t>(mid), b).cmp(target) >= 0)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_u64_hex(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

}  // namespace qrl
