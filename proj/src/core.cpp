// SPDX-License-Identifier: Apache-2.0
#include "core.hpp"

#include "errors.hpp"

#include <bit>
#include <sstream>

namespace semo {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

} // namespace

Bitstring::Bitstring(std::size_t n) : size_(n), words_(word_count(n), 0)
{
    if (n == 0) {
        throw UsageError("bitstring length must be at least 1");
    }
}

Bitstring Bitstring::ones(std::size_t n)
{
    Bitstring x(n);
    for (auto& w : x.words_) {
        w = ~std::uint64_t{0};
    }
    if (const auto tail = n % kWordBits; tail != 0) {
        x.words_.back() = (std::uint64_t{1} << tail) - 1;
    }
    x.ones_ = n;
    return x;
}

Bitstring Bitstring::random(std::size_t n, Rng& rng)
{
    Bitstring x(n);
    std::size_t ones = 0;
    for (auto& w : x.words_) {
        w = rng.next_u64();
    }
    if (const auto tail = n % kWordBits; tail != 0) {
        x.words_.back() &= (std::uint64_t{1} << tail) - 1;
    }
    for (const auto w : x.words_) {
        ones += static_cast<std::size_t>(std::popcount(w));
    }
    x.ones_ = ones;
    return x;
}

Bitstring Bitstring::parse(std::string_view text)
{
    Bitstring x(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            x.flip_in_place(i);
        } else if (text[i] != '0') {
            throw UsageError("bitstring character at position " + std::to_string(i) +
                             " is not '0' or '1'");
        }
    }
    return x;
}

bool Bitstring::test(std::size_t pos) const
{
    if (pos >= size_) {
        throw UsageError("bit position out of range");
    }
    return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
}

void Bitstring::flip_in_place(std::size_t pos)
{
    auto& w = words_[pos / kWordBits];
    const auto mask = std::uint64_t{1} << (pos % kWordBits);
    if (w & mask) {
        --ones_;
    } else {
        ++ones_;
    }
    w ^= mask;
}

Bitstring Bitstring::flipped(std::size_t pos) const
{
    if (pos >= size_) {
        throw UsageError("bit position out of range");
    }
    Bitstring copy = *this;
    copy.flip_in_place(pos);
    return copy;
}

std::string Bitstring::to_string() const
{
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if ((words_[i / kWordBits] >> (i % kWordBits)) & 1U) {
            s[i] = '1';
        }
    }
    return s;
}

// Lexicographic on the character form, position 0 most significant.
std::strong_ordering operator<=>(const Bitstring& a, const Bitstring& b)
{
    if (auto c = a.size_ <=> b.size_; c != 0) {
        return c;
    }
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
        const auto diff = a.words_[i] ^ b.words_[i];
        if (diff != 0) {
            const auto low = diff & (~diff + 1);
            return (a.words_[i] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

std::string ObjectiveVector::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) {
            os << ',';
        }
        os << values_[i];
    }
    os << ')';
    return os.str();
}

std::size_t count_ones(const Bitstring& x) noexcept { return x.count_ones(); }

ObjectiveVector one_min_max(const Bitstring& x)
{
    return one_min_max_value(static_cast<std::int64_t>(x.count_ones()), x.size());
}

ObjectiveVector one_min_max_value(std::int64_t ones, std::size_t n)
{
    return ObjectiveVector{ones, static_cast<std::int64_t>(n) - ones};
}

bool weakly_dominates(const ObjectiveVector& u, const ObjectiveVector& v)
{
    if (u.dimension() != v.dimension()) {
        throw UsageError("objective vectors differ in dimension (" +
                         std::to_string(u.dimension()) + " vs " + std::to_string(v.dimension()) + ")");
    }
    for (std::size_t i = 0; i < u.dimension(); ++i) {
        if (u[i] < v[i]) {
            return false;
        }
    }
    return true;
}

bool strictly_dominates(const ObjectiveVector& u, const ObjectiveVector& v)
{
    return weakly_dominates(u, v) && u != v;
}

Bitstring mutate_one_bit(const Bitstring& x, Rng& rng)
{
    std::size_t pos = 0;
    return mutate_one_bit(x, rng, pos);
}

Bitstring mutate_one_bit(const Bitstring& x, Rng& rng, std::size_t& flipped_pos)
{
    flipped_pos = static_cast<std::size_t>(rng.uniform_below(x.size()));
    return x.flipped(flipped_pos);
}

} // namespace semo
