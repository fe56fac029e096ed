// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "rng.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semo {

/// Fixed-length bit vector, packed into 64-bit words. Positions are 0-based.
/// The number of ones is cached; every operation that changes bits keeps it
/// exact, so count_ones() stays a pure query.
class Bitstring {
public:
    /// All-zeros string of length n. Throws UsageError when n == 0.
    explicit Bitstring(std::size_t n);

    static Bitstring ones(std::size_t n);
    static Bitstring random(std::size_t n, Rng& rng);
    /// Parses a string of '0'/'1' characters.
    static Bitstring parse(std::string_view text);

    std::size_t size() const noexcept { return size_; }
    std::size_t count_ones() const noexcept { return ones_; }
    bool test(std::size_t pos) const;

    /// Copy with position `pos` inverted.
    Bitstring flipped(std::size_t pos) const;

    std::string to_string() const;

    friend bool operator==(const Bitstring&, const Bitstring&) = default;
    friend std::strong_ordering operator<=>(const Bitstring& a, const Bitstring& b);

private:
    void flip_in_place(std::size_t pos);

    std::size_t size_;
    std::size_t ones_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Point in the partially ordered objective space. For OneMinMax the
/// dimension is 2 and the components sum to n.
class ObjectiveVector {
public:
    ObjectiveVector() = default;
    ObjectiveVector(std::initializer_list<std::int64_t> values) : values_(values) {}
    explicit ObjectiveVector(std::vector<std::int64_t> values) : values_(std::move(values)) {}

    std::size_t dimension() const noexcept { return values_.size(); }
    std::int64_t operator[](std::size_t i) const { return values_[i]; }
    std::span<const std::int64_t> values() const noexcept { return values_; }

    std::string to_string() const;

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
    friend auto operator<=>(const ObjectiveVector&, const ObjectiveVector&) = default;

private:
    std::vector<std::int64_t> values_;
};

std::size_t count_ones(const Bitstring& x) noexcept;

/// (ones, zeros).
ObjectiveVector one_min_max(const Bitstring& x);

/// OneMinMax vector for a given first component at problem size n.
ObjectiveVector one_min_max_value(std::int64_t ones, std::size_t n);

/// True iff u is componentwise >= v. Throws UsageError on dimension mismatch.
bool weakly_dominates(const ObjectiveVector& u, const ObjectiveVector& v);

/// weakly_dominates(u, v) and u != v.
bool strictly_dominates(const ObjectiveVector& u, const ObjectiveVector& v);

/// Copy of x with one uniformly chosen position flipped. Consumes one
/// uniform_below(n) draw.
Bitstring mutate_one_bit(const Bitstring& x, Rng& rng);

/// Same as mutate_one_bit but also reports the flipped position.
Bitstring mutate_one_bit(const Bitstring& x, Rng& rng, std::size_t& flipped_pos);

} // namespace semo
