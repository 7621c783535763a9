/*
 * SPDX-FileCopyrightText: Copyright 2026 The sboxtraj Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sboxtraj {

using Word = std::uint32_t;

inline constexpr int kMinBits = 1;
inline constexpr int kMaxBits = 16;

/// Number of set bits of an output value.
[[nodiscard]] constexpr int hamming_weight(Word v) noexcept { return std::popcount(v); }

class SboxError : public std::runtime_error {
public:
    enum class Kind { WrongLength, ValueOutOfRange, MalformedToken, IndexOutOfRange, InvalidWidth };

    SboxError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/**
 * An n-bit to m-bit lookup table.
 *
 * The table is fixed at construction and validated there; every other
 * operation in the library takes S-boxes by const reference and returns
 * fresh values.
 */
class SBox {
public:
    SBox(int n, int m, std::vector<Word> table) : n_(n), m_(m), table_(std::move(table))
    {
        if (n_ < kMinBits || n_ > kMaxBits || m_ < kMinBits || m_ > kMaxBits)
            throw SboxError(SboxError::Kind::InvalidWidth,
                            "S-box widths must lie in [1, 16], got n=" + std::to_string(n_) +
                                " m=" + std::to_string(m_));
        if (table_.size() != (std::size_t{1} << n_))
            throw SboxError(SboxError::Kind::WrongLength,
                            "expected " + std::to_string(std::size_t{1} << n_) + " entries, got " +
                                std::to_string(table_.size()));
        for (std::size_t x = 0; x < table_.size(); ++x) {
            if (table_[x] >= (Word{1} << m_))
                throw SboxError(SboxError::Kind::ValueOutOfRange,
                                "entry " + std::to_string(x) + " = " + std::to_string(table_[x]) +
                                    " does not fit in " + std::to_string(m_) + " bits");
        }
        bijective_ = (n_ == m_) && is_permutation_of_domain();
    }

    static SBox identity(int n)
    {
        std::vector<Word> t(std::size_t{1} << n);
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<Word>(x);
        return SBox(n, n, std::move(t));
    }

    static SBox constant(int n, int m, Word value)
    {
        return SBox(n, m, std::vector<Word>(std::size_t{1} << n, value));
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return table_.size(); }
    [[nodiscard]] bool bijective() const noexcept { return bijective_; }
    [[nodiscard]] std::span<const Word> table() const noexcept { return table_; }
    [[nodiscard]] Word operator()(std::size_t x) const noexcept { return table_[x]; }
    [[nodiscard]] Word operator[](std::size_t x) const noexcept { return table_[x]; }

    /// Bit i (0 = least significant) of F(x), i.e. the i-th coordinate function.
    [[nodiscard]] int component(int i, std::size_t x) const noexcept
    {
        return static_cast<int>((table_[x] >> i) & 1u);
    }

    friend bool operator==(const SBox&, const SBox&) = default;

private:
    [[nodiscard]] bool is_permutation_of_domain() const
    {
        std::vector<bool> seen(table_.size(), false);
        for (Word v : table_) {
            if (seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    int n_;
    int m_;
    std::vector<Word> table_;
    bool bijective_ = false;
};

/**
 * Parses a whitespace- or comma-separated list of integers (decimal or
 * 0x-prefixed hex) into an n x m S-box.
 */
inline SBox parse_sbox(std::string_view text, int n, int m)
{
    if (n < kMinBits || n > kMaxBits || m < kMinBits || m > kMaxBits)
        throw SboxError(SboxError::Kind::InvalidWidth, "S-box widths must lie in [1, 16]");

    std::vector<Word> values;
    auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (is_sep(text[pos])) {
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < text.size() && !is_sep(text[end])) ++end;
        std::string_view token = text.substr(pos, end - pos);
        pos = end;

        int base = 10;
        std::string_view digits = token;
        if (token.size() > 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
            base = 16;
            digits = token.substr(2);
        }
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
        if (ec == std::errc::result_out_of_range)
            throw SboxError(SboxError::Kind::ValueOutOfRange, "value out of range: '" + std::string(token) + "'");
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            throw SboxError(SboxError::Kind::MalformedToken, "malformed token '" + std::string(token) + "'");
        if (v >= (std::uint64_t{1} << m))
            throw SboxError(SboxError::Kind::ValueOutOfRange,
                            "entry " + std::to_string(values.size()) + " = " + std::string(token) +
                                " does not fit in " + std::to_string(m) + " bits");
        values.push_back(static_cast<Word>(v));
    }
    if (values.size() != (std::size_t{1} << n))
        throw SboxError(SboxError::Kind::WrongLength, "expected " + std::to_string(std::size_t{1} << n) +
                                                          " entries, got " + std::to_string(values.size()));
    return SBox(n, m, std::move(values));
}

/// Decimal, comma-separated, 16 entries per line. Parses back with parse_sbox.
inline std::string serialize(const SBox& f)
{
    std::string out;
    for (std::size_t x = 0; x < f.size(); ++x) {
        out += std::to_string(f[x]);
        if (x + 1 == f.size())
            out += '\n';
        else if ((x + 1) % 16 == 0)
            out += ",\n";
        else
            out += ", ";
    }
    return out;
}

inline SBox swap_outputs(const SBox& f, std::size_t i, std::size_t j)
{
    if (i >= f.size() || j >= f.size() || i == j)
        throw SboxError(SboxError::Kind::IndexOutOfRange,
                        "swap positions must be distinct and below " + std::to_string(f.size()));
    std::vector<Word> t(f.table().begin(), f.table().end());
    std::swap(t[i], t[j]);
    return SBox(f.n(), f.m(), std::move(t));
}

/// Output positions grouped by the Hamming weight of their output.
struct HwClasses {
    // positions[w] lists x with HW(F(x)) = w, ascending; values[w][k] = F(positions[w][k]).
    std::vector<std::vector<std::size_t>> positions;
    std::vector<std::vector<Word>> values;
};

inline HwClasses hw_classes(const SBox& f)
{
    HwClasses c;
    c.positions.resize(static_cast<std::size_t>(f.m()) + 1);
    c.values.resize(static_cast<std::size_t>(f.m()) + 1);
    for (std::size_t x = 0; x < f.size(); ++x) {
        auto w = static_cast<std::size_t>(hamming_weight(f[x]));
        c.positions[w].push_back(x);
        c.values[w].push_back(f[x]);
    }
    return c;
}

/// Per-position output Hamming weights, the only thing the HW leakage model sees.
inline std::vector<int> hw_sequence(const SBox& f)
{
    std::vector<int> h(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) h[x] = hamming_weight(f[x]);
    return h;
}

} // namespace sboxtraj
