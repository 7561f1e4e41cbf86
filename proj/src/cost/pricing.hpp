#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "core/error.hpp"

namespace mqsum::cost {

// Exact decimal money. All arithmetic is on integer micro-USD so ledger sums
// are reproducible byte for byte; binary floating point never touches a
// stored amount. usd() exists for display and ratio math only.
struct Money {
    int64_t micro = 0;

    double usd() const { return static_cast<double>(micro) / 1e6; }
    std::string str() const; // fixed six decimals, e.g. "0.060000"

    Money& operator+=(Money o) {
        micro += o.micro;
        return *this;
    }
    friend Money operator+(Money a, Money b) { return {a.micro + b.micro}; }
    auto operator<=>(const Money&) const = default;
};

// Parses a non-negative decimal like "5", "0.06" or "15.00" into micro-USD
// without a float detour. More than six fraction digits is an error: the
// input claims precision the representation cannot keep.
Money parse_usd(std::string_view text);

struct ModelPricing {
    Money input_per_million;  // price of one million input tokens
    Money output_per_million; // price of one million output tokens
};

struct PricingTable {
    std::map<std::string, ModelPricing> models;

    const ModelPricing& lookup(const std::string& model) const;
    bool has(const std::string& model) const {
        return models.count(model) > 0;
    }
};

// Pricing file: INI-style sections, one per model, two keys each.
//
//   # USD per million tokens
//   [gpt-4o]
//   input = 5.00
//   output = 15.00
//
// Duplicate sections, missing keys, unknown keys and negative prices are
// schema errors carrying the line number.
PricingTable parse_pricing(std::string_view text);
PricingTable load_pricing(const std::string& path);

struct CallCost {
    Money input;
    Money output;
    Money total() const { return input + output; }
};

// Linear pricing, rounded half-up to the nearest micro-USD per side.
CallCost cost_of(int64_t input_tokens, int64_t output_tokens,
                 const std::string& model, const PricingTable& table);

} // namespace mqsum::cost
