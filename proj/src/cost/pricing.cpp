#include "cost/pricing.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/text.hpp"

namespace mqsum::cost {

std::string Money::str() const {
    char buf[40];
    int64_t whole = micro / 1'000'000;
    int64_t frac = micro % 1'000'000;
    if (frac < 0) frac = -frac;
    std::snprintf(buf, sizeof buf, "%s%lld.%06lld",
                  micro < 0 && whole == 0 ? "-" : "",
                  static_cast<long long>(whole), static_cast<long long>(frac));
    return buf;
}

Money parse_usd(std::string_view text) {
    std::string s = normalize_ws(text);
    if (s.empty())
        throw Error(Errc::invalid_argument, "empty price");
    size_t pos = 0;
    int64_t whole = 0;
    bool any_digit = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        any_digit = true;
        whole = whole * 10 + (s[pos] - '0');
        if (whole > 9'000'000'000'000LL) // far past any sane price
            throw Error(Errc::invalid_argument, "price out of range: " + s);
        ++pos;
    }
    int64_t frac = 0;
    int frac_digits = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() &&
               std::isdigit(static_cast<unsigned char>(s[pos]))) {
            any_digit = true;
            if (++frac_digits > 6)
                throw Error(Errc::invalid_argument,
                            "price has more than six decimal places: " + s);
            frac = frac * 10 + (s[pos] - '0');
            ++pos;
        }
    }
    if (!any_digit || pos != s.size())
        throw Error(Errc::invalid_argument, "malformed price: " + s);
    for (int i = frac_digits; i < 6; ++i) frac *= 10;
    return {whole * 1'000'000 + frac};
}

const ModelPricing& PricingTable::lookup(const std::string& model) const {
    auto it = models.find(model);
    if (it == models.end())
        throw Error(Errc::unknown_model,
                    "model not in pricing table: " + model);
    return it->second;
}

PricingTable parse_pricing(std::string_view text) {
    PricingTable table;
    std::string current;
    bool saw_input = false, saw_output = false;
    int line_no = 0;

    auto close_section = [&] {
        if (current.empty()) return;
        if (!saw_input || !saw_output)
            throw Error(Errc::schema,
                        "pricing section [" + current +
                            "] must set both input and output",
                        line_no, current);
    };

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = normalize_ws(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw Error(Errc::schema, "malformed section header: " + t,
                            line_no, "section");
            close_section();
            current = normalize_ws(t.substr(1, t.size() - 2));
            if (current.empty())
                throw Error(Errc::schema, "empty model name", line_no,
                            "section");
            if (table.models.count(current))
                throw Error(Errc::schema,
                            "duplicate pricing section: " + current, line_no,
                            current);
            table.models[current] = {};
            saw_input = saw_output = false;
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos || current.empty())
            throw Error(Errc::schema, "expected 'key = value': " + t, line_no,
                        "entry");
        std::string key = normalize_ws(t.substr(0, eq));
        std::string value = normalize_ws(t.substr(eq + 1));
        Money price;
        try {
            price = parse_usd(value);
        } catch (const Error& e) {
            throw Error(Errc::schema, e.what(), line_no, key);
        }
        if (key == "input" && !saw_input) {
            table.models[current].input_per_million = price;
            saw_input = true;
        } else if (key == "output" && !saw_output) {
            table.models[current].output_per_million = price;
            saw_output = true;
        } else {
            throw Error(Errc::schema, "unexpected pricing key: " + key,
                        line_no, key);
        }
    }
    close_section();
    return table;
}

PricingTable load_pricing(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io, "cannot open pricing file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pricing(buf.str());
}

namespace {

Money price_tokens(int64_t tokens, Money per_million) {
    if (tokens < 0)
        throw Error(Errc::invalid_argument, "negative token count");
    if (per_million.micro > 0 &&
        tokens > (INT64_MAX - 500'000) / per_million.micro)
        throw Error(Errc::invalid_argument, "cost overflows the ledger");
    // round half-up on the exact integer product
    int64_t numer = tokens * per_million.micro;
    return {(numer + 500'000) / 1'000'000};
}

} // namespace

CallCost cost_of(int64_t input_tokens, int64_t output_tokens,
                 const std::string& model, const PricingTable& table) {
    const ModelPricing& p = table.lookup(model);
    return {price_tokens(input_tokens, p.input_per_million),
            price_tokens(output_tokens, p.output_per_million)};
}

} // namespace mqsum::cost
