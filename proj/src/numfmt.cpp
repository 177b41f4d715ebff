#include "cachemodel/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace cachemodel {

namespace {

struct Scientific {
    bool negative = false;
    std::string digits; // no leading zeros, at least one digit
    int exponent = 0;   // value = 0.d1d2d3... * 10^(exponent + 1)
};

Scientific shortest_scientific(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
    const std::string text(buf, res.ptr);
    Scientific s;
    std::size_t i = 0;
    if (text[0] == '-') {
        s.negative = true;
        i = 1;
    }
    const std::size_t e = text.find('e');
    for (; i < e; ++i) {
        if (text[i] != '.') {
            s.digits += text[i];
        }
    }
    s.exponent = std::atoi(text.c_str() + e + 1);
    return s;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: to_chars failed");
    }
    return std::string(buf, res.ptr);
}

double decimal_shift_literal(std::string_view literal, int exponent) {
    std::string text(literal);
    long old_exp = 0;
    const std::size_t e = text.find_first_of("eE");
    if (e != std::string::npos) {
        old_exp = std::strtol(text.c_str() + e + 1, nullptr, 10);
        text.resize(e);
    }
    text += 'e';
    text += std::to_string(old_exp + exponent);
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec == std::errc::invalid_argument || res.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a decimal number: '" + std::string(literal) + "'");
    }
    return out;
}

double decimal_shift(double value, int exponent) {
    if (exponent == 0 || value == 0.0 || !std::isfinite(value)) {
        return value;
    }
    return decimal_shift_literal(format_double(value), exponent);
}

std::string shifted_literal(double value, int exponent) {
    if (value == 0.0) {
        return std::signbit(value) ? "-0.0" : "0.0";
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("shifted_literal: non-finite value");
    }
    const Scientific s = shortest_scientific(value);
    const int exp10 = s.exponent + exponent;
    std::string out = s.negative ? "-" : "";
    const int n = static_cast<int>(s.digits.size());
    if (exp10 >= 0 && exp10 < 15) {
        if (n > exp10 + 1) {
            out += s.digits.substr(0, static_cast<std::size_t>(exp10 + 1)) + "." +
                   s.digits.substr(static_cast<std::size_t>(exp10 + 1));
        } else {
            out += s.digits + std::string(static_cast<std::size_t>(exp10 + 1 - n), '0') + ".0";
        }
    } else if (exp10 < 0 && exp10 >= -5) {
        out += "0." + std::string(static_cast<std::size_t>(-exp10 - 1), '0') + s.digits;
    } else {
        out += s.digits.substr(0, 1);
        if (n > 1) {
            out += "." + s.digits.substr(1);
        }
        out += "e" + std::to_string(exp10);
    }
    return out;
}

} // namespace cachemodel
